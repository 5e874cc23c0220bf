use std::fs::File;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use vcmark_core::markov::count_ngrams;
use vcmark_core::probes::{
    categorize_matches, name_cooccurrence, rank_letter_trigrams, scan_pattern_class,
    trigram_trend_table, AnnotationTable, CategoryTable, Label, NameForms, ProbeMatch,
    TrigramClass,
};

use super::segment;
use crate::args::ProbeArgs;
use crate::inputs::Sources;
use crate::output::Outputs;

#[derive(Serialize)]
struct ClassRow {
    class: &'static str,
    pattern: String,
    count: u64,
    scanned: bool,
}

#[derive(Serialize)]
struct MatchRow<'a> {
    letters: &'a str,
    class: &'static str,
    context: &'a str,
    part: u32,
    stanza: u32,
    line: u32,
    single_word: bool,
    block: Option<usize>,
    position: usize,
}

impl<'a> MatchRow<'a> {
    fn new(m: &'a ProbeMatch) -> Self {
        MatchRow {
            letters: &m.letters,
            class: m.vc_class.as_str(),
            context: &m.context,
            part: m.part,
            stanza: m.stanza,
            line: m.line,
            single_word: m.single_word,
            block: m.block,
            position: m.position,
        }
    }
}

#[derive(Serialize)]
struct RankRow<'a> {
    zipf_rank: usize,
    letters: &'a str,
    class: &'static str,
    count: usize,
    share: f64,
}

#[derive(Serialize)]
struct CandidateRow<'a> {
    letters: &'a str,
    class: &'static str,
    pattern: String,
    direction: &'static str,
    rho: f64,
    spearman_p: f64,
    zipf_rank: usize,
    share: f64,
    count: usize,
    matches_md_trend: bool,
}

#[derive(Serialize)]
struct LabelRow<'a> {
    letters: &'a str,
    context: &'a str,
    label: &'a str,
    part: u32,
    stanza: u32,
    line: u32,
    block: Option<usize>,
}

#[derive(Serialize)]
struct SeriesRow<'a> {
    series: &'a str,
    members: String,
    n: usize,
    rho: Option<f64>,
    p_value: Option<f64>,
    exact: Option<bool>,
}

#[derive(Serialize)]
struct SeriesBlockRow<'a> {
    series: &'a str,
    block: usize,
    count: u64,
    frequency: f64,
}

#[derive(Serialize)]
struct Report<'a> {
    source_id: &'a str,
    classes: Vec<&'static str>,
    share_denominator: &'static str,
    total_matches: usize,
    threshold: f64,
    blocks: usize,
    probes: &'a [String],
    context_filter: &'static str,
    unannotated_contexts: Vec<String>,
}

fn open(path: &Path) -> Result<File> {
    File::open(path).with_context(|| format!("opening {}", path.display()))
}

pub fn run(args: &ProbeArgs, sources: &Sources, run_id: &str) -> Result<Outputs> {
    let source = match &args.source {
        Some(id) => sources.get(id)?,
        None => &sources.list[0],
    };
    let corpus = source.require_corpus()?;
    let seg = segment(source, &args.blocks)?;
    let classes = args
        .classes
        .iter()
        .map(|c| c.parse::<TrigramClass>())
        .collect::<vcmark_core::Result<Vec<_>>>()?;
    if classes.is_empty() {
        bail!("no trigram classes to scan");
    }

    let matches = scan_pattern_class(&source.sequence, corpus, &classes, Some(&seg))?;
    let mut out = Outputs::default();

    let trigrams = count_ngrams(&source.sequence.symbols, 3)?;
    let class_rows: Vec<ClassRow> = TrigramClass::ALL
        .iter()
        .map(|c| ClassRow {
            class: c.as_str(),
            pattern: c.kind().to_string(),
            count: trigrams.counts[c.index()],
            scanned: classes.contains(c),
        })
        .collect();
    out.csv("class_counts.csv", &class_rows)?;
    out.csv_headed(
        "matches.csv",
        &[
            "letters",
            "class",
            "context",
            "part",
            "stanza",
            "line",
            "single_word",
            "block",
            "position",
        ],
        &matches.iter().map(MatchRow::new).collect::<Vec<_>>(),
    )?;

    let ranking = rank_letter_trigrams(&matches)?;
    out.csv(
        "ranking.csv",
        &ranking
            .iter()
            .map(|r| RankRow {
                zipf_rank: r.zipf_rank,
                letters: &r.letters,
                class: r.vc_class.as_str(),
                count: r.count,
                share: r.share,
            })
            .collect::<Vec<_>>(),
    )?;

    let candidates = trigram_trend_table(&matches, &seg, args.threshold)?;
    out.csv_headed(
        "candidates.csv",
        &[
            "letters",
            "class",
            "pattern",
            "direction",
            "rho",
            "spearman_p",
            "zipf_rank",
            "share",
            "count",
            "matches_md_trend",
        ],
        &candidates
            .iter()
            .map(|c| CandidateRow {
                letters: &c.letters,
                class: c.vc_class.as_str(),
                pattern: c.pattern_kind.to_string(),
                direction: c.direction.as_str(),
                rho: c.rho,
                spearman_p: c.spearman_p,
                zipf_rank: c.zipf_rank,
                share: c.share,
                count: c.count,
                matches_md_trend: c.matches_md_trend,
            })
            .collect::<Vec<_>>(),
    )?;

    let mut unannotated = Vec::new();
    if !args.probes.is_empty() {
        let probes: Vec<String> = args
            .probes
            .iter()
            .map(|p| p.trim().to_lowercase())
            .collect();
        let selected: Vec<ProbeMatch> = matches
            .iter()
            .filter(|m| probes.contains(&m.letters) && (args.all_contexts || m.single_word))
            .cloned()
            .collect();
        let annotations = match &args.annotations {
            Some(p) => AnnotationTable::from_csv(open(p)?)?,
            None => {
                log::warn!("no --annotations given; every match is unannotated");
                AnnotationTable::default()
            }
        };
        let categories = match &args.categories {
            Some(p) => CategoryTable::from_csv(open(p)?)?,
            None => CategoryTable::default(),
        };
        let cat = categorize_matches(&selected, &annotations, &categories, &seg);
        unannotated = cat.unannotated_contexts.clone();

        let label_rows: Vec<LabelRow> = cat
            .matches
            .iter()
            .map(|(m, l)| LabelRow {
                letters: &m.letters,
                context: &m.context,
                label: l.as_str(),
                part: m.part,
                stanza: m.stanza,
                line: m.line,
                block: m.block,
            })
            .collect();
        out.csv_headed(
            "categorized_matches.csv",
            &[
                "letters", "context", "label", "part", "stanza", "line", "block",
            ],
            &label_rows,
        )?;
        let series_rows: Vec<SeriesRow> = cat
            .series
            .iter()
            .map(|s| SeriesRow {
                series: &s.name,
                members: s.members.join(";"),
                n: s.n,
                rho: s.spearman.as_ref().map(|r| r.rho),
                p_value: s.spearman.as_ref().map(|r| r.p_value),
                exact: s.spearman.as_ref().map(|r| r.exact),
            })
            .collect();
        out.csv("category_series.csv", &series_rows)?;
        let mut block_rows = Vec::new();
        for s in &cat.series {
            for (b, (&count, &frequency)) in s.block_counts.iter().zip(&s.frequencies).enumerate() {
                block_rows.push(SeriesBlockRow {
                    series: &s.name,
                    block: b + 1,
                    count,
                    frequency,
                });
            }
        }
        out.csv("category_blocks.csv", &block_rows)?;

        if let Some(p) = &args.names {
            let names = NameForms::from_csv(open(p)?)?;
            let thematic: Vec<String> = if args.thematic.is_empty() {
                let mut all: Vec<String> = cat
                    .matches
                    .iter()
                    .filter_map(|(_, l)| match l {
                        Label::Category(c) => Some(c.clone()),
                        _ => None,
                    })
                    .collect();
                all.sort();
                all.dedup();
                all
            } else {
                args.thematic.clone()
            };
            let report = name_cooccurrence(&cat, corpus, &names, &thematic)?;
            out.json("cooccurrence.json", &report, run_id)?;
        }
    } else if args.names.is_some() || args.annotations.is_some() {
        bail!("--annotations and --names need at least one --probe trigram");
    }

    let report = Report {
        source_id: &source.id,
        classes: classes.iter().map(|c| c.as_str()).collect(),
        share_denominator: "all matches of the scanned classes",
        total_matches: matches.len(),
        threshold: args.threshold,
        blocks: seg.len(),
        probes: &args.probes,
        context_filter: if args.all_contexts {
            "all"
        } else {
            "single-word"
        },
        unannotated_contexts: unannotated,
    };
    out.json("probe_report.json", &report, run_id)?;
    Ok(out)
}
