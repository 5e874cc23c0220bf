use anyhow::Result;
use serde::Serialize;
use vcmark_core::corpus::{align_corpora, extract_latin_tokens, line_statistics, LineStatsOptions};

use crate::args::ParseArgs;
use crate::inputs::Sources;
use crate::output::Outputs;

#[derive(Serialize)]
struct LineStatsRow<'a> {
    source_id: &'a str,
    stanzas: usize,
    symbols: usize,
    lines: usize,
    mean_chars: f64,
    sd_chars: f64,
    mean_words: f64,
    sd_words: f64,
}

#[derive(Serialize)]
struct LatinRow<'a> {
    source_id: &'a str,
    token: &'a str,
    part: u32,
    stanza: u32,
    line: u32,
}

#[derive(Serialize)]
struct DensityRow<'a> {
    source_id: &'a str,
    part: u32,
    tokens: usize,
    words: usize,
    per_thousand_words: f64,
}

pub fn run(args: &ParseArgs, sources: &Sources, run_id: &str) -> Result<Outputs> {
    let mut out = Outputs::default();
    let mut stats = Vec::new();
    let mut latin = Vec::new();
    let mut density = Vec::new();
    let mut corpora = Vec::new();
    for s in &sources.list {
        let corpus = s.require_corpus()?;
        out.json(format!("{}.corpus.json", s.id), corpus, run_id)?;
        let ls = line_statistics(
            corpus,
            LineStatsOptions {
                include_epigraphs: false,
                include_placeholders: args.include_placeholders,
            },
        )?;
        stats.push(LineStatsRow {
            source_id: &s.id,
            stanzas: corpus.stanza_count(),
            symbols: s.sequence.len(),
            lines: ls.n_lines,
            mean_chars: ls.mean_chars,
            sd_chars: ls.sd_chars,
            mean_words: ls.mean_words,
            sd_words: ls.sd_words,
        });
        let report = extract_latin_tokens(corpus, args.latin_min_len);
        for t in &report.tokens {
            latin.push((s.id.as_str(), t.clone()));
        }
        for d in &report.densities {
            density.push(DensityRow {
                source_id: &s.id,
                part: d.part,
                tokens: d.tokens,
                words: d.words,
                per_thousand_words: d.per_thousand_words,
            });
        }
        corpora.push((s.id.as_str(), corpus));
    }
    out.csv("line_stats.csv", &stats)?;
    let latin_rows: Vec<LatinRow> = latin
        .iter()
        .map(|(id, t)| LatinRow {
            source_id: id,
            token: &t.token,
            part: t.part,
            stanza: t.stanza,
            line: t.line,
        })
        .collect();
    out.csv_headed(
        "latin_tokens.csv",
        &["source_id", "token", "part", "stanza", "line"],
        &latin_rows,
    )?;
    out.csv("latin_density.csv", &density)?;

    if let Some(((ref_id, reference), others)) = corpora.split_first() {
        for (other_id, other) in others {
            let aligned = align_corpora(reference, other);
            out.json(
                format!("alignment_{ref_id}_{other_id}.json"),
                &aligned,
                run_id,
            )?;
        }
    }
    Ok(out)
}
