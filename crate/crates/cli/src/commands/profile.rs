use anyhow::Result;
use serde::{Deserialize, Serialize};
use vcmark_core::encoder::BlockSegmentation;
use vcmark_core::markov::NgramCounts;
use vcmark_core::profile::{profile_blocks, BlockProfile};

use super::segment;
use crate::args::BlockArgs;
use crate::inputs::{Source, Sources};
use crate::output::Outputs;

/// One row of `profile.csv`; `regress --profile` reads the same layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub source_id: String,
    pub block: usize,
    pub start: usize,
    pub end: usize,
    pub partial: bool,
    pub p: f64,
    pub p0: f64,
    pub p1: f64,
    pub p11: f64,
    pub p10: f64,
    pub p01: f64,
    pub p00: f64,
    pub q00: f64,
    pub d: f64,
    pub eta: f64,
    pub nu: f64,
    pub cf_simple: f64,
    pub cf_complex: f64,
    pub cf: String,
    pub md: f64,
    pub var_independent: f64,
    pub var_dependent: f64,
}

impl ProfileRecord {
    pub fn from_profile(source_id: &str, b: &BlockProfile) -> Self {
        let s = b.statistics();
        ProfileRecord {
            source_id: source_id.to_owned(),
            block: b.block,
            start: b.range.start,
            end: b.range.end,
            partial: b.partial,
            p: s.p,
            p0: s.p0,
            p1: s.p1,
            p11: s.p11,
            p10: s.p10,
            p01: s.p01,
            p00: s.p00,
            q00: s.q00,
            d: s.d,
            eta: s.eta,
            nu: s.nu,
            cf_simple: s.cf_simple,
            cf_complex: s.cf_complex,
            cf: match b.dispersion.selected {
                vcmark_core::markov::CfKind::Simple => "simple".into(),
                vcmark_core::markov::CfKind::Complex => "complex".into(),
            },
            md: s.md,
            var_independent: b.dispersion.var_independent,
            var_dependent: b.dispersion.var_dependent,
        }
    }

    pub fn parameter(&self, name: &str) -> Option<f64> {
        Some(match name {
            "p" => self.p,
            "p0" => self.p0,
            "p1" => self.p1,
            "p11" => self.p11,
            "q00" => self.q00,
            "md" => self.md,
            _ => return None,
        })
    }
}

#[derive(Serialize)]
struct CountRow<'a> {
    source_id: &'a str,
    block: usize,
    order: usize,
    ngram: String,
    count: u64,
}

pub fn profile_source(
    source: &Source,
    blocks: &BlockArgs,
) -> Result<(BlockSegmentation, Vec<BlockProfile>)> {
    let seg = segment(source, blocks)?;
    if seg.is_empty() {
        return Err(vcmark_core::Error::InsufficientData(format!(
            "source `{}` has {} symbols, fewer than one block of {}",
            source.id,
            source.sequence.len(),
            blocks.block_len
        ))
        .into());
    }
    let profiles = profile_blocks(&source.sequence, &seg, blocks.cf.into())?;
    Ok((seg, profiles))
}

fn push_counts<'a>(rows: &mut Vec<CountRow<'a>>, id: &'a str, block: usize, c: &NgramCounts) {
    for (i, &count) in c.counts.iter().enumerate() {
        rows.push(CountRow {
            source_id: id,
            block,
            order: c.order,
            ngram: NgramCounts::key_of(c.order, i),
            count,
        });
    }
}

pub fn run(blocks: &BlockArgs, sources: &Sources) -> Result<Outputs> {
    let mut records = Vec::new();
    let mut counts = Vec::new();
    for s in &sources.list {
        let (_, profiles) = profile_source(s, blocks)?;
        for b in &profiles {
            records.push(ProfileRecord::from_profile(&s.id, b));
            for c in [&b.models.unigrams, &b.models.bigrams, &b.models.trigrams] {
                push_counts(&mut counts, &s.id, b.block, c);
            }
        }
    }
    let mut out = Outputs::default();
    out.csv("profile.csv", &records)?;
    out.csv("ngram_counts.csv", &counts)?;
    Ok(out)
}
