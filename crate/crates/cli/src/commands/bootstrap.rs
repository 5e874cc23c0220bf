use anyhow::Result;
use serde::Serialize;
use vcmark_core::profile::{bootstrap_blocks, STATISTIC_NAMES};

use super::{mbb_config, segment};
use crate::args::{BlockArgs, ResampleArgs};
use crate::inputs::Sources;
use crate::output::Outputs;

#[derive(Serialize)]
struct ReplicateRow<'a> {
    source_id: &'a str,
    block: usize,
    replicate: usize,
    statistic: &'static str,
    value: f64,
}

#[derive(Serialize)]
struct IntervalRow<'a> {
    source_id: &'a str,
    block: usize,
    statistic: &'static str,
    estimate: f64,
    lo: f64,
    hi: f64,
    level: f64,
}

pub fn run(blocks: &BlockArgs, resample: &ResampleArgs, sources: &Sources) -> Result<Outputs> {
    let cfg = mbb_config(blocks, resample);
    let mut replicates = Vec::new();
    let mut intervals = Vec::new();
    for s in &sources.list {
        let seg = segment(s, blocks)?;
        let boots = bootstrap_blocks(&s.sequence, &seg, &cfg, blocks.cf.into(), resample.level)?;
        for b in boots {
            for (r, stats) in b.replicates.iter().enumerate() {
                for (name, value) in STATISTIC_NAMES.iter().zip(stats.values()) {
                    replicates.push(ReplicateRow {
                        source_id: &s.id,
                        block: b.block,
                        replicate: r,
                        statistic: name,
                        value,
                    });
                }
            }
            for ((name, est), iv) in STATISTIC_NAMES
                .iter()
                .zip(b.estimate.values())
                .zip(&b.intervals)
            {
                intervals.push(IntervalRow {
                    source_id: &s.id,
                    block: b.block,
                    statistic: name,
                    estimate: est,
                    lo: iv.lo,
                    hi: iv.hi,
                    level: iv.level,
                });
            }
        }
    }
    let mut out = Outputs::default();
    out.csv("bootstrap_replicates.csv", &replicates)?;
    out.csv("bootstrap_intervals.csv", &intervals)?;
    Ok(out)
}
