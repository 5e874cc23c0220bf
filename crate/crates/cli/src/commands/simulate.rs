use anyhow::{bail, Result};
use serde::Serialize;
use vcmark_core::markov::{simulate_ensemble, EnsembleSummary};

use super::segment;
use crate::args::BlockArgs;
use crate::inputs::Sources;
use crate::output::Outputs;

#[derive(Serialize)]
struct RunRow<'a> {
    source_id: &'a str,
    run: usize,
    seed: u64,
    md: f64,
    discrepancy: f64,
}

#[derive(Serialize)]
struct SummaryOut<'a> {
    source_id: &'a str,
    block: usize,
    length: usize,
    #[serde(flatten)]
    summary: &'a EnsembleSummary,
}

#[derive(Serialize)]
struct Report<'a> {
    sources: Vec<SummaryOut<'a>>,
}

pub struct SimulateParams {
    pub block: usize,
    pub runs: usize,
    pub length: Option<usize>,
    pub seed: u64,
    pub level: f64,
}

pub fn run(
    blocks: &BlockArgs,
    params: &SimulateParams,
    sources: &Sources,
    run_id: &str,
) -> Result<Outputs> {
    let mut summaries = Vec::new();
    for s in &sources.list {
        let seg = segment(s, blocks)?;
        if params.block == 0 || params.block > seg.len() {
            bail!(
                "source `{}` has {} block(s); block {} requested",
                s.id,
                seg.len(),
                params.block
            );
        }
        let range = seg.blocks[params.block - 1].clone();
        let length = params.length.unwrap_or(range.len());
        let summary = simulate_ensemble(
            &s.sequence.symbols[range],
            params.runs,
            length,
            params.seed,
            blocks.cf.into(),
            params.level,
        )?;
        summaries.push((s.id.as_str(), length, summary));
    }
    let mut rows = Vec::new();
    for (id, _, summary) in &summaries {
        for r in &summary.runs {
            rows.push(RunRow {
                source_id: id,
                run: r.run,
                seed: r.seed,
                md: r.md,
                discrepancy: r.discrepancy,
            });
        }
    }
    let report = Report {
        sources: summaries
            .iter()
            .map(|(id, length, summary)| SummaryOut {
                source_id: id,
                block: params.block,
                length: *length,
                summary,
            })
            .collect(),
    };
    let mut out = Outputs::default();
    out.csv("simulation_runs.csv", &rows)?;
    out.json("simulation_summary.json", &report, run_id)?;
    Ok(out)
}
