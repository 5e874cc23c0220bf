use anyhow::Result;
use serde::Serialize;
use vcmark_core::encoder::SymbolSequence;
use vcmark_core::resample::{derive_seed, make_surrogate};
use vcmark_core::stats::spearman_test;

use super::profile::profile_source;
use super::regress::RegressParams;
use super::simulate::SimulateParams;
use crate::args::{SurrogateArgs, SurrogateOf};
use crate::inputs::Sources;
use crate::output::Outputs;

/// Stream label for surrogate permutations under the master seed.
pub const SURROGATE_STREAM: u64 = 0x7375_7272_6f67_6174;

#[derive(Serialize)]
struct RegressSummaryRow {
    run: usize,
    seed: u64,
    interaction: f64,
    lo: Option<f64>,
    hi: Option<f64>,
    contains_zero: Option<bool>,
}

#[derive(Serialize)]
struct TrendRow<'a> {
    run: usize,
    seed: u64,
    source_id: &'a str,
    md_rho: f64,
    md_p_value: f64,
}

/// Seed of surrogate run `run`.
pub fn run_seed(master: u64, run: usize) -> u64 {
    derive_seed(master, &[SURROGATE_STREAM, run as u64])
}

pub fn run(args: &SurrogateArgs, sources: &Sources, run_id: &str) -> Result<Outputs> {
    let from = args.from.as_deref().unwrap_or(&args.source);
    let donor = sources.get(from)?.sequence.symbols.clone();
    sources.get(&args.source)?;

    let mut out = Outputs::default();
    let mut regress_rows = Vec::new();
    let mut trend_rows = Vec::new();
    for r in 0..args.runs {
        let seed = run_seed(args.resample.seed, r);
        let mut local = sources.clone();
        let target = local.get_mut(&args.source)?;
        target.sequence = SymbolSequence::synthetic(
            args.source.clone(),
            make_surrogate(&donor, args.resample.subblock_len, seed)?,
        );
        target.corpus = None;

        let run_out = match args.of {
            SurrogateOf::Profile => {
                let (_, profiles) = profile_source(local.get(&args.source)?, &args.blocks)?;
                let index: Vec<f64> = profiles.iter().map(|b| b.block as f64).collect();
                let md: Vec<f64> = profiles.iter().map(|b| b.dispersion.md).collect();
                if let Ok(t) = spearman_test(&index, &md) {
                    trend_rows.push(TrendRow {
                        run: r,
                        seed,
                        source_id: &args.source,
                        md_rho: t.rho,
                        md_p_value: t.p_value,
                    });
                }
                super::profile::run(&args.blocks, &local)?
            }
            SurrogateOf::Bootstrap => super::bootstrap::run(&args.blocks, &args.resample, &local)?,
            SurrogateOf::Acf => super::acf::run(&args.blocks, &args.resample, args.lags, &local)?,
            SurrogateOf::Simulate => super::simulate::run(
                &args.blocks,
                &SimulateParams {
                    block: args.block,
                    runs: args.sim_runs,
                    length: None,
                    seed: args.resample.seed,
                    level: args.resample.level,
                },
                &local,
                run_id,
            )?,
            SurrogateOf::Regress => {
                let params = RegressParams {
                    sources: &args.sources,
                    focal: args.focal.as_deref(),
                    control_set: args.control_set,
                    blocks: &args.blocks,
                    resample: &args.resample,
                };
                let (o, fit) = super::regress::run(&params, Some(&local), None, run_id)?;
                let iv = fit.bootstrap.as_ref().map(|d| d.summaries[3].interval);
                regress_rows.push(RegressSummaryRow {
                    run: r,
                    seed,
                    interaction: fit.coefficients.block_x_source,
                    lo: iv.map(|i| i.lo),
                    hi: iv.map(|i| i.hi),
                    contains_zero: iv.map(|i| i.contains(0.0)),
                });
                o
            }
        };
        out.nest(&format!("run_{r:03}"), run_out);
    }
    if !regress_rows.is_empty() {
        out.csv("surrogate_regress.csv", &regress_rows)?;
    }
    if !trend_rows.is_empty() {
        out.csv_headed(
            "surrogate_trend.csv",
            &["run", "seed", "source_id", "md_rho", "md_p_value"],
            &trend_rows,
        )?;
    }
    Ok(out)
}
