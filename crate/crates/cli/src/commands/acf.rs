use anyhow::Result;
use serde::Serialize;
use vcmark_core::resample::{block_key, mbb_replicate_into, percentile_interval};
use vcmark_core::stats::{autocorrelation, ljung_box_test, symbol_values};

use super::{block_slices, mbb_config, segment};
use crate::args::{BlockArgs, ResampleArgs};
use crate::inputs::Sources;
use crate::output::Outputs;

#[derive(Serialize)]
struct AcfRow<'a> {
    source_id: &'a str,
    block: usize,
    lag: usize,
    rho: f64,
    white_noise: f64,
    mbb_lo: f64,
    mbb_hi: f64,
}

#[derive(Serialize)]
struct LjungBoxRow<'a> {
    source_id: &'a str,
    block: usize,
    n: usize,
    h: usize,
    q: f64,
    p_value: f64,
}

pub fn run(
    blocks: &BlockArgs,
    resample: &ResampleArgs,
    lags: usize,
    sources: &Sources,
) -> Result<Outputs> {
    let cfg = mbb_config(blocks, resample);
    cfg.validate()?;
    let mut acf_rows = Vec::new();
    let mut lb_rows = Vec::new();
    let mut buffer = Vec::new();
    for s in &sources.list {
        let seg = segment(s, blocks)?;
        for (b, block) in block_slices(s, &seg).into_iter().enumerate() {
            let acf = autocorrelation(&symbol_values(block), lags)?;
            let lb = ljung_box_test(&acf, lags)?;
            lb_rows.push(LjungBoxRow {
                source_id: &s.id,
                block: b + 1,
                n: acf.n,
                h: lb.h,
                q: lb.q,
                p_value: lb.p_value,
            });

            let key = block_key(&s.id, b);
            let mut per_lag = vec![Vec::with_capacity(cfg.n_replicates); lags];
            for r in 0..cfg.n_replicates as u64 {
                mbb_replicate_into(block, &cfg, key, r, &mut buffer)?;
                let rep = autocorrelation(&symbol_values(&buffer), lags)?;
                for (k, v) in rep.rho.into_iter().enumerate() {
                    per_lag[k].push(v);
                }
            }
            for (k, values) in per_lag.iter().enumerate() {
                let band = percentile_interval(values, resample.level)?;
                acf_rows.push(AcfRow {
                    source_id: &s.id,
                    block: b + 1,
                    lag: k + 1,
                    rho: acf.rho[k],
                    white_noise: acf.white_noise_band(),
                    mbb_lo: band.lo,
                    mbb_hi: band.hi,
                });
            }
        }
    }
    let mut out = Outputs::default();
    out.csv("acf.csv", &acf_rows)?;
    out.csv("ljung_box.csv", &lb_rows)?;
    Ok(out)
}
