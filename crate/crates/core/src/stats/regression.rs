use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::ols::least_squares;
use crate::markov::{dispersion_report, fit_symbols, CfKind};
use crate::resample::{block_key, mbb_replicate_into, percentile_interval, Interval, MbbConfig};
use crate::{Error, Result, Symbol};

pub const COEFFICIENT_NAMES: [&str; 4] = ["intercept", "block", "source", "block_x_source"];

/// One memory-depth value for block `block` (1-based) of `source`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MdObservation {
    pub source: String,
    pub block: usize,
    pub md: f64,
}

/// Coefficients of `MD ~ block * source` with the non-focal source as
/// baseline: `source` is the focal source's offset and `block_x_source`
/// its extra slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub intercept: f64,
    pub block: f64,
    pub source: f64,
    pub block_x_source: f64,
}

impl Coefficients {
    pub fn to_array(&self) -> [f64; 4] {
        [self.intercept, self.block, self.source, self.block_x_source]
    }

    fn from_slice(v: &[f64]) -> Self {
        Coefficients {
            intercept: v[0],
            block: v[1],
            source: v[2],
            block_x_source: v[3],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSummary {
    pub name: String,
    pub estimate: f64,
    pub mean: f64,
    pub interval: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateDistribution {
    pub config: MbbConfig,
    pub cf: CfKind,
    /// One coefficient vector per replicate, in [`COEFFICIENT_NAMES`] order.
    pub replicates: Vec<[f64; 4]>,
    pub summaries: Vec<CoefficientSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub focal: String,
    pub baseline: String,
    pub coefficients: Coefficients,
    pub r_squared: f64,
    pub n_obs: usize,
    pub bootstrap: Option<ReplicateDistribution>,
}

/// OLS fit of `md ~ 1 + block + is_focal + block·is_focal`.
///
/// Exactly two sources are required, one of them `focal`, each with at
/// least two blocks.
pub fn fit_interaction_model(rows: &[MdObservation], focal: &str) -> Result<RegressionFit> {
    let sources: BTreeSet<&str> = rows.iter().map(|r| r.source.as_str()).collect();
    if sources.len() != 2 {
        return Err(Error::InsufficientData(format!(
            "interaction model needs exactly two sources, got {}",
            sources.len()
        )));
    }
    if !sources.contains(focal) {
        return Err(Error::Config(format!(
            "focal source `{focal}` has no observations"
        )));
    }
    let baseline = sources.iter().find(|s| **s != focal).unwrap().to_string();
    for s in &sources {
        let blocks = rows.iter().filter(|r| r.source == *s).count();
        if blocks < 2 {
            return Err(Error::InsufficientData(format!(
                "source `{s}` has {blocks} block(s), at least 2 required"
            )));
        }
    }

    let design: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            let b = r.block as f64;
            let f = if r.source == focal { 1.0 } else { 0.0 };
            vec![1.0, b, f, b * f]
        })
        .collect();
    let y: Vec<f64> = rows.iter().map(|r| r.md).collect();
    let fit = least_squares(&design, &y)?;
    Ok(RegressionFit {
        focal: focal.to_owned(),
        baseline,
        coefficients: Coefficients::from_slice(&fit.coefficients),
        r_squared: fit.r_squared,
        n_obs: rows.len(),
        bootstrap: None,
    })
}

/// The blocks of one source, in order.
#[derive(Debug, Clone)]
pub struct SourceBlocks<'a> {
    pub source_id: &'a str,
    pub blocks: Vec<&'a [Symbol]>,
}

fn block_md(symbols: &[Symbol], which: CfKind) -> Result<f64> {
    let m = fit_symbols(symbols)?;
    Ok(dispersion_report(&m.two, &m.four, symbols.len() as u64, which)?.md)
}

/// Fits the interaction model on the original blocks, then refits it on
/// `cfg.n_replicates` moving-block-bootstrap rebuilds of every block and
/// summarizes each coefficient by its replicate mean and percentile
/// interval at `level`.
///
/// Block `b` of source `s` in replicate `r` is drawn from stream
/// `(cfg.master_seed, block_key(s, b), r)`.
pub fn bootstrap_model_coefficients(
    sources: &[SourceBlocks<'_>],
    cfg: &MbbConfig,
    focal: &str,
    which: CfKind,
    level: f64,
) -> Result<RegressionFit> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for s in sources {
        for (b, block) in s.blocks.iter().enumerate() {
            rows.push(MdObservation {
                source: s.source_id.to_owned(),
                block: b + 1,
                md: block_md(block, which)?,
            });
        }
    }
    let mut fit = fit_interaction_model(&rows, focal)?;

    let keys: Vec<Vec<u64>> = sources
        .iter()
        .map(|s| {
            (0..s.blocks.len())
                .map(|b| block_key(s.source_id, b))
                .collect()
        })
        .collect();
    let mut buffer = Vec::new();
    let mut replicates = Vec::with_capacity(cfg.n_replicates);
    for r in 0..cfg.n_replicates as u64 {
        let mut row = 0;
        for (s, source) in sources.iter().enumerate() {
            for (b, block) in source.blocks.iter().enumerate() {
                mbb_replicate_into(block, cfg, keys[s][b], r, &mut buffer)?;
                rows[row].md = block_md(&buffer, which)?;
                row += 1;
            }
        }
        replicates.push(fit_interaction_model(&rows, focal)?.coefficients.to_array());
    }

    let point = fit.coefficients.to_array();
    let summaries = COEFFICIENT_NAMES
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let values: Vec<f64> = replicates.iter().map(|c| c[j]).collect();
            Ok(CoefficientSummary {
                name: name.to_string(),
                estimate: point[j],
                mean: values.iter().sum::<f64>() / values.len() as f64,
                interval: percentile_interval(&values, level)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    fit.bootstrap = Some(ReplicateDistribution {
        config: *cfg,
        cf: which,
        replicates,
        summaries,
    });
    Ok(fit)
}
