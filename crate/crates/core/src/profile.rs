//! Blockwise model profiles and per-block bootstrap statistics.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::encoder::{BlockSegmentation, SymbolSequence};
use crate::markov::{dispersion_report, fit_symbols, CfKind, DispersionReport, FittedModels};
use crate::resample::{block_key, mbb_replicate_into, percentile_interval, Interval, MbbConfig};
use crate::{Result, Symbol};

/// Fitted models and dispersion statistics of one block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockProfile {
    /// 1-based block index.
    pub block: usize,
    pub range: Range<usize>,
    pub partial: bool,
    pub models: FittedModels,
    pub dispersion: DispersionReport,
}

/// The scalar statistics tracked per block, in a fixed column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockStatistics {
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
    pub md: f64,
}

pub const STATISTIC_NAMES: [&str; 14] = [
    "p",
    "p0",
    "p1",
    "p11",
    "p10",
    "p01",
    "p00",
    "q00",
    "d",
    "eta",
    "nu",
    "cf_simple",
    "cf_complex",
    "md",
];

impl BlockStatistics {
    pub fn from_fit(models: &FittedModels, dispersion: &DispersionReport) -> Self {
        BlockStatistics {
            p: models.two.p,
            p0: models.two.p0,
            p1: models.two.p1,
            p11: models.four.p11,
            p10: models.four.p10,
            p01: models.four.p01,
            p00: models.four.p00,
            q00: models.four.q00(),
            d: dispersion.d,
            eta: dispersion.eta,
            nu: dispersion.nu,
            cf_simple: dispersion.cf_simple,
            cf_complex: dispersion.cf_complex,
            md: dispersion.md,
        }
    }

    /// Values in [`STATISTIC_NAMES`] order.
    pub fn values(&self) -> [f64; 14] {
        [
            self.p,
            self.p0,
            self.p1,
            self.p11,
            self.p10,
            self.p01,
            self.p00,
            self.q00,
            self.d,
            self.eta,
            self.nu,
            self.cf_simple,
            self.cf_complex,
            self.md,
        ]
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        STATISTIC_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| self.values()[i])
    }
}

impl BlockProfile {
    pub fn statistics(&self) -> BlockStatistics {
        BlockStatistics::from_fit(&self.models, &self.dispersion)
    }
}

/// Fits models and dispersion statistics on `symbols`.
pub fn fit_block(symbols: &[Symbol], which: CfKind) -> Result<(FittedModels, DispersionReport)> {
    let models = fit_symbols(symbols)?;
    let dispersion = dispersion_report(&models.two, &models.four, symbols.len() as u64, which)?;
    Ok((models, dispersion))
}

/// Profiles every block of `seg` over `seq`.
pub fn profile_blocks(
    seq: &SymbolSequence,
    seg: &BlockSegmentation,
    which: CfKind,
) -> Result<Vec<BlockProfile>> {
    seg.blocks
        .iter()
        .enumerate()
        .map(|(i, range)| {
            let (models, dispersion) = fit_block(&seq.symbols[range.clone()], which)?;
            Ok(BlockProfile {
                block: i + 1,
                range: range.clone(),
                partial: range.len() < seg.block_len,
                models,
                dispersion,
            })
        })
        .collect()
}

/// Bootstrap distribution of every tracked statistic for one block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockBootstrap {
    pub block: usize,
    pub estimate: BlockStatistics,
    pub replicates: Vec<BlockStatistics>,
    /// Percentile intervals in [`STATISTIC_NAMES`] order.
    pub intervals: Vec<Interval>,
}

/// Refits each block on `cfg.n_replicates` moving-block-bootstrap
/// replicates; replicate `r` of block `b` uses stream
/// `(cfg.master_seed, block_key(source_id, b), r)`.
pub fn bootstrap_blocks(
    seq: &SymbolSequence,
    seg: &BlockSegmentation,
    cfg: &MbbConfig,
    which: CfKind,
    level: f64,
) -> Result<Vec<BlockBootstrap>> {
    cfg.validate()?;
    let mut buffer = Vec::new();
    seg.blocks
        .iter()
        .enumerate()
        .map(|(b, range)| {
            let block = &seq.symbols[range.clone()];
            let (models, dispersion) = fit_block(block, which)?;
            let key = block_key(&seq.source_id, b);
            let mut replicates = Vec::with_capacity(cfg.n_replicates);
            for r in 0..cfg.n_replicates as u64 {
                mbb_replicate_into(block, cfg, key, r, &mut buffer)?;
                let (m, d) = fit_block(&buffer, which)?;
                replicates.push(BlockStatistics::from_fit(&m, &d));
            }
            let intervals = (0..STATISTIC_NAMES.len())
                .map(|j| {
                    let v: Vec<f64> = replicates.iter().map(|s| s.values()[j]).collect();
                    percentile_interval(&v, level)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(BlockBootstrap {
                block: b + 1,
                estimate: BlockStatistics::from_fit(&models, &dispersion),
                replicates,
                intervals,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::segment_blocks;

    #[test]
    fn profiles_each_block() {
        let seq = SymbolSequence::from_vc_str("s", &"VVCCC".repeat(220)).unwrap();
        let seg = segment_blocks(seq.len(), 500, true, 1).unwrap();
        let profiles = profile_blocks(&seq, &seg, CfKind::Complex).unwrap();
        assert_eq!(profiles.len(), 3);
        assert!(profiles[2].partial && !profiles[0].partial);
        assert_eq!(profiles[1].block, 2);
        let s = profiles[0].statistics();
        assert_eq!(s.get("md"), Some(profiles[0].dispersion.md));
        assert_eq!(s.get("nope"), None);
    }

    #[test]
    fn bootstrap_is_deterministic() {
        let seq = crate::markov::simulate_sequence(
            &crate::markov::FourStateModel::new(0.11, 0.62, 0.13, 0.86).unwrap(),
            3000,
            5,
            crate::markov::Init::Stationary,
        )
        .unwrap();
        let seg = segment_blocks(seq.len(), 1000, false, 0).unwrap();
        let cfg = MbbConfig {
            block_len: 1000,
            subblock_len: 100,
            n_replicates: 30,
            master_seed: 11,
        };
        let a = bootstrap_blocks(&seq, &seg, &cfg, CfKind::Complex, 0.9).unwrap();
        let b = bootstrap_blocks(&seq, &seg, &cfg, CfKind::Complex, 0.9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        assert_eq!(a[0].replicates.len(), 30);
        assert!(a[0].intervals.iter().all(|i| i.lo <= i.hi));
    }
}
