use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    count_ngrams, dispersion_report, fit_symbols, trigram_discrepancy, CfKind, FourStateModel,
};
use crate::encoder::SymbolSequence;
use crate::resample::{derive_seed, percentile_interval, quantile, Interval};
use crate::{Error, Result, Symbol};

/// How the first two symbols of a simulated sequence are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Init {
    Bigram(Symbol, Symbol),
    /// Drawn from the chain's stationary bigram distribution.
    #[default]
    Stationary,
}

/// Draws `length` symbols from the four-state chain.
///
/// Uses ChaCha8 seeded with `seed`; each step consumes one uniform double
/// and emits `V` when it is below P(V | state).
pub fn simulate_symbols(
    model: &FourStateModel,
    length: usize,
    seed: u64,
    init: Init,
) -> Result<Vec<Symbol>> {
    model.validate()?;
    if length < 2 {
        return Err(Error::Config("simulated length must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = match init {
        Init::Bigram(a, b) => (a, b),
        Init::Stationary => {
            let pi = model.stationary()?;
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            let mut state = 3;
            for (i, &mass) in pi.iter().enumerate() {
                acc += mass;
                if u < acc {
                    state = i;
                    break;
                }
            }
            (
                Symbol::from_bit(state & 2 != 0),
                Symbol::from_bit(state & 1 != 0),
            )
        }
    };

    let table = [model.p00, model.p01, model.p10, model.p11];
    let mut out = Vec::with_capacity(length);
    out.push(a);
    out.push(b);
    let mut state = (a.bit() << 1) | b.bit();
    for _ in 2..length {
        let v = rng.gen::<f64>() < table[state];
        out.push(Symbol::from_bit(v));
        state = ((state << 1) | v as usize) & 3;
    }
    Ok(out)
}

pub fn simulate_sequence(
    model: &FourStateModel,
    length: usize,
    seed: u64,
    init: Init,
) -> Result<SymbolSequence> {
    Ok(SymbolSequence::synthetic(
        "simulated",
        simulate_symbols(model, length, seed, init)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRun {
    pub run: usize,
    pub seed: u64,
    pub md: f64,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub model: FourStateModel,
    pub empirical_md: f64,
    pub runs: Vec<EnsembleRun>,
    pub md_median: f64,
    pub md_interval: Interval,
    pub empirical_within_interval: bool,
    pub discrepancy_median: f64,
    pub discrepancy_interval: Interval,
}

/// Stream label mixed into run seeds so ensembles never share draws with
/// bootstrap replicates under the same master seed.
const ENSEMBLE_STREAM: u64 = 0x656e_7365_6d62_6c65;

/// Fits the four-state chain to `empirical`, simulates `runs` sequences of
/// `length` symbols and compares memory depth and trigram frequencies.
///
/// Run `r` uses seed `derive_seed(master_seed, [ENSEMBLE_STREAM, r])`, so
/// results do not depend on evaluation order.
pub fn simulate_ensemble(
    empirical: &[Symbol],
    runs: usize,
    length: usize,
    master_seed: u64,
    which: CfKind,
    level: f64,
) -> Result<EnsembleSummary> {
    if runs == 0 {
        return Err(Error::Config("ensemble needs at least one run".into()));
    }
    let fit = fit_symbols(empirical)?;
    let empirical_md = dispersion_report(&fit.two, &fit.four, empirical.len() as u64, which)?.md;

    let runs = (0..runs)
        .map(|run| {
            let seed = derive_seed(master_seed, &[ENSEMBLE_STREAM, run as u64]);
            let sim = simulate_symbols(&fit.four, length, seed, Init::Stationary)?;
            let sim_fit = fit_symbols(&sim)?;
            let md = dispersion_report(&sim_fit.two, &sim_fit.four, length as u64, which)?.md;
            let discrepancy = trigram_discrepancy(&fit.trigrams, &count_ngrams(&sim, 3)?)?;
            Ok(EnsembleRun {
                run,
                seed,
                md,
                discrepancy,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mds: Vec<f64> = runs.iter().map(|r| r.md).collect();
    let discrepancies: Vec<f64> = runs.iter().map(|r| r.discrepancy).collect();
    let md_interval = percentile_interval(&mds, level)?;
    Ok(EnsembleSummary {
        model: fit.four,
        empirical_md,
        md_median: quantile(&mds, 0.5)?,
        empirical_within_interval: md_interval.contains(empirical_md),
        md_interval,
        discrepancy_median: quantile(&discrepancies, 0.5)?,
        discrepancy_interval: percentile_interval(&discrepancies, level)?,
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::fit_symbols;

    #[test]
    fn degenerate_chains() {
        let ones = FourStateModel::new(1.0, 1.0, 1.0, 1.0).unwrap();
        for seed in 0..5 {
            let s = simulate_sequence(&ones, 10, seed, Init::Stationary).unwrap();
            assert_eq!(s.to_vc_string(), "VVVVVVVVVV");
            let s = simulate_sequence(&ones, 10, seed, Init::Bigram(Symbol::C, Symbol::C)).unwrap();
            assert_eq!(s.to_vc_string(), "CCVVVVVVVV");
        }
        let zeros = FourStateModel::new(0.0, 0.0, 0.0, 0.0).unwrap();
        let s = simulate_sequence(&zeros, 10, 3, Init::Bigram(Symbol::V, Symbol::C)).unwrap();
        assert_eq!(s.to_vc_string(), "VCCCCCCCCC");
    }

    #[test]
    fn deterministic_per_seed() {
        let m = FourStateModel::new(0.15, 0.7, 0.45, 0.6).unwrap();
        let a = simulate_symbols(&m, 5000, 42, Init::Stationary).unwrap();
        let b = simulate_symbols(&m, 5000, 42, Init::Stationary).unwrap();
        let c = simulate_symbols(&m, 5000, 43, Init::Stationary).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(simulate_symbols(&m, 1, 0, Init::Stationary).is_err());
    }

    #[test]
    fn iid_half_recovers_half() {
        let m = FourStateModel::new(0.5, 0.5, 0.5, 0.5).unwrap();
        let s = simulate_symbols(&m, 1_000_000, 7, Init::Stationary).unwrap();
        let fit = fit_symbols(&s).unwrap();
        assert!((fit.two.p1 - 0.5).abs() < 0.01);
        assert!((fit.two.p0 - 0.5).abs() < 0.01);
        assert!((fit.two.p - 0.5).abs() < 0.01);
    }

    #[test]
    fn refit_of_own_simulation_agrees() {
        let m = FourStateModel::new(0.12, 0.62, 0.2, 0.85).unwrap();
        let s = simulate_symbols(&m, 1_000_000, 11, Init::Stationary).unwrap();
        let fit = fit_symbols(&s).unwrap();
        let s2 = simulate_symbols(&fit.four, 1_000_000, 12, Init::Stationary).unwrap();
        let refit = fit_symbols(&s2).unwrap();
        for (a, b) in [
            (fit.four.p11, refit.four.p11),
            (fit.four.p10, refit.four.p10),
            (fit.four.p01, refit.four.p01),
            (fit.four.p00, refit.four.p00),
        ] {
            assert!((a - b).abs() < 0.01);
        }
    }

    #[test]
    fn ensemble_brackets_its_source() {
        let m = FourStateModel::new(0.11, 0.62, 0.13, 0.86).unwrap();
        let block = simulate_symbols(&m, 10_000, 5, Init::Stationary).unwrap();
        let summary = simulate_ensemble(&block, 100, 10_000, 9, CfKind::Complex, 0.95).unwrap();
        assert_eq!(summary.runs.len(), 100);
        assert!(summary.empirical_within_interval);
        assert!(summary.discrepancy_median < 0.05);
        let again = simulate_ensemble(&block, 100, 10_000, 9, CfKind::Complex, 0.95).unwrap();
        assert_eq!(summary, again);
    }
}
