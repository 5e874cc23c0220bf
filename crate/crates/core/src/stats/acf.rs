use serde::{Deserialize, Serialize};

use crate::{Error, Result, Symbol};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfResult {
    /// `1..=max_lag`
    pub lags: Vec<usize>,
    pub rho: Vec<f64>,
    pub n: usize,
}

impl AcfResult {
    /// Two-sided white-noise band `1.96 / sqrt(n)`.
    pub fn white_noise_band(&self) -> f64 {
        1.96 / (self.n as f64).sqrt()
    }
}

/// V as 1.0, C as 0.0.
pub fn symbol_values(symbols: &[Symbol]) -> Vec<f64> {
    symbols.iter().map(|s| s.bit() as f64).collect()
}

/// Sample autocorrelation with the biased (divide by the lag-0 sum)
/// normalization.
pub fn autocorrelation(x: &[f64], max_lag: usize) -> Result<AcfResult> {
    let n = x.len();
    if max_lag == 0 {
        return Err(Error::Config("max lag must be at least 1".into()));
    }
    if n <= max_lag {
        return Err(Error::InsufficientData(format!(
            "{n} values cannot support lag {max_lag}"
        )));
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let denom: f64 = centered.iter().map(|v| v * v).sum();
    if !(denom > 0.0) {
        return Err(Error::domain("acf", "sequence has zero variance"));
    }
    let rho = (1..=max_lag)
        .map(|k| {
            centered[..n - k]
                .iter()
                .zip(&centered[k..])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / denom
        })
        .collect();
    Ok(AcfResult {
        lags: (1..=max_lag).collect(),
        rho,
        n,
    })
}
