use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::AcfResult;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LjungBoxResult {
    pub q: f64,
    pub h: usize,
    pub p_value: f64,
}

/// `Q = n (n + 2) Σ_{k ≤ h} ρ_k² / (n - k)`, referred to χ²(h).
pub fn ljung_box_test(acf: &AcfResult, h: usize) -> Result<LjungBoxResult> {
    if h == 0 {
        return Err(Error::Config("Ljung-Box needs at least one lag".into()));
    }
    if h > acf.rho.len() {
        return Err(Error::Config(format!(
            "{h} lags requested but only {} autocorrelations available",
            acf.rho.len()
        )));
    }
    let n = acf.n as f64;
    let q = n
        * (n + 2.0)
        * acf.rho[..h]
            .iter()
            .enumerate()
            .map(|(i, r)| r * r / (n - (i + 1) as f64))
            .sum::<f64>();
    let chi2 = ChiSquared::new(h as f64).map_err(|e| Error::domain("chi-square", e.to_string()))?;
    let p_value = if q > 0.0 {
        chi2.sf(q).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(LjungBoxResult { q, h, p_value })
}
