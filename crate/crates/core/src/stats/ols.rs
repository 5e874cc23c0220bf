use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A pivot smaller than this fraction of the largest entry of `XᵀX`
/// is treated as zero.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub coefficients: Vec<f64>,
    pub residuals: Vec<f64>,
    pub r_squared: f64,
}

/// Ordinary least squares through the normal equations, solved by Gaussian
/// elimination with partial pivoting. `design` holds one row per
/// observation.
pub fn least_squares(design: &[Vec<f64>], y: &[f64]) -> Result<OlsFit> {
    let n = design.len();
    if n == 0 || n != y.len() {
        return Err(Error::InsufficientData(format!(
            "design has {n} rows for {} responses",
            y.len()
        )));
    }
    let k = design[0].len();
    if k == 0 || design.iter().any(|row| row.len() != k) {
        return Err(Error::Config(
            "design rows must share a positive width".into(),
        ));
    }
    if n < k {
        return Err(Error::RankDeficient(format!(
            "{n} observations for {k} coefficients"
        )));
    }

    // Augmented [XᵀX | Xᵀy].
    let mut a = vec![vec![0.0; k + 1]; k];
    for (row, &yi) in design.iter().zip(y) {
        for i in 0..k {
            for j in 0..k {
                a[i][j] += row[i] * row[j];
            }
            a[i][k] += row[i] * yi;
        }
    }
    let scale = a
        .iter()
        .flat_map(|r| r[..k].iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if !(scale > 0.0) {
        return Err(Error::RankDeficient("design matrix is zero".into()));
    }

    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col].abs() <= PIVOT_TOLERANCE * scale {
            return Err(Error::RankDeficient(format!(
                "column {col} is linearly dependent on earlier columns"
            )));
        }
        a.swap(col, pivot);
        for r in col + 1..k {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..=k {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let mut beta = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|j| a[i][j] * beta[j]).sum();
        beta[i] = (a[i][k] - s) / a[i][i];
    }

    let residuals: Vec<f64> = design
        .iter()
        .zip(y)
        .map(|(row, yi)| yi - row.iter().zip(&beta).map(|(x, b)| x * b).sum::<f64>())
        .collect();
    let mean = y.iter().sum::<f64>() / n as f64;
    let tss: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let r_squared = if tss > 0.0 { 1.0 - rss / tss } else { 1.0 };
    Ok(OlsFit {
        coefficients: beta,
        residuals,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let design: Vec<Vec<f64>> = (0..5).map(|i| vec![1.0, i as f64]).collect();
        let y: Vec<f64> = (0..5).map(|i| 2.0 - 0.5 * i as f64).collect();
        let fit = least_squares(&design, &y).unwrap();
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-12);
        assert!((fit.coefficients[1] + 0.5).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn residuals_orthogonal() {
        let design: Vec<Vec<f64>> = (0..12)
            .map(|i| vec![1.0, i as f64, ((i * i) % 5) as f64])
            .collect();
        let y: Vec<f64> = (0..12).map(|i| ((i * 37) % 11) as f64 / 11.0).collect();
        let fit = least_squares(&design, &y).unwrap();
        for j in 0..3 {
            let d: f64 = design
                .iter()
                .zip(&fit.residuals)
                .map(|(r, e)| r[j] * e)
                .sum();
            assert!(d.abs() < 1e-8);
        }
    }

    #[test]
    fn collinear_is_rank_deficient() {
        let design: Vec<Vec<f64>> = (0..6)
            .map(|i| vec![1.0, i as f64, 2.0 * i as f64])
            .collect();
        let y = vec![0.0; 6];
        assert!(matches!(
            least_squares(&design, &y),
            Err(Error::RankDeficient(_))
        ));
    }
}
