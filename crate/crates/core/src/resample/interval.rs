use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub level: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

fn sorted(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::InsufficientData("no samples".into()));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::domain("quantile", "samples contain NaN"));
    }
    let mut v = samples.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(v)
}

fn quantile_sorted(v: &[f64], prob: f64) -> f64 {
    // Linear interpolation between order statistics at h = (n - 1) prob.
    let h = (v.len() - 1) as f64 * prob;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(v.len() - 1);
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

/// Empirical quantile with linear interpolation between order statistics
/// (the `(n - 1) p` rule).
pub fn quantile(samples: &[f64], prob: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::Config(format!(
            "quantile probability {prob} outside [0, 1]"
        )));
    }
    Ok(quantile_sorted(&sorted(samples)?, prob))
}

/// Central percentile interval at `level`.
pub fn percentile_interval(samples: &[f64], level: f64) -> Result<Interval> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Config(format!(
            "interval level {level} outside (0, 1)"
        )));
    }
    let v = sorted(samples)?;
    let alpha = (1.0 - level) / 2.0;
    Ok(Interval {
        lo: quantile_sorted(&v, alpha),
        hi: quantile_sorted(&v, 1.0 - alpha),
        level,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn one_to_hundred() {
        let samples: Vec<f64> = (1..=100).map(f64::from).collect();
        let ci = percentile_interval(&samples, 0.95).unwrap();
        assert!((ci.lo - 3.475).abs() < 1e-12);
        assert!((ci.hi - 97.525).abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_two_point() {
        let ci = percentile_interval(&[2.5; 17], 0.9).unwrap();
        assert_eq!((ci.lo, ci.hi), (2.5, 2.5));
        let ci = percentile_interval(&[1.0, 0.0], 0.5).unwrap();
        assert!((ci.lo - 0.25).abs() < 1e-15 && (ci.hi - 0.75).abs() < 1e-15);
        assert_eq!(quantile(&[3.0, 1.0, 2.0], 0.5).unwrap(), 2.0);
    }

    #[test]
    fn errors() {
        assert!(percentile_interval(&[], 0.95).is_err());
        assert!(percentile_interval(&[1.0, 2.0], 1.0).is_err());
        assert!(percentile_interval(&[1.0, f64::NAN], 0.5).is_err());
    }

    proptest! {
        #[test]
        fn ordered_and_within_range(v in prop::collection::vec(-1e6f64..1e6, 1..200), level in 0.01f64..0.99) {
            let ci = percentile_interval(&v, level).unwrap();
            let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(min <= ci.lo && ci.lo <= ci.hi && ci.hi <= max);
        }
    }
}
