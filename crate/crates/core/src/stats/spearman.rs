use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::ols::least_squares;
use crate::{Error, Result};

/// Largest sample size that gets an exact permutation p-value.
pub const EXACT_MAX_N: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpearmanResult {
    pub rho: f64,
    /// Two-sided.
    pub p_value: f64,
    pub n: usize,
    /// True when the p-value comes from full permutation enumeration.
    pub exact: bool,
    /// Names of the variables partialled out, empty for a plain test.
    pub controlled_for: Vec<String>,
}

/// 1-based ranks, ties receive the average of the ranks they span.
pub fn mid_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

fn centered(x: &[f64]) -> Vec<f64> {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter().map(|v| v - mean).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Pearson product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Config(format!(
            "correlation inputs differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    let (cx, cy) = (centered(x), centered(y));
    let (sxx, syy) = (dot(&cx, &cx), dot(&cy, &cy));
    if !(sxx > 0.0) || !(syy > 0.0) {
        return Err(Error::domain("correlation", "an input has zero variance"));
    }
    Ok((dot(&cx, &cy) / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

fn t_p_value(rho: f64, df: usize) -> Result<f64> {
    if df == 0 {
        return Err(Error::InsufficientData("no degrees of freedom left".into()));
    }
    if rho.abs() >= 1.0 {
        return Ok(0.0);
    }
    let t = rho * (df as f64 / (1.0 - rho * rho)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df as f64)
        .map_err(|e| Error::domain("student-t", e.to_string()))?;
    Ok((2.0 * dist.sf(t.abs())).clamp(0.0, 1.0))
}

/// Share of permutations of `y` whose |Σ x_i y_π(i)| reaches the observed one.
/// Inputs must already be centered. Enumerates all n! orders (Heap's algorithm).
fn exact_p_value(cx: &[f64], cy: &[f64]) -> f64 {
    let n = cx.len();
    let observed = dot(cx, cy).abs();
    let scale = dot(cx, cx).sqrt() * dot(cy, cy).sqrt();
    let tol = 1e-9 * scale.max(1.0);

    let mut perm = cy.to_vec();
    let mut c = vec![0usize; n];
    let mut hits: u64 = 1; // identity
    let mut total: u64 = 1;
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            total += 1;
            if dot(cx, &perm).abs() >= observed - tol {
                hits += 1;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    hits as f64 / total as f64
}

fn check_pair(x: &[f64], y: &[f64], min_n: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Config(format!(
            "correlation inputs differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < min_n {
        return Err(Error::InsufficientData(format!(
            "{} paired values, at least {min_n} required",
            x.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::domain("correlation", "non-finite input"));
    }
    Ok(())
}

/// Spearman rank correlation with a two-sided p-value: exact permutation
/// for `n ≤ 10`, otherwise the t approximation on `n - 2` degrees of
/// freedom.
pub fn spearman_test(x: &[f64], y: &[f64]) -> Result<SpearmanResult> {
    check_pair(x, y, 3)?;
    let (rx, ry) = (mid_ranks(x), mid_ranks(y));
    let rho = pearson(&rx, &ry)?;
    let n = x.len();
    let exact = n <= EXACT_MAX_N;
    let p_value = if exact {
        exact_p_value(&centered(&rx), &centered(&ry))
    } else {
        t_p_value(rho, n - 2)?
    };
    Ok(SpearmanResult {
        rho,
        p_value,
        n,
        exact,
        controlled_for: Vec::new(),
    })
}

/// Spearman correlation of `x` and `y` after removing the linear effect of
/// the ranked controls from both rank vectors. The p-value uses the t
/// approximation on `n - 2 - k` degrees of freedom. With no controls this
/// is exactly [`spearman_test`].
pub fn partial_spearman(
    x: &[f64],
    y: &[f64],
    controls: &[(&str, &[f64])],
) -> Result<SpearmanResult> {
    if controls.is_empty() {
        return spearman_test(x, y);
    }
    let k = controls.len();
    check_pair(x, y, 3 + k)?;
    for (name, c) in controls {
        if c.len() != x.len() {
            return Err(Error::Config(format!(
                "control `{name}` has {} values, expected {}",
                c.len(),
                x.len()
            )));
        }
    }
    let n = x.len();
    let control_ranks: Vec<Vec<f64>> = controls.iter().map(|(_, c)| mid_ranks(c)).collect();
    let design: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            std::iter::once(1.0)
                .chain(control_ranks.iter().map(|c| c[i]))
                .collect()
        })
        .collect();
    let rx = least_squares(&design, &mid_ranks(x))?.residuals;
    let ry = least_squares(&design, &mid_ranks(y))?.residuals;
    let rho = pearson(&rx, &ry)?;
    Ok(SpearmanResult {
        rho,
        p_value: t_p_value(rho, n - 2 - k)?,
        n,
        exact: false,
        controlled_for: controls.iter().map(|(name, _)| name.to_string()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ranks_with_ties() {
        assert_eq!(
            mid_ranks(&[10.0, 20.0, 10.0, 5.0]),
            vec![2.5, 4.0, 2.5, 1.0]
        );
    }

    #[test]
    fn monotone_exact() {
        let x: Vec<f64> = (0..8).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| v * v + 1.0).collect();
        let r = spearman_test(&x, &y).unwrap();
        assert_eq!(r.rho, 1.0);
        assert!(r.exact);
        assert!((r.p_value - 2.0 / 40_320.0).abs() < 1e-15);
    }

    #[test]
    fn exact_small_case_by_hand() {
        // n = 3: rho values over the 6 permutations are 1, .5, .5, -.5, -.5, -1.
        let r = spearman_test(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap();
        assert!((r.rho - 0.5).abs() < 1e-15);
        assert!((r.p_value - 1.0).abs() < 1e-15);
        let r = spearman_test(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap();
        assert!((r.p_value - 2.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn large_n_uses_t() {
        let x: Vec<f64> = (0..30).map(f64::from).collect();
        let y: Vec<f64> = (0..30).map(|i| ((i * 7) % 30) as f64).collect();
        let r = spearman_test(&x, &y).unwrap();
        assert!(!r.exact);
        let t = r.rho * (28.0 / (1.0 - r.rho * r.rho)).sqrt();
        let expected = 2.0 * StudentsT::new(0.0, 1.0, 28.0).unwrap().sf(t.abs());
        assert!((r.p_value - expected).abs() < 1e-14);
    }

    #[test]
    fn errors() {
        assert!(spearman_test(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(matches!(
            spearman_test(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::Domain { .. })
        ));
        let c = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert!(partial_spearman(&c, &c, &[("a", &c), ("b", &c)]).is_err());
    }

    #[test]
    fn self_correlation_survives_control() {
        let x = [3.0, 1.0, 4.0, 1.5, 5.0, 9.0, 2.0, 6.0];
        let z = [2.0, 7.0, 1.0, 8.0, 2.5, 8.5, 1.8, 2.8];
        let r = partial_spearman(&x, &x, &[("z", &z)]).unwrap();
        assert!((r.rho - 1.0).abs() < 1e-12);
        assert_eq!(r.controlled_for, vec!["z".to_string()]);
    }

    proptest! {
        #[test]
        fn empty_controls_reduce_exactly(
            x in prop::collection::vec(-100.0f64..100.0, 3..30),
            seed in any::<u64>(),
        ) {
            let y: Vec<f64> = x.iter().enumerate()
                .map(|(i, v)| v.sin() + ((seed >> (i % 60)) & 1) as f64)
                .collect();
            let a = spearman_test(&x, &y);
            let b = partial_spearman(&x, &y, &[]);
            prop_assert_eq!(a.ok(), b.ok());
        }

        #[test]
        fn monotone_transform_invariance(x in prop::collection::vec(-10.0f64..10.0, 11..40)) {
            let y: Vec<f64> = x.iter().map(|v| (v * 1.7).cos()).collect();
            if let Ok(a) = spearman_test(&x, &y) {
                let x2: Vec<f64> = x.iter().map(|v| v.exp()).collect();
                let b = spearman_test(&x2, &y).unwrap();
                prop_assert!((a.rho - b.rho).abs() < 1e-12);
            }
        }
    }
}
