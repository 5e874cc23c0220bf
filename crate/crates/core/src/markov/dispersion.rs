use serde::{Deserialize, Serialize};

use super::{FourStateModel, TwoStateModel};
use crate::{Error, Result};

/// Which correction factor feeds memory depth and the dependent variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CfKind {
    Simple,
    #[default]
    Complex,
}

/// Dispersion statistics of one sequence (or block).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionReport {
    /// Lag-1 dependence `p1 - p0`.
    pub d: f64,
    pub eta: f64,
    pub nu: f64,
    pub cf_simple: f64,
    pub cf_complex: f64,
    pub selected: CfKind,
    /// Memory depth, `1 - CF` for the selected CF.
    pub md: f64,
    /// `p (1 - p) / n`
    pub var_independent: f64,
    /// `CF * var_independent`
    pub var_dependent: f64,
    pub n: u64,
}

impl DispersionReport {
    pub fn cf(&self) -> f64 {
        match self.selected {
            CfKind::Simple => self.cf_simple,
            CfKind::Complex => self.cf_complex,
        }
    }
}

/// `(1 + d) / (1 - d)`
pub fn cf_simple_from_d(d: f64) -> Result<f64> {
    if 1.0 - d <= 0.0 || d.is_nan() {
        return Err(Error::domain("d", format!("CF is undefined at d = {d}")));
    }
    Ok((1.0 + d) / (1.0 - d))
}

/// Markov's correction factors, memory depth and variances for a fitted
/// model pair over `n` symbols.
///
/// ```text
/// d  = p1 - p0
/// η  = (p11 - p1) / q1
/// ν  = (q00 - q0) / p0
/// CF_simple  = (1 + d) / (1 - d)
/// CF_complex = ½ [(1+η)/(1-η) + (1+ν)/(1-ν)] CF_simple + (q - p)(ν - η) / ((1-η)(1-ν))
/// MD = 1 - CF
/// ```
pub fn dispersion_report(
    two: &TwoStateModel,
    four: &FourStateModel,
    n: u64,
    which: CfKind,
) -> Result<DispersionReport> {
    if !(two.q1 > 0.0) {
        return Err(Error::domain("eta", "q1 = P(C|V) must be positive"));
    }
    if !(two.p0 > 0.0) {
        return Err(Error::domain("nu", "p0 = P(V|C) must be positive"));
    }
    if n == 0 {
        return Err(Error::domain("variance", "sequence length is zero"));
    }

    let d = two.p1 - two.p0;
    let cf_simple = cf_simple_from_d(d)?;

    let eta = (four.p11 - two.p1) / two.q1;
    let nu = (four.q00() - two.q0) / two.p0;
    if 1.0 - eta <= 0.0 {
        return Err(Error::domain("eta", format!("pole at eta = {eta}")));
    }
    if 1.0 - nu <= 0.0 {
        return Err(Error::domain("nu", format!("pole at nu = {nu}")));
    }

    let cf_complex = 0.5 * ((1.0 + eta) / (1.0 - eta) + (1.0 + nu) / (1.0 - nu)) * cf_simple
        + (two.q - two.p) * (nu - eta) / ((1.0 - eta) * (1.0 - nu));

    let cf = match which {
        CfKind::Simple => cf_simple,
        CfKind::Complex => cf_complex,
    };
    let var_independent = two.p * (1.0 - two.p) / n as f64;

    Ok(DispersionReport {
        d,
        eta,
        nu,
        cf_simple,
        cf_complex,
        selected: which,
        md: 1.0 - cf,
        var_independent,
        var_dependent: cf * var_independent,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn independence_gives_unit_factors() {
        let two = TwoStateModel::new(0.4, 0.4, 0.4).unwrap();
        let four = FourStateModel::new(0.4, 0.4, 0.4, 0.4).unwrap();
        let r = dispersion_report(&two, &four, 1000, CfKind::Complex).unwrap();
        assert_eq!((r.d, r.eta, r.nu), (0.0, 0.0, 0.0));
        assert_eq!(r.cf_simple, 1.0);
        assert_eq!(r.cf_complex, 1.0);
        assert_eq!(r.md, 0.0);
        assert!((r.var_independent - 0.24 / 1000.0).abs() < 1e-18);
        assert_eq!(r.var_dependent, r.var_independent);
    }

    #[test]
    fn inverted_cf_simple() {
        // d = (CF - 1) / (CF + 1) with CF = 0.303 gives d ≈ -0.5349.
        assert!((cf_simple_from_d(-0.5349).unwrap() - 0.3030).abs() < 5e-5);
        assert_eq!(cf_simple_from_d(-1.0).unwrap(), 0.0);
        assert!(cf_simple_from_d(1.0).is_err());
    }

    #[test]
    fn markov_1913_two_state_values() {
        // Markov's published estimates for the opening stanzas:
        // p = 0.432, p1 = 0.128, p0 = 0.663.
        let two = TwoStateModel::new(0.432, 0.663, 0.128).unwrap();
        let four = FourStateModel::new(0.128, 0.5, 0.5, 0.663).unwrap();
        let r = dispersion_report(&two, &four, 20_000, CfKind::Simple).unwrap();
        assert!((r.cf_simple - 0.3030).abs() < 5e-4, "{}", r.cf_simple);
        assert_eq!(r.md, 1.0 - r.cf_simple);
    }

    #[test]
    fn domain_errors_name_the_quantity() {
        let four = FourStateModel::new(0.5, 0.5, 0.5, 0.5).unwrap();
        let no_c_after_v = TwoStateModel::new(0.5, 0.5, 1.0).unwrap();
        assert!(matches!(
            dispersion_report(&no_c_after_v, &four, 10, CfKind::Complex),
            Err(Error::Domain {
                quantity: "eta",
                ..
            })
        ));
        let no_v_after_c = TwoStateModel::new(0.5, 0.0, 0.5).unwrap();
        assert!(matches!(
            dispersion_report(&no_v_after_c, &four, 10, CfKind::Complex),
            Err(Error::Domain { quantity: "nu", .. })
        ));
        // eta = 1 needs p11 = 1 with p1 = 0 < 1.
        let two = TwoStateModel::new(0.5, 0.5, 0.0).unwrap();
        let pole = FourStateModel::new(1.0, 0.5, 0.5, 0.5).unwrap();
        assert!(matches!(
            dispersion_report(&two, &pole, 10, CfKind::Complex),
            Err(Error::Domain {
                quantity: "eta",
                ..
            })
        ));
    }

    fn prob() -> impl Strategy<Value = f64> {
        0.02f64..0.98
    }

    proptest! {
        #[test]
        fn eta_nu_zero_reduces_complex_to_simple(p in prob(), p0 in prob(), p1 in prob(), p10 in prob(), p01 in prob()) {
            let two = TwoStateModel::new(p, p0, p1).unwrap();
            // p11 = p1 and q00 = q0 make eta = nu = 0.
            let four = FourStateModel::new(p1, p10, p01, p0).unwrap();
            let r = dispersion_report(&two, &four, 100, CfKind::Complex).unwrap();
            prop_assert_eq!(r.eta, 0.0);
            prop_assert_eq!(r.cf_complex, r.cf_simple);
        }

        #[test]
        fn identities_hold(p in prob(), p0 in prob(), p1 in prob(), p11 in prob(), p10 in prob(), p01 in prob(), p00 in prob(), n in 1u64..1_000_000) {
            let two = TwoStateModel::new(p, p0, p1).unwrap();
            let four = FourStateModel::new(p11, p10, p01, p00).unwrap();
            for which in [CfKind::Simple, CfKind::Complex] {
                let r = dispersion_report(&two, &four, n, which).unwrap();
                prop_assert_eq!(r.cf_simple, (1.0 + r.d) / (1.0 - r.d));
                prop_assert_eq!(r.md, 1.0 - r.cf());
                prop_assert_eq!(r.var_dependent, r.cf() * r.var_independent);
            }
        }

        #[test]
        fn cf_simple_increasing(a in -0.999f64..0.999, b in -0.999f64..0.999) {
            prop_assume!(a < b);
            prop_assert!(cf_simple_from_d(a).unwrap() < cf_simple_from_d(b).unwrap());
        }
    }
}
