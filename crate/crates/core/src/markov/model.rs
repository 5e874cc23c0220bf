use serde::{Deserialize, Serialize};

use super::counts::{count_ngrams, NgramCounts};
use crate::{Error, Result, Symbol};

/// First-order chain over {V, C}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoStateModel {
    /// P(V), the vowel share.
    pub p: f64,
    pub q: f64,
    /// P(V | C)
    pub p0: f64,
    /// P(C | C)
    pub q0: f64,
    /// P(V | V)
    pub p1: f64,
    /// P(C | V)
    pub q1: f64,
}

impl TwoStateModel {
    pub fn new(p: f64, p0: f64, p1: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("p0", p0), ("p1", p1)] {
            check_probability(name, v)?;
        }
        Ok(TwoStateModel {
            p,
            q: 1.0 - p,
            p0,
            q0: 1.0 - p0,
            p1,
            q1: 1.0 - p1,
        })
    }
}

/// Chain over bigram states; each field is P(V | previous two symbols).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourStateModel {
    pub p11: f64,
    pub p10: f64,
    pub p01: f64,
    pub p00: f64,
}

impl FourStateModel {
    pub fn new(p11: f64, p10: f64, p01: f64, p00: f64) -> Result<Self> {
        let model = FourStateModel { p11, p10, p01, p00 };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("p11", self.p11),
            ("p10", self.p10),
            ("p01", self.p01),
            ("p00", self.p00),
        ] {
            check_probability(name, v)?;
        }
        Ok(())
    }

    pub fn q11(&self) -> f64 {
        1.0 - self.p11
    }
    pub fn q10(&self) -> f64 {
        1.0 - self.p10
    }
    pub fn q01(&self) -> f64 {
        1.0 - self.p01
    }
    pub fn q00(&self) -> f64 {
        1.0 - self.p00
    }

    /// P(V | state) with the state coded as `(older << 1) | newer`, V = 1.
    #[inline]
    pub fn p_vowel(&self, state: usize) -> f64 {
        match state & 3 {
            0b11 => self.p11,
            0b10 => self.p10,
            0b01 => self.p01,
            _ => self.p00,
        }
    }

    /// Stationary distribution over the bigram states (indexed as in
    /// [`FourStateModel::p_vowel`]).
    ///
    /// Power iteration on the lazy chain `(I + P) / 2`, which shares the
    /// stationary vector of `P` but is aperiodic, until the L1 change falls
    /// below 1e-12. Reducible chains converge to the limit reached from the
    /// uniform start.
    pub fn stationary(&self) -> Result<[f64; 4]> {
        self.validate()?;
        let mut pi = [0.25f64; 4];
        for _ in 0..1_000_000 {
            let mut next = [0.0f64; 4];
            for (state, &mass) in pi.iter().enumerate() {
                let p = self.p_vowel(state);
                let shifted = (state << 1) & 3;
                next[state] += 0.5 * mass;
                next[shifted | 1] += 0.5 * mass * p;
                next[shifted] += 0.5 * mass * (1.0 - p);
            }
            let delta: f64 = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
            pi = next;
            if delta < 1e-12 {
                let total: f64 = pi.iter().sum();
                return Ok(pi.map(|m| m / total));
            }
        }
        Err(Error::domain(
            "stationary distribution",
            "power iteration did not converge",
        ))
    }
}

fn check_probability(name: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::domain(name, format!("{v} is not a probability")))
    }
}

fn ratio(num: u64, den: u64, context: &str) -> Result<f64> {
    if den == 0 {
        return Err(Error::ZeroContext {
            context: context.to_owned(),
        });
    }
    Ok(num as f64 / den as f64)
}

/// Maximum-likelihood estimates from windowed counts.
///
/// `p` is the unigram vowel share; `p1`, `p0` use bigram windows (context =
/// first symbol); `p_ij` use trigram windows (context = first two symbols).
/// No smoothing: an unseen context is an error.
pub fn fit_models(
    unigrams: &NgramCounts,
    bigrams: &NgramCounts,
    trigrams: &NgramCounts,
) -> Result<(TwoStateModel, FourStateModel)> {
    for (counts, order) in [(unigrams, 1), (bigrams, 2), (trigrams, 3)] {
        if counts.order != order {
            return Err(Error::OrderMismatch {
                left: counts.order,
                right: order,
            });
        }
    }
    let b = &bigrams.counts;
    let t = &trigrams.counts;
    let p = ratio(unigrams.counts[1], unigrams.n_effective, "any")?;
    let p1 = ratio(b[0b11], b[0b11] + b[0b10], "V")?;
    let p0 = ratio(b[0b01], b[0b01] + b[0b00], "C")?;
    let p_ctx =
        |ctx: usize, name: &str| ratio(t[(ctx << 1) | 1], t[ctx << 1] + t[(ctx << 1) | 1], name);

    let two = TwoStateModel::new(p, p0, p1)?;
    let four = FourStateModel::new(
        p_ctx(0b11, "VV")?,
        p_ctx(0b10, "VC")?,
        p_ctx(0b01, "CV")?,
        p_ctx(0b00, "CC")?,
    )?;
    Ok((two, four))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedModels {
    pub unigrams: NgramCounts,
    pub bigrams: NgramCounts,
    pub trigrams: NgramCounts,
    pub two: TwoStateModel,
    pub four: FourStateModel,
}

/// Counts all three orders over `symbols` and fits both models.
pub fn fit_symbols(symbols: &[Symbol]) -> Result<FittedModels> {
    let unigrams = count_ngrams(symbols, 1)?;
    let bigrams = count_ngrams(symbols, 2)?;
    let trigrams = count_ngrams(symbols, 3)?;
    let (two, four) = fit_models(&unigrams, &bigrams, &trigrams)?;
    Ok(FittedModels {
        unigrams,
        bigrams,
        trigrams,
        two,
        four,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::SymbolSequence;

    fn symbols(s: &str) -> Vec<Symbol> {
        SymbolSequence::from_vc_str("t", s).unwrap().symbols
    }

    #[test]
    fn perfect_alternation() {
        let s: String = "VC".repeat(500);
        let s = symbols(&s);
        let uni = count_ngrams(&s, 1).unwrap();
        let bi = count_ngrams(&s, 2).unwrap();
        let tri = count_ngrams(&s, 3).unwrap();
        assert_eq!(uni.counts[1] as f64 / uni.n_effective as f64, 0.5);
        // The VV and CC contexts never occur, so the four-state fit fails...
        assert!(matches!(
            fit_models(&uni, &bi, &tri),
            Err(Error::ZeroContext { ref context }) if context == "VV"
        ));
        // ...while the two-state quantities are well defined.
        let b = &bi.counts;
        assert_eq!(ratio(b[0b11], b[0b11] + b[0b10], "V").unwrap(), 0.0);
        assert_eq!(ratio(b[0b01], b[0b01] + b[0b00], "C").unwrap(), 1.0);
    }

    #[test]
    fn hand_counted_fit() {
        // VVCCC VVCCC ... period 5.
        let s = symbols(&"VVCCC".repeat(100));
        let fit = fit_symbols(&s).unwrap();
        assert!((fit.two.p - 0.4).abs() < 1e-12);
        assert_eq!(fit.four.p11, 0.0);
        assert_eq!(fit.four.p10, 0.0);
        assert_eq!(fit.four.p01, 1.0);
        // CC is followed by C once and by V once per period (V at the wrap,
        // except after the final period).
        assert!((fit.four.p00 - 99.0 / 199.0).abs() < 1e-12);
    }

    #[test]
    fn stationary_distribution() {
        let iid = FourStateModel::new(0.3, 0.3, 0.3, 0.3).unwrap();
        let pi = iid.stationary().unwrap();
        let expected = [0.49, 0.21, 0.21, 0.09];
        for (a, b) in pi.iter().zip(expected) {
            assert!((a - b).abs() < 1e-9, "{pi:?}");
        }
        // Periodic chain VCVC... still converges through the lazy step.
        let alt = FourStateModel::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let pi = alt.stationary().unwrap();
        assert!((pi[0b10] - 0.5).abs() < 1e-9 && (pi[0b01] - 0.5).abs() < 1e-9);
        // Absorbing all-vowel chain.
        let pi = FourStateModel::new(1.0, 1.0, 1.0, 1.0)
            .unwrap()
            .stationary()
            .unwrap();
        assert!((pi[0b11] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_probabilities() {
        assert!(FourStateModel::new(1.2, 0.0, 0.0, 0.0).is_err());
        assert!(FourStateModel::new(0.5, f64::NAN, 0.0, 0.0).is_err());
        assert!(TwoStateModel::new(-0.1, 0.5, 0.5).is_err());
    }
}
