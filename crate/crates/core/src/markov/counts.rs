use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Symbol};

/// Overlapping-window counts of V/C strings of one length.
///
/// Counts are indexed by the binary value of the window with `V` = 1 and
/// the earliest symbol as the most significant bit, so `VC` is index 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgramCounts {
    pub order: usize,
    pub counts: Vec<u64>,
    pub n_effective: u64,
}

impl NgramCounts {
    pub fn index_of(key: &str) -> Option<usize> {
        key.chars().try_fold(0usize, |acc, c| {
            Symbol::from_char(c).map(|s| (acc << 1) | s.bit())
        })
    }

    pub fn key_of(order: usize, index: usize) -> String {
        (0..order)
            .rev()
            .map(|bit| if (index >> bit) & 1 == 1 { 'V' } else { 'C' })
            .collect()
    }

    /// Count for a key such as `"VCV"`; 0 for keys of the wrong length.
    pub fn get(&self, key: &str) -> u64 {
        if key.chars().count() != self.order {
            return 0;
        }
        Self::index_of(key).map_or(0, |i| self.counts[i])
    }

    /// Non-zero entries keyed by V/C string.
    pub fn to_map(&self) -> BTreeMap<String, u64> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (Self::key_of(self.order, i), c))
            .collect()
    }

    pub fn relative(&self) -> Vec<f64> {
        let total = self.n_effective as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }
}

/// Counts all windows of length `order` (1 to 3) without wraparound.
pub fn count_ngrams(symbols: &[Symbol], order: usize) -> Result<NgramCounts> {
    if !(1..=3).contains(&order) {
        return Err(Error::Config(format!(
            "n-gram order {order} is not 1, 2 or 3"
        )));
    }
    if symbols.len() < order {
        return Err(Error::InsufficientData(format!(
            "{} symbols cannot hold a window of {order}",
            symbols.len()
        )));
    }
    let mask = (1usize << order) - 1;
    let mut counts = vec![0u64; 1 << order];
    let mut state = 0usize;
    for (i, s) in symbols.iter().enumerate() {
        state = ((state << 1) | s.bit()) & mask;
        if i + 1 >= order {
            counts[state] += 1;
        }
    }
    Ok(NgramCounts {
        order,
        counts,
        n_effective: (symbols.len() - order + 1) as u64,
    })
}

/// Sum of absolute differences between two relative-frequency tables.
/// Ranges over [0, 2].
pub fn trigram_discrepancy(empirical: &NgramCounts, simulated: &NgramCounts) -> Result<f64> {
    if empirical.order != simulated.order {
        return Err(Error::OrderMismatch {
            left: empirical.order,
            right: simulated.order,
        });
    }
    if empirical.n_effective == 0 || simulated.n_effective == 0 {
        return Err(Error::InsufficientData("empty n-gram table".into()));
    }
    Ok(empirical
        .relative()
        .iter()
        .zip(simulated.relative())
        .map(|(a, b)| (a - b).abs())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::SymbolSequence;
    use proptest::prelude::*;

    fn seq(s: &str) -> Vec<Symbol> {
        SymbolSequence::from_vc_str("t", s).unwrap().symbols
    }

    #[test]
    fn hand_enumerated_windows() {
        let s = seq("VCVVC");
        let bigrams = count_ngrams(&s, 2).unwrap();
        let expected: BTreeMap<String, u64> = [("VC", 2), ("CV", 1), ("VV", 1)]
            .map(|(k, v)| (k.to_owned(), v))
            .into();
        assert_eq!(bigrams.to_map(), expected);
        assert_eq!(bigrams.n_effective, 4);

        let trigrams = count_ngrams(&s, 3).unwrap();
        let expected: BTreeMap<String, u64> = [("VCV", 1), ("CVV", 1), ("VVC", 1)]
            .map(|(k, v)| (k.to_owned(), v))
            .into();
        assert_eq!(trigrams.to_map(), expected);
        assert_eq!(trigrams.get("VCV"), 1);
        assert_eq!(trigrams.get("CCC"), 0);

        assert_eq!(count_ngrams(&s, 1).unwrap().get("V"), 3);
    }

    #[test]
    fn order_errors() {
        assert!(matches!(
            count_ngrams(&seq("VC"), 3),
            Err(Error::InsufficientData(_))
        ));
        assert!(matches!(
            count_ngrams(&seq("VCVC"), 4),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn discrepancy_bounds() {
        let a = count_ngrams(&seq("VVVVVV"), 3).unwrap();
        let b = count_ngrams(&seq("CCCCCC"), 3).unwrap();
        assert_eq!(trigram_discrepancy(&a, &a).unwrap(), 0.0);
        assert!((trigram_discrepancy(&a, &b).unwrap() - 2.0).abs() < 1e-15);
        let two = count_ngrams(&seq("VCVC"), 2).unwrap();
        assert!(matches!(
            trigram_discrepancy(&a, &two),
            Err(Error::OrderMismatch { left: 3, right: 2 })
        ));
    }

    fn symbols() -> impl Strategy<Value = Vec<Symbol>> {
        prop::collection::vec(any::<bool>().prop_map(Symbol::from_bit), 3..400)
    }

    proptest! {
        #[test]
        fn counts_sum_to_windows(s in symbols(), order in 1usize..=3) {
            let c = count_ngrams(&s, order).unwrap();
            prop_assert_eq!(c.counts.iter().sum::<u64>(), c.n_effective);
            prop_assert_eq!(c.n_effective as usize, s.len() - order + 1);
            // Brute-force string matching agrees.
            let text: String = s.iter().map(|x| x.as_char()).collect();
            for idx in 0..(1usize << order) {
                let key = NgramCounts::key_of(order, idx);
                let brute = (0..=text.len() - order).filter(|&i| text[i..i + order] == key).count();
                prop_assert_eq!(c.counts[idx], brute as u64);
            }
        }

        #[test]
        fn discrepancy_is_symmetric_premetric(a in symbols(), b in symbols()) {
            let ca = count_ngrams(&a, 3).unwrap();
            let cb = count_ngrams(&b, 3).unwrap();
            let ab = trigram_discrepancy(&ca, &cb).unwrap();
            let ba = trigram_discrepancy(&cb, &ca).unwrap();
            prop_assert!((ab - ba).abs() < 1e-12);
            prop_assert!((0.0..=2.0 + 1e-12).contains(&ab));
            prop_assert_eq!(ab == 0.0, ca.relative() == cb.relative());
        }
    }
}
