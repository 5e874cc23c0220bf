use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result, Symbol};

/// Globally reshuffles consecutive subblocks of `subblock_len`.
///
/// Full subblocks are permuted uniformly (Fisher-Yates under ChaCha8 seeded
/// with `seed`); a shorter tail stays in place at the end. Local structure
/// inside subblocks is kept, global order is destroyed.
pub fn make_surrogate(symbols: &[Symbol], subblock_len: usize, seed: u64) -> Result<Vec<Symbol>> {
    if subblock_len == 0 {
        return Err(Error::Config("subblock length must be at least 1".into()));
    }
    if symbols.len() < subblock_len {
        return Err(Error::InsufficientData(format!(
            "{} symbols are shorter than one subblock of {subblock_len}",
            symbols.len()
        )));
    }
    let m = symbols.len() / subblock_len;
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut out = Vec::with_capacity(symbols.len());
    for k in order {
        out.extend_from_slice(&symbols[k * subblock_len..(k + 1) * subblock_len]);
    }
    out.extend_from_slice(&symbols[m * subblock_len..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::count_ngrams;
    use proptest::prelude::*;

    fn bits() -> impl Strategy<Value = Vec<Symbol>> {
        prop::collection::vec(any::<bool>().prop_map(Symbol::from_bit), 1..400)
    }

    #[test]
    fn single_subblock_is_identity() {
        let s: Vec<Symbol> = "VCCVV"
            .chars()
            .map(|c| Symbol::from_char(c).unwrap())
            .collect();
        assert_eq!(make_surrogate(&s, 5, 99).unwrap(), s);
        assert!(make_surrogate(&s, 6, 0).is_err());
    }

    proptest! {
        #[test]
        fn preserves_counts_and_subblocks(s in bits(), sub in 1usize..20, seed: u64) {
            prop_assume!(s.len() >= sub);
            let out = make_surrogate(&s, sub, seed).unwrap();
            prop_assert_eq!(out.len(), s.len());
            let vowels = |v: &[Symbol]| v.iter().filter(|&&x| x == Symbol::V).count();
            prop_assert_eq!(vowels(&out), vowels(&s));

            let m = s.len() / sub;
            // Tail unchanged.
            prop_assert_eq!(&out[m * sub..], &s[m * sub..]);
            // Same multiset of subblocks.
            let mut a: Vec<&[Symbol]> = s[..m * sub].chunks(sub).collect();
            let mut b: Vec<&[Symbol]> = out[..m * sub].chunks(sub).collect();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);

            // Only junction bigrams can change: within-subblock bigram totals agree.
            if sub >= 2 {
                let inner = |v: &[Symbol]| {
                    let mut total = vec![0u64; 4];
                    for chunk in v[..m * sub].chunks(sub) {
                        let c = count_ngrams(chunk, 2).unwrap();
                        for (t, x) in total.iter_mut().zip(c.counts) { *t += x; }
                    }
                    total
                };
                prop_assert_eq!(inner(&s), inner(&out));
                // Junctions: the m - 1 bigrams between consecutive subblocks.
                if s.len() == m * sub {
                    let whole = count_ngrams(&out, 2).unwrap().n_effective;
                    let within: u64 = inner(&out).iter().sum();
                    prop_assert_eq!(whole - within, (m - 1) as u64);
                }
            }
        }
    }
}
