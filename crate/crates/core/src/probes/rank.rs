use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{PatternKind, ProbeMatch, TrigramClass};
use crate::encoder::BlockSegmentation;
use crate::stats::spearman_test;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedTrigram {
    pub letters: String,
    pub vc_class: TrigramClass,
    pub count: usize,
    /// `count` over all ranked matches.
    pub share: f64,
    /// 1-based rank by descending count.
    pub zipf_rank: usize,
}

/// Letter trigrams by descending frequency, ties broken lexicographically.
pub fn rank_letter_trigrams(matches: &[ProbeMatch]) -> Result<Vec<RankedTrigram>> {
    if matches.is_empty() {
        return Err(Error::InsufficientData("no probe matches to rank".into()));
    }
    let mut counts: BTreeMap<&str, (TrigramClass, usize)> = BTreeMap::new();
    for m in matches {
        counts.entry(&m.letters).or_insert((m.vc_class, 0)).1 += 1;
    }
    let mut rows: Vec<_> = counts.into_iter().collect();
    // Stable sort keeps lexicographic order among equal counts.
    rows.sort_by(|a, b| b.1 .1.cmp(&a.1 .1));
    let total = matches.len() as f64;
    Ok(rows
        .into_iter()
        .enumerate()
        .map(|(i, (letters, (vc_class, count)))| RankedTrigram {
            letters: letters.to_owned(),
            vc_class,
            count,
            share: count as f64 / total,
            zipf_rank: i + 1,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Increasing => "increasing",
            Direction::Decreasing => "decreasing",
        }
    }
}

/// A letter trigram whose blockwise frequency is associated with block
/// position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeCandidate {
    pub letters: String,
    pub vc_class: TrigramClass,
    pub pattern_kind: PatternKind,
    pub direction: Direction,
    pub rho: f64,
    pub spearman_p: f64,
    pub zipf_rank: usize,
    pub share: f64,
    pub count: usize,
    /// Persistent and rising, or alternating and falling: the direction that
    /// accompanies falling memory depth.
    pub matches_md_trend: bool,
}

/// Per-block relative frequencies of every letter trigram (count over the
/// number of trigram windows starting in the block), each tested with
/// Spearman's rho against block index. Trigrams with `p < threshold` are
/// returned, ordered by Zipf rank.
pub fn trigram_trend_table(
    matches: &[ProbeMatch],
    segmentation: &BlockSegmentation,
    threshold: f64,
) -> Result<Vec<ProbeCandidate>> {
    let n_blocks = segmentation.len();
    if n_blocks < 3 {
        return Err(Error::InsufficientData(format!(
            "trend screening needs at least 3 blocks, got {n_blocks}"
        )));
    }
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::Config(format!(
            "threshold {threshold} outside (0, 1]"
        )));
    }
    let windows = segmentation.windows_per_block(3);
    let ranked = rank_letter_trigrams(matches)?;

    let mut per_block: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for m in matches {
        if let Some(b) = m.block {
            per_block
                .entry(&m.letters)
                .or_insert_with(|| vec![0.0; n_blocks])[b - 1] += 1.0;
        }
    }
    let index: Vec<f64> = (1..=n_blocks).map(|b| b as f64).collect();

    let mut out = Vec::new();
    for r in ranked {
        let Some(counts) = per_block.get(r.letters.as_str()) else {
            continue;
        };
        let freq: Vec<f64> = counts
            .iter()
            .zip(&windows)
            .map(|(c, &w)| if w > 0 { c / w as f64 } else { 0.0 })
            .collect();
        // A flat series has no rank association to test.
        let Ok(test) = spearman_test(&index, &freq) else {
            continue;
        };
        if !(test.p_value < threshold) || test.rho == 0.0 {
            continue;
        }
        let direction = if test.rho > 0.0 {
            Direction::Increasing
        } else {
            Direction::Decreasing
        };
        let kind = r.vc_class.kind();
        out.push(ProbeCandidate {
            matches_md_trend: matches!(
                (kind, direction),
                (PatternKind::Persistent, Direction::Increasing)
                    | (PatternKind::Alternating, Direction::Decreasing)
            ),
            letters: r.letters,
            vc_class: r.vc_class,
            pattern_kind: kind,
            direction,
            rho: test.rho,
            spearman_p: test.p_value,
            zipf_rank: r.zipf_rank,
            share: r.share,
            count: r.count,
        });
    }
    Ok(out)
}
