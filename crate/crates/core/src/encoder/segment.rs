use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Consecutive non-overlapping blocks covering a prefix of a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSegmentation {
    pub block_len: usize,
    /// Length of the segmented sequence.
    pub sequence_len: usize,
    pub blocks: Vec<Range<usize>>,
    pub includes_partial_tail: bool,
}

impl BlockSegmentation {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn covered(&self) -> usize {
        self.blocks.last().map_or(0, |b| b.end)
    }

    /// Index of the block containing `position`, if any.
    pub fn block_of(&self, position: usize) -> Option<usize> {
        if self.block_len == 0 || position >= self.covered() {
            return None;
        }
        Some((position / self.block_len).min(self.blocks.len() - 1))
    }

    /// Number of length-`order` windows that start inside each block.
    pub fn windows_per_block(&self, order: usize) -> Vec<usize> {
        let last_start = (self.sequence_len + 1).saturating_sub(order);
        self.blocks
            .iter()
            .map(|b| b.end.min(last_start).saturating_sub(b.start))
            .collect()
    }
}

/// Splits a sequence of length `n` into full blocks of `block_len`, plus the
/// tail when `keep_partial` is set and the tail has at least `min_partial`
/// symbols.
pub fn segment_blocks(
    n: usize,
    block_len: usize,
    keep_partial: bool,
    min_partial: usize,
) -> Result<BlockSegmentation> {
    if block_len == 0 {
        return Err(Error::Config("block length must be at least 1".into()));
    }
    let full = n / block_len;
    let mut blocks: Vec<Range<usize>> = (0..full)
        .map(|i| i * block_len..(i + 1) * block_len)
        .collect();
    let tail = n - full * block_len;
    let includes_partial_tail = keep_partial && tail > 0 && tail >= min_partial;
    if includes_partial_tail {
        blocks.push(full * block_len..n);
    }
    Ok(BlockSegmentation {
        block_len,
        sequence_len: n,
        blocks,
        includes_partial_tail,
    })
}
