pub mod acf;
pub mod bootstrap;
pub mod encode;
pub mod parse;
pub mod probe;
pub mod profile;
pub mod regress;
pub mod simulate;
pub mod surrogate;

use anyhow::Result;
use vcmark_core::encoder::{segment_blocks, BlockSegmentation};
use vcmark_core::resample::MbbConfig;
use vcmark_core::Symbol;

use crate::args::{BlockArgs, ResampleArgs};
use crate::inputs::Source;

pub fn segment(source: &Source, blocks: &BlockArgs) -> Result<BlockSegmentation> {
    Ok(segment_blocks(
        source.sequence.len(),
        blocks.block_len,
        blocks.keep_partial,
        blocks.min_partial,
    )?)
}

pub fn block_slices<'a>(source: &'a Source, seg: &BlockSegmentation) -> Vec<&'a [Symbol]> {
    seg.blocks
        .iter()
        .map(|r| &source.sequence.symbols[r.clone()])
        .collect()
}

pub fn mbb_config(blocks: &BlockArgs, resample: &ResampleArgs) -> MbbConfig {
    MbbConfig {
        block_len: blocks.block_len,
        subblock_len: resample.subblock_len,
        n_replicates: resample.replicates,
        master_seed: resample.seed,
    }
}
