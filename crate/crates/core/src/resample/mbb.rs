use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::derive_seed;
use crate::{Error, Result, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MbbConfig {
    pub block_len: usize,
    pub subblock_len: usize,
    pub n_replicates: usize,
    pub master_seed: u64,
}

impl Default for MbbConfig {
    fn default() -> Self {
        MbbConfig {
            block_len: 10_000,
            subblock_len: 250,
            n_replicates: 1_000,
            master_seed: 1,
        }
    }
}

impl MbbConfig {
    pub fn validate(&self) -> Result<()> {
        if self.subblock_len == 0 {
            return Err(Error::Config("subblock length must be at least 1".into()));
        }
        if self.block_len == 0 || self.block_len % self.subblock_len != 0 {
            return Err(Error::Config(format!(
                "block length {} is not a positive multiple of subblock length {}",
                self.block_len, self.subblock_len
            )));
        }
        if self.n_replicates == 0 {
            return Err(Error::Config("at least one replicate is required".into()));
        }
        Ok(())
    }
}

/// Writes replicate `replicate` of `block` into `out`.
///
/// The block is cut into `m = len / subblock_len` start-aligned,
/// non-overlapping subblocks (a shorter remainder is never drawn); `m`
/// of them are drawn uniformly with replacement and concatenated. The
/// stream is `derive_seed(cfg.master_seed, [block_key, replicate])`.
pub fn mbb_replicate_into(
    block: &[Symbol],
    cfg: &MbbConfig,
    block_key: u64,
    replicate: u64,
    out: &mut Vec<Symbol>,
) -> Result<()> {
    if cfg.subblock_len == 0 {
        return Err(Error::Config("subblock length must be at least 1".into()));
    }
    let sub = cfg.subblock_len;
    let m = block.len() / sub;
    if m == 0 {
        return Err(Error::InsufficientData(format!(
            "block of {} symbols is shorter than one subblock of {sub}",
            block.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.master_seed, &[block_key, replicate]));
    out.clear();
    out.reserve(m * sub);
    for _ in 0..m {
        let k = rng.gen_range(0..m);
        out.extend_from_slice(&block[k * sub..(k + 1) * sub]);
    }
    Ok(())
}

pub fn mbb_replicate(
    block: &[Symbol],
    cfg: &MbbConfig,
    block_key: u64,
    replicate: u64,
) -> Result<Vec<Symbol>> {
    let mut out = Vec::new();
    mbb_replicate_into(block, cfg, block_key, replicate, &mut out)?;
    Ok(out)
}
