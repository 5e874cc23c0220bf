//! Moving block bootstrap, subblock surrogates and percentile intervals.

mod interval;
mod mbb;
mod seed;
mod surrogate;

pub use interval::{percentile_interval, quantile, Interval};
pub use mbb::{mbb_replicate, mbb_replicate_into, MbbConfig};
pub use seed::{block_key, derive_seed, label_key};
pub use surrogate::make_surrogate;
