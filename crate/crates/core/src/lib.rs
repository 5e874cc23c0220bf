//! Vowel/consonant Markov analysis of literary texts.
//!
//! The pipeline runs from raw poem text to blockwise dispersion statistics:
//!
//! - [`corpus`] parses text into parts, stanzas and lines and aligns parallel corpora.
//! - [`encoder`] maps letters to a binary [`Symbol`] sequence with an origin map.
//! - [`markov`] fits two- and four-state chains and computes dispersion coefficients.
//! - [`resample`] provides moving block bootstrap replicates and surrogates.
//! - [`stats`] holds ACF/Ljung-Box, Spearman and the interaction regression.
//! - [`profile`] ties the above into per-block series and bootstrap runs.
//! - [`probes`] scans trigram classes and tracks letter trigrams across blocks.

pub mod corpus;
pub mod encoder;
mod error;
pub mod markov;
pub mod probes;
pub mod profile;
pub mod resample;
pub mod stats;

pub use encoder::Symbol;
pub use error::{Error, Result};
