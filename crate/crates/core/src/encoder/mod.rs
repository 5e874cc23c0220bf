//! Binary vowel/consonant encoding.

mod scheme;
mod segment;
mod sequence;

pub use scheme::{CharClass, EncodingScheme};
pub use segment::{segment_blocks, BlockSegmentation};
pub use sequence::{
    encode_text, EncodeOptions, Encoding, Origin, Symbol, SymbolSequence, UnknownChar,
    UnknownPolicy,
};
