use std::fmt;

use serde::{Deserialize, Serialize};

use super::{CharClass, EncodingScheme};
use crate::corpus::Corpus;
use crate::{Error, Result};

/// One position of the binary sequence. `V` is coded 1, `C` is coded 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum Symbol {
    C = 0,
    V = 1,
}

impl Symbol {
    #[inline]
    pub fn bit(self) -> usize {
        self as usize
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::V => 'V',
            Symbol::C => 'C',
        }
    }

    pub fn from_char(ch: char) -> Option<Self> {
        match ch {
            'V' | 'v' => Some(Symbol::V),
            'C' | 'c' => Some(Symbol::C),
            _ => None,
        }
    }

    #[inline]
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Symbol::V
        } else {
            Symbol::C
        }
    }
}

/// Where a symbol came from: stanza coordinates plus the absolute byte
/// offset of its character in the source file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Origin {
    pub part: u32,
    pub stanza: u32,
    /// 1-based line number within the stanza.
    pub line: u32,
    /// 0-based character index within the line.
    pub col: u32,
    pub byte_offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSequence {
    pub source_id: String,
    pub symbols: Vec<Symbol>,
    /// One entry per symbol for encoded text; `None` for synthetic sequences.
    pub origins: Option<Vec<Origin>>,
}

impl SymbolSequence {
    pub fn synthetic(source_id: impl Into<String>, symbols: Vec<Symbol>) -> Self {
        SymbolSequence {
            source_id: source_id.into(),
            symbols,
            origins: None,
        }
    }

    /// Parses a string of `V`/`C` letters; any other character is rejected
    /// except whitespace, which is skipped.
    pub fn from_vc_str(source_id: impl Into<String>, text: &str) -> Result<Self> {
        let mut symbols = Vec::with_capacity(text.len());
        for (offset, ch) in text.char_indices() {
            if ch.is_whitespace() {
                continue;
            }
            let sym = Symbol::from_char(ch).ok_or_else(|| Error::Parse {
                offset,
                message: format!("expected V or C, found {ch:?}"),
            })?;
            symbols.push(sym);
        }
        Ok(Self::synthetic(source_id, symbols))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn vowel_count(&self) -> usize {
        self.symbols.iter().filter(|&&s| s == Symbol::V).count()
    }

    pub fn to_vc_string(&self) -> String {
        self.symbols.iter().map(|s| s.as_char()).collect()
    }
}

impl fmt::Display for SymbolSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnknownPolicy {
    #[default]
    Error,
    SkipAndLog,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EncodeOptions {
    pub policy: UnknownPolicy,
    pub include_epigraphs: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnknownChar {
    pub ch: char,
    pub origin: Origin,
}

#[derive(Debug, Clone)]
pub struct Encoding {
    pub sequence: SymbolSequence,
    /// Characters skipped under [`UnknownPolicy::SkipAndLog`].
    pub unknown: Vec<UnknownChar>,
}

/// Encodes every retained line of `corpus` in document order.
pub fn encode_text(
    corpus: &Corpus,
    scheme: &EncodingScheme,
    opts: EncodeOptions,
) -> Result<Encoding> {
    let mut symbols = Vec::new();
    let mut origins = Vec::new();
    let mut unknown = Vec::new();

    for part in &corpus.parts {
        for stanza in &part.stanzas {
            if stanza.flags.epigraph && !opts.include_epigraphs {
                continue;
            }
            for (line_idx, line) in stanza.lines.iter().enumerate() {
                for (col, (local, ch)) in line.text.char_indices().enumerate() {
                    let origin = Origin {
                        part: part.index,
                        stanza: stanza.index,
                        line: line_idx as u32 + 1,
                        col: col as u32,
                        byte_offset: line.offset + local,
                    };
                    match scheme.classify_char(ch) {
                        CharClass::Vowel => {
                            symbols.push(Symbol::V);
                            origins.push(origin);
                        }
                        CharClass::Consonant => {
                            symbols.push(Symbol::C);
                            origins.push(origin);
                        }
                        CharClass::Excluded => {}
                        CharClass::Unknown => match opts.policy {
                            UnknownPolicy::Error => {
                                return Err(Error::UnknownChar {
                                    ch,
                                    code: ch as u32,
                                    part: origin.part,
                                    stanza: origin.stanza,
                                    line: origin.line,
                                    col: origin.col,
                                })
                            }
                            UnknownPolicy::SkipAndLog => {
                                log::warn!(
                                    "{}: skipping unknown character {ch:?} at part {}, stanza {}, line {}",
                                    corpus.source_id,
                                    origin.part,
                                    origin.stanza,
                                    origin.line
                                );
                                unknown.push(UnknownChar { ch, origin });
                            }
                        },
                    }
                }
            }
        }
    }

    Ok(Encoding {
        sequence: SymbolSequence {
            source_id: corpus.source_id.clone(),
            symbols,
            origins: Some(origins),
        },
        unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_corpus, LayoutConfig};

    fn one_line(text: &str) -> Corpus {
        let raw = format!("I\n1\n{text}\n");
        parse_corpus(
            "t",
            &raw,
            &LayoutConfig::minimal(),
            &EncodingScheme::russian(),
        )
        .unwrap()
    }

    fn encode(text: &str) -> String {
        let corpus = one_line(text);
        encode_text(
            &corpus,
            &EncodingScheme::russian(),
            EncodeOptions::default(),
        )
        .unwrap()
        .sequence
        .to_vc_string()
    }

    #[test]
    fn hand_classified_words() {
        assert_eq!(encode("мама"), "CVCV");
        // ъ is dropped, leaving с-е-з-д.
        assert_eq!(encode("съезд"), "CVCC");
        assert_eq!(encode("Мама, съезд!"), "CVCVCVCC");
    }

    #[test]
    fn origins_point_back_to_source() {
        let raw = "I\n1\nмама мыла\nраму\n";
        let corpus = parse_corpus(
            "t",
            raw,
            &LayoutConfig::minimal(),
            &EncodingScheme::russian(),
        )
        .unwrap();
        let enc = encode_text(&corpus, &EncodingScheme::russian(), Default::default()).unwrap();
        let origins = enc.sequence.origins.as_ref().unwrap();
        assert_eq!(origins.len(), enc.sequence.len());
        let scheme = EncodingScheme::russian();
        for (sym, origin) in enc.sequence.symbols.iter().zip(origins) {
            let ch = raw[origin.byte_offset..].chars().next().unwrap();
            let expected = match scheme.classify_char(ch) {
                CharClass::Vowel => Symbol::V,
                CharClass::Consonant => Symbol::C,
                other => panic!("origin points at {other:?}"),
            };
            assert_eq!(*sym, expected);
        }
        assert!(origins
            .windows(2)
            .all(|w| w[0].byte_offset < w[1].byte_offset));
        let last = origins.last().unwrap();
        assert_eq!((last.line, last.col), (2, 3));
    }

    #[test]
    fn unknown_policy() {
        let corpus = one_line("мѣсто");
        let err = encode_text(&corpus, &EncodingScheme::russian(), Default::default()).unwrap_err();
        assert!(matches!(
            err,
            Error::UnknownChar {
                ch: 'ѣ',
                line: 1,
                col: 1,
                ..
            }
        ));

        let opts = EncodeOptions {
            policy: UnknownPolicy::SkipAndLog,
            ..Default::default()
        };
        let enc = encode_text(&corpus, &EncodingScheme::russian(), opts).unwrap();
        assert_eq!(enc.sequence.to_vc_string(), "CCCV");
        assert_eq!(enc.unknown.len(), 1);
    }

    #[test]
    fn vc_string_round_trip() {
        let seq = SymbolSequence::from_vc_str("x", "VCV VC\n").unwrap();
        assert_eq!(seq.to_vc_string(), "VCVVC");
        assert!(SymbolSequence::from_vc_str("x", "VCX").is_err());
    }
}
