//! Structured poem text: parts, stanzas and lines.
//!
//! Parsing is lossless. Every byte of the input belongs either to a
//! [`Line`] or to an interstitial [`Span`] (headers, blank lines, line
//! terminators), so [`Corpus::reconstruct`] gives back the original file.

mod align;
mod latin;
mod layout;
mod line_stats;
mod parse;
mod words;

use serde::{Deserialize, Serialize};

pub use align::{align_corpora, AlignedCorpus, Side, StanzaPair, StanzaRef, Unmatched};
pub use latin::{extract_latin_tokens, LatinToken, PartDensity, TokenReport};
pub use layout::{LayoutConfig, NumeralStyle};
pub use line_stats::{line_statistics, LineStats, LineStatsOptions};
pub use parse::parse_corpus;
pub use words::{is_dotted, word_count, word_spans};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub source_id: String,
    pub parts: Vec<Part>,
    /// Everything that is not line text, in input order.
    pub interstitial: Vec<Span>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub index: u32,
    pub stanzas: Vec<Stanza>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stanza {
    /// Header number; 0 for an epigraph.
    pub index: u32,
    /// Last number covered, different from `index` only for fused stanzas.
    pub last_index: u32,
    pub flags: StanzaFlags,
    pub lines: Vec<Line>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StanzaFlags {
    pub epigraph: bool,
    pub dotted_placeholder: bool,
    pub fused: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    pub text: String,
    /// Byte offset of the first character in the source.
    pub offset: usize,
    /// Characters that the encoding scheme turns into symbols.
    pub char_count: usize,
    pub word_count: usize,
    /// Line consists only of dots (an omission marker).
    pub dotted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub offset: usize,
    pub text: String,
}

impl Stanza {
    pub fn covers(&self, index: u32) -> bool {
        self.index <= index && index <= self.last_index
    }
}

impl Corpus {
    /// Concatenates lines and interstitial spans in offset order.
    pub fn reconstruct(&self) -> String {
        let mut pieces: Vec<(usize, &str)> = self
            .interstitial
            .iter()
            .map(|s| (s.offset, s.text.as_str()))
            .chain(self.lines().map(|(_, _, l)| (l.offset, l.text.as_str())))
            .collect();
        pieces.sort_by_key(|&(offset, _)| offset);
        pieces.into_iter().map(|(_, text)| text).collect()
    }

    /// All stanzas in document order, paired with their part index.
    pub fn stanzas(&self) -> impl Iterator<Item = (u32, &Stanza)> {
        self.parts
            .iter()
            .flat_map(|p| p.stanzas.iter().map(move |s| (p.index, s)))
    }

    /// All lines in document order with their part and stanza.
    pub fn lines(&self) -> impl Iterator<Item = (u32, &Stanza, &Line)> {
        self.stanzas()
            .flat_map(|(p, s)| s.lines.iter().map(move |l| (p, s, l)))
    }

    pub fn find_stanza(&self, part: u32, stanza: u32) -> Option<&Stanza> {
        let p = self
            .parts
            .binary_search_by_key(&part, |p| p.index)
            .ok()
            .map(|i| &self.parts[i])?;
        p.stanzas
            .binary_search_by_key(&stanza, |s| s.index)
            .ok()
            .map(|i| &p.stanzas[i])
    }

    /// Line by 1-based number within its stanza.
    pub fn find_line(&self, part: u32, stanza: u32, line: u32) -> Option<&Line> {
        let s = self.find_stanza(part, stanza)?;
        s.lines.get((line as usize).checked_sub(1)?)
    }

    /// Keeps the first `n` non-epigraph stanzas in document order (and any
    /// epigraphs preceding them). The result is no longer lossless.
    pub fn truncate_stanzas(&self, n: usize) -> Corpus {
        let mut remaining = n;
        let mut parts = Vec::new();
        for part in &self.parts {
            if remaining == 0 {
                break;
            }
            let mut stanzas = Vec::new();
            for stanza in &part.stanzas {
                if stanza.flags.epigraph {
                    stanzas.push(stanza.clone());
                    continue;
                }
                if remaining == 0 {
                    break;
                }
                stanzas.push(stanza.clone());
                remaining -= 1;
            }
            parts.push(Part {
                index: part.index,
                stanzas,
            });
        }
        Corpus {
            source_id: self.source_id.clone(),
            parts,
            interstitial: Vec::new(),
        }
    }

    pub fn stanza_count(&self) -> usize {
        self.stanzas().filter(|(_, s)| !s.flags.epigraph).count()
    }
}
