use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::encoder::{BlockSegmentation, Origin, SymbolSequence};
use crate::{Error, Result, Symbol};

/// V/C pattern of three consecutive symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum TrigramClass {
    Ccc,
    Ccv,
    Cvc,
    Cvv,
    Vcc,
    Vcv,
    Vvc,
    Vvv,
}

/// Persistent patterns continue a run (VVV, CCC); alternating ones close it
/// (VVC, CCV).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternKind {
    Persistent,
    Alternating,
    Other,
}

impl TrigramClass {
    pub const ALL: [TrigramClass; 8] = [
        TrigramClass::Ccc,
        TrigramClass::Ccv,
        TrigramClass::Cvc,
        TrigramClass::Cvv,
        TrigramClass::Vcc,
        TrigramClass::Vcv,
        TrigramClass::Vvc,
        TrigramClass::Vvv,
    ];

    /// The four classes screened for probes.
    pub const PROBE: [TrigramClass; 4] = [
        TrigramClass::Vvv,
        TrigramClass::Ccc,
        TrigramClass::Vvc,
        TrigramClass::Ccv,
    ];

    /// Index with V = 1 and the first symbol as the high bit.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_symbols(s: [Symbol; 3]) -> Self {
        Self::ALL[(s[0].bit() << 2) | (s[1].bit() << 1) | s[2].bit()]
    }

    pub fn kind(self) -> PatternKind {
        match self {
            TrigramClass::Vvv | TrigramClass::Ccc => PatternKind::Persistent,
            TrigramClass::Vvc | TrigramClass::Ccv => PatternKind::Alternating,
            _ => PatternKind::Other,
        }
    }

    pub fn as_str(self) -> &'static str {
        ["CCC", "CCV", "CVC", "CVV", "VCC", "VCV", "VVC", "VVV"][self.index()]
    }
}

impl fmt::Display for TrigramClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TrigramClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_uppercase();
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == upper)
            .ok_or_else(|| Error::Config(format!("unknown trigram class `{s}`")))
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatternKind::Persistent => "persistent",
            PatternKind::Alternating => "alternating",
            PatternKind::Other => "other",
        })
    }
}

/// One trigram window of a scanned class, located in the source text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeMatch {
    /// The three source letters, lowercased.
    pub letters: String,
    pub vc_class: TrigramClass,
    /// Whitespace-bounded source text around the letters, with characters
    /// the encoder drops (signs, apostrophes) kept and edge punctuation
    /// trimmed. Line breaks inside a context become single spaces.
    pub context: String,
    pub part: u32,
    pub stanza: u32,
    /// Line of the first letter.
    pub line: u32,
    pub single_word: bool,
    /// 1-based block of the first letter, if it lies in a block.
    pub block: Option<usize>,
    /// Sequence position of the first letter.
    pub position: usize,
}

fn trim_edges(s: &str) -> &str {
    s.trim_matches(|c: char| {
        !(c.is_alphanumeric()
            || matches!(c, '\'' | '’' | 'ʼ')
            || ('\u{300}'..='\u{36f}').contains(&c))
    })
}

/// Byte range of the whitespace-delimited token around `[start, end)`.
fn token_bounds(text: &str, start: usize, end: usize) -> (usize, usize) {
    let lo = text[..start]
        .char_indices()
        .rev()
        .find(|(_, c)| c.is_whitespace())
        .map_or(0, |(i, c)| i + c.len_utf8());
    let hi = text[end..]
        .char_indices()
        .find(|(_, c)| c.is_whitespace())
        .map_or(text.len(), |(i, _)| end + i);
    (lo, hi)
}

struct LineView<'a> {
    text: &'a str,
    offset: usize,
}

fn line_of<'a>(corpus: &'a Corpus, o: &Origin) -> Result<LineView<'a>> {
    let line = corpus.find_line(o.part, o.stanza, o.line).ok_or_else(|| {
        Error::Config(format!(
            "origin part {} stanza {} line {} is not in corpus `{}`",
            o.part, o.stanza, o.line, corpus.source_id
        ))
    })?;
    Ok(LineView {
        text: &line.text,
        offset: line.offset,
    })
}

fn char_len_at(text: &str, local: usize) -> usize {
    text[local..].chars().next().map_or(0, char::len_utf8)
}

fn context_of(corpus: &Corpus, origins: &[Origin; 3]) -> Result<(String, bool, String)> {
    let mut letters = String::new();
    for o in origins {
        let view = line_of(corpus, o)?;
        let local = o.byte_offset - view.offset;
        letters.extend(
            view.text[local..]
                .chars()
                .next()
                .into_iter()
                .flat_map(char::to_lowercase),
        );
    }

    let (first, last) = (&origins[0], &origins[2]);
    let same_line = (first.part, first.stanza, first.line) == (last.part, last.stanza, last.line);
    if same_line {
        let view = line_of(corpus, first)?;
        let start = first.byte_offset - view.offset;
        let end = last.byte_offset - view.offset;
        let end = end + char_len_at(view.text, end);
        let single = !view.text[start..end].chars().any(char::is_whitespace);
        let (lo, hi) = token_bounds(view.text, start, end);
        return Ok((letters, single, trim_edges(&view.text[lo..hi]).to_owned()));
    }

    // The window crosses one or more line ends: collect the tail token of
    // the first line, any intermediate lines, and the head token of the last.
    let mut pieces: Vec<String> = Vec::new();
    let mut prev: Option<(u32, u32, u32)> = None;
    for o in origins {
        let key = (o.part, o.stanza, o.line);
        if prev == Some(key) {
            continue;
        }
        prev = Some(key);
        let view = line_of(corpus, o)?;
        let local = o.byte_offset - view.offset;
        let piece = if key == (first.part, first.stanza, first.line) {
            let (lo, _) = token_bounds(view.text, local, local);
            &view.text[lo..]
        } else if key == (last.part, last.stanza, last.line) {
            let end = local + char_len_at(view.text, local);
            let (_, hi) = token_bounds(view.text, end, end);
            &view.text[..hi]
        } else {
            view.text
        };
        pieces.push(trim_edges(piece.trim()).to_owned());
    }
    Ok((letters, false, pieces.join(" ")))
}

/// Every overlapping trigram window whose class is in `classes`, in
/// sequence order.
///
/// Matching runs on the encoded symbols, so spaces and excluded characters
/// never break a window; the origin map recovers letters and contexts from
/// `corpus`, which must be the corpus `seq` was encoded from.
pub fn scan_pattern_class(
    seq: &SymbolSequence,
    corpus: &Corpus,
    classes: &[TrigramClass],
    segmentation: Option<&BlockSegmentation>,
) -> Result<Vec<ProbeMatch>> {
    let origins = seq.origins.as_ref().ok_or_else(|| {
        Error::Config(format!(
            "sequence `{}` has no origin map; scan the encoded text, not a V/C file",
            seq.source_id
        ))
    })?;
    let mut wanted = [false; 8];
    for c in classes {
        wanted[c.index()] = true;
    }
    let mut matches = Vec::new();
    for (i, w) in seq.symbols.windows(3).enumerate() {
        let class = TrigramClass::from_symbols([w[0], w[1], w[2]]);
        if !wanted[class.index()] {
            continue;
        }
        let o = [origins[i], origins[i + 1], origins[i + 2]];
        let (letters, single_word, context) = context_of(corpus, &o)?;
        matches.push(ProbeMatch {
            letters,
            vc_class: class,
            context,
            part: o[0].part,
            stanza: o[0].stanza,
            line: o[0].line,
            single_word,
            block: segmentation.and_then(|s| s.block_of(i)).map(|b| b + 1),
            position: i,
        });
    }
    Ok(matches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_corpus, LayoutConfig};
    use crate::encoder::{encode_text, EncodeOptions, EncodingScheme};

    fn scan(text: &str, classes: &[TrigramClass]) -> Vec<ProbeMatch> {
        let scheme = EncodingScheme::russian();
        let corpus = parse_corpus("t", text, &LayoutConfig::minimal(), &scheme).unwrap();
        let enc = encode_text(&corpus, &scheme, EncodeOptions::default()).unwrap();
        scan_pattern_class(&enc.sequence, &corpus, classes, None).unwrap()
    }

    #[test]
    fn single_word_context() {
        let m = scan("I\n1\nон встал.\n", &[TrigramClass::Ccc]);
        // н-в-с crosses the space, в-с-т does not.
        assert_eq!(m.len(), 2);
        assert_eq!((m[0].letters.as_str(), m[0].single_word), ("нвс", false));
        assert_eq!(m[0].context, "он встал");
        let m = &m[1..];
        assert_eq!(m[0].letters, "вст");
        assert_eq!(m[0].context, "встал");
        assert!(m[0].single_word);
        assert_eq!((m[0].part, m[0].stanza, m[0].line), (1, 1, 1));
    }

    #[test]
    fn multi_word_and_signs() {
        let m = scan("I\n1\nслов стал\n", &[TrigramClass::Ccc]);
        // с-л at the start and в-с-т across the space.
        let cross: Vec<_> = m.iter().filter(|x| !x.single_word).collect();
        assert_eq!(cross.len(), 1);
        assert_eq!(cross[0].letters, "вст");
        assert_eq!(cross[0].context, "слов стал");

        let m = scan("I\n1\nсельский,\n", &[TrigramClass::Ccc]);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].letters, "лск");
        assert_eq!(m[0].context, "сельский");
        assert!(m[0].single_word);
    }

    #[test]
    fn cross_line_context() {
        let m = scan("I\n1\nмост\nстол\n", &[TrigramClass::Ccc]);
        let cross: Vec<_> = m.iter().filter(|x| x.letters == "тст").collect();
        assert_eq!(cross.len(), 1);
        assert_eq!(cross[0].context, "мост стол");
        assert!(!cross[0].single_word);
    }

    #[test]
    fn class_round_trip() {
        for c in TrigramClass::ALL {
            assert_eq!(c.as_str().parse::<TrigramClass>().unwrap(), c);
            let s: Vec<Symbol> = c
                .as_str()
                .chars()
                .map(|ch| Symbol::from_char(ch).unwrap())
                .collect();
            assert_eq!(TrigramClass::from_symbols([s[0], s[1], s[2]]), c);
        }
        assert_eq!(TrigramClass::Vvc.kind(), PatternKind::Alternating);
        assert_eq!(TrigramClass::Ccc.kind(), PatternKind::Persistent);
        assert_eq!(TrigramClass::Cvc.kind(), PatternKind::Other);
        assert!("VXC".parse::<TrigramClass>().is_err());
    }
}
