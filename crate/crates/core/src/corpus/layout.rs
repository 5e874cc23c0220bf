use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumeralStyle {
    Roman,
    Arabic,
}

/// How headers and epigraphs are marked in a plain-text source.
///
/// A header line is a line whose trimmed text starts with the prefix
/// (compared without surrounding whitespace) followed by a numeral. Stanza
/// headers may list several numerals (`XXXVIII, XXXIX` or `38-39`), which
/// marks a fused stanza. A line equal to `epigraph_marker` opens an
/// epigraph that runs until the next header.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct LayoutConfig {
    pub part_prefix: String,
    pub part_numerals: NumeralStyle,
    pub stanza_prefix: String,
    pub stanza_numerals: NumeralStyle,
    pub epigraph_marker: String,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig {
            part_prefix: "#".into(),
            part_numerals: NumeralStyle::Roman,
            stanza_prefix: "##".into(),
            stanza_numerals: NumeralStyle::Roman,
            epigraph_marker: "@epigraph".into(),
        }
    }
}

impl LayoutConfig {
    /// Bare Roman part numbers and bare Arabic stanza numbers.
    pub fn minimal() -> Self {
        LayoutConfig {
            part_prefix: String::new(),
            part_numerals: NumeralStyle::Roman,
            stanza_prefix: String::new(),
            stanza_numerals: NumeralStyle::Arabic,
            epigraph_marker: "@epigraph".into(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let layout: LayoutConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("layout: {e}")))?;
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<()> {
        if self.part_prefix.trim() == self.stanza_prefix.trim()
            && self.part_numerals == self.stanza_numerals
        {
            return Err(Error::Config(
                "part and stanza headers are indistinguishable".into(),
            ));
        }
        if self.epigraph_marker.trim().is_empty() {
            return Err(Error::Config("epigraph marker must not be blank".into()));
        }
        Ok(())
    }

    pub(crate) fn part_header(&self, line: &str) -> Option<u32> {
        match header_numerals(line, &self.part_prefix, self.part_numerals)?.as_slice() {
            [n] => Some(*n),
            _ => None,
        }
    }

    pub(crate) fn stanza_header(&self, line: &str) -> Option<Vec<u32>> {
        header_numerals(line, &self.stanza_prefix, self.stanza_numerals)
    }

    pub(crate) fn is_epigraph_marker(&self, line: &str) -> bool {
        line.trim() == self.epigraph_marker.trim()
    }
}

fn header_numerals(line: &str, prefix: &str, style: NumeralStyle) -> Option<Vec<u32>> {
    let rest = line.trim().strip_prefix(prefix.trim())?;
    let numerals: Vec<&str> = rest
        .split(|c: char| c.is_whitespace() || matches!(c, ',' | '.' | '-' | '–' | '—'))
        .filter(|s| !s.is_empty())
        .collect();
    if numerals.is_empty() {
        return None;
    }
    let values = numerals
        .iter()
        .map(|s| parse_numeral(s, style))
        .collect::<Option<Vec<u32>>>()?;
    values.windows(2).all(|w| w[0] < w[1]).then_some(values)
}

pub(crate) fn parse_numeral(text: &str, style: NumeralStyle) -> Option<u32> {
    match style {
        NumeralStyle::Arabic => {
            if text.bytes().all(|b| b.is_ascii_digit()) {
                text.parse().ok()
            } else {
                None
            }
        }
        NumeralStyle::Roman => parse_roman(text),
    }
}

/// Canonical upper-case Roman numerals only (`IV`, not `IIII` or `iv`).
fn parse_roman(text: &str) -> Option<u32> {
    let digit = |c: u8| match c {
        b'I' => Some(1),
        b'V' => Some(5),
        b'X' => Some(10),
        b'L' => Some(50),
        b'C' => Some(100),
        b'D' => Some(500),
        b'M' => Some(1000),
        _ => None,
    };
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return None;
    }
    let values = bytes
        .iter()
        .map(|&b| digit(b))
        .collect::<Option<Vec<u32>>>()?;
    let mut total = 0;
    for (i, &v) in values.iter().enumerate() {
        match values.get(i + 1) {
            Some(&next) if next > v => total -= v as i64,
            _ => total += v as i64,
        }
    }
    let total = u32::try_from(total).ok().filter(|&t| t > 0)?;
    (to_roman(total) == text).then_some(total)
}

fn to_roman(mut n: u32) -> String {
    const TABLE: [(u32, &str); 13] = [
        (1000, "M"),
        (900, "CM"),
        (500, "D"),
        (400, "CD"),
        (100, "C"),
        (90, "XC"),
        (50, "L"),
        (40, "XL"),
        (10, "X"),
        (9, "IX"),
        (5, "V"),
        (4, "IV"),
        (1, "I"),
    ];
    let mut out = String::new();
    for (value, glyph) in TABLE {
        while n >= value {
            out.push_str(glyph);
            n -= value;
        }
    }
    out
}
