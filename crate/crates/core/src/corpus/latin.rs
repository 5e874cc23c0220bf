use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Corpus;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatinToken {
    pub token: String,
    pub part: u32,
    pub stanza: u32,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartDensity {
    pub part: u32,
    pub tokens: usize,
    pub words: usize,
    pub per_thousand_words: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenReport {
    pub min_len: usize,
    pub tokens: Vec<LatinToken>,
    pub densities: Vec<PartDensity>,
}

fn is_latin_letter(c: char) -> bool {
    c.is_alphabetic()
        && matches!(c as u32, 0x41..=0x5A | 0x61..=0x7A | 0xC0..=0x24F | 0x1E00..=0x1EFF)
        && c != '×'
        && c != '÷'
}

/// Maximal runs of Latin letters with at least `min_len` characters, from
/// non-epigraph lines, with per-part densities per 1,000 words.
pub fn extract_latin_tokens(corpus: &Corpus, min_len: usize) -> TokenReport {
    let min_len = min_len.max(1);
    let mut tokens = Vec::new();
    let mut per_part: BTreeMap<u32, (usize, usize)> = BTreeMap::new();

    for (part, stanza, line_no, text, words) in corpus.stanzas().flat_map(|(p, s)| {
        s.lines
            .iter()
            .enumerate()
            .filter(move |_| !s.flags.epigraph)
            .map(move |(i, l)| (p, s.index, i as u32 + 1, l.text.as_str(), l.word_count))
    }) {
        let entry = per_part.entry(part).or_default();
        entry.1 += words;
        let mut run = String::new();
        for c in text.chars().chain(std::iter::once(' ')) {
            if is_latin_letter(c) {
                run.push(c);
                continue;
            }
            if run.chars().count() >= min_len {
                entry.0 += 1;
                tokens.push(LatinToken {
                    token: run.clone(),
                    part,
                    stanza,
                    line: line_no,
                });
            }
            run.clear();
        }
    }

    let densities = per_part
        .into_iter()
        .map(|(part, (n, words))| PartDensity {
            part,
            tokens: n,
            words,
            per_thousand_words: if words == 0 {
                0.0
            } else {
                1000.0 * n as f64 / words as f64
            },
        })
        .collect();

    TokenReport {
        min_len,
        tokens,
        densities,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_corpus, LayoutConfig};
    use crate::encoder::EncodingScheme;

    fn parse(raw: &str) -> Corpus {
        parse_corpus(
            "ru",
            raw,
            &LayoutConfig::minimal(),
            &EncodingScheme::russian(),
        )
        .unwrap()
    }

    #[test]
    fn dandy_line() {
        let corpus = parse("I\n1\nЗдесь\nКак dandy лондонский одет\n");
        let report = extract_latin_tokens(&corpus, 4);
        assert_eq!(
            report.tokens,
            vec![LatinToken {
                token: "dandy".into(),
                part: 1,
                stanza: 1,
                line: 2
            }]
        );
        assert!(extract_latin_tokens(&corpus, 6).tokens.is_empty());
        let d = &report.densities[0];
        assert_eq!((d.tokens, d.words), (1, 5));
        assert!((d.per_thousand_words - 200.0).abs() < 1e-12);
    }

    #[test]
    fn accented_runs_and_epigraph_exclusion() {
        let corpus = parse("I\n@epigraph\nPétri de vanité\n1\nон был vulgar, très\nII\n1\nнет\n");
        let report = extract_latin_tokens(&corpus, 4);
        let words: Vec<&str> = report.tokens.iter().map(|t| t.token.as_str()).collect();
        assert_eq!(words, ["vulgar", "très"]);
        assert_eq!(report.densities.len(), 2);
        assert_eq!(report.densities[1].tokens, 0);
    }
}
