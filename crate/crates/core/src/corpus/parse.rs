use super::{Corpus, LayoutConfig, Line, Part, Span, Stanza, StanzaFlags};
use crate::corpus::words::{is_dotted, word_count};
use crate::encoder::EncodingScheme;
use crate::{Error, Result};

struct Builder<'a> {
    layout: &'a LayoutConfig,
    scheme: &'a EncodingScheme,
    parts: Vec<Part>,
    stanza: Option<Stanza>,
    interstitial: Vec<Span>,
}

impl Builder<'_> {
    fn skip(&mut self, offset: usize, text: &str) {
        if text.is_empty() {
            return;
        }
        match self.interstitial.last_mut() {
            Some(last) if last.offset + last.text.len() == offset => last.text.push_str(text),
            _ => self.interstitial.push(Span {
                offset,
                text: text.to_owned(),
            }),
        }
    }

    fn close_stanza(&mut self) {
        if let Some(mut stanza) = self.stanza.take() {
            stanza.flags.dotted_placeholder = stanza.lines.iter().all(|l| l.dotted);
            self.parts
                .last_mut()
                .expect("stanza opened without a part")
                .stanzas
                .push(stanza);
        }
    }

    /// Last stanza number seen in the current part, 0 if none.
    fn last_stanza_index(&self) -> u32 {
        self.stanza
            .as_ref()
            .or_else(|| self.parts.last().and_then(|p| p.stanzas.last()))
            .map_or(0, |s| s.last_index)
    }

    fn has_numbered_stanza(&self) -> bool {
        self.last_stanza_index() > 0
    }

    fn line(&mut self, offset: usize, content: &str) -> Result<()> {
        if let Some(index) = self.layout.part_header(content) {
            if let Some(prev) = self.parts.last() {
                if index <= prev.index {
                    return Err(Error::Parse {
                        offset,
                        message: format!("part {index} follows part {}", prev.index),
                    });
                }
            }
            self.close_stanza();
            self.parts.push(Part {
                index,
                stanzas: Vec::new(),
            });
            self.skip(offset, content);
            return Ok(());
        }

        if let Some(numbers) = self.layout.stanza_header(content) {
            if self.parts.is_empty() {
                return Err(Error::Parse {
                    offset,
                    message: "stanza header before any part header".into(),
                });
            }
            let (first, last) = (numbers[0], *numbers.last().unwrap());
            let prev = self.last_stanza_index();
            if first <= prev {
                return Err(Error::Parse {
                    offset,
                    message: format!("stanza {first} does not follow stanza {prev}"),
                });
            }
            self.close_stanza();
            self.stanza = Some(Stanza {
                index: first,
                last_index: last,
                flags: StanzaFlags {
                    fused: numbers.len() > 1,
                    ..Default::default()
                },
                lines: Vec::new(),
            });
            self.skip(offset, content);
            return Ok(());
        }

        if self.layout.is_epigraph_marker(content) {
            if self.parts.is_empty() {
                return Err(Error::Parse {
                    offset,
                    message: "epigraph before any part header".into(),
                });
            }
            let continuing = self.stanza.as_ref().is_some_and(|s| s.flags.epigraph);
            if !continuing {
                if self.has_numbered_stanza() {
                    return Err(Error::Parse {
                        offset,
                        message: "epigraph after the first stanza of a part".into(),
                    });
                }
                if self.parts.last().is_some_and(|p| !p.stanzas.is_empty()) {
                    return Err(Error::Parse {
                        offset,
                        message: "second epigraph in one part".into(),
                    });
                }
                self.stanza = Some(Stanza {
                    index: 0,
                    last_index: 0,
                    flags: StanzaFlags {
                        epigraph: true,
                        ..Default::default()
                    },
                    lines: Vec::new(),
                });
            }
            self.skip(offset, content);
            return Ok(());
        }

        match self.stanza.as_mut() {
            Some(stanza) if !content.trim().is_empty() => {
                stanza.lines.push(Line {
                    text: content.to_owned(),
                    offset,
                    char_count: self.scheme.count_encodable(content),
                    word_count: word_count(content),
                    dotted: is_dotted(content),
                });
            }
            // Blank lines, titles before the first stanza, front matter.
            _ => self.skip(offset, content),
        }
        Ok(())
    }
}

/// Parses raw UTF-8 poem text into a [`Corpus`].
///
/// Per-line character counts use `scheme` so that they agree with the
/// encoded sequence length.
pub fn parse_corpus(
    source_id: &str,
    raw: &str,
    layout: &LayoutConfig,
    scheme: &EncodingScheme,
) -> Result<Corpus> {
    if raw.trim().is_empty() {
        return Err(Error::EmptyInput);
    }
    layout.validate()?;

    let mut builder = Builder {
        layout,
        scheme,
        parts: Vec::new(),
        stanza: None,
        interstitial: Vec::new(),
    };

    let mut offset = 0;
    for piece in raw.split_inclusive('\n') {
        let content = piece
            .strip_suffix("\r\n")
            .or_else(|| piece.strip_suffix('\n'))
            .unwrap_or(piece);
        builder.line(offset, content)?;
        builder.skip(offset + content.len(), &piece[content.len()..]);
        offset += piece.len();
    }
    builder.close_stanza();

    if builder.parts.is_empty() {
        return Err(Error::Parse {
            offset: 0,
            message: "no part header found".into(),
        });
    }

    Ok(Corpus {
        source_id: source_id.to_owned(),
        parts: builder.parts,
        interstitial: builder.interstitial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(raw: &str) -> Result<Corpus> {
        parse_corpus(
            "t",
            raw,
            &LayoutConfig::minimal(),
            &EncodingScheme::russian(),
        )
    }

    #[test]
    fn two_parts() {
        let raw = "I\n1\nмама\nмыла\n\n2\nраму\nII\n1\nсъезд\n";
        let corpus = parse(raw).unwrap();
        let shape: Vec<(u32, usize)> = corpus
            .parts
            .iter()
            .map(|p| (p.index, p.stanzas.len()))
            .collect();
        assert_eq!(shape, [(1, 2), (2, 1)]);
        assert_eq!(corpus.parts[0].stanzas[0].lines.len(), 2);
        assert_eq!(corpus.parts[1].stanzas[0].lines[0].char_count, 4);
        assert_eq!(corpus.reconstruct(), raw);
    }

    #[test]
    fn dotted_placeholder_and_fused() {
        let raw = "# I\n## I\n. . . . .\n. . . . .\n## II, III\nслово\n";
        let corpus = parse_corpus(
            "t",
            raw,
            &LayoutConfig::default(),
            &EncodingScheme::russian(),
        )
        .unwrap();
        let stanzas = &corpus.parts[0].stanzas;
        assert!(stanzas[0].flags.dotted_placeholder);
        assert!(stanzas[0]
            .lines
            .iter()
            .all(|l| l.word_count == 0 && l.dotted));
        assert!(stanzas[1].flags.fused);
        assert_eq!((stanzas[1].index, stanzas[1].last_index), (2, 3));
        assert!(!stanzas[1].flags.dotted_placeholder);
    }

    #[test]
    fn epigraph_stanza() {
        let raw = "I\n@epigraph\nPétri de vanité\n\n1\nМой дядя\n";
        let corpus = parse(raw).unwrap();
        let stanzas = &corpus.parts[0].stanzas;
        assert_eq!(stanzas.len(), 2);
        assert!(stanzas[0].flags.epigraph);
        assert_eq!(stanzas[0].index, 0);
        assert_eq!(stanzas[0].lines[0].text, "Pétri de vanité");
        assert_eq!(corpus.reconstruct(), raw);
    }

    #[test]
    fn errors_carry_offsets() {
        assert!(matches!(parse(""), Err(Error::EmptyInput)));
        assert!(matches!(parse(" \n\n"), Err(Error::EmptyInput)));
        match parse("заглавие\n1\nтекст\n") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 17),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse("I\n2\nа\n1\nб\n"),
            Err(Error::Parse { offset: 7, .. })
        ));
        assert!(matches!(parse("II\n1\nа\nI\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse("I\n1\nа\n@epigraph\nб\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse("текст\n"),
            Err(Error::Parse { offset: 0, .. })
        ));
    }

    #[test]
    fn crlf_and_no_trailing_newline() {
        let raw = "I\r\n1\r\nмама\r\n\r\nпапа";
        let corpus = parse(raw).unwrap();
        let lines: Vec<&str> = corpus.lines().map(|(_, _, l)| l.text.as_str()).collect();
        assert_eq!(lines, ["мама", "папа"]);
        assert_eq!(corpus.reconstruct(), raw);
    }

    #[test]
    fn lookup_helpers() {
        let corpus = parse("I\n1\nа\nб\n3\nв\nII\n1\nг\n").unwrap();
        assert_eq!(corpus.find_line(1, 1, 2).unwrap().text, "б");
        assert_eq!(corpus.find_line(1, 3, 1).unwrap().text, "в");
        assert!(corpus.find_line(1, 2, 1).is_none());
        assert!(corpus.find_line(1, 1, 0).is_none());
        let first = corpus.truncate_stanzas(2);
        assert_eq!(first.stanza_count(), 2);
        assert_eq!(first.parts.len(), 1);
    }

    fn line_strategy() -> impl Strategy<Value = String> {
        prop_oneof![
            "[а-яё ,.!—]{0,30}",
            Just(String::new()),
            Just(". . . .".to_owned()),
            Just("  ".to_owned()),
        ]
    }

    proptest! {
        #[test]
        fn parser_is_lossless(
            parts in prop::collection::vec(
                prop::collection::vec(prop::collection::vec(line_strategy(), 0..6), 0..4),
                1..4,
            ),
            crlf: bool,
        ) {
            let nl = if crlf { "\r\n" } else { "\n" };
            let mut raw = String::from("Евгений Онегин");
            raw.push_str(nl);
            for (p, stanzas) in parts.iter().enumerate() {
                raw.push_str(&format!("{}{nl}", ["I", "II", "III"][p]));
                for (s, lines) in stanzas.iter().enumerate() {
                    raw.push_str(&format!("{}{nl}", s + 1));
                    for line in lines {
                        raw.push_str(line);
                        raw.push_str(nl);
                    }
                }
            }
            let corpus = parse(&raw).unwrap();
            prop_assert_eq!(corpus.reconstruct(), raw.clone());
            prop_assert_eq!(corpus.parts.len(), parts.len());
            for part in &corpus.parts {
                prop_assert!(part.stanzas.windows(2).all(|w| w[0].last_index < w[1].index));
            }
            // Lines and interstitial spans never overlap.
            let mut spans: Vec<(usize, usize)> = corpus.interstitial.iter()
                .map(|s| (s.offset, s.offset + s.text.len()))
                .chain(corpus.lines().map(|(_, _, l)| (l.offset, l.offset + l.text.len())))
                .collect();
            spans.sort();
            prop_assert!(spans.windows(2).all(|w| w[0].1 <= w[1].0));
            prop_assert_eq!(spans.iter().map(|s| s.1 - s.0).sum::<usize>(), raw.len());
        }
    }
}
