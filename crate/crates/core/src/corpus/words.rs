use std::ops::Range;

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '’' | 'ʼ')
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || ('\u{300}'..='\u{36f}').contains(&c)
}

/// Byte ranges of the words in `text`.
///
/// A word is a maximal run of letters, digits and combining marks. Every
/// other character separates words, except an apostrophe with word
/// characters on both sides (`l'amore`, `Tat'jana`).
pub fn word_spans(text: &str) -> Vec<Range<usize>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let joins = |i: usize| {
        let (_, c) = chars[i];
        is_word_char(c)
            || (is_apostrophe(c)
                && i > 0
                && i + 1 < chars.len()
                && is_word_char(chars[i - 1].1)
                && is_word_char(chars[i + 1].1))
    };
    let mut spans = Vec::new();
    let mut start = None;
    for i in 0..chars.len() {
        match (joins(i), start) {
            (true, None) => start = Some(chars[i].0),
            (false, Some(s)) => {
                spans.push(s..chars[i].0);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        spans.push(s..text.len());
    }
    spans
}

pub fn word_count(text: &str) -> usize {
    word_spans(text).len()
}

/// A line made only of dots (and whitespace), used for omitted verses.
pub fn is_dotted(text: &str) -> bool {
    let t = text.trim();
    !t.is_empty()
        && t.chars()
            .all(|c| matches!(c, '.' | '…' | '·') || c.is_whitespace())
}
