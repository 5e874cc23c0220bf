use serde::{Deserialize, Serialize};

use super::Corpus;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineStats {
    pub n_lines: usize,
    pub mean_chars: f64,
    pub sd_chars: f64,
    pub mean_words: f64,
    pub sd_words: f64,
}

/// Which lines count. Epigraphs and dotted placeholder lines are excluded
/// by default.
#[derive(Debug, Clone, Copy, Default)]
pub struct LineStatsOptions {
    pub include_epigraphs: bool,
    pub include_placeholders: bool,
}

/// Mean and sample standard deviation (n - 1 denominator, 0 for a single
/// observation) of encodable characters and words per line.
pub fn line_statistics(corpus: &Corpus, opts: LineStatsOptions) -> Result<LineStats> {
    let (chars, words): (Vec<f64>, Vec<f64>) = corpus
        .lines()
        .filter(|(_, s, l)| {
            (opts.include_epigraphs || !s.flags.epigraph)
                && (opts.include_placeholders || !l.dotted)
        })
        .map(|(_, _, l)| (l.char_count as f64, l.word_count as f64))
        .unzip();
    if chars.is_empty() {
        return Err(Error::InsufficientData(
            "no lines retained for line statistics".into(),
        ));
    }
    let (mean_chars, sd_chars) = mean_sd(&chars);
    let (mean_words, sd_words) = mean_sd(&words);
    Ok(LineStats {
        n_lines: chars.len(),
        mean_chars,
        sd_chars,
        mean_words,
        sd_words,
    })
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}
