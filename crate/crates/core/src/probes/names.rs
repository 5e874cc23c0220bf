use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::{CategorizedMatches, Label};
use crate::corpus::{word_spans, Corpus};
use crate::stats::{spearman_test, SpearmanResult};
use crate::{Error, Result};

#[derive(Debug, Deserialize)]
struct NameRecord {
    character: String,
    form: String,
}

/// Inflected surface forms per character name. Forms are single words and
/// match whole tokens case-insensitively.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NameForms {
    forms: HashMap<String, String>,
}

impl NameForms {
    /// Reads a CSV with header `character,form`.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut names = NameForms::default();
        for rec in rdr.deserialize() {
            let rec: NameRecord = rec?;
            names.insert(&rec.character, &rec.form)?;
        }
        Ok(names)
    }

    pub fn insert(&mut self, character: &str, form: &str) -> Result<()> {
        let form = form.trim().to_lowercase();
        if form.is_empty() || form.chars().any(char::is_whitespace) {
            return Err(Error::Table(format!(
                "name form `{form}` must be a single word"
            )));
        }
        match self.forms.get(&form) {
            Some(prev) if prev != character => Err(Error::Table(format!(
                "form `{form}` belongs to both `{prev}` and `{character}`"
            ))),
            _ => {
                self.forms.insert(form, character.trim().to_owned());
                Ok(())
            }
        }
    }

    pub fn character_of(&self, token: &str) -> Option<&str> {
        self.forms.get(&token.to_lowercase()).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }
}

/// Per-stanza tallies for stanzas that mention a name or hold a probe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StanzaCounts {
    pub part: u32,
    pub stanza: u32,
    pub name_mentions: usize,
    pub probe_matches: usize,
    pub thematic_matches: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CooccurrenceReport {
    pub total_mentions: usize,
    pub mentions_by_character: BTreeMap<String, usize>,
    pub thematic_categories: Vec<String>,
    /// Name mentions in stanzas that contain at least one probe match, over
    /// all name mentions.
    pub mentions_in_probe_stanzas: f64,
    pub probe_stanzas: usize,
    /// Probe stanzas containing at least one thematically categorized
    /// match, over all probe stanzas.
    pub probe_stanzas_with_thematic: f64,
    /// Spearman between per-stanza name mentions and thematic match counts,
    /// over probe stanzas only; `None` when not computable.
    pub correlation: Option<SpearmanResult>,
    pub correlation_note: String,
    pub correlation_unit: String,
    pub stanzas: Vec<StanzaCounts>,
}

fn slot(
    table: &mut BTreeMap<(u32, u32), StanzaCounts>,
    part: u32,
    stanza: u32,
) -> &mut StanzaCounts {
    table.entry((part, stanza)).or_insert(StanzaCounts {
        part,
        stanza,
        name_mentions: 0,
        probe_matches: 0,
        thematic_matches: 0,
    })
}

/// Relates character-name mentions to probe stanzas.
///
/// Epigraphs are skipped. The correlation uses per-stanza counts (not
/// presence indicators) over the stanzas that hold at least one probe
/// match.
pub fn name_cooccurrence(
    categorized: &CategorizedMatches,
    corpus: &Corpus,
    names: &NameForms,
    thematic_categories: &[String],
) -> Result<CooccurrenceReport> {
    if names.is_empty() {
        return Err(Error::Config("name form list is empty".into()));
    }
    let thematic: BTreeSet<String> = thematic_categories
        .iter()
        .map(|c| c.trim().to_lowercase())
        .collect();

    let mut table: BTreeMap<(u32, u32), StanzaCounts> = BTreeMap::new();
    let mut by_character: BTreeMap<String, usize> = BTreeMap::new();
    for (part, stanza, line) in corpus.lines() {
        if stanza.flags.epigraph {
            continue;
        }
        for span in word_spans(&line.text) {
            if let Some(ch) = names.character_of(&line.text[span]) {
                *by_character.entry(ch.to_owned()).or_default() += 1;
                slot(&mut table, part, stanza.index).name_mentions += 1;
            }
        }
    }
    for (m, label) in &categorized.matches {
        let counts = slot(&mut table, m.part, m.stanza);
        counts.probe_matches += 1;
        if matches!(label, Label::Category(c) if thematic.contains(c)) {
            counts.thematic_matches += 1;
        }
    }

    let total_mentions: usize = by_character.values().sum();
    let probe: Vec<&StanzaCounts> = table.values().filter(|s| s.probe_matches > 0).collect();
    let in_probe: usize = probe.iter().map(|s| s.name_mentions).sum();
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };

    let x: Vec<f64> = probe.iter().map(|s| s.name_mentions as f64).collect();
    let y: Vec<f64> = probe.iter().map(|s| s.thematic_matches as f64).collect();
    let (correlation, correlation_note) = match spearman_test(&x, &y) {
        Ok(r) => (Some(r), "computed".to_owned()),
        Err(e) => (None, format!("not computable: {e}")),
    };

    Ok(CooccurrenceReport {
        total_mentions,
        mentions_by_character: by_character,
        thematic_categories: thematic.into_iter().collect(),
        mentions_in_probe_stanzas: ratio(in_probe, total_mentions),
        probe_stanzas: probe.len(),
        probe_stanzas_with_thematic: ratio(
            probe.iter().filter(|s| s.thematic_matches > 0).count(),
            probe.len(),
        ),
        correlation,
        correlation_note,
        correlation_unit: "per-stanza counts over probe-bearing stanzas".to_owned(),
        stanzas: table.into_values().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_corpus, LayoutConfig};
    use crate::encoder::{encode_text, segment_blocks, EncodeOptions, EncodingScheme};
    use crate::probes::{
        categorize_matches, scan_pattern_class, AnnotationTable, CategoryTable, TrigramClass,
    };

    const TEXT: &str = "I\n1\nТатьяна встала.\nИ Онегин тут.\n2\nвстреча с Татьяной\n3\nмама\nОнегин\n4\nвстреча\n";

    fn setup(names_csv: &str) -> Result<CooccurrenceReport> {
        let scheme = EncodingScheme::russian();
        let corpus = parse_corpus("t", TEXT, &LayoutConfig::minimal(), &scheme).unwrap();
        let enc = encode_text(&corpus, &scheme, EncodeOptions::default()).unwrap();
        let seg = segment_blocks(enc.sequence.len(), 10, true, 1).unwrap();
        let matches: Vec<_> =
            scan_pattern_class(&enc.sequence, &corpus, &[TrigramClass::Ccc], Some(&seg))
                .unwrap()
                .into_iter()
                .filter(|m| m.letters == "вст")
                .collect();
        let ann = AnnotationTable::from_csv(
            "context,lemma,category\nвстала,встать,\nвстреча,встреча,encounter\n".as_bytes(),
        )
        .unwrap();
        let cat = categorize_matches(&matches, &ann, &CategoryTable::default(), &seg);
        let names = NameForms::from_csv(names_csv.as_bytes())?;
        name_cooccurrence(&cat, &corpus, &names, &["encounter".to_string()])
    }

    #[test]
    fn counts_and_fractions() {
        let r =
            setup("character,form\nTat'jana,Татьяна\nTat'jana,Татьяной\nOnegin,Онегин\n").unwrap();
        assert_eq!(r.total_mentions, 4);
        assert_eq!(r.mentions_by_character["Onegin"], 2);
        // Probe stanzas: 1, 2 and 4. Mentions there: 2 + 1 + 0 of 4.
        assert_eq!(r.probe_stanzas, 3);
        assert!((r.mentions_in_probe_stanzas - 0.75).abs() < 1e-12);
        // Thematic (encounter) forms in stanzas 2 and 4.
        assert!((r.probe_stanzas_with_thematic - 2.0 / 3.0).abs() < 1e-12);
        assert!(r.correlation.is_some());
    }

    #[test]
    fn disjoint_names_not_computable() {
        let r = setup("character,form\nLenskij,Ленский\n").unwrap();
        assert_eq!(r.total_mentions, 0);
        assert_eq!(r.mentions_in_probe_stanzas, 0.0);
        assert!(r.correlation.is_none());
        assert!(r.correlation_note.starts_with("not computable"));
    }

    #[test]
    fn empty_names_rejected() {
        assert!(matches!(setup("character,form\n"), Err(Error::Config(_))));
    }
}
