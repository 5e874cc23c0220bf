use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize, Serializer};

use super::ProbeMatch;
use crate::encoder::BlockSegmentation;
use crate::stats::{spearman_test, SpearmanResult};
use crate::{Error, Result};

/// Series name for every input match, whatever its label.
pub const ALL_MATCHES: &str = "all";
/// Series name for the union of all named categories.
pub const ALL_CATEGORIZED: &str = "all_categorized";

fn normalize(s: &str) -> String {
    s.trim().to_lowercase()
}

#[derive(Debug, Deserialize)]
struct AnnotationRecord {
    context: String,
    lemma: String,
    #[serde(default)]
    category: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub lemma: String,
    pub category: Option<String>,
}

/// Externally produced lemma (and optional category) per surface context.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnnotationTable {
    entries: HashMap<String, Annotation>,
}

impl AnnotationTable {
    /// Reads a CSV with header `context,lemma,category`; the category column
    /// may be empty or absent. Contexts compare case-insensitively.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let mut entries = HashMap::new();
        for rec in rdr.deserialize() {
            let rec: AnnotationRecord = rec?;
            let key = normalize(&rec.context);
            let value = Annotation {
                lemma: normalize(&rec.lemma),
                category: Some(normalize(&rec.category)).filter(|c| !c.is_empty()),
            };
            if let Some(prev) = entries.get(&key) {
                if *prev != value {
                    return Err(Error::Table(format!(
                        "context `{}` is annotated twice with different values",
                        rec.context
                    )));
                }
            }
            entries.insert(key, value);
        }
        Ok(AnnotationTable { entries })
    }

    pub fn get(&self, context: &str) -> Option<&Annotation> {
        self.entries.get(&normalize(context))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Deserialize)]
struct CategoryRecord {
    form: String,
    category: String,
}

/// Lemma or surface form to category label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CategoryTable {
    entries: HashMap<String, String>,
}

impl CategoryTable {
    /// Reads a CSV with header `form,category`. A form may carry only one
    /// category.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut table = CategoryTable::default();
        for rec in rdr.deserialize() {
            let rec: CategoryRecord = rec?;
            table.insert(&rec.form, &rec.category)?;
        }
        Ok(table)
    }

    pub fn insert(&mut self, form: &str, category: &str) -> Result<()> {
        let (form, category) = (normalize(form), normalize(category));
        match self.entries.get(&form) {
            Some(prev) if *prev != category => Err(Error::Table(format!(
                "form `{form}` is assigned to both `{prev}` and `{category}`"
            ))),
            _ => {
                self.entries.insert(form, category);
                Ok(())
            }
        }
    }

    pub fn get(&self, form: &str) -> Option<&str> {
        self.entries.get(&normalize(form)).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Category(String),
    Uncategorized,
    Unannotated,
}

impl Label {
    pub fn as_str(&self) -> &str {
        match self {
            Label::Category(c) => c,
            Label::Uncategorized => "uncategorized",
            Label::Unannotated => "unannotated",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Blockwise frequency series of one group of matches.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategorySeries {
    pub name: String,
    /// Labels pooled into this series.
    pub members: Vec<String>,
    pub n: usize,
    pub block_counts: Vec<u64>,
    /// Count over trigram windows starting in the block.
    pub frequencies: Vec<f64>,
    /// `None` when the series is flat or too short to rank.
    pub spearman: Option<SpearmanResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategorizedMatches {
    pub matches: Vec<(ProbeMatch, Label)>,
    /// Distinct contexts with no annotation row.
    pub unannotated_contexts: Vec<String>,
    pub series: Vec<CategorySeries>,
}

impl CategorizedMatches {
    pub fn count(&self, label: &Label) -> usize {
        self.matches.iter().filter(|(_, l)| l == label).count()
    }

    pub fn series(&self, name: &str) -> Option<&CategorySeries> {
        self.series.iter().find(|s| s.name == name)
    }
}

fn label_for(m: &ProbeMatch, annotations: &AnnotationTable, categories: &CategoryTable) -> Label {
    let Some(a) = annotations.get(&m.context) else {
        return Label::Unannotated;
    };
    a.category
        .clone()
        .or_else(|| categories.get(&a.lemma).map(str::to_owned))
        .or_else(|| categories.get(&m.context).map(str::to_owned))
        .map_or(Label::Uncategorized, Label::Category)
}

fn build_series(
    name: &str,
    members: Vec<String>,
    picked: &[&ProbeMatch],
    windows: &[usize],
) -> CategorySeries {
    let mut block_counts = vec![0u64; windows.len()];
    for m in picked {
        if let Some(b) = m.block {
            block_counts[b - 1] += 1;
        }
    }
    let frequencies: Vec<f64> = block_counts
        .iter()
        .zip(windows)
        .map(|(&c, &w)| if w > 0 { c as f64 / w as f64 } else { 0.0 })
        .collect();
    let index: Vec<f64> = (1..=windows.len()).map(|b| b as f64).collect();
    CategorySeries {
        name: name.to_owned(),
        members,
        n: picked.len(),
        spearman: spearman_test(&index, &frequencies).ok(),
        block_counts,
        frequencies,
    }
}

/// Labels every match and builds blockwise series for each category, for
/// the union of all categories and for all matches.
///
/// A match whose context has no annotation row is labelled unannotated and
/// kept; with an annotation but no category it is uncategorized. Filtering
/// to single-word matches is left to the caller.
pub fn categorize_matches(
    matches: &[ProbeMatch],
    annotations: &AnnotationTable,
    categories: &CategoryTable,
    segmentation: &BlockSegmentation,
) -> CategorizedMatches {
    let labelled: Vec<(ProbeMatch, Label)> = matches
        .iter()
        .map(|m| (m.clone(), label_for(m, annotations, categories)))
        .collect();
    let unannotated_contexts: Vec<String> = labelled
        .iter()
        .filter(|(_, l)| *l == Label::Unannotated)
        .map(|(m, _)| m.context.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if !unannotated_contexts.is_empty() {
        log::warn!(
            "{} probe context(s) have no annotation row",
            unannotated_contexts.len()
        );
    }

    let windows = segmentation.windows_per_block(3);
    let mut by_category: BTreeMap<&str, Vec<&ProbeMatch>> = BTreeMap::new();
    for (m, l) in &labelled {
        if let Label::Category(c) = l {
            by_category.entry(c).or_default().push(m);
        }
    }
    let mut series: Vec<CategorySeries> = by_category
        .iter()
        .map(|(c, ms)| build_series(c, vec![c.to_string()], ms, &windows))
        .collect();
    let union: Vec<&ProbeMatch> = by_category.values().flatten().copied().collect();
    series.push(build_series(
        ALL_CATEGORIZED,
        by_category.keys().map(|c| c.to_string()).collect(),
        &union,
        &windows,
    ));
    let all: Vec<&ProbeMatch> = matches.iter().collect();
    let members: Vec<String> = labelled
        .iter()
        .map(|(_, l)| l.as_str().to_owned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    series.push(build_series(ALL_MATCHES, members, &all, &windows));

    CategorizedMatches {
        matches: labelled,
        unannotated_contexts,
        series,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::segment_blocks;
    use crate::probes::TrigramClass;

    fn m(context: &str, block: usize) -> ProbeMatch {
        ProbeMatch {
            letters: "вст".into(),
            vc_class: TrigramClass::Ccc,
            context: context.into(),
            part: 1,
            stanza: 1,
            line: 1,
            single_word: true,
            block: Some(block),
            position: 0,
        }
    }

    fn annotations() -> AnnotationTable {
        AnnotationTable::from_csv(
            "context,lemma,category\nвстал,встать,\nВстречу,встреча,encounter\nчувства,чувство,\n"
                .as_bytes(),
        )
        .unwrap()
    }

    #[test]
    fn labels_and_conservation() {
        let cats = CategoryTable::from_csv("form,category\nвстать,encounter\n".as_bytes()).unwrap();
        let matches = vec![
            m("встал", 1),
            m("встречу", 2),
            m("чувства", 3),
            m("вставка", 3),
        ];
        let seg = segment_blocks(3_002, 1_000, false, 0).unwrap();
        let out = categorize_matches(&matches, &annotations(), &cats, &seg);
        let labels: Vec<_> = out.matches.iter().map(|(_, l)| l.as_str()).collect();
        assert_eq!(
            labels,
            ["encounter", "encounter", "uncategorized", "unannotated"]
        );
        assert_eq!(out.unannotated_contexts, vec!["вставка".to_string()]);
        let total = out.count(&Label::Category("encounter".into()))
            + out.count(&Label::Uncategorized)
            + out.count(&Label::Unannotated);
        assert_eq!(total, matches.len());

        let enc = out.series("encounter").unwrap();
        assert_eq!(enc.block_counts, vec![1, 1, 0]);
        assert_eq!(enc.frequencies[0], 0.001);
        assert_eq!(out.series(ALL_MATCHES).unwrap().n, 4);
        assert_eq!(out.series(ALL_CATEGORIZED).unwrap().n, 2);
    }

    #[test]
    fn empty_category_table() {
        let matches = vec![m("встал", 1), m("чувства", 2)];
        let seg = segment_blocks(3_000, 1_000, false, 0).unwrap();
        let out = categorize_matches(&matches, &annotations(), &CategoryTable::default(), &seg);
        assert!(out.matches.iter().all(|(_, l)| *l == Label::Uncategorized));
    }

    #[test]
    fn conflicting_rows_rejected() {
        assert!(CategoryTable::from_csv("form,category\nа,x\nА,y\n".as_bytes()).is_err());
        assert!(
            AnnotationTable::from_csv("context,lemma,category\nа,b,\nа,c,\n".as_bytes()).is_err()
        );
    }
}
