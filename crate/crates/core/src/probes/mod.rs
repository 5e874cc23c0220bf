//! Phonological probes: trigram scans with lexical contexts, frequency
//! ranking, trend screening, semantic categories and name co-occurrence.

mod annotate;
mod names;
mod rank;
mod scan;

pub use annotate::{
    categorize_matches, AnnotationTable, CategorizedMatches, CategorySeries, CategoryTable, Label,
    ALL_CATEGORIZED, ALL_MATCHES,
};
pub use names::{name_cooccurrence, CooccurrenceReport, NameForms, StanzaCounts};
pub use rank::{
    rank_letter_trigrams, trigram_trend_table, Direction, ProbeCandidate, RankedTrigram,
};
pub use scan::{scan_pattern_class, PatternKind, ProbeMatch, TrigramClass};
