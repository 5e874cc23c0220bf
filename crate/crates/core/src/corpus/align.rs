use serde::{Deserialize, Serialize};

use super::Corpus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StanzaRef {
    pub part: u32,
    pub stanza: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Reference,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StanzaPair {
    pub reference: StanzaRef,
    pub other: StanzaRef,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unmatched {
    pub side: Side,
    pub stanza: StanzaRef,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignedCorpus {
    pub reference_id: String,
    pub other_id: String,
    pub pairs: Vec<StanzaPair>,
    pub unmatched: Vec<Unmatched>,
}

impl AlignedCorpus {
    pub fn unmatched_on(&self, side: Side) -> impl Iterator<Item = &Unmatched> {
        self.unmatched.iter().filter(move |u| u.side == side)
    }
}

pub const MISSING_COUNTERPART: &str = "missing counterpart";
pub const ABSENT_FROM_REFERENCE: &str = "absent from reference";
pub const MERGED_INTO_FUSED: &str = "merged into a fused reference stanza";

/// Pairs stanzas by (part, number), driven by the reference structure.
///
/// A reference stanza pairs with the other-side stanza covering its number
/// (fused stanzas cover a range). Each reference stanza appears exactly once,
/// either in a pair or as unmatched; other-side leftovers are reported too.
pub fn align_corpora(reference: &Corpus, other: &Corpus) -> AlignedCorpus {
    let mut pairs = Vec::new();
    let mut unmatched = Vec::new();
    let mut used = std::collections::HashSet::new();

    for (part, stanza) in reference.stanzas() {
        let r = StanzaRef {
            part,
            stanza: stanza.index,
        };
        let counterpart = other.parts.iter().find(|p| p.index == part).and_then(|p| {
            p.stanzas
                .iter()
                .find(|s| s.covers(stanza.index) && s.flags.epigraph == stanza.flags.epigraph)
        });
        match counterpart {
            Some(s) => {
                let o = StanzaRef {
                    part,
                    stanza: s.index,
                };
                used.insert(o);
                pairs.push(StanzaPair {
                    reference: r,
                    other: o,
                });
            }
            None => unmatched.push(Unmatched {
                side: Side::Reference,
                stanza: r,
                reason: MISSING_COUNTERPART.into(),
            }),
        }
    }

    for (part, stanza) in other.stanzas() {
        let o = StanzaRef {
            part,
            stanza: stanza.index,
        };
        if used.contains(&o) {
            continue;
        }
        let inside_fused = reference
            .stanzas()
            .any(|(p, s)| p == part && s.flags.fused && s.covers(stanza.index));
        unmatched.push(Unmatched {
            side: Side::Other,
            stanza: o,
            reason: if inside_fused {
                MERGED_INTO_FUSED
            } else {
                ABSENT_FROM_REFERENCE
            }
            .into(),
        });
    }

    AlignedCorpus {
        reference_id: reference.source_id.clone(),
        other_id: other.source_id.clone(),
        pairs,
        unmatched,
    }
}
