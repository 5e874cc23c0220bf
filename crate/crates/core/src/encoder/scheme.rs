use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharClass {
    Vowel,
    Consonant,
    Excluded,
    Unknown,
}

const RU_VOWELS: &str = "аеёиоуыэюя";
const RU_CONSONANTS: &str = "бвгджзклмнпрстфхцчшщ";
const RU_SIGNS: &str = "ъь";
const LATIN_VOWELS: &str = "aeiouyàáâäèéêëìíîïòóôöùúûüÿæœ";
const LATIN_CONSONANTS: &str = "bcdfghjklmnpqrstvwxzçñšžčćřłńß";

/// Letter classification used to turn text into V/C symbols.
///
/// Characters listed in none of the three sets are `Excluded` when they are
/// not letters and `exclude_non_letters` is set (punctuation, digits,
/// whitespace, combining marks), and `Unknown` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingScheme {
    pub name: String,
    #[serde(with = "char_set")]
    pub vowels: BTreeSet<char>,
    #[serde(with = "char_set")]
    pub consonants: BTreeSet<char>,
    #[serde(with = "char_set")]
    pub excluded: BTreeSet<char>,
    pub fold_case: bool,
    #[serde(default = "default_true")]
    pub exclude_non_letters: bool,
}

fn default_true() -> bool {
    true
}

fn set(parts: &[&str]) -> BTreeSet<char> {
    parts.iter().flat_map(|s| s.chars()).collect()
}

impl EncodingScheme {
    pub fn new(
        name: impl Into<String>,
        vowels: BTreeSet<char>,
        consonants: BTreeSet<char>,
        excluded: BTreeSet<char>,
        fold_case: bool,
    ) -> Result<Self> {
        let scheme = EncodingScheme {
            name: name.into(),
            vowels,
            consonants,
            excluded,
            fold_case,
            exclude_non_letters: true,
        };
        scheme.validate()?;
        Ok(scheme)
    }

    /// Post-1918 Russian orthography with Latin-script borrowings.
    ///
    /// `й` counts as a vowel; hard and soft signs are dropped.
    pub fn russian() -> Self {
        EncodingScheme {
            name: "ru".into(),
            vowels: set(&[RU_VOWELS, "й", LATIN_VOWELS]),
            consonants: set(&[RU_CONSONANTS, LATIN_CONSONANTS]),
            excluded: set(&[RU_SIGNS]),
            fold_case: true,
            exclude_non_letters: true,
        }
    }

    /// Same as [`EncodingScheme::russian`] but with `й` as a consonant.
    pub fn russian_j_consonant() -> Self {
        EncodingScheme {
            name: "ru-j-consonant".into(),
            vowels: set(&[RU_VOWELS, LATIN_VOWELS]),
            consonants: set(&[RU_CONSONANTS, "й", LATIN_CONSONANTS]),
            ..Self::russian()
        }
    }

    /// Italian, including diacritics used for transliterated Russian names.
    pub fn italian() -> Self {
        EncodingScheme {
            name: "it".into(),
            vowels: set(&[LATIN_VOWELS]),
            consonants: set(&[LATIN_CONSONANTS]),
            excluded: BTreeSet::new(),
            fold_case: true,
            exclude_non_letters: true,
        }
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "ru" => Some(Self::russian()),
            "ru-j-consonant" => Some(Self::russian_j_consonant()),
            "it" => Some(Self::italian()),
            _ => None,
        }
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["ru", "ru-j-consonant", "it"]
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let scheme: EncodingScheme =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("scheme: {e}")))?;
        scheme.validate()?;
        Ok(scheme)
    }

    pub fn validate(&self) -> Result<()> {
        let overlaps = [
            ("vowels", "consonants", &self.vowels, &self.consonants),
            ("vowels", "excluded", &self.vowels, &self.excluded),
            ("consonants", "excluded", &self.consonants, &self.excluded),
        ];
        for (a, b, left, right) in overlaps {
            if let Some(ch) = left.intersection(right).next() {
                return Err(Error::Config(format!(
                    "scheme {}: {ch:?} is listed in both {a} and {b}",
                    self.name
                )));
            }
        }
        Ok(())
    }

    fn fold(&self, ch: char) -> char {
        if !self.fold_case {
            return ch;
        }
        let mut lower = ch.to_lowercase();
        match (lower.next(), lower.next()) {
            (Some(c), None) => c,
            _ => ch,
        }
    }

    pub fn classify_char(&self, ch: char) -> CharClass {
        let c = self.fold(ch);
        if self.vowels.contains(&c) {
            CharClass::Vowel
        } else if self.consonants.contains(&c) {
            CharClass::Consonant
        } else if self.excluded.contains(&c) || (self.exclude_non_letters && !c.is_alphabetic()) {
            CharClass::Excluded
        } else {
            CharClass::Unknown
        }
    }

    /// Whether `ch` produces a symbol.
    pub fn is_encodable(&self, ch: char) -> bool {
        matches!(
            self.classify_char(ch),
            CharClass::Vowel | CharClass::Consonant
        )
    }

    pub fn count_encodable(&self, text: &str) -> usize {
        text.chars().filter(|&c| self.is_encodable(c)).count()
    }
}

mod char_set {
    use std::collections::BTreeSet;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(set: &BTreeSet<char>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&set.iter().collect::<String>())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeSet<char>, D::Error> {
        let text = String::deserialize(d)?;
        Ok(text.chars().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn russian_defaults() {
        let ru = EncodingScheme::russian();
        assert_eq!(ru.classify_char('а'), CharClass::Vowel);
        assert_eq!(ru.classify_char('Я'), CharClass::Vowel);
        assert_eq!(ru.classify_char('ь'), CharClass::Excluded);
        assert_eq!(ru.classify_char('Ъ'), CharClass::Excluded);
        assert_eq!(ru.classify_char('в'), CharClass::Consonant);
        assert_eq!(ru.classify_char('й'), CharClass::Vowel);
        assert_eq!(ru.classify_char('d'), CharClass::Consonant);
        assert_eq!(ru.classify_char('y'), CharClass::Vowel);
        for ch in [' ', ',', '—', '«', '7', '\'', '\u{301}'] {
            assert_eq!(ru.classify_char(ch), CharClass::Excluded, "{ch:?}");
        }
        // Pre-reform letters are outside the scheme.
        assert_eq!(ru.classify_char('ѣ'), CharClass::Unknown);
    }

    #[test]
    fn j_consonant_variant() {
        let ru = EncodingScheme::russian_j_consonant();
        assert_eq!(ru.classify_char('й'), CharClass::Consonant);
        ru.validate().unwrap();
    }

    #[test]
    fn italian_accents() {
        let it = EncodingScheme::italian();
        assert_eq!(it.classify_char('é'), CharClass::Vowel);
        assert_eq!(it.classify_char('È'), CharClass::Vowel);
        assert_eq!(it.classify_char('š'), CharClass::Consonant);
        assert_eq!(it.classify_char('ж'), CharClass::Unknown);
        assert_eq!(it.classify_char('’'), CharClass::Excluded);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let ru = EncodingScheme::russian();
        let json = serde_json::to_string(&ru).unwrap();
        assert_eq!(EncodingScheme::from_json(&json).unwrap(), ru);

        let bad = r#"{"name":"x","vowels":"ab","consonants":"b","excluded":"","fold_case":true}"#;
        assert!(matches!(
            EncodingScheme::from_json(bad),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn case_sensitive_scheme() {
        let s = EncodingScheme::new("x", set(&["a"]), set(&["b"]), BTreeSet::new(), false).unwrap();
        assert_eq!(s.classify_char('a'), CharClass::Vowel);
        assert_eq!(s.classify_char('A'), CharClass::Unknown);
    }
}
