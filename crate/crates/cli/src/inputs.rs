use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use sha2::{Digest, Sha256};
use vcmark_core::corpus::{parse_corpus, Corpus, LayoutConfig};
use vcmark_core::encoder::{
    encode_text, EncodeOptions, EncodingScheme, SymbolSequence, UnknownChar, UnknownPolicy,
};

use crate::args::{InputArgs, UnknownArg};

/// A loaded source: the V/C sequence plus, for text inputs, its corpus.
#[derive(Debug, Clone)]
pub struct Source {
    pub id: String,
    pub digest: String,
    pub scheme: Option<String>,
    pub corpus: Option<Corpus>,
    pub sequence: SymbolSequence,
    pub unknown: Vec<UnknownChar>,
}

impl Source {
    pub fn require_corpus(&self) -> Result<&Corpus> {
        self.corpus.as_ref().with_context(|| {
            format!(
                "source `{}` is a V/C file; this command needs the text",
                self.id
            )
        })
    }
}

#[derive(Debug, Clone)]
pub struct Sources {
    pub list: Vec<Source>,
}

impl Sources {
    pub fn get(&self, id: &str) -> Result<&Source> {
        self.list
            .iter()
            .find(|s| s.id == id)
            .with_context(|| format!("no input with id `{id}`"))
    }

    pub fn get_mut(&mut self, id: &str) -> Result<&mut Source> {
        self.list
            .iter_mut()
            .find(|s| s.id == id)
            .with_context(|| format!("no input with id `{id}`"))
    }

    pub fn digests(&self) -> BTreeMap<String, String> {
        self.list
            .iter()
            .map(|s| (s.id.clone(), s.digest.clone()))
            .collect()
    }

    pub fn schemes(&self) -> BTreeMap<String, String> {
        self.list
            .iter()
            .filter_map(|s| Some((s.id.clone(), s.scheme.clone()?)))
            .collect()
    }
}

fn split_pair(spec: &str) -> Option<(&str, &str)> {
    let (id, value) = spec.split_once('=')?;
    (!id.is_empty() && !value.is_empty()).then_some((id, value))
}

/// Values given as `ID=VALUE` bind to one source; a bare value is the
/// default for all.
fn per_source(specs: &[String], what: &str) -> Result<(Option<String>, BTreeMap<String, String>)> {
    let mut default = None;
    let mut by_id = BTreeMap::new();
    for spec in specs {
        match split_pair(spec) {
            Some((id, v)) => {
                by_id.insert(id.to_owned(), v.to_owned());
            }
            None if default.is_none() => default = Some(spec.clone()),
            None => bail!("more than one default {what} given"),
        }
    }
    Ok((default, by_id))
}

fn load_scheme(spec: &str) -> Result<EncodingScheme> {
    if let Some(s) = EncodingScheme::builtin(spec) {
        return Ok(s);
    }
    let path = Path::new(spec);
    if path.exists() {
        let text = fs::read_to_string(path).with_context(|| format!("reading scheme {spec}"))?;
        return Ok(EncodingScheme::from_json(&text)?);
    }
    bail!(
        "unknown scheme `{spec}`; built-ins are {}",
        EncodingScheme::builtin_names().join(", ")
    )
}

fn load_layout(spec: &str) -> Result<LayoutConfig> {
    let text = fs::read_to_string(spec).with_context(|| format!("reading layout {spec}"))?;
    Ok(LayoutConfig::from_json(&text)?)
}

fn is_vc_file(path: &Path) -> bool {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
    name.ends_with(".vc") || name.ends_with(".vc.txt")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn load_sources(args: &InputArgs) -> Result<Sources> {
    let (default_scheme, schemes) = per_source(&args.schemes, "scheme")?;
    let (default_layout, layouts) = per_source(&args.layouts, "layout")?;
    let policy = match args.unknown {
        UnknownArg::Error => UnknownPolicy::Error,
        UnknownArg::Skip => UnknownPolicy::SkipAndLog,
    };

    let mut list: Vec<Source> = Vec::new();
    for spec in &args.inputs {
        let (id, path) = split_pair(spec)
            .with_context(|| format!("input `{spec}` is not of the form ID=PATH"))?;
        if list.iter().any(|s| s.id == id) {
            bail!("input id `{id}` given twice");
        }
        let path = PathBuf::from(path);
        let bytes = fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
        let digest = sha256_hex(&bytes);
        let raw = String::from_utf8(bytes)
            .with_context(|| format!("{} is not valid UTF-8", path.display()))?;

        if is_vc_file(&path) {
            let sequence = SymbolSequence::from_vc_str(id, &raw)
                .with_context(|| format!("reading V/C symbols from {}", path.display()))?;
            if sequence.is_empty() {
                return Err(vcmark_core::Error::EmptyInput)
                    .with_context(|| format!("{} holds no symbols", path.display()));
            }
            list.push(Source {
                id: id.to_owned(),
                digest,
                scheme: None,
                corpus: None,
                sequence,
                unknown: Vec::new(),
            });
            continue;
        }

        let scheme_spec = schemes
            .get(id)
            .cloned()
            .or_else(|| default_scheme.clone())
            .or_else(|| EncodingScheme::builtin(id).map(|_| id.to_owned()))
            .with_context(|| format!("no --scheme given for source `{id}`"))?;
        let scheme = load_scheme(&scheme_spec)?;
        let layout = match layouts.get(id).or(default_layout.as_ref()) {
            Some(p) => load_layout(p)?,
            None => LayoutConfig::default(),
        };
        let mut corpus = parse_corpus(id, &raw, &layout, &scheme)
            .with_context(|| format!("parsing {}", path.display()))?;
        if let Some(n) = args.stanzas {
            corpus = corpus.truncate_stanzas(n);
        }
        let enc = encode_text(
            &corpus,
            &scheme,
            EncodeOptions {
                policy,
                include_epigraphs: args.include_epigraphs,
            },
        )
        .with_context(|| format!("encoding {}", path.display()))?;
        if enc.sequence.is_empty() {
            return Err(vcmark_core::Error::EmptyInput)
                .with_context(|| format!("{} encodes to no symbols", path.display()));
        }
        list.push(Source {
            id: id.to_owned(),
            digest,
            scheme: Some(scheme.name.clone()),
            corpus: Some(corpus),
            sequence: enc.sequence,
            unknown: enc.unknown,
        });
    }
    if list.is_empty() {
        bail!("no inputs given");
    }
    for id in schemes.keys().chain(layouts.keys()) {
        if !list.iter().any(|s| &s.id == id) {
            bail!("option refers to unknown input id `{id}`");
        }
    }
    Ok(Sources { list })
}
