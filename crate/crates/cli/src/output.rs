//! Buffered outputs, committed atomically with a run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::inputs::sha256_hex;

pub const MANIFEST_NAME: &str = "manifest.json";

/// Files produced by a command, held in memory until the command succeeds.
#[derive(Debug, Default)]
pub struct Outputs {
    files: BTreeMap<String, Vec<u8>>,
}

impl Outputs {
    pub fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.insert(name.into(), bytes);
    }

    pub fn csv<T: Serialize>(&mut self, name: impl Into<String>, rows: &[T]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
        self.add(name, w.into_inner().context("finishing CSV buffer")?);
        Ok(())
    }

    /// Like [`Outputs::csv`], but an empty `rows` still yields `header`.
    pub fn csv_headed<T: Serialize>(
        &mut self,
        name: impl Into<String>,
        header: &[&str],
        rows: &[T],
    ) -> Result<()> {
        if !rows.is_empty() {
            return self.csv(name, rows);
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        w.flush()?;
        self.add(name, w.into_inner().context("finishing CSV buffer")?);
        Ok(())
    }

    /// Pretty JSON with the run id added under `run_id` when `value` is an
    /// object.
    pub fn json<T: Serialize>(
        &mut self,
        name: impl Into<String>,
        value: &T,
        run_id: &str,
    ) -> Result<()> {
        let mut v = serde_json::to_value(value)?;
        if let serde_json::Value::Object(map) = &mut v {
            map.insert("run_id".into(), run_id.into());
        }
        let mut bytes = serde_json::to_vec_pretty(&v)?;
        bytes.push(b'\n');
        self.add(name, bytes);
        Ok(())
    }

    /// Moves every file of `other` under `prefix/`.
    pub fn nest(&mut self, prefix: &str, other: Outputs) {
        for (name, bytes) in other.files {
            self.files.insert(format!("{prefix}/{name}"), bytes);
        }
    }

    pub fn digests(&self) -> BTreeMap<String, String> {
        self.files
            .iter()
            .map(|(n, b)| (n.clone(), sha256_hex(b)))
            .collect()
    }

    /// Writes every file (and `manifest`) under `dir`. Each file goes to a
    /// temporary sibling first and is renamed into place; if any step fails,
    /// files already placed by this call are removed.
    pub fn commit(mut self, dir: &Path, manifest: &RunManifest) -> Result<Vec<PathBuf>> {
        let mut bytes = serde_json::to_vec_pretty(manifest)?;
        bytes.push(b'\n');
        self.files.insert(MANIFEST_NAME.into(), bytes);

        let mut placed: Vec<PathBuf> = Vec::new();
        let result = (|| -> Result<()> {
            for (name, bytes) in &self.files {
                let target = dir.join(name);
                let parent = target.parent().unwrap_or(dir);
                fs::create_dir_all(parent)
                    .with_context(|| format!("creating {}", parent.display()))?;
                let mut tmp = tempfile::NamedTempFile::new_in(parent)?;
                tmp.write_all(bytes)?;
                tmp.as_file().sync_all()?;
                tmp.persist(&target)
                    .with_context(|| format!("writing {}", target.display()))?;
                placed.push(target);
            }
            Ok(())
        })();
        if let Err(e) = result {
            for p in &placed {
                let _ = fs::remove_file(p);
            }
            return Err(e);
        }
        Ok(placed)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub run_id: String,
    pub tool: String,
    pub version: String,
    pub command: String,
    /// SHA-256 of the canonical JSON of the command configuration.
    pub config_hash: String,
    pub config: serde_json::Value,
    pub seeds: BTreeMap<String, u64>,
    pub schemes: BTreeMap<String, String>,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    /// RFC 3339; taken from SOURCE_DATE_EPOCH when set.
    pub timestamp: String,
}

/// Everything that determines a run's outputs.
pub struct RunIdentity {
    pub command: String,
    pub config: serde_json::Value,
    pub config_hash: String,
    pub inputs: BTreeMap<String, String>,
    pub run_id: String,
}

impl RunIdentity {
    pub fn new<T: Serialize>(
        command: &str,
        config: &T,
        inputs: BTreeMap<String, String>,
    ) -> Result<Self> {
        let config = serde_json::to_value(config)?;
        let config_hash = sha256_hex(serde_json::to_string(&config)?.as_bytes());
        let mut material = format!("{command}\n{config_hash}\n");
        for (id, digest) in &inputs {
            material.push_str(&format!("{id}={digest}\n"));
        }
        let run_id = sha256_hex(material.as_bytes())[..16].to_owned();
        Ok(RunIdentity {
            command: command.to_owned(),
            config,
            config_hash,
            inputs,
            run_id,
        })
    }

    pub fn manifest(
        &self,
        seeds: BTreeMap<String, u64>,
        schemes: BTreeMap<String, String>,
        outputs: &Outputs,
    ) -> RunManifest {
        RunManifest {
            run_id: self.run_id.clone(),
            tool: env!("CARGO_PKG_NAME").to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            command: self.command.clone(),
            config_hash: self.config_hash.clone(),
            config: self.config.clone(),
            seeds,
            schemes,
            inputs: self.inputs.clone(),
            outputs: outputs.digests(),
            timestamp: timestamp(),
        }
    }
}

fn timestamp() -> String {
    let fixed = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.trim().parse::<i64>().ok())
        .and_then(|s| chrono::DateTime::from_timestamp(s, 0));
    fixed
        .unwrap_or_else(chrono::Utc::now)
        .to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}
