use std::collections::BTreeMap;
use std::fs::File;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use vcmark_core::stats::{
    bootstrap_model_coefficients, fit_interaction_model, partial_spearman, MdObservation,
    RegressionFit, SourceBlocks, COEFFICIENT_NAMES,
};

use super::profile::{profile_source, ProfileRecord};
use super::{block_slices, mbb_config};
use crate::args::{BlockArgs, ControlSet, ResampleArgs};
use crate::inputs::Sources;
use crate::output::Outputs;

/// Block parameters correlated with memory depth.
pub const CORRELATED_PARAMETERS: [&str; 5] = ["p", "p0", "p1", "q00", "p11"];

pub struct RegressParams<'a> {
    pub sources: &'a [String],
    pub focal: Option<&'a str>,
    pub control_set: ControlSet,
    pub blocks: &'a BlockArgs,
    pub resample: &'a ResampleArgs,
}

#[derive(Serialize)]
struct CorrelationRow<'a> {
    source_id: &'a str,
    parameter: &'static str,
    rho: f64,
    p_value: f64,
    n: usize,
    exact: bool,
    controlled_for: String,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    coefficient: &'a str,
    estimate: f64,
    mean: Option<f64>,
    lo: Option<f64>,
    hi: Option<f64>,
    level: Option<f64>,
    excludes_zero: Option<bool>,
}

#[derive(Serialize)]
struct ReplicateRow {
    replicate: usize,
    intercept: f64,
    block: f64,
    source: f64,
    block_x_source: f64,
}

#[derive(Serialize)]
struct FittedRow<'a> {
    source_id: &'a str,
    block: usize,
    md: f64,
    fitted: f64,
}

#[derive(Serialize)]
struct Report<'a> {
    focal: &'a str,
    baseline: &'a str,
    sources: &'a [String],
    coefficients: BTreeMap<&'static str, f64>,
    r_squared: f64,
    n_obs: usize,
    bootstrap: Option<BootstrapEcho<'a>>,
    control_set: Vec<&'static str>,
    profile_input: Option<String>,
}

#[derive(Serialize)]
struct BootstrapEcho<'a> {
    replicates: usize,
    block_len: usize,
    subblock_len: usize,
    master_seed: u64,
    level: f64,
    summaries: &'a [vcmark_core::stats::CoefficientSummary],
}

pub fn read_profile(path: &Path) -> Result<Vec<ProfileRecord>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut rdr = csv::Reader::from_reader(file);
    let mut rows = Vec::new();
    for rec in rdr.deserialize() {
        let rec: ProfileRecord = rec.map_err(vcmark_core::Error::from)?;
        rows.push(rec);
    }
    if rows.is_empty() {
        return Err(vcmark_core::Error::EmptyInput)
            .with_context(|| format!("{} has no rows", path.display()));
    }
    Ok(rows)
}

fn pick_sources(requested: &[String], available: &[String]) -> Result<Vec<String>> {
    let chosen: Vec<String> = if requested.is_empty() {
        available.to_vec()
    } else {
        requested.to_vec()
    };
    for s in &chosen {
        if !available.contains(s) {
            bail!(
                "source `{s}` is not among the inputs ({})",
                available.join(", ")
            );
        }
    }
    if chosen.len() != 2 {
        bail!("regression needs exactly two sources, got {}", chosen.len());
    }
    Ok(chosen)
}

fn correlations<'a>(
    records: &'a [ProfileRecord],
    sources: &'a [String],
    controls: ControlSet,
) -> Result<Vec<CorrelationRow<'a>>> {
    let mut rows = Vec::new();
    for s in sources {
        let blocks: Vec<&ProfileRecord> = records.iter().filter(|r| &r.source_id == s).collect();
        let md: Vec<f64> = blocks.iter().map(|r| r.md).collect();
        let index: Vec<f64> = blocks.iter().map(|r| r.block as f64).collect();
        let control_list: Vec<(&str, &[f64])> = match controls {
            ControlSet::Block => vec![("block", &index)],
            ControlSet::None => vec![],
        };
        for name in CORRELATED_PARAMETERS {
            let values: Vec<f64> = blocks.iter().map(|r| r.parameter(name).unwrap()).collect();
            match partial_spearman(&md, &values, &control_list) {
                Ok(r) => rows.push(CorrelationRow {
                    source_id: s,
                    parameter: name,
                    rho: r.rho,
                    p_value: r.p_value,
                    n: r.n,
                    exact: r.exact,
                    controlled_for: r.controlled_for.join(";"),
                }),
                Err(e) => log::warn!("{s}: MD vs {name} correlation not computable: {e}"),
            }
        }
    }
    Ok(rows)
}

/// Fits the regression and writes its tables. `profile` replaces `inputs`
/// as the source of per-block memory depth (point fit only).
pub fn run(
    params: &RegressParams<'_>,
    inputs: Option<&Sources>,
    profile: Option<&Path>,
    run_id: &str,
) -> Result<(Outputs, RegressionFit)> {
    let (records, fit, sources) = match (inputs, profile) {
        (_, Some(path)) => {
            let records = read_profile(path)?;
            let mut available: Vec<String> = Vec::new();
            for r in &records {
                if !available.contains(&r.source_id) {
                    available.push(r.source_id.clone());
                }
            }
            let sources = pick_sources(params.sources, &available)?;
            let focal = params.focal.unwrap_or(&sources[0]);
            let rows: Vec<MdObservation> = records
                .iter()
                .filter(|r| sources.contains(&r.source_id))
                .map(|r| MdObservation {
                    source: r.source_id.clone(),
                    block: r.block,
                    md: r.md,
                })
                .collect();
            if params.resample.replicates > 0 {
                log::info!("profile input carries no sequences; fitting point estimates only");
            }
            let fit = fit_interaction_model(&rows, focal)?;
            (records, fit, sources)
        }
        (Some(inputs), None) => {
            let available: Vec<String> = inputs.list.iter().map(|s| s.id.clone()).collect();
            let sources = pick_sources(params.sources, &available)?;
            let focal = params.focal.unwrap_or(&sources[0]);
            let mut records = Vec::new();
            let mut segs = Vec::new();
            for id in &sources {
                let src = inputs.get(id)?;
                let (seg, profiles) = profile_source(src, params.blocks)?;
                records.extend(profiles.iter().map(|b| ProfileRecord::from_profile(id, b)));
                segs.push((src, seg));
            }
            let fit = if params.resample.replicates > 0 {
                let blocks: Vec<SourceBlocks> = segs
                    .iter()
                    .map(|(src, seg)| SourceBlocks {
                        source_id: &src.id,
                        blocks: block_slices(src, seg),
                    })
                    .collect();
                bootstrap_model_coefficients(
                    &blocks,
                    &mbb_config(params.blocks, params.resample),
                    focal,
                    params.blocks.cf.into(),
                    params.resample.level,
                )?
            } else {
                let rows: Vec<MdObservation> = records
                    .iter()
                    .map(|r| MdObservation {
                        source: r.source_id.clone(),
                        block: r.block,
                        md: r.md,
                    })
                    .collect();
                fit_interaction_model(&rows, focal)?
            };
            (records, fit, sources)
        }
        (None, None) => bail!("regress needs --input sources or --profile"),
    };

    let mut out = Outputs::default();
    let c = fit.coefficients.to_array();
    let summaries: Vec<SummaryRow> = match &fit.bootstrap {
        Some(d) => d
            .summaries
            .iter()
            .map(|s| SummaryRow {
                coefficient: &s.name,
                estimate: s.estimate,
                mean: Some(s.mean),
                lo: Some(s.interval.lo),
                hi: Some(s.interval.hi),
                level: Some(s.interval.level),
                excludes_zero: Some(!s.interval.contains(0.0)),
            })
            .collect(),
        None => COEFFICIENT_NAMES
            .iter()
            .zip(c)
            .map(|(name, estimate)| SummaryRow {
                coefficient: name,
                estimate,
                mean: None,
                lo: None,
                hi: None,
                level: None,
                excludes_zero: None,
            })
            .collect(),
    };
    out.csv("coefficient_summary.csv", &summaries)?;
    if let Some(d) = &fit.bootstrap {
        let rows: Vec<ReplicateRow> = d
            .replicates
            .iter()
            .enumerate()
            .map(|(i, v)| ReplicateRow {
                replicate: i,
                intercept: v[0],
                block: v[1],
                source: v[2],
                block_x_source: v[3],
            })
            .collect();
        out.csv("coefficient_replicates.csv", &rows)?;
    }

    let fitted: Vec<FittedRow> = records
        .iter()
        .filter(|r| sources.contains(&r.source_id))
        .map(|r| {
            let f = if r.source_id == fit.focal { 1.0 } else { 0.0 };
            let b = r.block as f64;
            FittedRow {
                source_id: &r.source_id,
                block: r.block,
                md: r.md,
                fitted: c[0] + c[1] * b + c[2] * f + c[3] * b * f,
            }
        })
        .collect();
    out.csv("fitted.csv", &fitted)?;
    out.csv_headed(
        "correlations.csv",
        &[
            "source_id",
            "parameter",
            "rho",
            "p_value",
            "n",
            "exact",
            "controlled_for",
        ],
        &correlations(&records, &sources, params.control_set)?,
    )?;

    let report = Report {
        focal: &fit.focal,
        baseline: &fit.baseline,
        sources: &sources,
        coefficients: COEFFICIENT_NAMES.iter().copied().zip(c).collect(),
        r_squared: fit.r_squared,
        n_obs: fit.n_obs,
        bootstrap: fit.bootstrap.as_ref().map(|d| BootstrapEcho {
            replicates: d.config.n_replicates,
            block_len: d.config.block_len,
            subblock_len: d.config.subblock_len,
            master_seed: d.config.master_seed,
            level: params.resample.level,
            summaries: &d.summaries,
        }),
        control_set: match params.control_set {
            ControlSet::Block => vec!["block"],
            ControlSet::None => vec![],
        },
        profile_input: profile.map(|p| p.display().to_string()),
    };
    out.json("regression.json", &report, run_id)?;
    Ok((out, fit))
}
