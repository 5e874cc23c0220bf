//! `vcmark`: command-line pipeline over the vcmark-core library.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric or domain
//! error. Outputs are written only when a command succeeds.

mod args;
mod commands;
mod inputs;
mod output;

use std::collections::BTreeMap;
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use args::{Cli, Command};
use commands::regress::RegressParams;
use commands::simulate::SimulateParams;
use inputs::{load_sources, sha256_hex, Sources};
use output::{Outputs, RunIdentity};

const EXIT_DATA: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

fn exit_code(err: &anyhow::Error) -> u8 {
    let numeric = err
        .chain()
        .filter_map(|e| e.downcast_ref::<vcmark_core::Error>())
        .any(vcmark_core::Error::is_numeric);
    if numeric {
        EXIT_NUMERIC
    } else {
        EXIT_DATA
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Parse(_) => "parse",
        Command::Encode(_) => "encode",
        Command::Profile(_) => "profile",
        Command::Bootstrap(_) => "bootstrap",
        Command::Acf(_) => "acf",
        Command::Simulate(_) => "simulate",
        Command::Regress(_) => "regress",
        Command::Surrogate(_) => "surrogate",
        Command::Probe(_) => "probe",
    }
}

fn run(cli: &Cli) -> Result<()> {
    let cmd = &cli.command;
    let name = command_name(cmd);

    let sources: Option<Sources> = match cmd {
        Command::Parse(a) => Some(load_sources(&a.input)?),
        Command::Encode(a) => Some(load_sources(&a.input)?),
        Command::Profile(a) => Some(load_sources(&a.input)?),
        Command::Bootstrap(a) => Some(load_sources(&a.input)?),
        Command::Acf(a) => Some(load_sources(&a.input)?),
        Command::Simulate(a) => Some(load_sources(&a.input)?),
        Command::Surrogate(a) => Some(load_sources(&a.input)?),
        Command::Probe(a) => Some(load_sources(&a.input)?),
        Command::Regress(a) if a.profile.is_none() => Some(load_sources(&a.input_args())?),
        Command::Regress(_) => None,
    };

    let mut input_digests = sources.as_ref().map(Sources::digests).unwrap_or_default();
    if let Command::Regress(a) = cmd {
        if let Some(p) = &a.profile {
            let bytes =
                std::fs::read(p).map_err(|e| anyhow::anyhow!("reading {}: {e}", p.display()))?;
            input_digests.insert("profile".into(), sha256_hex(&bytes));
        }
    }
    let identity = RunIdentity::new(name, cmd, input_digests)?;
    let run_id = identity.run_id.as_str();
    let src = || sources.as_ref().expect("command loads its inputs");

    let mut seeds = BTreeMap::new();
    let outputs: Outputs = match cmd {
        Command::Parse(a) => commands::parse::run(a, src(), run_id)?,
        Command::Encode(_) => commands::encode::run(src())?,
        Command::Profile(a) => commands::profile::run(&a.blocks, src())?,
        Command::Bootstrap(a) => {
            seeds.insert("master".into(), a.resample.seed);
            commands::bootstrap::run(&a.blocks, &a.resample, src())?
        }
        Command::Acf(a) => {
            seeds.insert("master".into(), a.resample.seed);
            commands::acf::run(&a.blocks, &a.resample, a.lags, src())?
        }
        Command::Simulate(a) => {
            seeds.insert("master".into(), a.seed);
            let params = SimulateParams {
                block: a.block,
                runs: a.runs,
                length: a.length,
                seed: a.seed,
                level: a.level,
            };
            commands::simulate::run(&a.blocks, &params, src(), run_id)?
        }
        Command::Regress(a) => {
            seeds.insert("master".into(), a.resample.seed);
            let params = RegressParams {
                sources: &a.sources,
                focal: a.focal.as_deref(),
                control_set: a.control_set,
                blocks: &a.blocks,
                resample: &a.resample,
            };
            commands::regress::run(&params, sources.as_ref(), a.profile.as_deref(), run_id)?.0
        }
        Command::Surrogate(a) => {
            seeds.insert("master".into(), a.resample.seed);
            for r in 0..a.runs {
                seeds.insert(
                    format!("surrogate_run_{r:03}"),
                    commands::surrogate::run_seed(a.resample.seed, r),
                );
            }
            commands::surrogate::run(a, src(), run_id)?
        }
        Command::Probe(a) => commands::probe::run(a, src(), run_id)?,
    };

    let schemes = sources.as_ref().map(Sources::schemes).unwrap_or_default();
    let manifest = identity.manifest(seeds, schemes, &outputs);
    let written = outputs.commit(&cli.out, &manifest)?;
    log::info!(
        "{name}: wrote {} file(s) to {}",
        written.len(),
        cli.out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = exit_code(&err);
            eprintln!("vcmark: error: {err:#}");
            let structured = serde_json::json!({
                "error": format!("{err:#}"),
                "kind": if code == EXIT_NUMERIC { "numeric" } else { "data" },
                "exit_code": code,
            });
            eprintln!("{structured}");
            ExitCode::from(code)
        }
    }
}
