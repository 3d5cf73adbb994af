use std::path::{Path, PathBuf};

use anyhow::Result;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::{Analysis, Cli, Command, Model};
use crate::run::{Touched, VERSION};

/// Everything needed to rerun a command: `netcorr --config <manifest>`
/// replays it.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub params: Map<String, Value>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub duration_seconds: f64,
}

fn params_of<T: Serialize>(path: &[&str], args: &T) -> Result<(String, Map<String, Value>)> {
    let value = serde_json::to_value(args)?;
    let map = match value {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    Ok((path.join(" "), map))
}

pub fn command_record(command: &Command) -> Result<(String, Map<String, Value>)> {
    match command {
        Command::Generate(m) => match m {
            Model::White(a) => params_of(&["generate", "white"], a),
            Model::Periodic(a) => params_of(&["generate", "periodic"], a),
            Model::Darn(a) => params_of(&["generate", "darn"], a),
            Model::DarnCross(a) => params_of(&["generate", "darn-cross"], a),
            Model::Logistic(a) => params_of(&["generate", "logistic"], a),
        },
        Command::Correlate(a) => params_of(&["correlate"], a),
        Command::Analyze(k) => match k {
            Analysis::Zscore(a) => params_of(&["analyze", "zscore"], a),
            Analysis::Decay(a) => params_of(&["analyze", "decay"], a),
            Analysis::Lifetimes(a) => params_of(&["analyze", "lifetimes"], a),
            Analysis::Scaling(a) => params_of(&["analyze", "scaling"], a),
            Analysis::Offdiag(a) => params_of(&["analyze", "offdiag"], a),
        },
        Command::Ingest(a) => params_of(&["ingest"], a),
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_os_string();
    s.push(".manifest.json");
    PathBuf::from(s)
}

pub fn build(cli: &Cli, touched: Touched, duration_seconds: f64) -> Result<RunManifest> {
    let (subcommand, mut params) = command_record(&cli.command)?;
    params.insert("seed".into(), Value::from(cli.seed));
    Ok(RunManifest {
        tool: "netcorr",
        version: VERSION,
        subcommand,
        params,
        seed: cli.seed,
        threads: cli.threads,
        inputs: touched.inputs,
        outputs: touched.outputs,
        duration_seconds,
    })
}
