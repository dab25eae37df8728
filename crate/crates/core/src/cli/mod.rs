//! Batch driver: load specs, dispatch analyses, emit JSON reports.

mod commands;
pub mod spec;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use spec::{parse_spec, parse_str, Input};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const TOOL: &str = "netlab";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{file}: {message}")]
    Io { file: String, message: String },
    #[error("{file}:{line}:{column}: {message}")]
    Parse { file: String, line: usize, column: usize, message: String },
    #[error("{file}: unknown kind {kind}")]
    UnknownKind { file: String, kind: String },
    #[error("unknown command {0:?}")]
    UnknownCommand(String),
    #[error("{command}: {message}")]
    InvalidJob { command: String, message: String },
    #[error("{file}: {message}")]
    InvalidInput { file: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Command {
    Pi1,
    Homotopy,
    CocycleCheck,
    CocycleClassify,
    NetValidate,
    Duality,
    Folium,
    Covariance,
    Superselection,
    Wf,
    Geometry,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::Pi1,
        Command::Homotopy,
        Command::CocycleCheck,
        Command::CocycleClassify,
        Command::NetValidate,
        Command::Duality,
        Command::Folium,
        Command::Covariance,
        Command::Superselection,
        Command::Wf,
        Command::Geometry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Pi1 => "pi1",
            Command::Homotopy => "homotopy",
            Command::CocycleCheck => "cocycle-check",
            Command::CocycleClassify => "cocycle-classify",
            Command::NetValidate => "net-validate",
            Command::Duality => "duality",
            Command::Folium => "folium",
            Command::Covariance => "covariance",
            Command::Superselection => "superselection",
            Command::Wf => "wf",
            Command::Geometry => "geometry",
        }
    }

    pub fn from_name(s: &str) -> Result<Command, CliError> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| CliError::UnknownCommand(s.into()))
    }
}

/// Global knobs shared by every command.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Options {
    pub seed: u64,
    /// Coset budget for π₁ certificates and node budget for deformation searches.
    pub budget: usize,
    pub tol: f64,
    pub timings: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 0, budget: 200_000, tol: 1e-9, timings: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub kind: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictLine {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl VerdictLine {
    pub fn new(name: impl Into<String>, pass: bool, witness: Option<String>) -> Self {
        VerdictLine { name: name.into(), pass, witness: if pass { None } else { witness } }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub budget: usize,
    pub tol: f64,
    pub max_dim: usize,
    pub params: BTreeMap<String, Value>,
    pub inputs: Vec<InputDigest>,
    pub pass: bool,
    pub verdicts: Vec<VerdictLine>,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn exit_code(&self) -> u8 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// One line per verdict for standard error.
    pub fn summary(&self) -> String {
        let mut s = format!("{} {}: {}\n", TOOL, self.command, if self.pass { "PASS" } else { "FAIL" });
        for v in &self.verdicts {
            s.push_str(&format!("  {} {}", if v.pass { "ok  " } else { "FAIL" }, v.name));
            if let Some(w) = &v.witness {
                s.push_str(&format!(": {w}"));
            }
            s.push('\n');
        }
        s
    }
}

pub(crate) struct Loaded {
    pub path: String,
    pub input: Input,
}

pub(crate) struct Outcome {
    pub verdicts: Vec<VerdictLine>,
    pub results: Value,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn param_override<T: std::str::FromStr>(params: &BTreeMap<String, Value>, key: &str) -> Result<Option<T>, String> {
    match params.get(key) {
        None => Ok(None),
        Some(Value::String(s)) => s.parse().map(Some).map_err(|_| format!("parameter {key}: cannot parse {s:?}")),
        Some(v) => v.to_string().parse().map(Some).map_err(|_| format!("parameter {key}: cannot parse {v}")),
    }
}

/// Runs a command on input files; `seed`, `budget` and `tol` in `params` override `opts`.
pub fn run(
    command: &str,
    inputs: &[PathBuf],
    params: &BTreeMap<String, Value>,
    opts: &Options,
) -> Result<Report, CliError> {
    let cmd = Command::from_name(command)?;
    let invalid = |message: String| CliError::InvalidJob { command: command.into(), message };
    let mut opts = opts.clone();
    if let Some(s) = param_override(params, "seed").map_err(invalid)? {
        opts.seed = s;
    }
    if let Some(b) = param_override(params, "budget").map_err(invalid)? {
        opts.budget = b;
    }
    if let Some(t) = param_override::<f64>(params, "tol").map_err(invalid)? {
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid(format!("tolerance {t} must be positive")));
        }
        opts.tol = t;
    }
    let mut own: BTreeMap<String, Value> = params.clone();
    for k in ["seed", "budget", "tol"] {
        own.remove(k);
    }
    let started = Instant::now();
    let mut loaded = Vec::new();
    let mut digests = Vec::new();
    for p in inputs {
        let (input, bytes) = spec::read_spec(p)?;
        let path = p.display().to_string();
        digests.push(InputDigest { path: path.clone(), kind: input.kind().into(), sha256: digest(&bytes) });
        loaded.push(Loaded { path, input });
    }
    let parsed = started.elapsed();
    commands::validate(cmd, &loaded, &own)?;
    let outcome = commands::dispatch(cmd, &loaded, &own, &opts)?;
    let total = started.elapsed();
    let timings_ms = opts.timings.then(|| {
        [("parse".to_string(), parsed.as_secs_f64() * 1e3), ("total".to_string(), total.as_secs_f64() * 1e3)]
            .into_iter()
            .collect()
    });
    Ok(Report {
        tool: TOOL.into(),
        version: VERSION.into(),
        command: cmd.name().into(),
        seed: opts.seed,
        budget: opts.budget,
        tol: opts.tol,
        max_dim: crate::algebra::max_dim(),
        params: own,
        inputs: digests,
        pass: outcome.verdicts.iter().all(|v| v.pass),
        verdicts: outcome.verdicts,
        results: outcome.results,
        timings_ms,
    })
}

/// Runs a job file; input paths are relative to the job file's directory.
pub fn run_job(path: &Path, opts: &Options) -> Result<Report, CliError> {
    let (input, _) = spec::read_spec(path)?;
    let Input::Job(job) = input else {
        return Err(CliError::InvalidInput {
            file: path.display().to_string(),
            message: format!("expected kind job, found {}", input.kind()),
        });
    };
    let dir = path.parent().unwrap_or(Path::new("."));
    let inputs: Vec<PathBuf> = job.inputs.iter().map(|i| dir.join(i)).collect();
    run(&job.command, &inputs, &job.params, opts)
}

/// Runs independent jobs concurrently; results come back in input order.
pub fn run_jobs(paths: &[PathBuf], opts: &Options) -> Vec<Result<Report, CliError>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = paths.iter().map(|p| s.spawn(move || run_job(p, opts))).collect();
        handles.into_iter().map(|h| h.join().expect("job thread panicked")).collect()
    })
}

/// Parses `key=value`; values that parse as JSON are kept typed, anything else is a string.
pub fn parse_param(s: &str) -> Result<(String, Value), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got {s:?}"))?;
    if k.is_empty() {
        return Err(format!("empty key in {s:?}"));
    }
    let value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.into()));
    Ok((k.into(), value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_names_round_trip() {
        for c in Command::ALL {
            assert_eq!(Command::from_name(c.name()).unwrap(), c);
        }
        assert!(matches!(Command::from_name("launch"), Err(CliError::UnknownCommand(_))));
    }

    #[test]
    fn params_parse() {
        assert_eq!(parse_param("s=3.5").unwrap(), ("s".into(), serde_json::json!(3.5)));
        assert_eq!(parse_param("base=a1").unwrap(), ("base".into(), Value::String("a1".into())));
        assert_eq!(parse_param("a=[1,2]").unwrap().1, serde_json::json!([1, 2]));
        assert!(parse_param("nokey").is_err());
        assert!(parse_param("=1").is_err());
    }

    #[test]
    fn digests_are_sha256() {
        assert_eq!(digest(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
