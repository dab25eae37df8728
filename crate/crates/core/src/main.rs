use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use netlab::cli::{self, CliError, Options, Report};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "netlab", version, about = "Net cohomology, poset homotopy, causal lattices and wave front sets")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Input spec files.
    inputs: Vec<PathBuf>,
    /// Command parameter as key=value; repeatable.
    #[arg(short = 'p', long = "param", value_parser = cli::parse_param)]
    params: Vec<(String, Value)>,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Clone)]
struct Global {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Coset budget for π₁ certificates and node budget for homotopy searches.
    #[arg(long, default_value_t = 200_000)]
    budget: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock timings (reports are then no longer reproducible).
    #[arg(long)]
    timings: bool,
}

impl Global {
    fn options(&self) -> Options {
        Options { seed: self.seed, budget: self.budget, tol: self.tol, timings: self.timings }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Fundamental group of a poset or of a lattice's diamond poset.
    Pi1(Common),
    /// Homotopy of two paths given as params a and b.
    Homotopy(Common),
    /// Validate a cocycle.
    CocycleCheck(Common),
    /// Path independence and triviality of a cocycle.
    CocycleClassify(Common),
    /// Isotony, causality, irreducibility and local definiteness of a net.
    NetValidate(Common),
    /// Haag duality, or punctured duality with param puncture.
    Duality(Common),
    /// Folium comparison of states omega and sigma over a net.
    Folium(Common),
    /// Functor laws, isometry covariance, field naturality and axioms on lattices.
    Covariance(Common),
    /// Unit and composition laws of superselection maps along a lattice chain.
    Superselection(Common),
    /// Wave front estimate of a grid, or product bound of two grids.
    Wf(Common),
    /// Geometric lemmas on a lattice.
    Geometry(Common),
    /// Run job files, possibly concurrently; prints a JSON array of reports.
    Run {
        jobs: Vec<PathBuf>,
        #[command(flatten)]
        global: Global,
    },
    /// Print the canonical form of a spec file.
    Canonical { file: PathBuf },
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io { file: p.display().to_string(), message: e.to_string() }),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("netlab: {e}");
    ExitCode::from(e.exit_code())
}

fn single(name: &str, c: Common) -> ExitCode {
    let params: BTreeMap<String, Value> = c.params.into_iter().collect();
    let opts = c.global.options();
    match cli::run(name, &c.inputs, &params, &opts) {
        Ok(r) => {
            eprint!("{}", r.summary());
            if let Err(e) = emit(&r.to_json(), &c.global.out) {
                return fail(&e);
            }
            ExitCode::from(r.exit_code())
        }
        Err(e) => fail(&e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common) = match cli.command {
        Cmd::Pi1(c) => ("pi1", c),
        Cmd::Homotopy(c) => ("homotopy", c),
        Cmd::CocycleCheck(c) => ("cocycle-check", c),
        Cmd::CocycleClassify(c) => ("cocycle-classify", c),
        Cmd::NetValidate(c) => ("net-validate", c),
        Cmd::Duality(c) => ("duality", c),
        Cmd::Folium(c) => ("folium", c),
        Cmd::Covariance(c) => ("covariance", c),
        Cmd::Superselection(c) => ("superselection", c),
        Cmd::Wf(c) => ("wf", c),
        Cmd::Geometry(c) => ("geometry", c),
        Cmd::Run { jobs, global } => {
            let results = cli::run_jobs(&jobs, &global.options());
            let mut code = 0;
            let mut reports: Vec<&Report> = Vec::new();
            for (p, r) in jobs.iter().zip(&results) {
                match r {
                    Ok(r) => {
                        eprint!("{}: {}", p.display(), r.summary());
                        code = code.max(r.exit_code());
                        reports.push(r);
                    }
                    Err(e) => {
                        eprintln!("netlab: {}: {e}", p.display());
                        code = code.max(e.exit_code());
                    }
                }
            }
            if code == 2 {
                return ExitCode::from(2);
            }
            let mut text = serde_json::to_string_pretty(&reports).expect("reports serialize");
            text.push('\n');
            if let Err(e) = emit(&text, &global.out) {
                return fail(&e);
            }
            return ExitCode::from(code);
        }
        Cmd::Canonical { file } => {
            return match cli::parse_spec(&file) {
                Ok(i) => {
                    print!("{}", i.canonical());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            };
        }
    };
    single(name, common)
}
