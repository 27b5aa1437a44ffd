//! Command-line front end for `radial-orlicz`.
//!
//! Subcommands map one-to-one onto library operations; `run` executes a
//! JSON scenario. Exit codes: 0 success, 1 a task failed at runtime, 2 bad
//! input (unknown descriptor, undeclared name, malformed scenario).
//! Inequality violations are data and never change the exit code.

pub mod error;
pub mod ops;
pub mod registry;
pub mod scenario;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use error::{CliError, CliResult};
use ops::{execute, prepare, write_output, Op, Output, TaskSpec};
use scenario::{Scenario, REFERENCE_SUITE};

#[derive(Debug, Parser)]
#[command(name = "rorlicz", version, about = "Dual Orlicz–Brunn–Minkowski toolkit for star bodies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Output file (.json or .csv); prints JSON to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Volume of a body by spherical quadrature.
    Volume {
        /// Body descriptor: ball:n:r, fourier:base:k:a…, ellipsoid:d1,…,dn, grid:path.
        #[arg(long)]
        body: String,
        /// Rule descriptor n:kind:resolution[:seed].
        #[arg(long)]
        rule: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Radial Orlicz sum of two bodies, sampled on a probe rule as a grid file.
    Sum {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        body: String,
        #[arg(long)]
        body2: String,
        /// Deterministic rule whose nodes become the grid.
        #[arg(long)]
        probe: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Dual Orlicz mixed volume of K and L for a unary function (or `log`).
    MixedVolume {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        body: String,
        #[arg(long)]
        body2: String,
        #[arg(long)]
        rule: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// One inequality check: dual-orlicz-bm, dual-log-bm,
    /// dual-orlicz-minkowski, dual-log-minkowski or polar-log.
    Check {
        #[arg(long)]
        name: String,
        /// For polar-log: ball:n:r, ellipsoid:a1,…,an or polytope:x,y;… supports.
        #[arg(long)]
        body: String,
        #[arg(long)]
        body2: String,
        /// Orlicz function; `log-t:t` for dual-log-bm.
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        rule: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Numeric and analytic first variation of volume along K +_ε L.
    FirstVariation {
        #[arg(long)]
        phi: String,
        /// Defaults to --phi.
        #[arg(long)]
        phi2: Option<String>,
        #[arg(long)]
        body: String,
        #[arg(long)]
        body2: String,
        #[arg(long)]
        rule: String,
        /// Comma-separated ε values; defaults to 1e-2·2^-k down to 1e-6.
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Radial M-sum sampled on a probe rule as a grid file.
    MAdd {
        /// mset:lp-curve:p:res, mset:phi:<function>:res or mset:path.json.
        #[arg(long)]
        mset: String,
        #[arg(long)]
        body: String,
        #[arg(long)]
        body2: String,
        #[arg(long)]
        probe: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Radial function of the Orlicz intersection body in one direction.
    IntersectionBody {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        body: String,
        /// Comma-separated direction, normalized internally.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        direction: Vec<f64>,
        #[arg(long)]
        rule: String,
        /// Half-width of the excluded band |u·v| < eta.
        #[arg(long, default_value_t = 1e-3)]
        eta: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run a JSON scenario, or the bundled suite with --suite reference-suite.
    Run {
        scenario: Option<PathBuf>,
        #[arg(long)]
        suite: Option<String>,
        /// Directory for task artifacts and run-summary.json.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn spec(op: Op, bodies: &[&String]) -> TaskSpec {
    let mut s = TaskSpec::new(op);
    s.bodies = bodies.iter().map(|b| b.to_string()).collect();
    s
}

fn single(spec: TaskSpec, out: &OutArg) -> CliResult<()> {
    let job = prepare(&spec)?;
    let output = execute(&job)?;
    match &out.out {
        Some(path) => {
            write_output(path, &output)?;
            println!("{}", serde_json::to_string(&ops::headline(&output))?);
        }
        None => {
            let value = match &output {
                Output::Json(v) => v.clone(),
                Output::Sweep { records, summary } => serde_json::json!({ "summary": summary, "records": records }),
            };
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
    }
    Ok(())
}

fn dispatch(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Volume { body, rule, out } => {
            let mut s = spec(Op::Volume, &[&body]);
            s.rule = Some(rule);
            single(s, &out)?;
        }
        Command::Sum { phi, body, body2, probe, out } => {
            let mut s = spec(Op::Sum, &[&body, &body2]);
            s.phi = Some(phi);
            s.probe = Some(probe);
            single(s, &out)?;
        }
        Command::MixedVolume { phi, body, body2, rule, out } => {
            let mut s = spec(Op::MixedVolume, &[&body, &body2]);
            s.phi = Some(phi);
            s.rule = Some(rule);
            single(s, &out)?;
        }
        Command::Check { name, body, body2, phi, rule, out } => {
            let mut s = spec(Op::Check, &[&body, &body2]);
            s.check = Some(name);
            s.phi = phi;
            s.rule = Some(rule);
            single(s, &out)?;
        }
        Command::FirstVariation { phi, phi2, body, body2, rule, eps, out } => {
            let mut s = spec(Op::FirstVariation, &[&body, &body2]);
            s.phi = Some(phi);
            s.phi2 = phi2;
            s.rule = Some(rule);
            s.eps = eps;
            single(s, &out)?;
        }
        Command::MAdd { mset, body, body2, probe, out } => {
            let mut s = spec(Op::MAdd, &[&body, &body2]);
            s.mset = Some(mset);
            s.probe = Some(probe);
            single(s, &out)?;
        }
        Command::IntersectionBody { phi, body, direction, rule, eta, out } => {
            let mut s = spec(Op::IntersectionBody, &[&body]);
            s.phi = Some(phi);
            s.direction = Some(direction);
            s.rule = Some(rule);
            s.eta = Some(eta);
            single(s, &out)?;
        }
        Command::Run { scenario, suite, out_dir } => {
            let sc = match (scenario, suite.as_deref()) {
                (Some(path), None) => Scenario::read(&path)?,
                (None, Some("reference-suite")) => Scenario::parse(REFERENCE_SUITE)?,
                (None, Some(other)) => return Err(CliError::Invalid(format!("unknown bundled suite '{other}'"))),
                _ => return Err(CliError::Invalid("give either a scenario path or --suite".to_string())),
            };
            let summary = sc.run(&out_dir)?;
            for t in &summary.tasks {
                let status = if t.ok { "ok" } else { "FAILED" };
                println!("{status:6} {:40} {}", t.label, t.error.clone().unwrap_or_else(|| t.headline.to_string()));
            }
            println!(
                "{} tasks, {} failed, {} inequality violations",
                summary.tasks.len(),
                summary.failed,
                summary.violations
            );
            return Ok(summary.exit_code());
        }
    }
    Ok(0)
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
