//! `tdfpp`: run one experiment from a JSON config and write a JSON result
//! envelope plus a CSV sidecar.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use log::{debug, info};
use serde::Serialize;
use tdfpp::analysis::{
    estimate_shape, estimate_speed, mixing_diagnostic, oracle_check, replicate_seeds,
    verify_hypotheses, HypothesisReport, OracleReport,
};
use tdfpp::{Error, Workers};

use config::{Experiment, RunConfig};
use output::{write_results, ResultEnvelope, Tabular, TOOL};

#[derive(Parser)]
#[command(
    name = "tdfpp",
    version,
    about = "First passage percolation in time-dependent environments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Directional passage rate X_{0,n}/n over a grid of n.
    Speed(Common),
    /// Reachable sets S_t, radii, hulls and discrepancies.
    Shape(Common),
    /// Randomized checks of subadditivity, time shift, FIFO and bounds.
    Verify(Common),
    /// Speed covariance across lags against its closed form.
    Mixing(Common),
    /// Solver against exhaustive enumeration on small queries.
    OracleCheck(Common),
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: config "out", else "out").
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: config "workers", else available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    /// Overrides the base seed.
    #[arg(long)]
    seed: Option<u64>,
}

enum Failure {
    Config(String),
    Verification { message: String, seed: Option<u64> },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TDFPP_LOG", "error")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Verification { .. } => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Config(msg) => format!("error: {msg}"),
            Failure::Verification {
                message,
                seed: Some(seed),
            } => {
                format!("verification failed: {message}\nreproduction seed: {seed}")
            }
            Failure::Verification {
                message,
                seed: None,
            } => format!("verification failed: {message}"),
        }
    }
}

fn verify_verdict(report: &HypothesisReport) -> Result<(), Failure> {
    if report.passed() {
        return Ok(());
    }
    Err(Failure::Verification {
        message: "hypothesis violations found".into(),
        seed: report.reproduction_seed(),
    })
}

fn oracle_verdict(reports: &[OracleReport]) -> Result<(), Failure> {
    match reports.iter().find(|r| !r.passed()) {
        None => Ok(()),
        Some(bad) => Err(Failure::Verification {
            message: format!("{} mismatches for {:?}", bad.mismatches, bad.model),
            seed: bad.first_mismatch_seed,
        }),
    }
}

fn run(command: Command) -> Result<(), Failure> {
    let (experiment, args) = match command {
        Command::Speed(a) => (Experiment::Speed, a),
        Command::Shape(a) => (Experiment::Shape, a),
        Command::Verify(a) => (Experiment::Verify, a),
        Command::Mixing(a) => (Experiment::Mixing, a),
        Command::OracleCheck(a) => (Experiment::OracleCheck, a),
    };
    let mut cfg = RunConfig::load(&args.config).map_err(Failure::Config)?;
    if cfg.experiment != experiment {
        return Err(Failure::Config(format!(
            "config is for \"{}\" but the subcommand is \"{experiment}\"",
            cfg.experiment
        )));
    }
    if let Some(seed) = args.seed {
        cfg.base_seed = Some(seed);
    }
    if args.workers.is_some() {
        cfg.workers = args.workers;
    }
    if args.out.is_some() {
        cfg.out = args.out;
    }
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let workers = Workers::new(cfg.workers.unwrap_or(0));
    info!(
        "{experiment}: {} worker(s), base seed {}",
        workers.count(),
        cfg.base_seed()
    );
    debug!("config: {cfg:?}");

    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    match experiment {
        Experiment::Speed => {
            let c = cfg.speed().map_err(Failure::Config)?;
            let payload = estimate_speed(&c, workers)?;
            finish(&cfg, &out, started, clock, c.replicates, &payload)?;
            println!(
                "limit estimate {:.6} +/- {:.6}",
                payload.limit_estimate, payload.half_width
            );
        }
        Experiment::Shape => {
            let c = cfg.shape().map_err(Failure::Config)?;
            let payload = estimate_shape(&c, workers)?;
            finish(&cfg, &out, started, clock, c.replicates, &payload)?;
            let ok = payload.estimates.iter().filter(|e| e.sandwich_ok).count();
            println!(
                "{ok}/{} reachable sets within the sandwich",
                payload.estimates.len()
            );
        }
        Experiment::Verify => {
            let c = cfg.verify().map_err(Failure::Config)?;
            let payload = verify_hypotheses(&c, workers)?;
            finish(&cfg, &out, started, clock, c.samples, &payload)?;
            for check in &payload.checks {
                println!(
                    "{:?}: {} violations in {} samples (max {:.3e})",
                    check.check, check.violations, check.samples, check.max_violation
                );
            }
            verify_verdict(&payload)?;
        }
        Experiment::Mixing => {
            let c = cfg.mixing().map_err(Failure::Config)?;
            let payload = mixing_diagnostic(&c, workers)?;
            finish(&cfg, &out, started, clock, c.replicates, &payload)?;
            let worst = payload.z_scores().into_iter().fold(0.0, f64::max);
            println!("max |z| = {worst:.3}");
        }
        Experiment::OracleCheck => {
            let configs = cfg.oracle();
            let payload = configs
                .iter()
                .map(|c| oracle_check(c, workers))
                .collect::<Result<Vec<_>, _>>()?;
            finish(&cfg, &out, started, clock, configs[0].queries, &payload)?;
            let worst = payload.iter().map(|r| r.max_abs_diff).fold(0.0, f64::max);
            println!("max |diff| = {worst:.3e}");
            oracle_verdict(&payload)?;
        }
    }
    Ok(())
}

fn finish<P: Serialize + Tabular>(
    cfg: &RunConfig,
    out: &std::path::Path,
    started: u64,
    clock: Instant,
    replicates: usize,
    payload: &P,
) -> Result<(), Failure> {
    let envelope = ResultEnvelope {
        tool: TOOL,
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        started_unix_seconds: started,
        wall_clock_seconds: clock.elapsed().as_secs_f64(),
        replicate_seeds: replicate_seeds(cfg.base_seed(), replicates),
        payload,
    };
    let (json, csv) = write_results(out, &envelope).map_err(Failure::Config)?;
    info!("wrote {} and {}", json.display(), csv.display());
    Ok(())
}
