use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use tdfpp::analysis::{HypothesisReport, MixingSeries, OracleReport, ShapeReport, SpeedEstimate};

use crate::config::RunConfig;

pub const TOOL: &str = "tdfpp";

/// Everything written for one run. Only `payload` is a deterministic
/// function of `config`; the timing fields vary between runs.
#[derive(Debug, Serialize)]
pub struct ResultEnvelope<'a, P: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: &'a RunConfig,
    pub started_unix_seconds: u64,
    pub wall_clock_seconds: f64,
    pub replicate_seeds: Vec<u64>,
    pub payload: &'a P,
}

#[derive(Serialize)]
struct SpeedCsv {
    n: u64,
    mean: f64,
    std: f64,
    stderr: f64,
    fekete_envelope: f64,
    replicates: usize,
}

#[derive(Serialize)]
struct ShapeCsv {
    t: f64,
    mode: tdfpp::StartTimeMode,
    inner_radius: f64,
    outer_radius: f64,
    n_points: usize,
}

#[derive(Serialize)]
struct MixingCsv {
    lag: f64,
    empirical_cov: f64,
    stderr: f64,
    theoretical_cov: f64,
}

#[derive(Serialize)]
struct VerifyCsv {
    model: tdfpp::TravelModel,
    check: tdfpp::analysis::CheckKind,
    samples: usize,
    violations: usize,
    max_violation: f64,
    first_violation_seed: Option<u64>,
}

/// Tabular view of a payload, one row per statistic.
pub trait Tabular {
    fn write_rows<W: Write>(&self, out: &mut csv::Writer<W>) -> csv::Result<()>;
}

impl Tabular for SpeedEstimate {
    fn write_rows<W: Write>(&self, out: &mut csv::Writer<W>) -> csv::Result<()> {
        for r in &self.rows {
            out.serialize(SpeedCsv {
                n: r.n,
                mean: r.mean,
                std: r.std,
                stderr: r.stderr,
                fekete_envelope: r.fekete_envelope,
                replicates: r.replicates,
            })?;
        }
        Ok(())
    }
}

impl Tabular for ShapeReport {
    fn write_rows<W: Write>(&self, out: &mut csv::Writer<W>) -> csv::Result<()> {
        for e in &self.estimates {
            out.serialize(ShapeCsv {
                t: e.t,
                mode: e.mode,
                inner_radius: e.inner_radius,
                outer_radius: e.outer_radius,
                n_points: e.n_points,
            })?;
        }
        Ok(())
    }
}

impl Tabular for MixingSeries {
    fn write_rows<W: Write>(&self, out: &mut csv::Writer<W>) -> csv::Result<()> {
        for j in 0..self.lags.len() {
            out.serialize(MixingCsv {
                lag: self.lags[j],
                empirical_cov: self.empirical[j],
                stderr: self.standard_errors[j],
                theoretical_cov: self.theoretical[j],
            })?;
        }
        Ok(())
    }
}

impl Tabular for HypothesisReport {
    fn write_rows<W: Write>(&self, out: &mut csv::Writer<W>) -> csv::Result<()> {
        for c in &self.checks {
            out.serialize(VerifyCsv {
                model: self.model,
                check: c.check,
                samples: c.samples,
                violations: c.violations,
                max_violation: c.max_violation,
                first_violation_seed: c.first_violation_seed,
            })?;
        }
        Ok(())
    }
}

impl Tabular for Vec<OracleReport> {
    fn write_rows<W: Write>(&self, out: &mut csv::Writer<W>) -> csv::Result<()> {
        for r in self {
            out.serialize(r)?;
        }
        Ok(())
    }
}

/// Writes `<out>/<experiment>.json` and `<out>/<experiment>.csv`.
pub fn write_results<P: Serialize + Tabular>(
    out: &Path,
    envelope: &ResultEnvelope<'_, P>,
) -> Result<(PathBuf, PathBuf), String> {
    fs::create_dir_all(out).map_err(|e| format!("cannot create {}: {e}", out.display()))?;
    let stem = envelope.config.experiment.to_string();
    let json = out.join(format!("{stem}.json"));
    let csv_path = out.join(format!("{stem}.csv"));
    let io = |p: &Path, e: &dyn std::fmt::Display| format!("cannot write {}: {e}", p.display());

    let file = File::create(&json).map_err(|e| io(&json, &e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, envelope).map_err(|e| io(&json, &e))?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|e| io(&json, &e))?;

    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| io(&csv_path, &e))?;
    envelope
        .payload
        .write_rows(&mut w)
        .map_err(|e| io(&csv_path, &e))?;
    w.flush().map_err(|e| io(&csv_path, &e))?;
    Ok((json, csv_path))
}
