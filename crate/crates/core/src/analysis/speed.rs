use serde::Serialize;

use crate::analysis::{replicate_seeds, stats::mean_std};
use crate::environment::{sample_environment, EnvironmentKind, EnvironmentSpec};
use crate::error::{Error, Result};
use crate::geometry::Vertex;
use crate::runner::Workers;
use crate::solver::directional_profile;
use crate::travel::{TravelModel, Traversal};

#[derive(Debug, Clone, PartialEq)]
pub struct SpeedConfig {
    pub environment: EnvironmentSpec,
    pub model: TravelModel,
    pub direction: Vertex,
    pub n_grid: Vec<u64>,
    pub replicates: usize,
    pub base_seed: u64,
    /// Additive constant of the envelope. Defaults to `C` for Block and 0
    /// for Poisson environments.
    pub envelope_constant: Option<f64>,
}

impl SpeedConfig {
    pub fn envelope_constant(&self) -> f64 {
        self.envelope_constant
            .unwrap_or(match self.environment.kind {
                EnvironmentKind::Block { epoch } => epoch,
                EnvironmentKind::Poisson { .. } => 0.0,
            })
    }

    fn validate(&self) -> Result<()> {
        self.environment.validate()?;
        if self.direction.dim() != self.environment.dim {
            return Err(Error::config(
                "direction dimension does not match environment",
            ));
        }
        if self.direction.coords().iter().all(|&c| c == 0) {
            return Err(Error::config("direction must be non-zero"));
        }
        if self.n_grid.is_empty() || self.n_grid[0] == 0 {
            return Err(Error::config(
                "n_grid must be non-empty and start at n >= 1",
            ));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("n_grid must be strictly increasing"));
        }
        if self.replicates < 2 {
            return Err(Error::config("need at least 2 replicates"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedRow {
    pub n: u64,
    /// Mean of `X_{0,n} / n` over replicates.
    pub mean: f64,
    pub std: f64,
    pub stderr: f64,
    pub fekete_envelope: f64,
    pub replicates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedEstimate {
    pub direction: Vertex,
    pub model: TravelModel,
    pub envelope_constant: f64,
    pub rows: Vec<SpeedRow>,
    /// Mean at the largest `n`.
    pub limit_estimate: f64,
    /// 95% normal half-width at the largest `n`.
    pub half_width: f64,
    /// `X_{0,n} / n` per replicate (outer) and grid point (inner).
    pub samples: Vec<Vec<f64>>,
}

/// `min_{k <= n} (mean_k * k + c) / k` over the grid, where `mean_k` estimates
/// `E[X_{0,k}] / k`. Non-increasing by construction.
pub fn fekete_envelope(n_grid: &[u64], means: &[f64], constant: f64) -> Vec<f64> {
    let mut best = f64::INFINITY;
    n_grid
        .iter()
        .zip(means)
        .map(|(&n, &m)| {
            let n = n as f64;
            best = best.min((m * n + constant) / n);
            best
        })
        .collect()
}

/// Monte Carlo estimate of the directional passage rate `X_{0,n}/n` from
/// independent realizations, one search per replicate.
pub fn estimate_speed(cfg: &SpeedConfig, workers: Workers) -> Result<SpeedEstimate> {
    cfg.validate()?;
    let seeds = replicate_seeds(cfg.base_seed, cfg.replicates);
    let samples = workers.map(&seeds, |_, seed| {
        let env = sample_environment(&cfg.environment.with_seed(seed))?;
        let net = Traversal::new(env, cfg.model);
        let xs = directional_profile(&net, &cfg.direction, &cfg.n_grid, 0.0)?;
        Ok(xs
            .into_iter()
            .zip(&cfg.n_grid)
            .map(|(x, &n)| x / n as f64)
            .collect::<Vec<f64>>())
    })?;

    let r = cfg.replicates;
    let stats: Vec<(f64, f64)> = (0..cfg.n_grid.len())
        .map(|j| mean_std(&samples.iter().map(|s| s[j]).collect::<Vec<_>>()))
        .collect();
    let means: Vec<f64> = stats.iter().map(|s| s.0).collect();
    let constant = cfg.envelope_constant();
    let envelope = fekete_envelope(&cfg.n_grid, &means, constant);
    let rows: Vec<SpeedRow> = cfg
        .n_grid
        .iter()
        .zip(&stats)
        .zip(envelope)
        .map(|((&n, &(mean, std)), fekete_envelope)| SpeedRow {
            n,
            mean,
            std,
            stderr: std / (r as f64).sqrt(),
            fekete_envelope,
            replicates: r,
        })
        .collect();
    let last = rows.last().unwrap();
    Ok(SpeedEstimate {
        direction: cfg.direction.clone(),
        model: cfg.model,
        envelope_constant: constant,
        limit_estimate: last.mean,
        half_width: 1.96 * last.stderr,
        rows,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::FieldSpec;

    #[test]
    fn envelope_is_running_minimum() {
        let env = fekete_envelope(&[1, 2, 4], &[3.0, 1.0, 2.0], 1.0);
        assert_eq!(env, vec![4.0, 1.5, 1.5]);
    }

    #[test]
    fn degenerate_field_has_no_spread() {
        let cfg = SpeedConfig {
            environment: EnvironmentSpec::block(2, FieldSpec::uniform(1.0), 1.0, 0),
            model: TravelModel::Departure,
            direction: Vertex::from([1, -2]),
            n_grid: vec![1, 3, 6],
            replicates: 4,
            base_seed: 9,
            envelope_constant: None,
        };
        let est = estimate_speed(&cfg, Workers::single()).unwrap();
        for row in &est.rows {
            assert_eq!(row.mean, 3.0);
            assert_eq!(row.std, 0.0);
        }
        assert_eq!(est.envelope_constant, 1.0);
    }

    #[test]
    fn means_within_bounds_and_envelope_monotone() {
        let cfg = SpeedConfig {
            environment: EnvironmentSpec::poisson(2, FieldSpec::uniform(2.0), 1.0, 0),
            model: TravelModel::Integral,
            direction: Vertex::from([1, 1]),
            n_grid: vec![2, 4, 8],
            replicates: 6,
            base_seed: 3,
            envelope_constant: None,
        };
        let est = estimate_speed(&cfg, Workers::new(2)).unwrap();
        for row in &est.rows {
            assert!(row.mean >= 1.0 - 1e-9 && row.mean <= 4.0 + 1e-9);
        }
        assert!(est
            .rows
            .windows(2)
            .all(|w| w[1].fekete_envelope <= w[0].fekete_envelope));
        assert_eq!(est.envelope_constant, 0.0);
    }

    #[test]
    fn rejects_bad_grids() {
        let mut cfg = SpeedConfig {
            environment: EnvironmentSpec::block(2, FieldSpec::uniform(2.0), 1.0, 0),
            model: TravelModel::Integral,
            direction: Vertex::from([1, 0]),
            n_grid: vec![4, 2],
            replicates: 4,
            base_seed: 0,
            envelope_constant: None,
        };
        assert!(estimate_speed(&cfg, Workers::single()).is_err());
        cfg.n_grid = vec![2, 4];
        cfg.replicates = 1;
        assert!(estimate_speed(&cfg, Workers::single()).is_err());
        cfg.replicates = 2;
        cfg.direction = Vertex::from([0, 0]);
        assert!(estimate_speed(&cfg, Workers::single()).is_err());
    }
}
