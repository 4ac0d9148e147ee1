use serde::Serialize;

use crate::analysis::{replicate_seeds, stats::covariance_with_se};
use crate::environment::{regime_covariance_theoretical, sample_environment, EnvironmentSpec};
use crate::error::{Error, Result};
use crate::geometry::{Edge, Vertex};
use crate::runner::Workers;

#[derive(Debug, Clone, PartialEq)]
pub struct MixingConfig {
    pub environment: EnvironmentSpec,
    pub lags: Vec<f64>,
    pub replicates: usize,
    pub base_seed: u64,
}

/// Empirical `Cov[speed(e, 0), speed(e, s)]` across independent realizations
/// next to its closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingSeries {
    pub lags: Vec<f64>,
    pub empirical: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub theoretical: Vec<f64>,
    pub replicates: usize,
}

impl MixingSeries {
    /// `|empirical - theoretical| / se` per lag.
    pub fn z_scores(&self) -> Vec<f64> {
        self.empirical
            .iter()
            .zip(&self.theoretical)
            .zip(&self.standard_errors)
            .map(|((e, t), se)| {
                if *se > 0.0 {
                    (e - t).abs() / se
                } else if e == t {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .collect()
    }
}

pub fn mixing_diagnostic(cfg: &MixingConfig, workers: Workers) -> Result<MixingSeries> {
    cfg.environment.validate()?;
    if cfg.lags.iter().any(|&s| !(s >= 0.0 && s.is_finite())) {
        return Err(Error::config("lags must be finite and >= 0"));
    }
    if cfg.lags.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::config("lags must be strictly increasing"));
    }
    if cfg.replicates < 2 {
        return Err(Error::config("need at least 2 replicates"));
    }
    let edge = Edge::new(Vertex::origin(cfg.environment.dim), 0)?;
    let seeds = replicate_seeds(cfg.base_seed, cfg.replicates);
    let rows = workers.map(&seeds, |_, seed| {
        let env = sample_environment(&cfg.environment.with_seed(seed))?;
        let x0 = env.speed(&edge, 0.0);
        Ok((
            x0,
            cfg.lags
                .iter()
                .map(|&s| env.speed(&edge, s))
                .collect::<Vec<_>>(),
        ))
    })?;
    let x0: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let (empirical, standard_errors) = (0..cfg.lags.len())
        .map(|j| covariance_with_se(&x0, &rows.iter().map(|r| r.1[j]).collect::<Vec<_>>()))
        .unzip();
    Ok(MixingSeries {
        lags: cfg.lags.clone(),
        empirical,
        standard_errors,
        theoretical: cfg
            .lags
            .iter()
            .map(|&s| regime_covariance_theoretical(&cfg.environment, s))
            .collect(),
        replicates: cfg.replicates,
    })
}
