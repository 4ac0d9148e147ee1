use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{replicate_seeds, VIOLATION_TOLERANCE};
use crate::environment::{sample_environment, EnvironmentSpec};
use crate::error::{Error, Result};
use crate::geometry::{l1_distance, Vertex};
use crate::runner::Workers;
use crate::seed::{self, stream};
use crate::solver::{brute_force_first_passage, first_passage, PassageQuery, BRUTE_FORCE_CAP};
use crate::travel::{Network, TravelModel, Traversal};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub environment: EnvironmentSpec,
    pub model: TravelModel,
    pub queries: usize,
    pub base_seed: u64,
    /// Queries have `1 <= |A-B|_1 <= max_distance`.
    pub max_distance: u64,
    /// Start times are drawn from `[0, max_start)`.
    pub max_start: f64,
}

impl OracleConfig {
    pub fn new(
        environment: EnvironmentSpec,
        model: TravelModel,
        queries: usize,
        base_seed: u64,
    ) -> Self {
        OracleConfig {
            environment,
            model,
            queries,
            base_seed,
            max_distance: 3,
            max_start: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub model: TravelModel,
    pub queries: usize,
    pub max_abs_diff: f64,
    /// Queries with `|first_passage - brute force| > VIOLATION_TOLERANCE`.
    pub mismatches: usize,
    pub first_mismatch_seed: Option<u64>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

/// Compares the solver with the exhaustive walk enumeration on random small
/// queries, one realization per query. The oracle gets `ceil(L^2 |A-B|_1)`
/// edges.
pub fn oracle_check(cfg: &OracleConfig, workers: Workers) -> Result<OracleReport> {
    cfg.environment.validate()?;
    if cfg.queries == 0 || cfg.max_distance == 0 {
        return Err(Error::config("need at least 1 query and max_distance >= 1"));
    }
    if !(cfg.max_start >= 0.0 && cfg.max_start.is_finite()) {
        return Err(Error::config("max_start must be finite and >= 0"));
    }
    let dim = cfg.environment.dim;
    let reach =
        i64::try_from(cfg.max_distance).map_err(|_| Error::config("max_distance too large"))?;
    let seeds = replicate_seeds(cfg.base_seed, cfg.queries);
    let diffs = workers.map(&seeds, |_, seed| {
        let net = Traversal::new(
            sample_environment(&cfg.environment.with_seed(seed))?,
            cfg.model,
        );
        let mut rng = ChaCha8Rng::seed_from_u64(seed::substream(seed, stream::INSTANCE));
        let from = Vertex::new((0..dim).map(|_| rng.random_range(-reach..=reach)));
        let to = loop {
            let b = Vertex::new(
                from.coords()
                    .iter()
                    .map(|&c| c + rng.random_range(-reach..=reach)),
            );
            let d = l1_distance(&from, &b)?;
            if (1..=cfg.max_distance).contains(&d) {
                break b;
            }
        };
        let q = PassageQuery::new(from, to, rng.random::<f64>() * cfg.max_start);
        let l = net.bound();
        let max_edges = (l * l * l1_distance(&q.from, &q.to)? as f64).ceil() as usize;
        let fast = first_passage(&net, &q)?;
        let slow = brute_force_first_passage(&net, &q, max_edges, BRUTE_FORCE_CAP)?;
        Ok((fast - slow).abs())
    })?;
    let mut report = OracleReport {
        model: cfg.model,
        queries: cfg.queries,
        max_abs_diff: 0.0,
        mismatches: 0,
        first_mismatch_seed: None,
    };
    for (d, &seed) in diffs.iter().zip(&seeds) {
        report.max_abs_diff = report.max_abs_diff.max(*d);
        if *d > VIOLATION_TOLERANCE {
            report.mismatches += 1;
            report.first_mismatch_seed.get_or_insert(seed);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::FieldSpec;

    #[test]
    fn small_run_matches() {
        for spec in [
            EnvironmentSpec::block(2, FieldSpec::uniform(2.0), 1.0, 0),
            EnvironmentSpec::poisson(2, FieldSpec::two_point(2.0, 0.5), 1.0, 0),
        ] {
            for model in [TravelModel::Integral, TravelModel::Departure] {
                let rep = oracle_check(&OracleConfig::new(spec, model, 50, 4), Workers::single())
                    .unwrap();
                assert!(rep.passed(), "{rep:?}");
                assert_eq!(rep.queries, 50);
            }
        }
    }

    #[test]
    fn unit_field_is_exact() {
        let spec = EnvironmentSpec::block(2, FieldSpec::uniform(1.0), 1.0, 0);
        let rep = oracle_check(
            &OracleConfig::new(spec, TravelModel::Departure, 30, 1),
            Workers::single(),
        )
        .unwrap();
        assert_eq!(rep.max_abs_diff, 0.0);
    }
}
