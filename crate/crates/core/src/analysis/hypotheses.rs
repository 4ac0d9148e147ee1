//! Randomized checks of the structural properties that the subadditive
//! limit theorems require of `X`.
//!
//! Each sample draws a fresh realization and one random instance per check.
//! A check fails on a sample when its inequality is violated by more than
//! [`VIOLATION_TOLERANCE`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::replicate_seeds;
use crate::environment::{sample_environment, Environment, EnvironmentKind, EnvironmentSpec};
use crate::error::{Error, Result};
use crate::geometry::{l1_distance, Edge, Vertex};
use crate::runner::Workers;
use crate::seed::{self, stream};
use crate::solver::{first_passage, PassageQuery};
use crate::travel::{Network, TravelModel, Traversal};

pub const VIOLATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `X^t(A,B) <= X^t(A,C) + X^{t + X^t(A,C)}(C,B)`.
    Subadditivity,
    /// `X^t(A,B) <= L` for adjacent `A, B`.
    AdjacentBound,
    /// `X^t(A,B) <= X^{t+s}(A,B) + s`.
    TimeShift,
    /// `arrival(e, t) <= arrival(e, t + s)`.
    Fifo,
    /// `|A-B|_1 / L <= X^t(A,B) <= L |A-B|_1`.
    DeterministicBounds,
}

impl CheckKind {
    pub const ALL: [CheckKind; 5] = [
        CheckKind::Subadditivity,
        CheckKind::AdjacentBound,
        CheckKind::TimeShift,
        CheckKind::Fifo,
        CheckKind::DeterministicBounds,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub check: CheckKind,
    pub samples: usize,
    pub violations: usize,
    /// Largest amount by which the inequality failed (0 if it always held).
    pub max_violation: f64,
    /// Realization seed of the first violating sample.
    pub first_violation_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub model: TravelModel,
    pub checks: Vec<CheckOutcome>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.violations == 0)
    }

    pub fn check(&self, kind: CheckKind) -> &CheckOutcome {
        self.checks
            .iter()
            .find(|c| c.check == kind)
            .expect("every check is reported")
    }

    /// Seed reproducing the first failure, if any.
    pub fn reproduction_seed(&self) -> Option<u64> {
        self.checks.iter().find_map(|c| c.first_violation_seed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub environment: EnvironmentSpec,
    pub model: TravelModel,
    pub samples: usize,
    pub base_seed: u64,
    /// Instance points are drawn from `[-box_radius, box_radius]^d`.
    pub box_radius: i64,
    /// Start times are drawn from `[0, max_start)`.
    pub max_start: f64,
}

impl VerifyConfig {
    pub fn new(
        environment: EnvironmentSpec,
        model: TravelModel,
        samples: usize,
        base_seed: u64,
    ) -> Self {
        VerifyConfig {
            environment,
            model,
            samples,
            base_seed,
            box_radius: 3,
            max_start: 10.0,
        }
    }
}

pub fn verify_hypotheses(cfg: &VerifyConfig, workers: Workers) -> Result<HypothesisReport> {
    let model = cfg.model;
    verify_network(cfg, workers, move |env| Traversal::new(env, model))
}

/// Runs the checks against networks produced by `build` from each sampled
/// realization. Lets a test harness inject faults.
pub fn verify_network<N, F>(
    cfg: &VerifyConfig,
    workers: Workers,
    build: F,
) -> Result<HypothesisReport>
where
    N: Network,
    F: Fn(Environment) -> N + Sync + Send,
{
    cfg.environment.validate()?;
    if cfg.samples == 0 {
        return Err(Error::config("need at least 1 sample"));
    }
    if cfg.box_radius < 1 || !(cfg.max_start >= 0.0) {
        return Err(Error::config("box_radius must be >= 1 and max_start >= 0"));
    }
    let shift_scale = match cfg.environment.kind {
        EnvironmentKind::Block { epoch } => epoch,
        EnvironmentKind::Poisson { rate } => 1.0 / rate,
    };
    let seeds = replicate_seeds(cfg.base_seed, cfg.samples);
    let per_sample = workers.map(&seeds, |_, seed| {
        let env = sample_environment(&cfg.environment.with_seed(seed))?;
        let net = build(env);
        let mut rng = ChaCha8Rng::seed_from_u64(seed::substream(seed, stream::INSTANCE));
        sample_violations(&net, cfg, shift_scale, &mut rng)
    })?;

    let checks = CheckKind::ALL
        .iter()
        .enumerate()
        .map(|(k, &check)| {
            let mut out = CheckOutcome {
                check,
                samples: cfg.samples,
                violations: 0,
                max_violation: 0.0,
                first_violation_seed: None,
            };
            for (v, &seed) in per_sample.iter().zip(&seeds) {
                out.max_violation = out.max_violation.max(v[k]);
                if v[k] > VIOLATION_TOLERANCE {
                    out.violations += 1;
                    out.first_violation_seed.get_or_insert(seed);
                }
            }
            out
        })
        .collect();
    Ok(HypothesisReport {
        model: cfg.model,
        checks,
    })
}

/// One instance per check; returns `max(0, lhs - rhs)` in [`CheckKind::ALL`] order.
fn sample_violations<N: Network>(
    net: &N,
    cfg: &VerifyConfig,
    shift_scale: f64,
    rng: &mut ChaCha8Rng,
) -> Result<[f64; 5]> {
    let dim = net.dim();
    let bound = net.bound();
    let r = cfg.box_radius;
    let point = |rng: &mut ChaCha8Rng| Vertex::new((0..dim).map(|_| rng.random_range(-r..=r)));
    let start = |rng: &mut ChaCha8Rng| rng.random::<f64>() * cfg.max_start;
    let x = |a: &Vertex, b: &Vertex, t: f64| {
        first_passage(net, &PassageQuery::new(a.clone(), b.clone(), t))
    };

    // subadditivity through an intermediate point
    let (a, b, c) = (point(rng), point(rng), point(rng));
    let t = start(rng);
    let first = x(&a, &c, t)?;
    let sub = x(&a, &b, t)? - (first + x(&c, &b, t + first)?);

    // adjacent bound
    let a2 = point(rng);
    let axis = rng.random_range(0..dim);
    let sign = if rng.random::<bool>() { 1 } else { -1 };
    let b2 = a2.step(axis, sign).expect("box is far from overflow");
    let adjacent = x(&a2, &b2, start(rng))? - bound;

    // time shift
    let (a3, b3) = (point(rng), point(rng));
    let t3 = start(rng);
    let s3 = rng.random::<f64>() * 3.0 * shift_scale;
    let shift = x(&a3, &b3, t3)? - (x(&a3, &b3, t3 + s3)? + s3);

    // FIFO on a single edge; short shifts straddle regime switches often
    let base = point(rng);
    let edge = Edge::new(base, rng.random_range(0..dim))?;
    let t4 = start(rng);
    let s4 = rng.random::<f64>() * 2.0 * shift_scale;
    let fifo = net.arrival(&edge, t4) - net.arrival(&edge, t4 + s4);

    // deterministic bounds
    let (a5, b5) = (point(rng), point(rng));
    let dist = l1_distance(&a5, &b5)? as f64;
    let x5 = x(&a5, &b5, start(rng))?;
    let bounds = (dist / bound - x5).max(x5 - bound * dist);

    Ok([sub, adjacent, shift, fifo, bounds].map(|v| v.max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::FieldSpec;

    #[test]
    fn degenerate_environment_has_zero_violation() {
        let spec = EnvironmentSpec::block(2, FieldSpec::uniform(1.0), 1.0, 0);
        for model in [TravelModel::Integral, TravelModel::Departure] {
            let rep = verify_hypotheses(&VerifyConfig::new(spec, model, 50, 1), Workers::single())
                .unwrap();
            assert!(rep.passed());
            assert!(rep.checks.iter().all(|c| c.max_violation == 0.0));
        }
    }

    #[test]
    fn random_environments_pass() {
        for spec in [
            EnvironmentSpec::block(2, FieldSpec::uniform(2.0), 1.0, 0),
            EnvironmentSpec::poisson(2, FieldSpec::two_point(3.0, 0.5), 2.0, 0),
        ] {
            for model in [TravelModel::Integral, TravelModel::Departure] {
                let rep =
                    verify_hypotheses(&VerifyConfig::new(spec, model, 200, 5), Workers::new(2))
                        .unwrap();
                assert!(rep.passed(), "{rep:?}");
            }
        }
    }

    struct LateShortcut(Traversal);

    impl Network for LateShortcut {
        fn dim(&self) -> usize {
            self.0.dim()
        }
        fn bound(&self) -> f64 {
            self.0.bound()
        }
        // arrival max(t, arrival - 2 frac(t)): still after entry, not FIFO
        fn traversal_time(&self, edge: &Edge, t: f64) -> f64 {
            (self.0.traversal_time(edge, t) - 2.0 * t.fract()).max(0.0)
        }
    }

    #[test]
    fn fault_injection_is_detected() {
        let spec = EnvironmentSpec::block(2, FieldSpec::uniform(2.0), 1.0, 0);
        let cfg = VerifyConfig::new(spec, TravelModel::Integral, 200, 3);
        let rep = verify_network(&cfg, Workers::single(), |env| {
            LateShortcut(Traversal::new(env, TravelModel::Integral))
        })
        .unwrap();
        assert!(!rep.passed());
        let fifo = rep.check(CheckKind::Fifo);
        assert!(fifo.violations > 0);
        assert!(fifo.first_violation_seed.is_some());
        assert!(rep.reproduction_seed().is_some());
    }
}
