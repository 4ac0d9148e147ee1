//! Random time-dependent speed environments.
//!
//! A realization maps `(edge, time)` to a speed in `[1/L, L]`. Time is cut
//! into regimes by one global clock shared by all edges:
//!
//! * **Block**: regime index at time `t` is `floor((t + a) / C)`, with the
//!   phase `a` uniform on `[0, C)`.
//! * **Poisson**: regime index at time `t` is the number of renewal times of a
//!   rate-`lambda` Poisson process in `(0, t]`.
//!
//! Within regime `k` edge `e` has speed `eta(e, k)`, an i.i.d. draw from the
//! configured field, computed on demand by hashing `(seed, edge, k)`. Nothing
//! per-edge is stored, so a realization addresses the whole infinite lattice.

use std::sync::RwLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Edge;
use crate::seed::{self, stream, KeyHasher};

/// Law of a single speed value `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldDistribution {
    /// Uniform on `[1/L, L]`.
    Uniform,
    /// `1/L` with probability `p`, otherwise `L`.
    TwoPoint { p: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSpec {
    pub distribution: FieldDistribution,
    /// Speed bound `L >= 1`.
    pub bound: f64,
}

impl FieldSpec {
    pub fn uniform(bound: f64) -> Self {
        FieldSpec {
            distribution: FieldDistribution::Uniform,
            bound,
        }
    }

    pub fn two_point(bound: f64, p: f64) -> Self {
        FieldSpec {
            distribution: FieldDistribution::TwoPoint { p },
            bound,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bound.is_finite() && self.bound >= 1.0) {
            return Err(Error::config(format!(
                "L must be finite and >= 1, got {}",
                self.bound
            )));
        }
        if let FieldDistribution::TwoPoint { p } = self.distribution {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(format!(
                    "two_point p must lie in [0, 1], got {p}"
                )));
            }
        }
        Ok(())
    }

    pub fn min_speed(&self) -> f64 {
        1.0 / self.bound
    }

    /// Maps a uniform `[0, 1)` variate to a speed.
    #[inline]
    pub fn quantile(&self, u: f64) -> f64 {
        let lo = self.min_speed();
        let hi = self.bound;
        match self.distribution {
            FieldDistribution::Uniform => (lo + u * (hi - lo)).min(hi),
            FieldDistribution::TwoPoint { p } => {
                if u < p {
                    lo
                } else {
                    hi
                }
            }
        }
    }

    pub fn mean(&self) -> f64 {
        let lo = self.min_speed();
        let hi = self.bound;
        match self.distribution {
            FieldDistribution::Uniform => 0.5 * (lo + hi),
            FieldDistribution::TwoPoint { p } => p * lo + (1.0 - p) * hi,
        }
    }

    pub fn variance(&self) -> f64 {
        let width = self.bound - self.min_speed();
        match self.distribution {
            FieldDistribution::Uniform => width * width / 12.0,
            FieldDistribution::TwoPoint { p } => p * (1.0 - p) * width * width,
        }
    }
}

/// How regimes are switched.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnvironmentKind {
    /// Fresh speeds every `epoch` time units, with a uniform random phase.
    Block { epoch: f64 },
    /// Fresh speeds at the jumps of a rate-`rate` Poisson process.
    Poisson { rate: f64 },
}

/// Everything needed to sample one realization.
///
/// JSON form: `{"kind":"block"|"poisson","d":2,"L":2.0,"C":1.0,"lambda":1.0,
/// "field":{"dist":"uniform"},"seed":12345}`. Only the clock parameter of the
/// given kind is required; the other one, if present, is ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecJson", into = "SpecJson")]
pub struct EnvironmentSpec {
    pub kind: EnvironmentKind,
    pub dim: usize,
    pub field: FieldSpec,
    pub seed: u64,
}

impl EnvironmentSpec {
    pub fn block(dim: usize, field: FieldSpec, epoch: f64, seed: u64) -> Self {
        EnvironmentSpec {
            kind: EnvironmentKind::Block { epoch },
            dim,
            field,
            seed,
        }
    }

    pub fn poisson(dim: usize, field: FieldSpec, rate: f64, seed: u64) -> Self {
        EnvironmentSpec {
            kind: EnvironmentKind::Poisson { rate },
            dim,
            field,
            seed,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        EnvironmentSpec { seed, ..self }
    }

    pub fn bound(&self) -> f64 {
        self.field.bound
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::config("dimension d must be >= 1"));
        }
        self.field.validate()?;
        match self.kind {
            EnvironmentKind::Block { epoch } if !(epoch.is_finite() && epoch > 0.0) => Err(
                Error::config(format!("C must be finite and > 0, got {epoch}")),
            ),
            EnvironmentKind::Poisson { rate } if !(rate.is_finite() && rate > 0.0) => Err(
                Error::config(format!("lambda must be finite and > 0, got {rate}")),
            ),
            _ => Ok(()),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindTag {
    Block,
    Poisson,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecJson {
    kind: KindTag,
    d: usize,
    #[serde(rename = "L")]
    bound: f64,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    epoch: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    field: FieldDistribution,
    seed: u64,
}

impl TryFrom<SpecJson> for EnvironmentSpec {
    type Error = Error;

    fn try_from(j: SpecJson) -> Result<Self> {
        let kind = match j.kind {
            KindTag::Block => EnvironmentKind::Block {
                epoch: j
                    .epoch
                    .ok_or_else(|| Error::config("block environment needs \"C\""))?,
            },
            KindTag::Poisson => EnvironmentKind::Poisson {
                rate: j
                    .lambda
                    .ok_or_else(|| Error::config("poisson environment needs \"lambda\""))?,
            },
        };
        let spec = EnvironmentSpec {
            kind,
            dim: j.d,
            field: FieldSpec {
                distribution: j.field,
                bound: j.bound,
            },
            seed: j.seed,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<EnvironmentSpec> for SpecJson {
    fn from(s: EnvironmentSpec) -> Self {
        let (kind, epoch, lambda) = match s.kind {
            EnvironmentKind::Block { epoch } => (KindTag::Block, Some(epoch), None),
            EnvironmentKind::Poisson { rate } => (KindTag::Poisson, None, Some(rate)),
        };
        SpecJson {
            kind,
            d: s.dim,
            bound: s.field.bound,
            epoch,
            lambda,
            field: s.field.distribution,
            seed: s.seed,
        }
    }
}

/// The regime in force at some time: its index and the (exclusive) time at
/// which it ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    pub index: u64,
    pub end: f64,
}

#[derive(Debug)]
enum Clock {
    Block { epoch: f64, offset: f64 },
    Poisson(Box<RwLock<Renewals>>),
}

/// Renewal times materialized so far. Extension only appends, so already
/// returned times never change.
#[derive(Debug)]
struct Renewals {
    rng: ChaCha8Rng,
    gap: Exp<f64>,
    times: Vec<f64>,
}

impl Renewals {
    fn extend_past(&mut self, t: f64) {
        while self.times.last().is_none_or(|&last| last <= t) {
            let prev = self.times.last().copied().unwrap_or(0.0);
            let mut next = prev + self.gap.sample(&mut self.rng);
            if next <= prev {
                // zero gap (underflow); times must be strictly increasing
                next = prev.next_up();
            }
            self.times.push(next);
        }
    }
}

/// One sampled environment `omega`.
#[derive(Debug)]
pub struct Environment {
    spec: EnvironmentSpec,
    field_key: KeyHasher,
    clock: Clock,
}

/// Samples a realization. Only the clock state is drawn here; edge speeds are
/// evaluated lazily.
pub fn sample_environment(spec: &EnvironmentSpec) -> Result<Environment> {
    spec.validate()?;
    let clock = match spec.kind {
        EnvironmentKind::Block { epoch } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed::substream(spec.seed, stream::OFFSET));
            let mut offset = rng.random::<f64>() * epoch;
            if offset >= epoch {
                offset = epoch.next_down();
            }
            Clock::Block { epoch, offset }
        }
        EnvironmentKind::Poisson { rate } => {
            let rng = ChaCha8Rng::seed_from_u64(seed::substream(spec.seed, stream::RENEWAL));
            let gap = Exp::new(rate).map_err(|e| Error::config(e.to_string()))?;
            Clock::Poisson(Box::new(RwLock::new(Renewals {
                rng,
                gap,
                times: Vec::new(),
            })))
        }
    };
    Ok(Environment {
        spec: *spec,
        field_key: KeyHasher::new(spec.seed, stream::FIELD),
        clock,
    })
}

impl Environment {
    pub fn spec(&self) -> &EnvironmentSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    /// Speed bound `L`.
    pub fn bound(&self) -> f64 {
        self.spec.field.bound
    }

    /// Block phase `a`; `None` for Poisson environments.
    pub fn offset(&self) -> Option<f64> {
        match self.clock {
            Clock::Block { offset, .. } => Some(offset),
            Clock::Poisson(_) => None,
        }
    }

    /// Renewal times in `(0, t]`, materializing as needed. Empty for Block.
    pub fn renewal_times(&self, t: f64) -> Vec<f64> {
        match &self.clock {
            Clock::Block { .. } => Vec::new(),
            Clock::Poisson(lock) => {
                self.ensure_horizon(lock, t);
                let r = lock.read().unwrap();
                let n = r.times.partition_point(|&x| x <= t);
                r.times[..n].to_vec()
            }
        }
    }

    /// Current materialized horizon (last renewal time drawn so far).
    pub fn horizon(&self) -> f64 {
        match &self.clock {
            Clock::Block { .. } => f64::INFINITY,
            Clock::Poisson(lock) => lock.read().unwrap().times.last().copied().unwrap_or(0.0),
        }
    }

    fn ensure_horizon(&self, lock: &RwLock<Renewals>, t: f64) {
        let covered = lock
            .read()
            .unwrap()
            .times
            .last()
            .is_some_and(|&last| last > t);
        if !covered {
            lock.write().unwrap().extend_past(t);
        }
    }

    /// The regime in force at time `t >= 0`.
    pub fn regime(&self, t: f64) -> Regime {
        debug_assert!(t >= 0.0, "negative time {t}");
        match &self.clock {
            Clock::Block { epoch, offset } => {
                let index = block_index(t, *epoch, *offset);
                Regime {
                    index,
                    end: block_end(index, *epoch, *offset),
                }
            }
            Clock::Poisson(lock) => {
                self.ensure_horizon(lock, t);
                let r = lock.read().unwrap();
                let index = r.times.partition_point(|&x| x <= t);
                Regime {
                    index: index as u64,
                    end: r.times[index],
                }
            }
        }
    }

    /// `eta(e, k)`: the speed of `edge` throughout regime `k`.
    #[inline]
    pub fn regime_speed(&self, edge: &Edge, regime: u64) -> f64 {
        let mut h = self.field_key;
        for &c in edge.base.coords() {
            h = h.absorb(c as u64);
        }
        let v = self
            .spec
            .field
            .quantile(h.absorb(edge.axis as u64).absorb(regime).unit());
        debug_assert!(v >= self.spec.field.min_speed() && v <= self.spec.field.bound);
        v
    }

    /// Instantaneous speed of `edge` at time `t >= 0`.
    pub fn speed(&self, edge: &Edge, t: f64) -> f64 {
        self.regime_speed(edge, self.regime(t).index)
    }

    /// Piecewise-constant decomposition of `s -> speed(edge, s)` on `[t0, t1)`.
    pub fn epochs(&self, edge: &Edge, t0: f64, t1: f64) -> Result<PiecewiseSpeed> {
        if !(t0 >= 0.0 && t0 < t1 && t1.is_finite()) {
            return Err(Error::config(format!("invalid window [{t0}, {t1})")));
        }
        let mut breakpoints = vec![t0];
        let mut values = Vec::new();
        let mut at = t0;
        while at < t1 {
            let regime = self.regime(at);
            values.push(self.regime_speed(edge, regime.index));
            at = regime.end.min(t1);
            breakpoints.push(at);
        }
        Ok(PiecewiseSpeed {
            breakpoints,
            values,
        })
    }
}

#[inline]
fn block_index(t: f64, epoch: f64, offset: f64) -> u64 {
    ((t + offset) / epoch).floor() as u64
}

/// Smallest float `b` with `block_index(b) > index`. Starts from the exact
/// boundary `(index + 1) C - a` and corrects for rounding so that `regime()`
/// and `epochs()` classify every time identically.
fn block_end(index: u64, epoch: f64, offset: f64) -> f64 {
    let mut b = (index as f64 + 1.0) * epoch - offset;
    while block_index(b, epoch, offset) <= index {
        b = b.next_up();
    }
    while b > 0.0 && block_index(b.next_down(), epoch, offset) > index {
        b = b.next_down();
    }
    b
}

/// `s -> speed` on a window, constant on each `[breakpoints[j], breakpoints[j+1])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseSpeed {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl PiecewiseSpeed {
    pub fn at(&self, s: f64) -> Option<f64> {
        let first = *self.breakpoints.first()?;
        let last = *self.breakpoints.last()?;
        if s < first || s >= last {
            return None;
        }
        let j = self.breakpoints.partition_point(|&b| b <= s) - 1;
        Some(self.values[j])
    }

    /// `integral of speed` over `[from, to]` within the window.
    pub fn integral(&self, from: f64, to: f64) -> f64 {
        self.values
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(&v, w)| v * (w[1].min(to) - w[0].max(from)).max(0.0))
            .sum()
    }
}

/// Covariance of `speed(e, 0)` and `speed(e, s)` over the randomness of the
/// environment: `Var[eta]` times the probability that no regime switch falls
/// in `(0, s]`.
pub fn regime_covariance_theoretical(spec: &EnvironmentSpec, lag: f64) -> f64 {
    let var = spec.field.variance();
    let lag = lag.max(0.0);
    match spec.kind {
        EnvironmentKind::Block { epoch } => var * (1.0 - lag / epoch).max(0.0),
        EnvironmentKind::Poisson { rate } => var * (-rate * lag).exp(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vertex;

    fn edge() -> Edge {
        Edge::new(Vertex::from([3, -1]), 0).unwrap()
    }

    /// Block realization with a forced phase.
    fn block_with_offset(field: FieldSpec, epoch: f64, offset: f64, seed: u64) -> Environment {
        let mut env = sample_environment(&EnvironmentSpec::block(2, field, epoch, seed)).unwrap();
        env.clock = Clock::Block { epoch, offset };
        env
    }

    #[test]
    fn block_offset_is_reproducible_and_in_range() {
        let spec = EnvironmentSpec::block(2, FieldSpec::uniform(2.0), 1.0, 99);
        let a = sample_environment(&spec).unwrap().offset().unwrap();
        let b = sample_environment(&spec).unwrap().offset().unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert!((0.0..1.0).contains(&a));
    }

    #[test]
    fn block_offsets_differ_across_seeds() {
        let base = EnvironmentSpec::block(2, FieldSpec::uniform(2.0), 1.0, 0);
        let mut collisions = 0;
        for i in 0..1000u64 {
            let a = sample_environment(&base.with_seed(2 * i))
                .unwrap()
                .offset()
                .unwrap();
            let b = sample_environment(&base.with_seed(2 * i + 1))
                .unwrap()
                .offset()
                .unwrap();
            collisions += (a == b) as u32;
        }
        assert_eq!(collisions, 0);
    }

    #[test]
    fn poisson_first_renewal_positive_and_reproducible() {
        let spec = EnvironmentSpec::poisson(2, FieldSpec::uniform(2.0), 1.0, 5);
        let a = sample_environment(&spec).unwrap();
        let b = sample_environment(&spec).unwrap();
        let ta = a.renewal_times(10.0);
        // extend b in a different order
        let _ = b.regime(3.0);
        let _ = b.regime(0.1);
        let tb = b.renewal_times(10.0);
        assert_eq!(ta, tb);
        assert!(ta[0] > 0.0);
        assert!(ta.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn horizon_extension_keeps_prefix() {
        let spec = EnvironmentSpec::poisson(1, FieldSpec::uniform(2.0), 3.0, 11);
        let env = sample_environment(&spec).unwrap();
        let short = env.renewal_times(2.0);
        let long = env.renewal_times(50.0);
        assert_eq!(&long[..short.len()], &short[..]);
        assert!(env.horizon() > 50.0);
    }

    #[test]
    fn degenerate_field_is_unit_speed() {
        for spec in [
            EnvironmentSpec::block(2, FieldSpec::uniform(1.0), 0.7, 1),
            EnvironmentSpec::poisson(2, FieldSpec::two_point(1.0, 0.3), 2.0, 1),
        ] {
            let env = sample_environment(&spec).unwrap();
            for k in 0..50 {
                assert_eq!(env.speed(&edge(), k as f64 * 0.37), 1.0);
            }
            let pw = env.epochs(&edge(), 0.5, 9.0).unwrap();
            assert!(pw.values.iter().all(|&v| v == 1.0));
        }
    }

    #[test]
    fn block_regime_boundary() {
        let env = block_with_offset(FieldSpec::uniform(2.0), 1.0, 0.3, 17);
        let e = edge();
        assert_eq!(env.speed(&e, 0.0), env.speed(&e, 0.69));
        assert_eq!(env.regime(0.69).index, 0);
        assert_eq!(env.regime(0.71).index, 1);
        // the inequality across the boundary holds generically
        let mut differ = 0;
        for s in 0..100 {
            let env = block_with_offset(FieldSpec::uniform(2.0), 1.0, 0.3, s);
            differ += (env.speed(&e, 0.0) != env.speed(&e, 0.71)) as u32;
        }
        assert_eq!(differ, 100);
    }

    #[test]
    fn block_epochs_window() {
        let env = block_with_offset(FieldSpec::uniform(2.0), 1.0, 0.3, 17);
        let pw = env.epochs(&edge(), 0.0, 2.0).unwrap();
        assert_eq!(pw.values.len(), 3);
        let expect = [0.0, 0.7, 1.7, 2.0];
        for (b, x) in pw.breakpoints.iter().zip(expect) {
            assert!((b - x).abs() < 1e-12, "{:?}", pw.breakpoints);
        }
        assert_eq!(pw.values[0], env.regime_speed(&edge(), 0));
        assert_eq!(pw.values[1], env.regime_speed(&edge(), 1));
        assert_eq!(pw.values[2], env.regime_speed(&edge(), 2));
    }

    #[test]
    fn poisson_epoch_boundaries_are_renewals() {
        let env = sample_environment(&EnvironmentSpec::poisson(
            2,
            FieldSpec::uniform(2.0),
            2.0,
            8,
        ))
        .unwrap();
        let pw = env.epochs(&edge(), 1.0, 6.0).unwrap();
        let renewals: Vec<f64> = env
            .renewal_times(6.0)
            .into_iter()
            .filter(|&x| x > 1.0 && x < 6.0)
            .collect();
        assert_eq!(&pw.breakpoints[1..pw.breakpoints.len() - 1], &renewals[..]);
    }

    #[test]
    fn uniform_field_mean() {
        // 1e5 independent realizations, speed at a fixed (e, t)
        let n = 100_000;
        let base = EnvironmentSpec::block(2, FieldSpec::uniform(2.0), 1.0, 0);
        let xs: Vec<f64> = (0..n)
            .map(|i| {
                sample_environment(&base.with_seed(seed::derive(42, i)))
                    .unwrap()
                    .speed(&edge(), 2.5)
            })
            .collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((mean - 1.25).abs() < 3.0 * se, "mean {mean} se {se}");
        assert!(xs.iter().all(|&x| (0.5..=2.0).contains(&x)));
    }

    #[test]
    fn two_point_moments() {
        let f = FieldSpec::two_point(4.0, 0.25);
        assert!((f.mean() - (0.25 * 0.25 + 0.75 * 4.0)).abs() < 1e-15);
        assert!((f.variance() - 0.25 * 0.75 * 3.75 * 3.75).abs() < 1e-12);
        assert_eq!(f.quantile(0.1), 0.25);
        assert_eq!(f.quantile(0.9), 4.0);
    }

    #[test]
    fn theoretical_covariance_examples() {
        let f = FieldSpec::uniform(2.0);
        assert!((f.variance() - 0.1875).abs() < 1e-15);
        let block = EnvironmentSpec::block(2, f, 1.0, 0);
        assert!((regime_covariance_theoretical(&block, 0.5) - 0.09375).abs() < 1e-15);
        assert_eq!(regime_covariance_theoretical(&block, 1.0), 0.0);
        assert_eq!(regime_covariance_theoretical(&block, 3.0), 0.0);
        let poisson = EnvironmentSpec::poisson(2, f, 1.0, 0);
        let c = regime_covariance_theoretical(&poisson, 1.0);
        // 0.1875 / e
        assert!((c - 0.068_977_395_219_645).abs() < 1e-14, "{c}");
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(
            sample_environment(&EnvironmentSpec::block(2, FieldSpec::uniform(0.5), 1.0, 0))
                .is_err()
        );
        assert!(
            sample_environment(&EnvironmentSpec::block(2, FieldSpec::uniform(2.0), 0.0, 0))
                .is_err()
        );
        assert!(sample_environment(&EnvironmentSpec::poisson(
            2,
            FieldSpec::uniform(2.0),
            -1.0,
            0
        ))
        .is_err());
        assert!(sample_environment(&EnvironmentSpec::poisson(
            0,
            FieldSpec::uniform(2.0),
            1.0,
            0
        ))
        .is_err());
        assert!(sample_environment(&EnvironmentSpec::block(
            2,
            FieldSpec::two_point(2.0, 1.5),
            1.0,
            0
        ))
        .is_err());
        let env = sample_environment(&EnvironmentSpec::block(2, FieldSpec::uniform(2.0), 1.0, 0))
            .unwrap();
        assert!(env.epochs(&edge(), 2.0, 1.0).is_err());
    }

    #[test]
    fn json_round_trip_and_schema() {
        let text = r#"{"kind":"block","d":2,"L":2.0,"C":1.0,"lambda":1.0,"field":{"dist":"uniform"},"seed":12345}"#;
        let spec: EnvironmentSpec = serde_json::from_str(text).unwrap();
        assert_eq!(
            spec,
            EnvironmentSpec::block(2, FieldSpec::uniform(2.0), 1.0, 12345)
        );
        let back: EnvironmentSpec =
            serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);

        let p: EnvironmentSpec = serde_json::from_str(
            r#"{"kind":"poisson","d":3,"L":4,"lambda":0.5,"field":{"dist":"two_point","p":0.2},"seed":1}"#,
        )
        .unwrap();
        assert_eq!(
            p,
            EnvironmentSpec::poisson(3, FieldSpec::two_point(4.0, 0.2), 0.5, 1)
        );

        for bad in [
            r#"{"kind":"block","d":2,"L":2.0,"field":{"dist":"uniform"},"seed":1}"#,
            r#"{"kind":"poisson","d":2,"L":2.0,"C":1.0,"field":{"dist":"uniform"},"seed":1}"#,
            r#"{"kind":"block","d":2,"L":2.0,"C":1.0,"field":{"dist":"uniform"},"seed":1,"extra":0}"#,
            r#"{"kind":"block","d":2,"L":0.5,"C":1.0,"field":{"dist":"uniform"},"seed":1}"#,
        ] {
            assert!(
                serde_json::from_str::<EnvironmentSpec>(bad).is_err(),
                "{bad}"
            );
        }
    }
}
