//! Edge traversal under the two time-dependent laws, and path travel times.
//!
//! * [`TravelModel::Integral`]: the traveller moves along the edge at the
//!   instantaneous speed, so the traversal time `tau` solves
//!   `integral_t^{t+tau} speed(e, s) ds = 1`.
//! * [`TravelModel::Departure`]: a "train" leaving at time `u >= t` crosses in
//!   `1 / speed(e, u)`; the traveller waits for the best one, so
//!   `tau = min_{u >= t} (u - t) + 1 / speed(e, u)`.
//!
//! With speeds in `[1/L, L]` both laws give `tau` in `[1/L, L]` and are FIFO:
//! arrival time `t + tau` is non-decreasing in `t`.

use serde::{Deserialize, Serialize};

use crate::environment::Environment;
use crate::geometry::{Edge, Path};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TravelModel {
    Integral,
    Departure,
}

/// Anything that assigns a traversal time to an edge entered at time `t`.
///
/// The solver and the hypothesis checks are written against this trait so
/// that test harnesses can substitute deliberately broken networks.
pub trait Network: Sync {
    fn dim(&self) -> usize;

    /// Speed bound `L`: every traversal takes between `1/L` and `L`.
    fn bound(&self) -> f64;

    /// `tau_e^t`: time needed to cross `edge` when entering it at time `t`.
    fn traversal_time(&self, edge: &Edge, t: f64) -> f64;

    /// Arrival time at the far end of `edge` when entering it at time `t`.
    fn arrival(&self, edge: &Edge, t: f64) -> f64 {
        t + self.traversal_time(edge, t)
    }
}

/// A sampled environment together with a traversal law.
#[derive(Debug)]
pub struct Traversal {
    env: Environment,
    model: TravelModel,
}

impl Traversal {
    pub fn new(env: Environment, model: TravelModel) -> Self {
        Traversal { env, model }
    }

    pub fn environment(&self) -> &Environment {
        &self.env
    }

    pub fn model(&self) -> TravelModel {
        self.model
    }
}

impl Network for Traversal {
    fn dim(&self) -> usize {
        self.env.dim()
    }

    fn bound(&self) -> f64 {
        self.env.bound()
    }

    fn traversal_time(&self, edge: &Edge, t: f64) -> f64 {
        traversal_time(&self.env, self.model, edge, t)
    }
}

/// `tau_e^t` under `model`.
pub fn traversal_time(env: &Environment, model: TravelModel, edge: &Edge, t: f64) -> f64 {
    debug_assert!(t >= 0.0, "negative time {t}");
    let tau = match model {
        TravelModel::Integral => integral_time_on(pieces(env, edge), t),
        TravelModel::Departure => departure_time_on(pieces(env, edge), t),
    };
    debug_assert!(
        tau >= 1.0 / env.bound() * (1.0 - 1e-12) && tau <= env.bound() * (1.0 + 1e-12),
        "traversal time {tau} outside [1/L, L]"
    );
    tau
}

/// `t + tau_e^t`.
pub fn arrival(env: &Environment, model: TravelModel, edge: &Edge, t: f64) -> f64 {
    t + traversal_time(env, model, edge, t)
}

#[inline]
fn pieces<'a>(env: &'a Environment, edge: &'a Edge) -> impl Fn(f64) -> (f64, f64) + 'a {
    move |at| {
        let regime = env.regime(at);
        (env.regime_speed(edge, regime.index), regime.end)
    }
}

/// Integral law over a piecewise-constant speed given as `at -> (speed, end
/// of the piece containing at)`. Subtracts `speed * duration` from the unit
/// of distance still to cover and solves the last partial piece exactly.
pub(crate) fn integral_time_on(piece: impl Fn(f64) -> (f64, f64), t: f64) -> f64 {
    let mut remaining = 1.0;
    let mut elapsed = 0.0;
    let mut at = t;
    loop {
        let (speed, end) = piece(at);
        let covered = speed * (end - at);
        if covered >= remaining {
            return elapsed + remaining / speed;
        }
        remaining -= covered;
        elapsed += end - at;
        at = end;
    }
}

/// Departure law over a piecewise-constant speed. Candidates are `t` itself
/// and the piece starts after it: `u -> u + 1/speed(u)` is increasing within a
/// piece, and a departure delayed by at least the best time found so far
/// cannot improve on it, which bounds the scan by `t + L`.
pub(crate) fn departure_time_on(piece: impl Fn(f64) -> (f64, f64), t: f64) -> f64 {
    let (speed, mut at) = piece(t);
    let mut best = 1.0 / speed;
    while at - t < best {
        let (speed, end) = piece(at);
        best = best.min((at - t) + 1.0 / speed);
        at = end;
    }
    best
}

/// `T_gamma^{t0}`: travel time along the path leaving at `t0`. The elapsed
/// time is accumulated directly (edge `i` is entered at `t0 + T_{i-1}`).
pub fn path_travel_time<N: Network + ?Sized>(net: &N, path: &Path, t0: f64) -> f64 {
    path.steps().iter().fold(0.0, |elapsed, (edge, _)| {
        elapsed + net.traversal_time(edge, t0 + elapsed)
    })
}
