//! First passage times `X^t(A, B)`: the least travel time over all lattice
//! paths from `A` to `B` when leaving `A` at time `t`.
//!
//! # Exactness
//!
//! The search is label-setting Dijkstra keyed on arrival time, relaxing an
//! edge entered at time `T` to `T + tau_e^T`. Because arrivals are FIFO
//! (entering later never arrives earlier), waiting is never useful and the
//! first time a vertex leaves the queue its label is the earliest possible
//! arrival. Labels are kept as time elapsed since the start, so integer
//! traversal times give exact integer passage times.
//!
//! The infimum over the infinite path set is a minimum over a finite one:
//! the straight lattice path costs at most `L |A - B|_1`, and every edge costs
//! at least `1/L`, so no optimal path has more than `L^2 |A - B|_1` edges or
//! leaves the L1 ball of that radius around `A`. Searching that ball is
//! therefore exact; [`region_radius`] computes it.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{l1_distance, Edge, Path, Vertex};
use crate::travel::{path_travel_time, Network};

/// Radius of the L1 ball around `a` that contains every optimal path to `b`:
/// `ceil(L^2 |a - b|_1)`, at least 1.
pub fn region_radius(bound: f64, a: &Vertex, b: &Vertex) -> Result<u64> {
    if !(bound.is_finite() && bound >= 1.0) {
        return Err(Error::config(format!(
            "L must be finite and >= 1, got {bound}"
        )));
    }
    let dist = l1_distance(a, b)? as f64;
    let r = (bound * bound * dist).ceil();
    if r >= u64::MAX as f64 {
        return Err(Error::config("search region too large"));
    }
    Ok((r as u64).max(1))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassageQuery {
    pub from: Vertex,
    pub to: Vertex,
    pub start_time: f64,
}

impl PassageQuery {
    pub fn new(from: Vertex, to: Vertex, start_time: f64) -> Self {
        PassageQuery {
            from,
            to,
            start_time,
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if self.from.dim() != dim || self.to.dim() != dim {
            return Err(Error::config(format!(
                "query dimension does not match network dimension {dim}"
            )));
        }
        if !(self.start_time >= 0.0 && self.start_time.is_finite()) {
            return Err(Error::config(format!(
                "invalid start time {}",
                self.start_time
            )));
        }
        Ok(())
    }
}

/// Order in which equal tentative labels leave the queue. Values do not
/// depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieOrder {
    #[default]
    Lexicographic,
    Reversed,
}

/// Earliest arrival times from `source`, in the order vertices were settled.
/// Stored as elapsed time since `start_time`.
#[derive(Debug, Clone)]
pub struct ArrivalLabels {
    source: Vertex,
    start_time: f64,
    radius: u64,
    settled: Vec<(Vertex, f64)>,
    index: FxHashMap<Vertex, usize>,
}

impl ArrivalLabels {
    pub fn source(&self) -> &Vertex {
        &self.source
    }

    pub fn start_time(&self) -> f64 {
        self.start_time
    }

    /// Radius of the L1 ball around the source that was searched.
    pub fn radius(&self) -> u64 {
        self.radius
    }

    /// Absolute earliest arrival time at `v`.
    pub fn label(&self, v: &Vertex) -> Option<f64> {
        self.passage(v).map(|x| self.start_time + x)
    }

    /// Earliest arrival at `v` minus the start time.
    pub fn passage(&self, v: &Vertex) -> Option<f64> {
        self.index.get(v).map(|&i| self.settled[i].1)
    }

    /// `(vertex, passage time)` in settling order; non-decreasing.
    pub fn settled(&self) -> &[(Vertex, f64)] {
        &self.settled
    }

    pub fn len(&self) -> usize {
        self.settled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.settled.is_empty()
    }
}

struct Entry {
    time: f64,
    vertex: Vertex,
    tie: TieOrder,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // BinaryHeap is a max-heap: invert so the earliest time pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        let by_vertex = match self.tie {
            TieOrder::Lexicographic => other.vertex.cmp(&self.vertex),
            TieOrder::Reversed => self.vertex.cmp(&other.vertex),
        };
        other.time.total_cmp(&self.time).then(by_vertex)
    }
}

/// One label-setting search. `limit` stops the search before settling any
/// passage time above it; `done` is consulted after each settled vertex.
pub(crate) struct Sweep<'a, N: ?Sized> {
    pub net: &'a N,
    pub source: &'a Vertex,
    pub start_time: f64,
    pub radius: u64,
    pub limit: f64,
    pub tie: TieOrder,
}

impl<N: Network + ?Sized> Sweep<'_, N> {
    pub fn run(&self, mut done: impl FnMut(&Vertex, f64) -> bool) -> Result<ArrivalLabels> {
        let dim = self.net.dim();
        if self.source.dim() != dim {
            return Err(Error::config(format!(
                "source dimension {} does not match network dimension {dim}",
                self.source.dim()
            )));
        }
        if !(self.start_time >= 0.0 && self.start_time.is_finite()) {
            return Err(Error::config(format!(
                "invalid start time {}",
                self.start_time
            )));
        }
        let r = i64::try_from(self.radius).map_err(|_| Error::config("search region too large"))?;
        for &c in self.source.coords() {
            if c.checked_sub(r).is_none() || c.checked_add(r).is_none() {
                return Err(Error::config("search region overflows coordinates"));
            }
        }

        // tentative label, settled flag
        let mut labels: FxHashMap<Vertex, (f64, bool)> = FxHashMap::default();
        let mut heap = BinaryHeap::new();
        let mut out = ArrivalLabels {
            source: self.source.clone(),
            start_time: self.start_time,
            radius: self.radius,
            settled: Vec::new(),
            index: FxHashMap::default(),
        };
        labels.insert(self.source.clone(), (0.0, false));
        heap.push(Entry {
            time: 0.0,
            vertex: self.source.clone(),
            tie: self.tie,
        });

        while let Some(Entry { time, vertex, .. }) = heap.pop() {
            let slot = labels.get_mut(&vertex).expect("queued vertex has a label");
            if slot.1 || time > slot.0 {
                continue;
            }
            if time > self.limit {
                break;
            }
            slot.1 = true;
            debug_assert!(out.settled.last().is_none_or(|&(_, prev)| prev <= time));
            out.index.insert(vertex.clone(), out.settled.len());
            out.settled.push((vertex.clone(), time));
            if done(&vertex, time) {
                break;
            }

            let used = l1_distance(self.source, &vertex)?;
            for axis in 0..dim {
                for sign in [-1i64, 1] {
                    let c = vertex.coords()[axis];
                    let away = (c - self.source.coords()[axis]) * sign >= 0;
                    if away && used >= self.radius {
                        continue;
                    }
                    let next = vertex
                        .step(axis, sign)
                        .expect("region checked for overflow");
                    let base = if sign < 0 {
                        next.clone()
                    } else {
                        vertex.clone()
                    };
                    let edge = Edge { base, axis };
                    let arrive = time + self.net.traversal_time(&edge, self.start_time + time);
                    let slot = labels.entry(next.clone()).or_insert((f64::INFINITY, false));
                    if !slot.1 && arrive < slot.0 {
                        slot.0 = arrive;
                        heap.push(Entry {
                            time: arrive,
                            vertex: next,
                            tie: self.tie,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Earliest arrival at every vertex of the L1 ball of `radius` around
/// `source`, leaving at `start_time`, over paths inside that ball.
pub fn earliest_arrival<N: Network + ?Sized>(
    net: &N,
    source: &Vertex,
    start_time: f64,
    radius: u64,
) -> Result<ArrivalLabels> {
    earliest_arrival_with_ties(net, source, start_time, radius, TieOrder::Lexicographic)
}

pub fn earliest_arrival_with_ties<N: Network + ?Sized>(
    net: &N,
    source: &Vertex,
    start_time: f64,
    radius: u64,
    tie: TieOrder,
) -> Result<ArrivalLabels> {
    Sweep {
        net,
        source,
        start_time,
        radius,
        limit: f64::INFINITY,
        tie,
    }
    .run(|_, _| false)
}

/// `X^{t}(A, B)`.
pub fn first_passage<N: Network + ?Sized>(net: &N, q: &PassageQuery) -> Result<f64> {
    q.validate(net.dim())?;
    if q.from == q.to {
        return Ok(0.0);
    }
    let radius = region_radius(net.bound(), &q.from, &q.to)?;
    let labels = Sweep {
        net,
        source: &q.from,
        start_time: q.start_time,
        radius,
        limit: f64::INFINITY,
        tie: TieOrder::Lexicographic,
    }
    .run(|v, _| *v == q.to)?;
    Ok(labels
        .passage(&q.to)
        .expect("target lies inside the search region"))
}

/// `X^{t}(A, B)` with an explicit search radius; used to check that
/// [`region_radius`] is large enough.
pub fn first_passage_in_radius<N: Network + ?Sized>(
    net: &N,
    q: &PassageQuery,
    radius: u64,
    tie: TieOrder,
) -> Result<f64> {
    q.validate(net.dim())?;
    let labels = Sweep {
        net,
        source: &q.from,
        start_time: q.start_time,
        radius,
        limit: f64::INFINITY,
        tie,
    }
    .run(|v, _| *v == q.to)?;
    labels
        .passage(&q.to)
        .ok_or_else(|| Error::config("target outside the search radius"))
}

/// Default cap on the number of walk prefixes the oracle may visit.
pub const BRUTE_FORCE_CAP: u64 = 50_000_000;

/// Exhaustive minimum of the path travel time over every walk from `A` to
/// `B` with at most `max_edges` edges (vertices may repeat).
///
/// Branches are cut when the remaining edge budget cannot reach `B`, or when
/// even at the fastest possible speed they cannot beat the best complete walk
/// found so far.
pub fn brute_force_first_passage<N: Network + ?Sized>(
    net: &N,
    q: &PassageQuery,
    max_edges: usize,
    cap: u64,
) -> Result<f64> {
    q.validate(net.dim())?;
    let mut search = Exhaustive {
        net,
        target: &q.to,
        min_edge: 1.0 / net.bound(),
        best: f64::INFINITY,
        visited: 0,
        cap,
        walk: vec![q.from.clone()],
    };
    search.extend(q.start_time, 0.0, max_edges)?;
    if search.best.is_infinite() {
        return Err(Error::config(format!(
            "no walk of at most {max_edges} edges joins {:?} and {:?}",
            q.from, q.to
        )));
    }
    Ok(search.best)
}

struct Exhaustive<'a, N: ?Sized> {
    net: &'a N,
    target: &'a Vertex,
    min_edge: f64,
    best: f64,
    visited: u64,
    cap: u64,
    walk: Vec<Vertex>,
}

impl<N: Network + ?Sized> Exhaustive<'_, N> {
    /// `elapsed` is the travel time of the current walk.
    fn extend(&mut self, start: f64, elapsed: f64, budget: usize) -> Result<()> {
        self.visited += 1;
        if self.visited > self.cap {
            return Err(Error::OracleInfeasible { cap: self.cap });
        }
        let here = self.walk.last().unwrap().clone();
        let togo = l1_distance(&here, self.target)? as usize;
        if togo == 0 {
            let path = Path::through(&self.walk)?;
            self.best = self.best.min(path_travel_time(self.net, &path, start));
        }
        if budget == 0 || togo > budget {
            return Ok(());
        }
        if elapsed + (togo.max(1) as f64) * self.min_edge >= self.best {
            return Ok(());
        }
        for (edge, next) in crate::geometry::neighbors(&here)? {
            if l1_distance(&next, self.target)? as usize > budget - 1 {
                continue;
            }
            let next_elapsed = elapsed + self.net.traversal_time(&edge, start + elapsed);
            self.walk.push(next);
            self.extend(start, next_elapsed, budget - 1)?;
            self.walk.pop();
        }
        Ok(())
    }
}

/// `X_{m,n}^{t,e} = X^t(m e, n e)`.
pub fn directional_passage<N: Network + ?Sized>(
    net: &N,
    direction: &Vertex,
    m: u64,
    n: u64,
    start_time: f64,
) -> Result<f64> {
    check_direction(net, direction)?;
    if m >= n {
        return Err(Error::config(format!("need m < n, got m={m} n={n}")));
    }
    let origin = Vertex::origin(direction.dim());
    let from = origin.offset(direction, to_i64(m)?)?;
    let to = origin.offset(direction, to_i64(n)?)?;
    first_passage(net, &PassageQuery::new(from, to, start_time))
}

/// `X_{0,n}^{t,e}` for every `n` in `ns`, from a single search out of the
/// origin that stops once all targets are settled.
pub fn directional_profile<N: Network + ?Sized>(
    net: &N,
    direction: &Vertex,
    ns: &[u64],
    start_time: f64,
) -> Result<Vec<f64>> {
    check_direction(net, direction)?;
    let origin = Vertex::origin(direction.dim());
    let targets = ns
        .iter()
        .map(|&n| origin.offset(direction, to_i64(n)?))
        .collect::<Result<Vec<_>>>()?;
    let far = targets
        .iter()
        .map(|t| region_radius(net.bound(), &origin, t))
        .try_fold(1u64, |acc, r| r.map(|r| acc.max(r)))?;
    let mut pending = targets.len();
    let mut remaining: FxHashMap<&Vertex, usize> = FxHashMap::default();
    for t in &targets {
        *remaining.entry(t).or_default() += 1;
    }
    let labels = Sweep {
        net,
        source: &origin,
        start_time,
        radius: far,
        limit: f64::INFINITY,
        tie: TieOrder::Lexicographic,
    }
    .run(|v, _| {
        if let Some(k) = remaining.remove(v) {
            pending -= k;
        }
        pending == 0
    })?;
    Ok(targets
        .iter()
        .map(|t| labels.passage(t).expect("target settled"))
        .collect())
}

fn check_direction<N: Network + ?Sized>(net: &N, direction: &Vertex) -> Result<()> {
    if direction.dim() != net.dim() {
        return Err(Error::config("direction dimension does not match network"));
    }
    if direction.coords().iter().all(|&c| c == 0) {
        return Err(Error::config("direction must be non-zero"));
    }
    Ok(())
}

fn to_i64(n: u64) -> Result<i64> {
    i64::try_from(n).map_err(|_| Error::config("index too large"))
}

/// Start time used for the reachable set `S_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartTimeMode {
    /// `{A : X^0(0, A) <= t}`.
    #[default]
    FixedZero,
    /// `{A : X^t(0, A) <= t}`.
    Diagonal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReachableSet {
    pub t: f64,
    pub mode: StartTimeMode,
    /// Sorted lexicographically.
    pub points: Vec<Vertex>,
    /// Passage time from the origin for each point, same order.
    pub passage: Vec<f64>,
}

/// `S_t`: lattice points reachable from the origin within time `t`.
pub fn reachable_set<N: Network + ?Sized>(
    net: &N,
    t: f64,
    mode: StartTimeMode,
) -> Result<ReachableSet> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::config(format!("invalid time {t}")));
    }
    let start_time = match mode {
        StartTimeMode::FixedZero => 0.0,
        StartTimeMode::Diagonal => t,
    };
    let radius = (net.bound() * t).ceil() as u64 + 1;
    let origin = Vertex::origin(net.dim());
    let labels = Sweep {
        net,
        source: &origin,
        start_time,
        radius,
        limit: t,
        tie: TieOrder::Lexicographic,
    }
    .run(|_, _| false)?;
    let mut pairs: Vec<(Vertex, f64)> = labels
        .settled()
        .iter()
        .filter(|&&(_, x)| x <= t)
        .cloned()
        .collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let (points, passage) = pairs.into_iter().unzip();
    Ok(ReachableSet {
        t,
        mode,
        points,
        passage,
    })
}
