//! Reachable-set shape estimates.
//!
//! `S_t / t` is compared against L1 balls: the inner radius is the largest
//! `r` such that every lattice point with `|x|_1 <= r t` is in `S_t`, the
//! outer radius the largest `|x|_1 / t` over `S_t`. Deterministic speed
//! bounds put both in `[1/L, L]` up to lattice rounding.

use std::collections::BTreeMap;

use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::analysis::replicate_seeds;
use crate::environment::{sample_environment, EnvironmentSpec};
use crate::error::{Error, Result};
use crate::geometry::{l1_sphere, sphere_count, Vertex};
use crate::runner::Workers;
use crate::solver::{reachable_set, ReachableSet, StartTimeMode};
use crate::travel::{Network, TravelModel, Traversal};

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeConfig {
    pub environment: EnvironmentSpec,
    pub model: TravelModel,
    pub t_list: Vec<f64>,
    pub replicates: usize,
    pub base_seed: u64,
    pub modes: Vec<StartTimeMode>,
}

impl ShapeConfig {
    fn validate(&self) -> Result<()> {
        self.environment.validate()?;
        if self.t_list.is_empty() || !(self.t_list[0] > 0.0) {
            return Err(Error::config("t_list must be non-empty with t > 0"));
        }
        if self.t_list.windows(2).any(|w| !(w[0] < w[1]))
            || self.t_list.iter().any(|t| !t.is_finite())
        {
            return Err(Error::config(
                "t_list must be strictly increasing and finite",
            ));
        }
        if self.replicates == 0 {
            return Err(Error::config("need at least 1 replicate"));
        }
        if self.modes.is_empty() {
            return Err(Error::config("need at least one start-time mode"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeEstimate {
    pub replicate: usize,
    pub t: f64,
    pub mode: StartTimeMode,
    pub n_points: usize,
    pub inner_radius: f64,
    pub outer_radius: f64,
    /// Convex hull of `S_t / t`, counter-clockwise (d = 2 only).
    pub hull: Option<Vec<[f64; 2]>>,
    /// Hull area over `|S_t| / t^2` (d = 2 only). Tends to 1 for convex limits.
    pub hull_area_ratio: Option<f64>,
    /// `1/L - 2/t <= inner_radius` and `outer_radius <= L + 2/t`.
    pub sandwich_ok: bool,
    /// Lattice points of `S_t`, sorted.
    pub points: Vec<Vertex>,
}

impl ShapeEstimate {
    pub fn scaled_points(&self) -> Vec<Vec<f64>> {
        self.points
            .iter()
            .map(|p| p.coords().iter().map(|&c| c as f64 / self.t).collect())
            .collect()
    }
}

/// Fraction of replicates whose `S_t` contains each point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionFrequency {
    pub t: f64,
    pub mode: StartTimeMode,
    pub points: Vec<(Vertex, f64)>,
}

/// L1 Hausdorff distance between `S_a / a` and `S_b / b` for consecutive
/// times of the grid, per replicate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub replicate: usize,
    pub mode: StartTimeMode,
    pub t_small: f64,
    pub t_large: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeReport {
    pub model: TravelModel,
    pub bound: f64,
    pub estimates: Vec<ShapeEstimate>,
    pub inclusion: Vec<InclusionFrequency>,
    pub discrepancies: Vec<Discrepancy>,
}

/// Radii, hull and sandwich check for one reachable set.
pub fn shape_estimate(set: &ReachableSet, bound: f64, replicate: usize) -> ShapeEstimate {
    let t = set.t;
    let dim = set.points.first().map_or(0, Vertex::dim);
    let mut shell: BTreeMap<u64, u64> = BTreeMap::new();
    let mut outer = 0u64;
    for p in &set.points {
        let r = p.norm1().expect("reachable points are near the origin");
        *shell.entry(r).or_default() += 1;
        outer = outer.max(r);
    }
    let mut inner = 0u64;
    while shell.get(&(inner + 1)).copied() == Some(sphere_count(dim, inner + 1)) {
        inner += 1;
    }
    let inner_radius = inner as f64 / t;
    let outer_radius = outer as f64 / t;
    let (hull, hull_area_ratio) = if dim == 2 {
        let scaled: Vec<[f64; 2]> = set
            .points
            .iter()
            .map(|p| [p.coords()[0] as f64 / t, p.coords()[1] as f64 / t])
            .collect();
        let hull = convex_hull(&scaled);
        let ratio = polygon_area(&hull) / (set.points.len() as f64 / (t * t));
        (Some(hull), Some(ratio))
    } else {
        (None, None)
    };
    ShapeEstimate {
        replicate,
        t,
        mode: set.mode,
        n_points: set.points.len(),
        inner_radius,
        outer_radius,
        hull,
        hull_area_ratio,
        sandwich_ok: inner_radius >= 1.0 / bound - 2.0 / t && outer_radius <= bound + 2.0 / t,
        points: set.points.clone(),
    }
}

/// Andrew's monotone chain; returns the hull counter-clockwise without
/// repeating the first vertex. Collinear boundary points are dropped.
pub fn convex_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in [pts.clone(), pts.iter().rev().copied().collect()] {
        let floor = hull.len();
        for p in pass {
            while hull.len() >= floor + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Shoelace area of a simple polygon.
pub fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let twice: f64 = (0..poly.len())
        .map(|i| {
            let a = poly[i];
            let b = poly[(i + 1) % poly.len()];
            a[0] * b[1] - a[1] * b[0]
        })
        .sum();
    0.5 * twice.abs()
}

/// Symmetric L1 Hausdorff distance between `a / ta` and `b / tb`, for
/// non-empty lattice point sets `a`, `b`.
pub fn hausdorff_l1(a: &[Vertex], ta: f64, b: &[Vertex], tb: f64) -> f64 {
    directed_l1(a, ta, b, tb).max(directed_l1(b, tb, a, ta))
}

/// `max_{p in a} min_{q in b} |p/ta - q/tb|_1`, searching L1 shells of `b`
/// around the rescaled point until no closer member can exist.
fn directed_l1(a: &[Vertex], ta: f64, b: &[Vertex], tb: f64) -> f64 {
    let members: FxHashSet<&Vertex> = b.iter().collect();
    let scale = tb / ta;
    let mut worst: f64 = 0.0;
    for p in a {
        let y: Vec<f64> = p.coords().iter().map(|&c| c as f64 * scale).collect();
        let center = Vertex::new(y.iter().map(|c| c.round() as i64));
        let slack: f64 = y
            .iter()
            .zip(center.coords())
            .map(|(c, &r)| (c - r as f64).abs())
            .sum();
        let mut best = f64::INFINITY;
        let mut r = 0i64;
        while (r as f64) - slack < best {
            for q in l1_sphere(&center, r) {
                if members.contains(&q) {
                    let d: f64 = y
                        .iter()
                        .zip(q.coords())
                        .map(|(c, &x)| (c - x as f64).abs())
                        .sum();
                    best = best.min(d);
                }
            }
            r += 1;
        }
        worst = worst.max(best / tb);
    }
    worst
}

/// Reachable sets `S_t` for every `t` and mode in independent realizations,
/// with per-replicate radii, hulls and discrepancies between consecutive
/// times, plus pooled inclusion frequencies.
pub fn estimate_shape(cfg: &ShapeConfig, workers: Workers) -> Result<ShapeReport> {
    cfg.validate()?;
    let bound = cfg.environment.bound();
    let seeds = replicate_seeds(cfg.base_seed, cfg.replicates);
    let per_replicate = workers.map(&seeds, |r, seed| {
        let env = sample_environment(&cfg.environment.with_seed(seed))?;
        let net = Traversal::new(env, cfg.model);
        let mut estimates = Vec::new();
        let mut discrepancies = Vec::new();
        for &mode in &cfg.modes {
            let sets = cfg
                .t_list
                .iter()
                .map(|&t| reachable_set(&net, t, mode))
                .collect::<Result<Vec<_>>>()?;
            for pair in sets.windows(2) {
                discrepancies.push(Discrepancy {
                    replicate: r,
                    mode,
                    t_small: pair[0].t,
                    t_large: pair[1].t,
                    value: hausdorff_l1(&pair[0].points, pair[0].t, &pair[1].points, pair[1].t),
                });
            }
            estimates.extend(sets.iter().map(|s| shape_estimate(s, net.bound(), r)));
        }
        Ok((estimates, discrepancies))
    })?;

    let mut estimates = Vec::new();
    let mut discrepancies = Vec::new();
    for (e, d) in per_replicate {
        estimates.extend(e);
        discrepancies.extend(d);
    }
    let mut inclusion = Vec::new();
    for &mode in &cfg.modes {
        for &t in &cfg.t_list {
            let mut counts: BTreeMap<&Vertex, usize> = BTreeMap::new();
            for e in estimates.iter().filter(|e| e.mode == mode && e.t == t) {
                for p in &e.points {
                    *counts.entry(p).or_default() += 1;
                }
            }
            inclusion.push(InclusionFrequency {
                t,
                mode,
                points: counts
                    .into_iter()
                    .map(|(p, c)| (p.clone(), c as f64 / cfg.replicates as f64))
                    .collect(),
            });
        }
    }
    Ok(ShapeReport {
        model: cfg.model,
        bound,
        estimates,
        inclusion,
        discrepancies,
    })
}
