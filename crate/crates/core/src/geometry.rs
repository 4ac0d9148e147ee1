//! Lattice vertices, undirected nearest-neighbour edges, paths and L1
//! geometry on `Z^d`.

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub(crate) type Coords = SmallVec<[i64; 4]>;

/// A point of `Z^d`. Serialized as a JSON integer array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(Coords);

impl Vertex {
    pub fn new(coords: impl IntoIterator<Item = i64>) -> Self {
        Vertex(coords.into_iter().collect())
    }

    pub fn origin(dim: usize) -> Self {
        Vertex(smallvec::smallvec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// `self + k * dir`, checked.
    pub fn offset(&self, dir: &Vertex, k: i64) -> Result<Vertex> {
        same_dim(self, dir)?;
        self.0
            .iter()
            .zip(dir.0.iter())
            .map(|(&x, &e)| e.checked_mul(k).and_then(|s| x.checked_add(s)))
            .collect::<Option<Coords>>()
            .map(Vertex)
            .ok_or_else(|| Error::config("coordinate overflow"))
    }

    /// L1 norm.
    pub fn norm1(&self) -> Result<u64> {
        self.0.iter().try_fold(0u64, |acc, &x| {
            acc.checked_add(x.unsigned_abs())
                .ok_or_else(|| Error::config("coordinate overflow"))
        })
    }

    /// Neighbour along `axis` in direction `sign` (+1 / -1). `None` on overflow.
    pub(crate) fn step(&self, axis: usize, sign: i64) -> Option<Vertex> {
        let mut c = self.0.clone();
        c[axis] = c[axis].checked_add(sign)?;
        Some(Vertex(c))
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl From<&[i64]> for Vertex {
    fn from(c: &[i64]) -> Self {
        Vertex(c.into())
    }
}

impl<const N: usize> From<[i64; N]> for Vertex {
    fn from(c: [i64; N]) -> Self {
        Vertex(c.as_slice().into())
    }
}

fn same_dim(a: &Vertex, b: &Vertex) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::config(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// An undirected lattice edge, identified by its lexicographically smaller
/// endpoint and the axis along which it runs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub base: Vertex,
    pub axis: usize,
}

impl Edge {
    pub fn new(base: Vertex, axis: usize) -> Result<Self> {
        if axis >= base.dim() {
            return Err(Error::config(format!(
                "axis {axis} out of range for dimension {}",
                base.dim()
            )));
        }
        if base.0[axis] == i64::MAX {
            return Err(Error::config("coordinate overflow"));
        }
        Ok(Edge { base, axis })
    }

    /// The edge joining two adjacent vertices, in either order.
    pub fn between(a: &Vertex, b: &Vertex) -> Result<Self> {
        if l1_distance(a, b)? != 1 {
            return Err(Error::config(format!("{a:?} and {b:?} are not adjacent")));
        }
        let axis = (0..a.dim()).find(|&i| a.0[i] != b.0[i]).unwrap();
        let base = if a < b { a.clone() } else { b.clone() };
        Ok(Edge { base, axis })
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        let mut top = self.base.clone();
        top.0[self.axis] += 1;
        (self.base.clone(), top)
    }

    pub fn has_endpoint(&self, v: &Vertex) -> bool {
        let (a, b) = self.endpoints();
        *v == a || *v == b
    }

    /// The endpoint that is not `v`, or `None` if `v` is not on this edge.
    pub fn other(&self, v: &Vertex) -> Option<Vertex> {
        let (a, b) = self.endpoints();
        if *v == a {
            Some(b)
        } else if *v == b {
            Some(a)
        } else {
            None
        }
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Edge({:?}, axis {})", self.base, self.axis)
    }
}

pub fn l1_distance(a: &Vertex, b: &Vertex) -> Result<u64> {
    same_dim(a, b)?;
    a.0.iter().zip(b.0.iter()).try_fold(0u64, |acc, (&x, &y)| {
        let diff = (x as i128 - y as i128).unsigned_abs();
        u64::try_from(diff)
            .ok()
            .and_then(|d| acc.checked_add(d))
            .ok_or_else(|| Error::config("coordinate overflow"))
    })
}

/// The `2d` incident edges of `v`, paired with their far endpoints, ordered by
/// axis and then negative direction before positive.
pub fn neighbors(v: &Vertex) -> Result<Vec<(Edge, Vertex)>> {
    let mut out = Vec::with_capacity(2 * v.dim());
    for axis in 0..v.dim() {
        for sign in [-1, 1] {
            let w = v
                .step(axis, sign)
                .ok_or_else(|| Error::config("coordinate overflow"))?;
            let base = if sign < 0 { w.clone() } else { v.clone() };
            out.push((Edge { base, axis }, w));
        }
    }
    Ok(out)
}

/// All vertices within L1 distance `radius` of `center`, in lexicographic order.
pub fn l1_ball(center: &Vertex, radius: u64) -> Result<Vec<Vertex>> {
    let r = i64::try_from(radius).map_err(|_| Error::config("radius too large"))?;
    for &c in center.coords() {
        if c.checked_sub(r).is_none() || c.checked_add(r).is_none() {
            return Err(Error::config("coordinate overflow"));
        }
    }
    let mut out = Vec::with_capacity(crosspolytope_count(center.dim(), radius) as usize);
    let mut cur: Coords = center.0.clone();
    fill_ball(center.coords(), 0, r, &mut cur, &mut out);
    Ok(out)
}

fn fill_ball(center: &[i64], axis: usize, budget: i64, cur: &mut Coords, out: &mut Vec<Vertex>) {
    if axis == center.len() {
        out.push(Vertex(cur.clone()));
        return;
    }
    for delta in -budget..=budget {
        cur[axis] = center[axis] + delta;
        fill_ball(center, axis + 1, budget - delta.abs(), cur, out);
    }
    cur[axis] = center[axis];
}

/// All vertices at L1 distance exactly `radius` from `center`, in
/// lexicographic order. Coordinates must not overflow.
pub(crate) fn l1_sphere(center: &Vertex, radius: i64) -> Vec<Vertex> {
    let mut out = Vec::new();
    let mut cur: Coords = center.0.clone();
    fill_sphere(center.coords(), 0, radius, &mut cur, &mut out);
    out
}

fn fill_sphere(center: &[i64], axis: usize, budget: i64, cur: &mut Coords, out: &mut Vec<Vertex>) {
    if axis + 1 == center.len() {
        for delta in if budget == 0 {
            vec![0]
        } else {
            vec![-budget, budget]
        } {
            cur[axis] = center[axis] + delta;
            out.push(Vertex(cur.clone()));
        }
        cur[axis] = center[axis];
        return;
    }
    for delta in -budget..=budget {
        cur[axis] = center[axis] + delta;
        fill_sphere(center, axis + 1, budget - delta.abs(), cur, out);
    }
    cur[axis] = center[axis];
}

/// Number of lattice points in the `d`-dimensional L1 ball of radius `r`:
/// `sum_k 2^k C(d,k) C(r,k)`.
pub fn crosspolytope_count(dim: usize, radius: u64) -> u64 {
    let mut total = 0u64;
    let mut c_dk = 1u64; // C(d, k)
    let mut c_rk = 1u64; // C(r, k)
    for k in 0..=dim as u64 {
        if k > radius {
            break;
        }
        total += (1u64 << k) * c_dk * c_rk;
        c_dk = c_dk * (dim as u64 - k) / (k + 1);
        c_rk = c_rk * (radius - k) / (k + 1);
    }
    total
}

/// Number of lattice points at L1 distance exactly `r` from a point.
pub fn sphere_count(dim: usize, radius: u64) -> u64 {
    if radius == 0 {
        1
    } else {
        crosspolytope_count(dim, radius) - crosspolytope_count(dim, radius - 1)
    }
}

/// A nearest-neighbour walk. Incidence of consecutive steps is checked on
/// construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Path {
    start: Vertex,
    steps: Vec<(Edge, Vertex)>,
}

impl Path {
    pub fn new(start: Vertex, steps: Vec<(Edge, Vertex)>) -> Result<Self> {
        let mut at = &start;
        for (i, (edge, next)) in steps.iter().enumerate() {
            if edge.base.dim() != start.dim() || edge.other(at).as_ref() != Some(next) {
                return Err(Error::config(format!(
                    "path step {i} ({edge:?} -> {next:?}) does not depart from {at:?}"
                )));
            }
            at = next;
        }
        Ok(Path { start, steps })
    }

    /// The walk visiting `vertices` in order.
    pub fn through(vertices: &[Vertex]) -> Result<Self> {
        let (first, rest) = vertices
            .split_first()
            .ok_or_else(|| Error::config("a path needs a start vertex"))?;
        let mut steps = Vec::with_capacity(rest.len());
        let mut at = first;
        for v in rest {
            steps.push((Edge::between(at, v)?, v.clone()));
            at = v;
        }
        Path::new(first.clone(), steps)
    }

    pub fn start(&self) -> &Vertex {
        &self.start
    }

    pub fn end(&self) -> &Vertex {
        self.steps.last().map_or(&self.start, |(_, v)| v)
    }

    pub fn steps(&self) -> &[(Edge, Vertex)] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v<const N: usize>(c: [i64; N]) -> Vertex {
        Vertex::from(c)
    }

    #[test]
    fn l1_distance_examples() {
        assert_eq!(l1_distance(&v([0, 0]), &v([0, 0])).unwrap(), 0);
        assert_eq!(l1_distance(&v([0, 0]), &v([3, -2])).unwrap(), 5);
        assert_eq!(l1_distance(&v([1, 1, 1]), &v([0, 0, 0])).unwrap(), 3);
    }

    #[test]
    fn l1_distance_dimension_mismatch() {
        assert!(matches!(
            l1_distance(&v([0, 0]), &v([0, 0, 0])),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn l1_distance_extreme_coordinates() {
        let d = l1_distance(&v([i64::MIN]), &v([i64::MAX])).unwrap();
        assert_eq!(d, u64::MAX);
        assert!(l1_distance(&v([i64::MIN, 0]), &v([i64::MAX, 1])).is_err());
    }

    #[test]
    fn neighbors_order_and_count() {
        let ns = neighbors(&v([0, 0])).unwrap();
        let ends: Vec<_> = ns.iter().map(|(_, w)| w.clone()).collect();
        assert_eq!(ends, vec![v([-1, 0]), v([1, 0]), v([0, -1]), v([0, 1])]);
        let ns = neighbors(&v([5])).unwrap();
        assert_eq!(
            ns.iter().map(|(_, w)| w.clone()).collect::<Vec<_>>(),
            vec![v([4]), v([6])]
        );
        assert_eq!(neighbors(&Vertex::origin(3)).unwrap().len(), 6);
    }

    #[test]
    fn neighbors_overflow_is_an_error() {
        assert!(neighbors(&v([i64::MAX, 0])).is_err());
        assert!(neighbors(&v([0, i64::MIN])).is_err());
    }

    #[test]
    fn edge_identity_is_orientation_free() {
        let a = v([2, 3]);
        let b = v([2, 4]);
        let e = Edge::between(&a, &b).unwrap();
        assert_eq!(e, Edge::between(&b, &a).unwrap());
        assert_eq!(e, Edge::new(a.clone(), 1).unwrap());
        assert_eq!(e.other(&a), Some(b.clone()));
        assert_eq!(e.other(&b), Some(a));
        assert!(Edge::between(&v([0, 0]), &v([1, 1])).is_err());
        assert!(Edge::new(v([0, 0]), 2).is_err());
    }

    #[test]
    fn ball_examples() {
        assert_eq!(l1_ball(&v([0, 0]), 0).unwrap(), vec![v([0, 0])]);
        assert_eq!(l1_ball(&v([0, 0]), 1).unwrap().len(), 5);
        assert_eq!(l1_ball(&v([0, 0]), 2).unwrap().len(), 13);
    }

    #[test]
    fn ball_matches_brute_force_count() {
        for dim in 1..=4 {
            for r in 0..=5u64 {
                let ri = r as i64;
                // enumerate the enclosing box
                let side = 2 * ri + 1;
                let total = (side as u64).pow(dim as u32);
                let mut brute = 0;
                for code in 0..total {
                    let mut c = code;
                    let mut norm = 0;
                    for _ in 0..dim {
                        norm += ((c % side as u64) as i64 - ri).abs();
                        c /= side as u64;
                    }
                    if norm <= ri {
                        brute += 1;
                    }
                }
                let ball = l1_ball(&Vertex::origin(dim), r).unwrap();
                assert_eq!(ball.len() as u64, brute, "d={dim} r={r}");
                assert_eq!(crosspolytope_count(dim, r), brute, "d={dim} r={r}");
            }
        }
    }

    #[test]
    fn spheres_partition_the_ball() {
        for dim in 1..=3 {
            for r in 0..5 {
                let c = Vertex::new((0..dim as i64).map(|i| i - 1));
                let s = l1_sphere(&c, r);
                assert_eq!(s.len() as u64, sphere_count(dim, r as u64));
                assert!(s.iter().all(|u| l1_distance(&c, u).unwrap() == r as u64));
            }
        }
    }

    #[test]
    fn path_validation() {
        let p = Path::through(&[v([0, 0]), v([1, 0]), v([1, 1])]).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.end(), &v([1, 1]));
        let e = Edge::between(&v([5, 5]), &v([5, 6])).unwrap();
        assert!(Path::new(v([0, 0]), vec![(e, v([5, 6]))]).is_err());
        assert!(Path::through(&[v([0, 0]), v([2, 0])]).is_err());
        let empty = Path::new(v([1, 2]), vec![]).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.end(), &v([1, 2]));
    }

    #[test]
    fn json_forms() {
        let e = Edge::new(v([1, -2]), 1).unwrap();
        assert_eq!(
            serde_json::to_string(&e).unwrap(),
            r#"{"base":[1,-2],"axis":1}"#
        );
        let back: Vertex = serde_json::from_str("[4,5,6]").unwrap();
        assert_eq!(back, v([4, 5, 6]));
    }

    fn arb_vertex(dim: usize) -> impl Strategy<Value = Vertex> {
        prop::collection::vec(-1_000_000i64..1_000_000, dim).prop_map(Vertex::new)
    }

    proptest! {
        #[test]
        fn triangle_inequality(a in arb_vertex(3), b in arb_vertex(3), c in arb_vertex(3)) {
            let ac = l1_distance(&a, &c).unwrap();
            let ab = l1_distance(&a, &b).unwrap();
            let bc = l1_distance(&b, &c).unwrap();
            prop_assert!(ac <= ab + bc);
        }

        #[test]
        fn neighbors_are_distinct_incident_edges(a in arb_vertex(3)) {
            let ns = neighbors(&a).unwrap();
            prop_assert_eq!(ns.len(), 6);
            let mut edges: Vec<_> = ns.iter().map(|(e, _)| e.clone()).collect();
            for (e, w) in &ns {
                prop_assert!(e.has_endpoint(&a));
                let other = e.other(&a);
                prop_assert_eq!(other.as_ref(), Some(w));
            }
            edges.sort();
            edges.dedup();
            prop_assert_eq!(edges.len(), 6);
        }
    }
}
