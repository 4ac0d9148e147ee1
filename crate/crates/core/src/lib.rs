//! First passage percolation on `Z^d` in time-dependent random environments.
//!
//! Speeds on lattice edges change over time according to a random
//! [`environment`]; a traveller crossing an edge obeys one of two
//! [`travel`] laws; the [`solver`] computes exact first passage times with a
//! time-dependent Dijkstra search; [`analysis`] runs the Monte Carlo
//! estimators and hypothesis checks on top.

// `!(x > 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod environment;
pub mod error;
pub mod geometry;
pub mod runner;
pub mod seed;
pub mod solver;
pub mod travel;

pub use environment::{
    regime_covariance_theoretical, sample_environment, Environment, EnvironmentKind,
    EnvironmentSpec, FieldDistribution, FieldSpec, PiecewiseSpeed,
};
pub use error::{Error, Result};
pub use geometry::{l1_ball, l1_distance, neighbors, Edge, Path, Vertex};
pub use runner::Workers;
pub use solver::{
    brute_force_first_passage, directional_passage, earliest_arrival, first_passage, reachable_set,
    region_radius, ArrivalLabels, PassageQuery, ReachableSet, StartTimeMode,
};
pub use travel::{arrival, path_travel_time, traversal_time, Network, TravelModel, Traversal};
