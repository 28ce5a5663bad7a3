//! Maximum independent set solvers and benchmarks on random regular graphs.
//!
//! * [`graph`]: canonical compressed-adjacency graphs and their text formats.
//! * [`rrg`]: random d-regular graph samplers and small-case enumeration.
//! * [`greedy`], [`bucket_queue`], [`exact`]: random greedy, min-degree
//!   greedy, and an exact branch-and-bound oracle.
//! * [`mcmc`]: simulated annealing and parallel tempering on the hard-core
//!   model.
//! * [`bounds`]: reference densities and approximation ratios.
//! * [`harness`], [`config`]: benchmark matrices, records, scaling fits and
//!   reports.

pub mod bounds;
pub mod bucket_queue;
pub mod config;
pub mod exact;
pub mod graph;
pub mod greedy;
pub mod harness;
pub mod independent_set;
pub mod mcmc;
pub mod rng;
pub mod rrg;

pub use graph::{Graph, GraphFormat, Vertex};
pub use independent_set::IndependentSet;
