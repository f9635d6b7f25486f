//! Exact distances, invariants, and filtrations for weighted hypernetworks.
//!
//! A *hypernetwork* is a node set, a hyperedge set, and a total real-valued
//! kernel between them; a *network* is the square special case. This crate
//! computes the correspondence-based matching distance between hypernetworks
//! exactly at small scale ([`metrics::exact_dh`], [`metrics::exact_dn`]),
//! plus the surrounding machinery:
//!
//! - graph images of hypernetworks — bipartite, clique, line-graph,
//!   max-min affinities, single-linkage ultrametrics ([`graphify`]);
//! - cheap invariant-based lower bounds on the distance ([`invariants`]);
//! - Dowker filtrations, persistent homology, bottleneck distances, and the
//!   stability lower bound ([`dowker`]);
//! - powerset (Hausdorff) maps, lifted map distortions, and the
//!   neighborhood-chain convexity check ([`transport`]).
//!
//! The hot loops fan out over rayon when the default `parallel` feature is
//! on and run sequentially otherwise; results are bit-identical either way.

pub mod matrix;
pub mod model;

mod exec;

pub mod dowker;
pub mod graphify;
pub mod invariants;
pub mod metrics;
pub mod transport;

pub use matrix::Matrix;
pub use model::{from_network, Hypernetwork, Network};
