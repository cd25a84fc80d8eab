//! Exact verification laboratory for clique-free graph structure at small scale.
//!
//! The crate provides, on graphs of at most 64 labeled vertices:
//!
//! - a compact bitset graph representation with graph6 I/O, generators and a
//!   brute-force canonical form ([`graph`]);
//! - exact clique counting and transversal-clique search ([`cliques`]);
//! - exact distance to r-partiteness via subset dynamic programming, optimal
//!   partition enumeration and a guaranteed local-search heuristic
//!   ([`partition`]);
//! - an exact-rational supersaturation lower bound on the K_{r+1} count of
//!   graphs that are t-far from r-partite, with verifiers ([`supersat`]);
//! - structural predicates over optimal partitions (uniform density, internal
//!   sparsity, balance), bad-set families and the edge-rewiring map Phi
//!   ([`structure`]);
//! - an exhaustive, sharded, checkpointable census over all labeled graphs on
//!   up to 8 vertices (9 in unlabeled mode) with built-in verification passes
//!   ([`census`]).
//!
//! All verdicts that matter are computed in exact integer or rational
//! arithmetic; floating point is used only for reporting.

pub mod census;
pub mod cliques;
pub mod graph;
pub mod partition;
pub mod structure;
pub mod supersat;

pub use graph::{Graph, VertexSet};
pub use partition::{DistanceResult, RPartition};
pub use supersat::SupersatReport;
