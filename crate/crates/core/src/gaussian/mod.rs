//! Gaussian-state engine and the cluster structures built with it.

pub mod graph;
pub mod lattice;
pub mod oeg;
pub mod state;

pub use graph::{nullifier_variances, state_adjacency, ClusterGraph, ClusterReport, NodeTag};
pub use lattice::{build_lattice, build_lattice_with, macronode_lattice, reduce_macronode, BuildOptions, Dims};
pub use oeg::{build_oeg, PairChoice};
pub use state::{Band, GaussianState, Hg, ModeLabel};
