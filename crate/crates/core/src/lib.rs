//! Solvers for the maximum balanced subgraph problem on signed graphs.

pub mod bc;
pub mod bench;
pub mod cli;
pub mod ggmz;
pub mod graph;
pub mod grasp;
pub mod instances;
pub mod lp;
pub mod scalar;
pub mod spanning;

pub use graph::{Bipartition, GraphError, Side, Sign, SignedEdge, SignedGraph, SwitchSet};
pub use scalar::Scalar;

/// Arbitrary-precision rational, for exact LP solves.
pub type Rational = num_rational::BigRational;
pub type LinearProgram = lp::LinearProgram<f64>;
pub type LinearProgramF32 = lp::LinearProgram<f32>;
pub type ExactLinearProgram = lp::LinearProgram<Rational>;
pub type LpSolution = lp::LpSolution<f64>;
