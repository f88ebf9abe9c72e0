//! Nonlinear eigenvector computation on weighted graphs via proximal power
//! methods, with gradient-flow simulation and refinement-family convergence
//! studies.

pub mod error;
pub mod functionals;
pub mod graph;

pub use error::{Error, Result};
pub use functionals::{Energy, Functional, FunctionalDesc, FunctionalKind};
pub use graph::{
    componentwise_mean, div, grad, Edge, EdgeField, NormKind, VertexField, WeightedGraph,
};
