//! Finite cube complexes, halfspace systems and their duals, Coxeter group
//! cubulations and the space of phylogenetic trees.

pub mod complex;
pub mod coxeter;
pub mod dot;
pub mod graph;
pub mod label;
pub mod pocset;
pub mod treespace;

pub use complex::{CubeComplex, CubeError, CubeId, RawComplex, VertexId};
pub use coxeter::{CayleyBall, CoxeterError, CoxeterSystem, Word};
pub use graph::Graph;
pub use label::Label;
pub use pocset::{HalfspaceSystem, Orientation, PocsetError, RawPocset};
pub use treespace::{Orthant, PhyloTree, RawTree, TreeError};
