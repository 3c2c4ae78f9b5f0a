//! Finite cube complexes: validation, vertex links, the Gromov link condition,
//! median-graph CAT(0) test, hyperplanes and their halfspaces.

mod cat0;
pub mod generators;
mod hyperplane;
mod link;
mod model;

use thiserror::Error;

use crate::label::Label;

pub use cat0::{
    is_cat0, is_locally_cat0, median, unfilled_square, Cat0Complex, Cat0Verdict, Cat0Witness, IntervalTable,
    LocalVerdict, DEFAULT_MEDIAN_CAP,
};
pub use hyperplane::{halfspace_system_of, halfspaces_of, hyperplanes, CubeHalfspaces, HellyVerdict, Hyperplane, Hyperplanes};
pub use link::{is_flag, vertex_link, FlagVerdict, SimplicialComplex};
pub use model::{canonical_corners, face_corners, CubeComplex, CubeId, RawComplex, VertexId};

#[derive(Debug, Error)]
pub enum CubeError {
    #[error("cube {cube:?} of dimension {dim} repeats a corner")]
    SelfGluing { dim: usize, cube: Vec<Label> },
    #[error("cubes {first:?} and {second:?} do not meet in a single common face")]
    DoubleGluing { first: Vec<Label>, second: Vec<Label> },
    #[error("face {face:?} of cube {cube:?} is not listed")]
    MissingFace { cube: Vec<Label>, face: Vec<Label> },
    #[error("cube {cube:?} is listed twice")]
    DuplicateCube { cube: Vec<Label> },
    #[error("vertex {0} is listed twice")]
    DuplicateVertex(Label),
    #[error("unknown vertex {0}")]
    UnknownVertex(Label),
    #[error("a {dim}-cube needs {} corners, found {found}", 1usize << dim)]
    BadCornerCount { dim: usize, found: usize },
    #[error("bad dimension key {0:?}")]
    BadDimension(String),
    #[error("complex is not connected")]
    Disconnected,
    #[error("complex is not CAT(0)")]
    NotCat0,
    #[error("triple has no median")]
    NoMedian,
    #[error("triple has {0} medians")]
    MultipleMedians(usize),
    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("unknown hyperplane {0}")]
    UnknownHyperplane(usize),
    #[error(transparent)]
    Pocset(Box<crate::pocset::PocsetError>),
    #[error("malformed complex json: {0}")]
    Json(#[from] serde_json::Error),
}
