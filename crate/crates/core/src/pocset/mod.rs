//! Halfspace systems (pocsets) and their dual cube complexes.

mod dual;
mod orientation;
mod system;

use thiserror::Error;

use crate::complex::CubeError;
use crate::label::Label;

pub use dual::{dual_complex, maximal_cubes, DualComplex, MaximalCube, MaximalCubes, OrientationTable};
pub use orientation::{flip, is_vertex, minimal_halfspaces, seed_vertex, Orientation, VertexVerdict};
pub use system::{hyperplane_of, star, HalfspaceId, HalfspaceSystem, RawPocset};

#[derive(Debug, Error)]
pub enum PocsetError {
    #[error("halfspace {0} is not paired exactly once")]
    NotInvolution(Label),
    #[error("halfspace {0} is paired with itself")]
    SelfPaired(Label),
    #[error("{a} <= {b} without the reversed relation between their stars")]
    NotOrderReversing { a: Label, b: Label },
    #[error("hyperplanes of {h} and {k} satisfy several nesting relations: {relations:?}")]
    NestingViolation {
        h: Label,
        k: Label,
        relations: Vec<(Label, Label)>,
    },
    #[error("halfspace {0} is comparable with its complement")]
    ComparableComplements(Label),
    #[error("order has a cycle through {a} and {b}")]
    CyclicOrder { a: Label, b: Label },
    #[error("unknown halfspace {0}")]
    UnknownHalfspace(Label),
    #[error("halfspace {0} is listed twice")]
    DuplicateHalfspace(Label),
    #[error("unknown hyperplane {0}")]
    UnknownHyperplane(usize),
    #[error("{0} and its complement belong to the same hyperplane")]
    SameHyperplane(Label),
    #[error("orientation covers {found} hyperplanes, system has {expected}")]
    PartialOrientation { expected: usize, found: usize },
    #[error("orientation is inconsistent: {first} <= complement of {second}")]
    NotAVertex { first: Label, second: Label },
    #[error("chosen halfspace {0} is not minimal")]
    NotMinimal(Label),
    #[error("no consistent orientation exists (hyperplane of {0})")]
    Unsatisfiable(Label),
    #[error("dual component exceeds cap {cap}")]
    CapExceeded { cap: usize },
    #[error(transparent)]
    Cube(Box<CubeError>),
    #[error("malformed pocset json: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<CubeError> for PocsetError {
    fn from(e: CubeError) -> Self {
        PocsetError::Cube(Box::new(e))
    }
}
