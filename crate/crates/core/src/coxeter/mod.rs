//! Coxeter groups: the word problem by braid moves, Cayley balls, walls and
//! roots, the wall halfspace system and its cubulation, and an ends estimator.

mod ball;
mod cubulate;
mod system;

use thiserror::Error;

use crate::pocset::PocsetError;

pub use ball::{CayleyBall, Edge, Root, Wall};
pub use cubulate::{
    cubulate, ends_estimate, halfspace_system, Cubulation, EndsReport, EndsVerdict, TrustReport, WallHalfspaces,
};
pub use system::{format_word, parse_word, CoxeterSystem, RawCoxeter, Word, DEFAULT_ORBIT_CAP};

#[derive(Debug, Error)]
pub enum CoxeterError {
    #[error("matrix is not square: row {row} has {found} entries, rank is {rank}")]
    NotSquare { rank: usize, row: usize, found: usize },
    #[error("m[{i}][{j}] != m[{j}][{i}]")]
    NotSymmetric { i: usize, j: usize },
    #[error("diagonal entry m[{0}][{0}] must be 1")]
    BadDiagonal(usize),
    #[error("off-diagonal entry m[{i}][{j}] must be at least 2 or infinite")]
    EntryBelowTwo { i: usize, j: usize },
    #[error("letter {letter} out of range for rank {rank}")]
    LetterOutOfRange { letter: usize, rank: usize },
    #[error("cannot parse word {0:?}")]
    BadWord(String),
    #[error("braid orbit exceeds cap {cap}")]
    OrbitCapExceeded { cap: usize },
    #[error("ball exceeds cap {cap}")]
    CapExceeded { cap: usize },
    #[error("elements {0} and {1} are not adjacent")]
    NotAdjacent(String, String),
    #[error("element {0} is not in the ball")]
    NotInBall(String),
    #[error("unknown wall {0}")]
    UnknownWall(usize),
    #[error("radius {radius} must exceed inner radius {inner}")]
    BadRadii { inner: usize, radius: usize },
    #[error(transparent)]
    Pocset(#[from] PocsetError),
    #[error("malformed coxeter json: {0}")]
    Json(#[from] serde_json::Error),
}
