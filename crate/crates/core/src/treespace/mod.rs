//! The space of rooted phylogenetic trees: validation and canonical form,
//! cluster coordinates, topology enumeration, the link of the origin and a
//! cubical truncation for the CAT(0) check.

mod space;
mod tree;

use thiserror::Error;

use crate::label::Label;

pub use space::{
    count_binary, enumerate_topologies, is_petersen, link_of_origin, treespace_complex, OriginLink, PetersenCertificate,
    DEFAULT_TREESPACE_BOUND,
};
pub use tree::{
    cone_distance, format_cluster, validate_tree, Cluster, ConeDistance, Orthant, PhyloTree, RawTree, Validated,
};

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("root has {0} children, needs at least 2")]
    BadRootValency(usize),
    #[error("interior vertex {0} has valency 2")]
    InteriorValencyTwo(Label),
    #[error("leaf {0} has no label")]
    UnlabeledLeaf(Label),
    #[error("edge {parent} -> {child} has length {length}")]
    NonPositiveLength { parent: Label, child: Label, length: f64 },
    #[error("tree contains a cycle through {0}")]
    Cyclic(Label),
    #[error("malformed tree: {0}")]
    Malformed(String),
    #[error("leaf labels must be a bijection onto 1..={n}")]
    BadLeafLabels { n: usize },
    #[error("trees have {0} and {1} leaves")]
    LeafCountMismatch(usize, usize),
    #[error("clusters {0} and {1} are neither nested nor disjoint")]
    IncompatibleClusters(String, String),
    #[error("bad cluster {0}")]
    BadCluster(String),
    #[error("n = {0} is outside the supported range {1}")]
    LeafCount(usize, &'static str),
    #[error("n = {n} exceeds the configured bound {bound}")]
    AboveBound { n: usize, bound: usize },
    #[error("enumeration exceeds cap {cap}")]
    CapExceeded { cap: usize },
    #[error("count overflows 128 bits")]
    Overflow,
    #[error(transparent)]
    Cube(#[from] crate::complex::CubeError),
    #[error("malformed tree json: {0}")]
    Json(#[from] serde_json::Error),
}
