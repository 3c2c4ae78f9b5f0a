mod complex;
mod coxeter;
mod pocset;
mod tree;

use std::path::PathBuf;

use clap::{Args, Subcommand};

use crate::{Ctx, Res, Verdict};

/// A complex from a JSON file or a named generator.
#[derive(Args, Debug, Clone)]
pub struct ComplexInput {
    /// Complex JSON file
    #[arg(required_unless_present = "generate")]
    pub file: Option<PathBuf>,
    /// Built-in family instead of a file: torus:PxQ, grid:AxB[xC..], cube:N,
    /// boundary:N, path:K, cycle:N, tree:N (random, uses --seed), treespace:N
    #[arg(long, conflicts_with = "file", value_name = "SPEC")]
    pub generate: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum ComplexCmd {
    /// Validate, then test the link condition and the median property
    Check(ComplexInput),
    /// Vertex links and the flag test at every vertex
    Links {
        #[command(flatten)]
        input: ComplexInput,
        /// Vertex whose link is drawn with --dot (default: the first)
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Hyperplanes, their halfspaces, crossings and the Helly property
    Hyperplanes(ComplexInput),
    /// Write the complex as canonical JSON (to --out, or into the verdict)
    Export(ComplexInput),
}

#[derive(Subcommand, Debug)]
pub enum PocsetCmd {
    /// Check the halfspace-system axioms
    Validate { file: PathBuf },
    /// Build the dual cube complex of the component of a vertex
    Dual {
        file: PathBuf,
        /// Seed orientation as one bit per hyperplane (1 = starred); default
        /// is a consistent orientation found by 2-SAT
        #[arg(long, value_name = "BITS")]
        seed_orientation: Option<String>,
    },
    /// Maximal cubes of the dual and the maximal transversal families
    Cubes { file: PathBuf },
}

/// A Coxeter system from a matrix file or a built-in name.
#[derive(Args, Debug, Clone)]
pub struct GroupInput {
    /// Coxeter matrix JSON ({"rank": n, "m": [[...]]}, 0 = infinity)
    #[arg(long, required_unless_present = "group", value_name = "PATH")]
    pub matrix: Option<PathBuf>,
    /// Built-in group: i2:M (dihedral, M = 0 for infinite), a2tilde, pgl2z,
    /// universal:N
    #[arg(long, conflicts_with = "matrix")]
    pub group: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct BallArgs {
    #[command(flatten)]
    pub group: GroupInput,
    /// Radius of the Cayley ball
    #[arg(long, default_value_t = 3)]
    pub radius: usize,
}

#[derive(Subcommand, Debug)]
pub enum CoxeterCmd {
    /// Enumerate the Cayley ball
    Ball(BallArgs),
    /// Walls of the ball with the edge-partition and ±1 checks
    Walls(BallArgs),
    /// The truncated wall halfspace system and its trust report
    Halfspaces {
        #[command(flatten)]
        ball: BallArgs,
        #[arg(long, default_value_t = 2)]
        margin: usize,
        /// Report the principal orientation of this element
        #[arg(long, value_name = "WORD")]
        seed_element: Option<String>,
    },
    /// Dual cube complex of the wall system and the embedding of the ball
    Cubulate {
        #[command(flatten)]
        ball: BallArgs,
        #[arg(long, default_value_t = 2)]
        margin: usize,
        /// Report the dual vertex of this element
        #[arg(long, value_name = "WORD")]
        seed_element: Option<String>,
    },
    /// Estimate the number of ends from annuli of the ball
    Ends {
        #[command(flatten)]
        ball: BallArgs,
        /// Inner radii, comma separated
        #[arg(long, value_delimiter = ',', default_value = "1")]
        inner: Vec<usize>,
    },
    /// Reduced (ShortLex) form of words
    Reduce {
        #[command(flatten)]
        group: GroupInput,
        #[arg(required = true)]
        words: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum TreeCmd {
    /// Validate a tree and print its canonical form
    Validate {
        file: PathBuf,
        /// The file is an orthant (clusters + lengths) rather than a tree
        #[arg(long)]
        orthant: bool,
    },
    /// (2n-3)!! binary topologies, cross-checked by enumeration for small n
    Count {
        #[arg(short)]
        n: usize,
    },
    /// List all binary topologies as cluster sets
    Enumerate {
        #[arg(short)]
        n: usize,
    },
    /// Link of the star tree; for n = 4 compared with the Petersen graph
    Link {
        #[arg(short)]
        n: usize,
    },
    /// Unit truncation of tree space as a cube complex, with the CAT(0) test
    Complex {
        #[arg(short)]
        n: usize,
        /// Largest n accepted
        #[arg(long, default_value_t = cubeplex::treespace::DEFAULT_TREESPACE_BOUND)]
        bound: usize,
    },
    /// Distance between two trees along cone and face paths
    Dist {
        first: PathBuf,
        second: PathBuf,
        /// Inputs are orthants rather than trees
        #[arg(long)]
        orthant: bool,
    },
}

pub(crate) fn complex(ctx: &Ctx, cmd: ComplexCmd) -> Res<Verdict> {
    complex::run(ctx, cmd)
}

pub(crate) fn pocset(ctx: &Ctx, cmd: PocsetCmd) -> Res<Verdict> {
    pocset::run(ctx, cmd)
}

pub(crate) fn coxeter(ctx: &Ctx, cmd: CoxeterCmd) -> Res<Verdict> {
    coxeter::run(ctx, cmd)
}

pub(crate) fn tree(ctx: &Ctx, cmd: TreeCmd) -> Res<Verdict> {
    tree::run(ctx, cmd)
}
