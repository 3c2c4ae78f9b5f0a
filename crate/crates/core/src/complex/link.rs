use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::{CubeComplex, CubeError, VertexId};
use crate::graph::Graph;
use crate::label::Label;

/// An abstract simplicial complex on vertices `0..n`; `simplices` holds every
/// nonempty simplex as a sorted vertex list (downward closed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<Label>,
    simplices: BTreeSet<Vec<usize>>,
}

impl SimplicialComplex {
    /// Closes the generating sets downward; every vertex is a 0-simplex.
    pub fn from_generators(labels: Vec<Label>, generators: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let n = labels.len();
        let mut simplices: BTreeSet<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
        for mut g in generators {
            g.sort_unstable();
            g.dedup();
            assert!(g.iter().all(|&v| v < n), "simplex vertex out of range");
            if simplices.contains(&g) {
                continue;
            }
            let k = g.len();
            for mask in 1u64..(1 << k) {
                let face: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| g[i]).collect();
                simplices.insert(face);
            }
        }
        SimplicialComplex { labels, simplices }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        let mut s = simplex.to_vec();
        s.sort_unstable();
        self.simplices.contains(&s)
    }

    /// Nonempty simplices in lexicographic order.
    pub fn simplices(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.simplices.iter().map(Vec::as_slice)
    }

    /// Number of simplices with `k + 1` vertices.
    pub fn count(&self, k: usize) -> usize {
        self.simplices.iter().filter(|s| s.len() == k + 1).count()
    }

    /// Dimension, or -1 when empty.
    pub fn dimension(&self) -> isize {
        self.simplices.iter().map(|s| s.len() as isize - 1).max().unwrap_or(-1)
    }

    pub fn maximal_simplices(&self) -> Vec<Vec<usize>> {
        let all: Vec<&Vec<usize>> = self.simplices.iter().collect();
        all.iter()
            .filter(|s| {
                !all.iter()
                    .any(|t| t.len() > s.len() && s.iter().all(|v| t.binary_search(v).is_ok()))
            })
            .map(|s| (*s).clone())
            .collect()
    }

    pub fn one_skeleton(&self) -> Graph {
        Graph::new(
            self.labels.len(),
            self.simplices.iter().filter(|s| s.len() == 2).map(|s| (s[0], s[1])),
        )
    }
}

/// Outcome of the flag test; `empty_simplex` is a clique whose proper faces
/// are all simplices but which is not itself a simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagVerdict {
    pub flag: bool,
    pub empty_simplex: Option<Vec<usize>>,
}

pub fn is_flag(link: &SimplicialComplex) -> FlagVerdict {
    let g = link.one_skeleton();
    // Grow cliques size by size; a clique all of whose facets are simplices
    // but which is missing is a minimal empty simplex.
    let mut layer: Vec<&Vec<usize>> = link.simplices.iter().filter(|s| s.len() == 2).collect();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for s in &layer {
            let last = *s.last().expect("nonempty");
            for &u in g.neighbors(last) {
                if u <= last || !s.iter().all(|&v| g.has_edge(v, u)) {
                    continue;
                }
                let mut t = (*s).clone();
                t.push(u);
                match link.simplices.get(&t) {
                    Some(found) => next.push(found),
                    None => {
                        return FlagVerdict {
                            flag: false,
                            empty_simplex: Some(t),
                        }
                    }
                }
            }
        }
        layer = next;
    }
    FlagVerdict {
        flag: true,
        empty_simplex: None,
    }
}

/// Combinatorial link of `v`: one vertex per edge at `v` (labelled by the far
/// endpoint) and one simplex per cube cornered at `v`, spanned by that cube's
/// edges at the corner.
pub fn vertex_link(x: &CubeComplex, v: VertexId) -> Result<SimplicialComplex, CubeError> {
    if v >= x.vertex_count() {
        return Err(CubeError::UnknownVertex(Label::from(v)));
    }
    let mut neighbours: Vec<VertexId> = x
        .cubes_at(v)
        .iter()
        .filter(|c| c.dim == 1)
        .map(|&c| {
            let e = x.corners(c);
            if e[0] == v {
                e[1]
            } else {
                e[0]
            }
        })
        .collect();
    neighbours.sort_unstable();
    let local = |w: VertexId| neighbours.binary_search(&w).expect("edge at v");
    let mut generators = HashSet::new();
    for &c in x.cubes_at(v) {
        if c.dim < 2 {
            continue;
        }
        let corners = x.corners(c);
        let corner = corners.iter().position(|&w| w == v).expect("incident cube");
        let simplex: Vec<usize> = (0..c.dim).map(|i| local(corners[corner ^ (1 << i)])).collect();
        generators.insert(simplex);
    }
    let labels = neighbours.iter().map(|&w| x.label(w).clone()).collect();
    Ok(SimplicialComplex::from_generators(labels, generators))
}
