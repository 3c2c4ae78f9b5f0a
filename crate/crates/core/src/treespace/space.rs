use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::tree::{cluster_cmp, compatible, format_cluster, full_set, Cluster};
use super::TreeError;
use crate::complex::{CubeComplex, SimplicialComplex};
use crate::graph::{petersen, Graph};
use crate::label::Label;

/// Largest n for which the truncated tree space is built by default.
pub const DEFAULT_TREESPACE_BOUND: usize = 6;

const LINK_BOUND: usize = 12;

/// `(2n-3)!!`, the number of binary rooted topologies on `n` labelled leaves.
pub fn count_binary(n: usize) -> Result<u128, TreeError> {
    if n < 2 {
        return Err(TreeError::LeafCount(n, "n >= 2"));
    }
    (1..=2 * n as u128 - 3)
        .step_by(2)
        .try_fold(1u128, |acc, k| acc.checked_mul(k))
        .ok_or(TreeError::Overflow)
}

fn sort_clusters(t: &mut [Cluster]) {
    t.sort_by(cluster_cmp);
}

fn topology_cmp(a: &Vec<Cluster>, b: &Vec<Cluster>) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| cluster_cmp(x, y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

/// Binary topologies (as sorted cluster lists) built by inserting leaf `k+1`
/// into every edge of every topology on `k` leaves, including above the root.
pub fn enumerate_topologies(n: usize, cap: usize) -> Result<Vec<Vec<Cluster>>, TreeError> {
    if !(2..=super::tree::MAX_LEAVES).contains(&n) {
        return Err(TreeError::LeafCount(n, "2..=64"));
    }
    let mut current: Vec<Vec<Cluster>> = vec![Vec::new()];
    for k in 2..n {
        let new_leaf: Cluster = 1 << k;
        let full = full_set(k);
        let mut next = Vec::with_capacity(current.len() * (2 * k - 1));
        for t in &current {
            let attach_points = (0..k).map(|i| 1u64 << i).chain(t.iter().copied()).chain([full]);
            for x in attach_points {
                let mut grown: Vec<Cluster> = t.iter().map(|&y| if y & x == x && y != x { y | new_leaf } else { y }).collect();
                grown.push(if x == full { full } else { x | new_leaf });
                sort_clusters(&mut grown);
                if next.len() >= cap {
                    return Err(TreeError::CapExceeded { cap });
                }
                next.push(grown);
            }
        }
        current = next;
    }
    current.sort_by(topology_cmp);
    Ok(current)
}

/// All clusters on `n` leaves (sizes `2..n-1`) in lexicographic order.
fn all_clusters(n: usize) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = (1..full_set(n))
        .filter(|c: &u64| (2..n as u32).contains(&c.count_ones()))
        .collect();
    sort_clusters(&mut out);
    out
}

fn compatibility_graph(clusters: &[Cluster]) -> Graph {
    let mut edges = Vec::new();
    for (i, &a) in clusters.iter().enumerate() {
        for (j, &b) in clusters.iter().enumerate().skip(i + 1) {
            if compatible(a, b) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(clusters.len(), edges)
}

/// The link of the star tree: the flag complex of cluster compatibility.
#[derive(Clone, Debug)]
pub struct OriginLink {
    pub n: usize,
    pub clusters: Vec<Cluster>,
    pub complex: SimplicialComplex,
    pub graph: Graph,
}

pub fn link_of_origin(n: usize) -> Result<OriginLink, TreeError> {
    if n < 3 {
        return Err(TreeError::LeafCount(n, "n >= 3"));
    }
    if n > LINK_BOUND {
        return Err(TreeError::AboveBound { n, bound: LINK_BOUND });
    }
    let clusters = all_clusters(n);
    let graph = compatibility_graph(&clusters);
    let labels = clusters.iter().map(|&c| Label::Str(format_cluster(c, n))).collect();
    let complex = SimplicialComplex::from_generators(labels, graph.maximal_cliques());
    Ok(OriginLink {
        n,
        clusters,
        complex,
        graph,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PetersenCertificate {
    pub vertices: usize,
    pub edges: usize,
    /// Common degree, if the graph is regular.
    pub regular_degree: Option<usize>,
    pub girth: Option<usize>,
    /// `isomorphism[i]` is the Petersen vertex matched to vertex `i`.
    pub isomorphism: Option<Vec<usize>>,
    pub is_petersen: bool,
}

pub fn is_petersen(g: &Graph) -> PetersenCertificate {
    let n = g.vertex_count();
    let regular_degree = (n > 0 && (0..n).all(|v| g.degree(v) == g.degree(0))).then(|| g.degree(0));
    let isomorphism = g.find_isomorphism(&petersen());
    PetersenCertificate {
        vertices: n,
        edges: g.edge_count(),
        regular_degree,
        girth: g.girth(),
        is_petersen: isomorphism.is_some(),
        isomorphism,
    }
}

fn vertex_label(set: &[Cluster], n: usize) -> Label {
    if set.is_empty() {
        Label::str("o")
    } else {
        Label::Str(set.iter().map(|&c| format_cluster(c, n)).collect::<Vec<_>>().join("|"))
    }
}

/// The unit truncation of tree space: vertices are compatible cluster sets
/// (the 0/1 points of the orthants); the cube spanned by `C` over base `B`
/// has corners `B ∪ S` for `S ⊆ C`.
pub fn treespace_complex(n: usize, bound: usize, cap: usize) -> Result<CubeComplex, TreeError> {
    if n < 2 {
        return Err(TreeError::LeafCount(n, "n >= 2"));
    }
    if n > bound {
        return Err(TreeError::AboveBound { n, bound });
    }
    let clusters = all_clusters(n);
    let graph = compatibility_graph(&clusters);
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::from([Vec::new()]);
    for clique in graph.maximal_cliques() {
        let k = clique.len();
        for mask in 1u64..1 << k {
            faces.insert((0..k).filter(|i| mask >> i & 1 == 1).map(|i| clique[i]).collect());
            if faces.len() > cap {
                return Err(TreeError::CapExceeded { cap });
            }
        }
    }
    let index: HashMap<&Vec<usize>, usize> = faces.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut cubes: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n.saturating_sub(2)];
    let mut total = faces.len();
    for face in &faces {
        let k = face.len();
        for c_mask in 1u64..1 << k {
            let dim = c_mask.count_ones() as usize;
            let free: Vec<usize> = (0..k).filter(|i| c_mask >> i & 1 == 1).collect();
            let corners: Vec<usize> = (0..1usize << dim)
                .map(|b| {
                    let mut selected = !c_mask & ((1u64 << k) - 1);
                    for (p, &i) in free.iter().enumerate() {
                        if b >> p & 1 == 1 {
                            selected |= 1 << i;
                        }
                    }
                    let v: Vec<usize> = (0..k).filter(|i| selected >> i & 1 == 1).map(|i| face[i]).collect();
                    index[&v]
                })
                .collect();
            total += 1;
            if total > cap {
                return Err(TreeError::CapExceeded { cap });
            }
            cubes[dim - 1].push(corners);
        }
    }
    let labels = faces
        .iter()
        .map(|f| vertex_label(&f.iter().map(|&i| clusters[i]).collect::<Vec<_>>(), n))
        .collect();
    Ok(CubeComplex::from_labelled(labels, cubes)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treespace::PhyloTree;
    use crate::complex::{is_flag, vertex_link};

    #[test]
    fn counts() {
        let expected = [1u128, 3, 15, 105, 945, 10395];
        for (n, &e) in (2..=7).zip(&expected) {
            assert_eq!(count_binary(n).unwrap(), e);
            let topos = enumerate_topologies(n, 100_000).unwrap();
            assert_eq!(topos.len() as u128, e);
            assert!(topos.iter().all(|t| t.len() == n - 2));
            assert!(topos.iter().all(|t| t.windows(2).all(|w| w[0] != w[1])));
            assert!(topos.iter().all(|t| PhyloTree::from_clusters(n, t, &vec![1.0; t.len()]).is_ok()));
            assert!(topos.windows(2).all(|w| w[0] != w[1]));
        }
        assert!(count_binary(1).is_err());
        assert!(count_binary(40).is_err());
        assert!(matches!(enumerate_topologies(5, 20), Err(TreeError::CapExceeded { cap: 20 })));
    }

    #[test]
    fn link_for_four_leaves_is_petersen() {
        let l = link_of_origin(4).unwrap();
        assert_eq!(l.clusters.len(), 10);
        let cert = is_petersen(&l.graph);
        assert_eq!((cert.vertices, cert.edges, cert.regular_degree, cert.girth), (10, 15, Some(3), Some(5)));
        assert!(cert.is_petersen);
        assert!(l.complex.maximal_simplices().iter().all(|s| s.len() == 2));
        let three = link_of_origin(3).unwrap();
        assert_eq!((three.graph.vertex_count(), three.graph.edge_count()), (3, 0));
    }

    #[test]
    fn truncated_space_small_cases() {
        let t3 = treespace_complex(3, 6, 10_000).unwrap();
        assert_eq!(t3.f_vector(), vec![4, 3]);
        let t4 = treespace_complex(4, 6, 10_000).unwrap();
        assert_eq!(t4.f_vector(), vec![26, 40, 15]);
        assert_eq!(t4.euler_characteristic(), 1);
        let origin = t4.vertex_by_label(&Label::str("o")).unwrap();
        let link = vertex_link(&t4, origin).unwrap();
        assert_eq!((link.count(0), link.count(1), link.count(2)), (10, 15, 0));
        assert!(is_flag(&link).flag);
        assert!(matches!(treespace_complex(7, 6, 10), Err(TreeError::AboveBound { .. })));
    }
}
