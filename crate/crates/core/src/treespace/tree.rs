use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::TreeError;
use crate::label::Label;

/// A set of leaf labels as a bitmask: bit `i - 1` stands for leaf `i`.
pub type Cluster = u64;

pub(crate) const MAX_LEAVES: usize = 64;

pub(crate) fn full_set(n: usize) -> Cluster {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn cluster_labels(c: Cluster) -> Vec<u32> {
    (0..64).filter(|i| c >> i & 1 == 1).map(|i| i + 1).collect()
}

/// Lexicographic order on the sorted label lists.
pub(crate) fn cluster_cmp(a: &Cluster, b: &Cluster) -> Ordering {
    cluster_labels(*a).cmp(&cluster_labels(*b))
}

pub(crate) fn compatible(a: Cluster, b: Cluster) -> bool {
    let m = a & b;
    m == 0 || m == a || m == b
}

/// Digits for `n <= 9` (`"123"`), comma-separated labels otherwise.
pub fn format_cluster(c: Cluster, n: usize) -> String {
    let labels: Vec<String> = cluster_labels(c).iter().map(u32::to_string).collect();
    if n <= 9 {
        labels.concat()
    } else {
        labels.join(",")
    }
}

/// Tree file format. Leaf-edge lengths are accepted and ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawTree {
    pub n: usize,
    pub root: Label,
    pub nodes: Vec<Label>,
    pub edges: Vec<(Label, Label, f64)>,
    pub leaf_labels: BTreeMap<String, u32>,
}

/// Orthant coordinates: one positive length per cluster.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Orthant {
    pub n: usize,
    pub clusters: Vec<Vec<u32>>,
    pub lengths: Vec<f64>,
}

/// A labelled metric n-tree in canonical form: its clusters (leaf sets below
/// interior edges) in lexicographic order with their positive lengths.
#[derive(Clone, Debug, PartialEq)]
pub struct PhyloTree {
    n: usize,
    clusters: Vec<Cluster>,
    lengths: Vec<f64>,
}

/// A validated tree plus what canonicalization discarded.
#[derive(Clone, Debug, PartialEq)]
pub struct Validated {
    pub tree: PhyloTree,
    pub collapsed_edges: usize,
    pub ignored_leaf_lengths: usize,
}

fn check_leaf_count(n: usize) -> Result<(), TreeError> {
    if (2..=MAX_LEAVES).contains(&n) {
        Ok(())
    } else {
        Err(TreeError::LeafCount(n, "2..=64"))
    }
}

pub fn validate_tree(raw: &RawTree) -> Result<Validated, TreeError> {
    check_leaf_count(raw.n)?;
    let mut index: HashMap<&Label, usize> = HashMap::new();
    for (i, v) in raw.nodes.iter().enumerate() {
        if index.insert(v, i).is_some() {
            return Err(TreeError::Malformed(format!("node {v} listed twice")));
        }
    }
    let node = |l: &Label| index.get(l).copied().ok_or_else(|| TreeError::Malformed(format!("unknown node {l}")));
    let root = node(&raw.root)?;
    let count = raw.nodes.len();
    let mut parent: Vec<Option<(usize, f64)>> = vec![None; count];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); count];
    for (p, c, len) in &raw.edges {
        let (pi, ci) = (node(p)?, node(c)?);
        if !(*len >= 0.0) {
            return Err(TreeError::NonPositiveLength {
                parent: p.clone(),
                child: c.clone(),
                length: *len,
            });
        }
        if pi == ci || ci == root {
            return Err(TreeError::Cyclic(c.clone()));
        }
        if parent[ci].is_some() {
            return Err(TreeError::Malformed(format!("node {c} has two parents")));
        }
        parent[ci] = Some((pi, *len));
        children[pi].push(ci);
    }
    let mut order = Vec::with_capacity(count);
    let mut seen = vec![false; count];
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &c in &children[v] {
            seen[c] = true;
            stack.push(c);
        }
    }
    if let Some(v) = (0..count).find(|&v| !seen[v]) {
        return Err(if (0..count).filter(|&u| !seen[u]).all(|u| parent[u].is_some()) {
            TreeError::Cyclic(raw.nodes[v].clone())
        } else {
            TreeError::Malformed(format!("node {} is not connected to the root", raw.nodes[v]))
        });
    }

    let by_name: HashMap<String, usize> = raw.nodes.iter().enumerate().map(|(i, l)| (l.to_string(), i)).collect();
    let mut leaf_of: Vec<Option<u32>> = vec![None; count];
    for (name, &k) in &raw.leaf_labels {
        let v = *by_name
            .get(name)
            .ok_or_else(|| TreeError::Malformed(format!("leaf label for unknown node {name}")))?;
        if !children[v].is_empty() || v == root {
            return Err(TreeError::Malformed(format!("label {k} on interior node {name}")));
        }
        leaf_of[v] = Some(k);
    }
    if children[root].len() < 2 {
        return Err(TreeError::BadRootValency(children[root].len()));
    }
    let mut labels_seen = 0u64;
    let mut leaves = 0;
    for v in 0..count {
        if v == root {
            continue;
        }
        match children[v].len() {
            0 => {
                let k = leaf_of[v].ok_or_else(|| TreeError::UnlabeledLeaf(raw.nodes[v].clone()))? as usize;
                if !(1..=raw.n).contains(&k) || labels_seen >> (k - 1) & 1 == 1 {
                    return Err(TreeError::BadLeafLabels { n: raw.n });
                }
                labels_seen |= 1 << (k - 1);
                leaves += 1;
            }
            1 => return Err(TreeError::InteriorValencyTwo(raw.nodes[v].clone())),
            _ => {}
        }
    }
    if leaves != raw.n {
        return Err(TreeError::BadLeafLabels { n: raw.n });
    }

    let mut below = vec![0u64; count];
    for &v in order.iter().rev() {
        below[v] = match leaf_of[v] {
            Some(k) => 1 << (k - 1),
            None => children[v].iter().fold(0, |acc, &c| acc | below[c]),
        };
    }
    let mut coords = Vec::new();
    let mut collapsed_edges = 0;
    let mut ignored_leaf_lengths = 0;
    for v in 0..count {
        let Some((_, len)) = parent[v] else { continue };
        if leaf_of[v].is_some() {
            if len != 0.0 {
                ignored_leaf_lengths += 1;
            }
        } else if len > 0.0 {
            coords.push((below[v], len));
        } else {
            collapsed_edges += 1;
        }
    }
    Ok(Validated {
        tree: PhyloTree::from_coords(raw.n, coords),
        collapsed_edges,
        ignored_leaf_lengths,
    })
}

impl PhyloTree {
    fn from_coords(n: usize, mut coords: Vec<(Cluster, f64)>) -> Self {
        coords.sort_by(|a, b| cluster_cmp(&a.0, &b.0));
        PhyloTree {
            n,
            clusters: coords.iter().map(|c| c.0).collect(),
            lengths: coords.iter().map(|c| c.1).collect(),
        }
    }

    /// The tree whose every leaf hangs from the root.
    pub fn star(n: usize) -> Result<Self, TreeError> {
        check_leaf_count(n)?;
        Ok(PhyloTree {
            n,
            clusters: Vec::new(),
            lengths: Vec::new(),
        })
    }

    /// From bitmask clusters and lengths; validated like an orthant.
    pub fn from_clusters(n: usize, clusters: &[Cluster], lengths: &[f64]) -> Result<Self, TreeError> {
        check_leaf_count(n)?;
        if clusters.len() != lengths.len() {
            return Err(TreeError::Malformed(format!(
                "{} clusters but {} lengths",
                clusters.len(),
                lengths.len()
            )));
        }
        let full = full_set(n);
        let mut coords = Vec::new();
        for (i, (&c, &len)) in clusters.iter().zip(lengths).enumerate() {
            let size = c.count_ones() as usize;
            if c & !full != 0 || size < 2 || size > n - 1 {
                return Err(TreeError::BadCluster(format_cluster(c, n)));
            }
            if clusters[..i].contains(&c) {
                return Err(TreeError::BadCluster(format!("{} repeated", format_cluster(c, n))));
            }
            if let Some(&d) = clusters[..i].iter().find(|&&d| !compatible(c, d)) {
                return Err(TreeError::IncompatibleClusters(format_cluster(d, n), format_cluster(c, n)));
            }
            if !(len >= 0.0) {
                return Err(TreeError::Malformed(format!(
                    "length {len} for cluster {}",
                    format_cluster(c, n)
                )));
            }
            if len > 0.0 {
                coords.push((c, len));
            }
        }
        Ok(Self::from_coords(n, coords))
    }

    pub fn from_orthant(o: &Orthant) -> Result<Self, TreeError> {
        check_leaf_count(o.n)?;
        let mut clusters = Vec::with_capacity(o.clusters.len());
        for c in &o.clusters {
            let mut mask = 0u64;
            for &k in c {
                if k == 0 || k as usize > o.n || mask >> (k - 1) & 1 == 1 {
                    return Err(TreeError::BadCluster(format!("{c:?}")));
                }
                mask |= 1 << (k - 1);
            }
            clusters.push(mask);
        }
        Self::from_clusters(o.n, &clusters, &o.lengths)
    }

    pub fn to_orthant(&self) -> Orthant {
        Orthant {
            n: self.n,
            clusters: self.clusters.iter().map(|&c| cluster_labels(c)).collect(),
            lengths: self.lengths.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn length_of(&self, c: Cluster) -> f64 {
        self.clusters.iter().position(|&d| d == c).map_or(0.0, |i| self.lengths[i])
    }

    pub fn interior_edge_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_binary(&self) -> bool {
        self.clusters.len() == self.n - 2
    }

    /// Euclidean norm of the orthant coordinates (distance to the star tree).
    pub fn norm(&self) -> f64 {
        self.lengths.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Canonical drawing: root `r`, interior nodes `c0, c1, ...` in cluster
    /// order, leaves `l1..ln`; leaf edges get length 0.
    pub fn to_raw(&self) -> RawTree {
        let parent_of = |set: Cluster| -> Label {
            self.clusters
                .iter()
                .enumerate()
                .filter(|&(_, &d)| d != set && d & set == set)
                .min_by_key(|&(_, &d)| d.count_ones())
                .map_or(Label::str("r"), |(i, _)| Label::Str(format!("c{i}")))
        };
        let mut nodes = vec![Label::str("r")];
        let mut edges = Vec::new();
        for (i, &c) in self.clusters.iter().enumerate() {
            nodes.push(Label::Str(format!("c{i}")));
            edges.push((parent_of(c), Label::Str(format!("c{i}")), self.lengths[i]));
        }
        let mut leaf_labels = BTreeMap::new();
        for k in 1..=self.n {
            let name = format!("l{k}");
            nodes.push(Label::Str(name.clone()));
            edges.push((parent_of(1 << (k - 1)), Label::Str(name.clone()), 0.0));
            leaf_labels.insert(name, k as u32);
        }
        RawTree {
            n: self.n,
            root: Label::str("r"),
            nodes,
            edges,
            leaf_labels,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, TreeError> {
        Ok(validate_tree(&serde_json::from_str(text)?)?.tree)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("serializable")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConeDistance {
    pub value: f64,
    /// False when `value` is only an upper bound on the tree-space distance.
    pub exact: bool,
}

/// Exact Euclidean distance when both trees lie in a common orthant (and on
/// the tripod for n = 3); otherwise the shorter of the path through the
/// largest common face and the cone path through the origin.
pub fn cone_distance(a: &PhyloTree, b: &PhyloTree) -> Result<ConeDistance, TreeError> {
    if a.n != b.n {
        return Err(TreeError::LeafCountMismatch(a.n, b.n));
    }
    let shared: Vec<Cluster> = a.clusters.iter().copied().filter(|c| b.clusters.contains(c)).collect();
    let common_orthant = a
        .clusters
        .iter()
        .all(|&c| b.clusters.iter().all(|&d| compatible(c, d)));
    let sq = |x: f64| x * x;
    let face_diff: f64 = shared.iter().map(|&c| sq(a.length_of(c) - b.length_of(c))).sum();
    let only_a: f64 = a
        .clusters
        .iter()
        .zip(&a.lengths)
        .filter(|(c, _)| !shared.contains(c))
        .map(|(_, &l)| sq(l))
        .sum();
    let only_b: f64 = b
        .clusters
        .iter()
        .zip(&b.lengths)
        .filter(|(c, _)| !shared.contains(c))
        .map(|(_, &l)| sq(l))
        .sum();
    if common_orthant {
        return Ok(ConeDistance {
            value: (face_diff + only_a + only_b).sqrt(),
            exact: true,
        });
    }
    let through_face = (sq(only_a.sqrt() + only_b.sqrt()) + face_diff).sqrt();
    let cone = a.norm() + b.norm();
    Ok(ConeDistance {
        value: through_face.min(cone),
        exact: a.n == 3,
    })
}
