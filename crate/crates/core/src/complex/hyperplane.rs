use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::cat0::{is_cat0, Cat0Complex};
use super::{CubeComplex, CubeError, CubeId, VertexId};
use crate::graph::Graph;
use crate::label::Label;
use crate::pocset::{HalfspaceSystem, Orientation};

/// A square-equivalence class of edges together with the cubes it crosses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hyperplane {
    /// Edge indices (1-cubes), ascending.
    pub edge_class: Vec<usize>,
    /// Cubes of every dimension containing an edge of the class.
    pub crossed_cubes: Vec<CubeId>,
}

impl Hyperplane {
    pub fn crossed_of_dim(&self, dim: usize) -> usize {
        self.crossed_cubes.iter().filter(|c| c.dim == dim).count()
    }
}

/// Hyperplanes of a complex plus, for every cube, the hyperplane dual to each
/// of its coordinate directions.
#[derive(Debug)]
pub struct Hyperplanes<'a> {
    complex: &'a CubeComplex,
    list: Vec<Hyperplane>,
    edge_hyperplane: Vec<usize>,
    directions: Vec<Vec<Vec<usize>>>,
    cat0: OnceLock<bool>,
    median_cap: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl<'a> Hyperplanes<'a> {
    pub fn new(x: &'a CubeComplex) -> Self {
        Self::with_median_cap(x, super::DEFAULT_MEDIAN_CAP)
    }

    pub fn with_median_cap(x: &'a CubeComplex, median_cap: usize) -> Self {
        let edge = |a: VertexId, b: VertexId| x.edge_between(a, b).expect("listed edge").index;
        let mut uf = UnionFind((0..x.count(1)).collect());
        for (_, c) in x.cubes_of_dim(2) {
            uf.union(edge(c[0], c[1]), edge(c[2], c[3]));
            uf.union(edge(c[0], c[2]), edge(c[1], c[3]));
        }
        let mut root_to_id = vec![usize::MAX; x.count(1)];
        let mut edge_hyperplane = vec![0; x.count(1)];
        let mut list: Vec<Hyperplane> = Vec::new();
        for e in 0..x.count(1) {
            let r = uf.find(e);
            if root_to_id[r] == usize::MAX {
                root_to_id[r] = list.len();
                list.push(Hyperplane {
                    edge_class: Vec::new(),
                    crossed_cubes: Vec::new(),
                });
            }
            edge_hyperplane[e] = root_to_id[r];
            list[root_to_id[r]].edge_class.push(e);
        }
        let mut directions = Vec::with_capacity(x.dimension());
        for dim in 1..=x.dimension() {
            let mut per_dim = Vec::with_capacity(x.count(dim));
            for (id, c) in x.cubes_of_dim(dim) {
                let dirs: Vec<usize> = (0..dim).map(|i| edge_hyperplane[edge(c[0], c[1 << i])]).collect();
                let mut distinct = dirs.clone();
                distinct.sort_unstable();
                distinct.dedup();
                for h in distinct {
                    list[h].crossed_cubes.push(id);
                }
                per_dim.push(dirs);
            }
            directions.push(per_dim);
        }
        Hyperplanes {
            complex: x,
            list,
            edge_hyperplane,
            directions,
            cat0: OnceLock::new(),
            median_cap,
        }
    }

    pub fn complex(&self) -> &'a CubeComplex {
        self.complex
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn get(&self, h: usize) -> Option<&Hyperplane> {
        self.list.get(h)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Hyperplane> {
        self.list.iter()
    }

    pub fn into_list(self) -> Vec<Hyperplane> {
        self.list
    }

    pub fn hyperplane_of_edge(&self, edge_index: usize) -> usize {
        self.edge_hyperplane[edge_index]
    }

    /// Hyperplane dual to each coordinate direction of `cube`.
    pub fn directions(&self, cube: CubeId) -> &[usize] {
        &self.directions[cube.dim - 1][cube.index]
    }

    fn check(&self, h: usize) -> Result<&Hyperplane, CubeError> {
        self.list.get(h).ok_or(CubeError::UnknownHyperplane(h))
    }

    /// Vertex sets of the components left after deleting the edges of `h`,
    /// ordered by least vertex.
    pub fn halfspaces(&self, h: usize) -> Result<Vec<Vec<VertexId>>, CubeError> {
        let hp = self.check(h)?;
        let x = self.complex;
        let dropped: FixedBitSet = {
            let mut s = FixedBitSet::with_capacity(x.count(1));
            hp.edge_class.iter().for_each(|&e| s.insert(e));
            s
        };
        let g = Graph::new(
            x.vertex_count(),
            x.cubes_of_dim(1)
                .filter(|(id, _)| !dropped.contains(id.index))
                .map(|(_, c)| (c[0], c[1])),
        );
        let (comp, count) = g.components(None);
        let mut parts = vec![Vec::new(); count];
        for (v, &c) in comp.iter().enumerate() {
            parts[c].push(v);
        }
        Ok(parts)
    }

    /// Whether some square has `h1` and `h2` as its two directions.
    pub fn cross(&self, h1: usize, h2: usize) -> Result<bool, CubeError> {
        self.check(h1)?;
        self.check(h2)?;
        if h1 == h2 {
            return Ok(false);
        }
        Ok(self.list[h1].crossed_cubes.iter().any(|&c| {
            c.dim == 2 && {
                let d = self.directions(c);
                (d[0] == h1 && d[1] == h2) || (d[0] == h2 && d[1] == h1)
            }
        }))
    }

    pub fn crossing_graph(&self) -> Graph {
        let mut edges = Vec::new();
        for dirs in self.directions.get(1).into_iter().flatten() {
            edges.push((dirs[0], dirs[1]));
        }
        Graph::new(self.list.len(), edges)
    }

    /// A largest family of pairwise crossing hyperplanes.
    pub fn max_crossing_family(&self) -> Vec<usize> {
        self.crossing_graph()
            .maximal_cliques()
            .into_iter()
            .max_by_key(|c| c.len())
            .unwrap_or_default()
    }

    fn require_cat0(&self) -> Result<(), CubeError> {
        let ok = match self.cat0.get() {
            Some(&b) => b,
            None => {
                let b = is_cat0(self.complex, self.median_cap)?.cat0;
                *self.cat0.get_or_init(|| b)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(CubeError::NotCat0)
        }
    }

    /// Helly property for a hyperplane family of a CAT(0) complex: if the
    /// family crosses pairwise, some cube is crossed by all of them, and the
    /// family is no larger than the dimension.
    pub fn helly_check(&self, family: &[usize]) -> Result<HellyVerdict, CubeError> {
        self.require_cat0()?;
        for &h in family {
            self.check(h)?;
        }
        let mut fam = family.to_vec();
        fam.sort_unstable();
        fam.dedup();
        let mut pairwise = true;
        'outer: for (i, &a) in fam.iter().enumerate() {
            for &b in &fam[i + 1..] {
                if !self.cross(a, b)? {
                    pairwise = false;
                    break 'outer;
                }
            }
        }
        let common_cube = if fam.is_empty() {
            None
        } else {
            self.complex
                .cubes()
                .find(|&(id, _)| id.dim >= fam.len() && fam.iter().all(|h| self.directions(id).contains(h)))
                .map(|(id, _)| id)
        };
        let within_dimension = fam.len() <= self.complex.dimension();
        let holds = !pairwise || fam.is_empty() || (common_cube.is_some() && within_dimension);
        Ok(HellyVerdict {
            pairwise_crossing: pairwise,
            common_cube,
            within_dimension,
            holds,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HellyVerdict {
    pub pairwise_crossing: bool,
    /// Lowest-dimensional cube crossed by every member of the family.
    pub common_cube: Option<CubeId>,
    pub within_dimension: bool,
    pub holds: bool,
}

/// Partition of the edges into square-equivalence classes.
pub fn hyperplanes(x: &CubeComplex) -> Vec<Hyperplane> {
    Hyperplanes::new(x).into_list()
}

/// Components of the 1-skeleton after deleting the edges of `h`.
pub fn halfspaces_of(x: &CubeComplex, h: &Hyperplane) -> Vec<Vec<VertexId>> {
    let mut dropped = FixedBitSet::with_capacity(x.count(1));
    h.edge_class.iter().for_each(|&e| dropped.insert(e));
    let g = Graph::new(
        x.vertex_count(),
        x.cubes_of_dim(1)
            .filter(|(id, _)| !dropped.contains(id.index))
            .map(|(_, c)| (c[0], c[1])),
    );
    let (comp, count) = g.components(None);
    let mut parts = vec![Vec::new(); count];
    for (v, &c) in comp.iter().enumerate() {
        parts[c].push(v);
    }
    parts
}

/// The halfspace system of a CAT(0) complex together with the vertex set of
/// every halfspace.
#[derive(Clone, Debug)]
pub struct CubeHalfspaces {
    pub system: HalfspaceSystem,
    /// Vertex set of halfspace `h` (indexed like the system's halfspaces).
    pub sides: Vec<FixedBitSet>,
}

impl CubeHalfspaces {
    /// The orientation choosing, on every hyperplane, the side containing `v`.
    pub fn principal_orientation(&self, v: VertexId) -> Orientation {
        let m = self.system.hyperplane_count();
        Orientation::from_starred(m, (0..m).filter(|&i| !self.sides[2 * i].contains(v)))
    }
}

/// Halfspaces of every hyperplane, ordered by inclusion, with complementation
/// as the involution. Hyperplane `i` yields `h{i}` (the side holding vertex 0)
/// and `h{i}*`.
pub fn halfspace_system_of(x: &CubeComplex, cap: usize) -> Result<CubeHalfspaces, CubeError> {
    Cat0Complex::certify(x, cap)?;
    let hs = Hyperplanes::new(x);
    let n = x.vertex_count();
    let mut sides = Vec::with_capacity(2 * hs.len());
    let mut labels = Vec::with_capacity(2 * hs.len());
    for i in 0..hs.len() {
        let parts = hs.halfspaces(i)?;
        if parts.len() != 2 {
            return Err(CubeError::NotCat0);
        }
        let mut a = FixedBitSet::with_capacity(n);
        parts[0].iter().for_each(|&v| a.insert(v));
        let mut b = FixedBitSet::with_capacity(n);
        parts[1].iter().for_each(|&v| b.insert(v));
        sides.push(a);
        sides.push(b);
        labels.push(Label::Str(format!("h{i}")));
        labels.push(Label::Str(format!("h{i}*")));
    }
    let up: Vec<FixedBitSet> = sides
        .iter()
        .map(|a| {
            let mut row = FixedBitSet::with_capacity(sides.len());
            for (j, b) in sides.iter().enumerate() {
                if a.is_subset(b) {
                    row.insert(j);
                }
            }
            row
        })
        .collect();
    let system = HalfspaceSystem::from_relation(labels, up, true).map_err(|e| CubeError::Pocset(Box::new(e)))?;
    Ok(CubeHalfspaces { system, sides })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::generators;

    #[test]
    fn square_has_two_crossing_hyperplanes() {
        let x = generators::cube(2);
        let hs = Hyperplanes::new(&x);
        assert_eq!(hs.len(), 2);
        assert!(hs.iter().all(|h| h.edge_class.len() == 2));
        assert!(hs.cross(0, 1).unwrap());
        let v = hs.helly_check(&[0, 1]).unwrap();
        assert!(v.holds);
        assert_eq!(v.common_cube.map(|c| c.dim), Some(2));
    }

    #[test]
    fn tree_edges_are_hyperplanes() {
        let x = generators::tree_from_parents(&[0, 0, 1, 1, 2]);
        assert_eq!(hyperplanes(&x).len(), 5);
        assert!(hyperplanes(&x).iter().all(|h| h.edge_class.len() == 1));
    }

    #[test]
    fn torus_hyperplanes_are_self_parallel() {
        let x = generators::torus(3, 3);
        let hs = Hyperplanes::new(&x);
        assert_eq!(hs.len(), 6);
        for h in hs.iter() {
            assert_eq!(h.edge_class.len(), 3);
            assert_eq!(h.crossed_of_dim(2), 3);
            assert_eq!(halfspaces_of(&x, h).len(), 1);
        }
        assert!(matches!(hs.helly_check(&[0]), Err(CubeError::NotCat0)));
    }

    #[test]
    fn path_middle_edge_splits_evenly() {
        let x = generators::path(3);
        let hs = hyperplanes(&x);
        let mid = hs.iter().find(|h| x.corners(CubeId { dim: 1, index: h.edge_class[0] }) == [1, 2]).unwrap();
        let parts = halfspaces_of(&x, mid);
        assert_eq!(parts.iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 2]);
    }

    #[test]
    fn parallel_hyperplanes_in_strip_do_not_cross() {
        let x = generators::grid(&[2, 1]);
        let hs = Hyperplanes::new(&x);
        assert_eq!(hs.len(), 3);
        let crossing: Vec<(usize, usize)> = hs.crossing_graph().edges().collect();
        assert_eq!(crossing.len(), 2);
        let parallel = (0..3)
            .flat_map(|a| (a + 1..3).map(move |b| (a, b)))
            .find(|p| !crossing.contains(p))
            .unwrap();
        assert!(!hs.cross(parallel.0, parallel.1).unwrap());
        let v = hs.helly_check(&[parallel.0, parallel.1]).unwrap();
        assert!(!v.pairwise_crossing && v.holds);
    }

    #[test]
    fn three_cube_helly() {
        let x = generators::cube(3);
        let hs = Hyperplanes::new(&x);
        let v = hs.helly_check(&[0, 1, 2]).unwrap();
        assert!(v.pairwise_crossing && v.holds);
        assert_eq!(v.common_cube.unwrap().dim, 3);
        assert_eq!(hs.max_crossing_family().len(), 3);
    }

    #[test]
    fn halfspace_systems_of_small_complexes() {
        let edge = halfspace_system_of(&generators::path(1), 64).unwrap();
        assert_eq!(edge.system.hyperplane_count(), 1);
        let path = halfspace_system_of(&generators::path(4), 64).unwrap();
        let s = &path.system;
        for i in 0..4 {
            for j in i + 1..4 {
                assert!(!s.hyperplanes_transversal(i, j));
            }
        }
        let sq = halfspace_system_of(&generators::cube(2), 64).unwrap();
        assert!(sq.system.hyperplanes_transversal(0, 1));
        assert!(matches!(
            halfspace_system_of(&generators::torus(3, 3), 64),
            Err(CubeError::NotCat0)
        ));
    }
}
