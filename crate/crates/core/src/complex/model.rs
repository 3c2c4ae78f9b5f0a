use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::CubeError;
use crate::graph::Graph;
use crate::label::Label;

/// Index of a vertex inside a [`CubeComplex`].
pub type VertexId = usize;

/// A cube of dimension `dim ≥ 1`, identified by its position in the per-dimension list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CubeId {
    pub dim: usize,
    pub index: usize,
}

/// A finite cube complex. Every k-cube is stored as its `2^k` corners in
/// binary-coordinate order (bit `i` of the position is coordinate `i`), in the
/// canonical form produced by [`canonical_corners`].
#[derive(Clone, Debug)]
pub struct CubeComplex {
    labels: Vec<Label>,
    label_index: HashMap<Label, VertexId>,
    cubes: Vec<Vec<Vec<VertexId>>>,
    lookup: HashMap<Vec<VertexId>, CubeId>,
    incident: Vec<Vec<CubeId>>,
}

impl PartialEq for CubeComplex {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.cubes == other.cubes
    }
}

impl Eq for CubeComplex {}

/// Raw, unvalidated input: vertex labels and cube corner tuples per dimension.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RawComplex {
    pub vertices: Vec<Label>,
    #[serde(default)]
    pub cubes: BTreeMap<String, Vec<Vec<Label>>>,
}

impl RawComplex {
    pub fn from_json(text: &str) -> Result<Self, CubeError> {
        Ok(serde_json::from_str(text)?)
    }
}

impl CubeComplex {
    /// Validates raw cube lists. Faces are never inferred: every face of every
    /// cube must itself be listed.
    pub fn build(raw: &RawComplex) -> Result<Self, CubeError> {
        let mut label_index = HashMap::with_capacity(raw.vertices.len());
        for (i, l) in raw.vertices.iter().enumerate() {
            if label_index.insert(l.clone(), i).is_some() {
                return Err(CubeError::DuplicateVertex(l.clone()));
            }
        }
        let mut by_dim: BTreeMap<usize, &Vec<Vec<Label>>> = BTreeMap::new();
        for (key, list) in &raw.cubes {
            let dim: usize = key
                .trim()
                .parse()
                .ok()
                .filter(|&d| d >= 1 && d < usize::BITS as usize)
                .ok_or_else(|| CubeError::BadDimension(key.clone()))?;
            if by_dim.insert(dim, list).is_some() {
                return Err(CubeError::BadDimension(key.clone()));
            }
        }
        let top = by_dim.keys().next_back().copied().unwrap_or(0);
        let mut cubes = vec![Vec::new(); top];
        for (&dim, list) in &by_dim {
            let mut out = Vec::with_capacity(list.len());
            for corners in list.iter() {
                if corners.len() != 1 << dim {
                    return Err(CubeError::BadCornerCount {
                        dim,
                        found: corners.len(),
                    });
                }
                let ids = corners
                    .iter()
                    .map(|l| {
                        label_index
                            .get(l)
                            .copied()
                            .ok_or_else(|| CubeError::UnknownVertex(l.clone()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                out.push(ids);
            }
            cubes[dim - 1] = out;
        }
        Self::assemble(raw.vertices.clone(), label_index, cubes)
    }

    /// Builds from vertex indices `0..vertex_count` (labelled by their index);
    /// `cubes[k - 1]` lists the k-cubes.
    pub fn from_indices(vertex_count: usize, cubes: Vec<Vec<Vec<VertexId>>>) -> Result<Self, CubeError> {
        let labels: Vec<Label> = (0..vertex_count).map(Label::from).collect();
        Self::from_labelled(labels, cubes)
    }

    pub fn from_labelled(labels: Vec<Label>, cubes: Vec<Vec<Vec<VertexId>>>) -> Result<Self, CubeError> {
        let mut label_index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if label_index.insert(l.clone(), i).is_some() {
                return Err(CubeError::DuplicateVertex(l.clone()));
            }
        }
        for (k, list) in cubes.iter().enumerate() {
            for c in list {
                if c.len() != 1 << (k + 1) {
                    return Err(CubeError::BadCornerCount {
                        dim: k + 1,
                        found: c.len(),
                    });
                }
                if let Some(&bad) = c.iter().find(|&&v| v >= labels.len()) {
                    return Err(CubeError::UnknownVertex(Label::from(bad)));
                }
            }
        }
        Self::assemble(labels, label_index, cubes)
    }

    fn assemble(
        labels: Vec<Label>,
        label_index: HashMap<Label, VertexId>,
        raw_cubes: Vec<Vec<Vec<VertexId>>>,
    ) -> Result<Self, CubeError> {
        let mut cubes: Vec<Vec<Vec<VertexId>>> = Vec::with_capacity(raw_cubes.len());
        let mut lookup: HashMap<Vec<VertexId>, CubeId> = HashMap::new();
        let mut incident = vec![Vec::new(); labels.len()];
        let name = |c: &[VertexId]| c.iter().map(|&v| labels[v].clone()).collect::<Vec<_>>();

        for (k, list) in raw_cubes.into_iter().enumerate() {
            let dim = k + 1;
            let mut canon_list = Vec::with_capacity(list.len());
            for corners in list {
                if has_repeat(&corners) {
                    return Err(CubeError::SelfGluing {
                        dim,
                        cube: name(&corners),
                    });
                }
                let canon = canonical_corners(&corners);
                if dim >= 2 {
                    for coord in 0..dim {
                        for side in 0..2 {
                            let face = canonical_corners(&face_corners(&canon, coord, side));
                            if !lookup.contains_key(&face) {
                                return Err(CubeError::MissingFace {
                                    cube: name(&corners),
                                    face: name(&face),
                                });
                            }
                        }
                    }
                }
                let id = CubeId {
                    dim,
                    index: canon_list.len(),
                };
                if lookup.insert(canon.clone(), id).is_some() {
                    return Err(CubeError::DuplicateCube { cube: name(&corners) });
                }
                for &v in &canon {
                    incident[v].push(id);
                }
                canon_list.push(canon);
            }
            cubes.push(canon_list);
        }

        let complex = CubeComplex {
            labels,
            label_index,
            cubes,
            lookup,
            incident,
        };
        complex.check_intersections()?;
        Ok(complex)
    }

    /// Two cubes meeting at all must meet in one common face.
    fn check_intersections(&self) -> Result<(), CubeError> {
        for (v, around) in self.incident.iter().enumerate() {
            for (i, &a) in around.iter().enumerate() {
                for &b in &around[i + 1..] {
                    let ca = self.corners(a);
                    let cb = self.corners(b);
                    let shared: Vec<VertexId> = ca.iter().copied().filter(|x| cb.contains(x)).collect();
                    // Handle each pair once, at its smallest shared vertex.
                    if shared.iter().min() != Some(&v) {
                        continue;
                    }
                    let fa = face_spanned(ca, &shared);
                    let fb = face_spanned(cb, &shared);
                    match (fa, fb) {
                        (Some(x), Some(y)) if x == y => {}
                        _ => {
                            return Err(CubeError::DoubleGluing {
                                first: self.corner_labels(a),
                                second: self.corner_labels(b),
                            })
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &Label {
        &self.labels[v]
    }

    pub fn vertex_by_label(&self, l: &Label) -> Option<VertexId> {
        self.label_index.get(l).copied()
    }

    /// Top dimension; 0 for a complex without edges.
    pub fn dimension(&self) -> usize {
        self.cubes.iter().rposition(|l| !l.is_empty()).map_or(0, |k| k + 1)
    }

    /// Number of cubes of dimension `dim` (`dim = 0` counts vertices).
    pub fn count(&self, dim: usize) -> usize {
        match dim {
            0 => self.labels.len(),
            d => self.cubes.get(d - 1).map_or(0, Vec::len),
        }
    }

    /// Cube counts for dimensions `0..=dimension()`.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.dimension()).map(|d| self.count(d)).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    pub fn cubes_of_dim(&self, dim: usize) -> impl Iterator<Item = (CubeId, &[VertexId])> + '_ {
        let list = if dim >= 1 { self.cubes.get(dim - 1) } else { None };
        list.into_iter()
            .flatten()
            .enumerate()
            .map(move |(index, c)| (CubeId { dim, index }, c.as_slice()))
    }

    /// All cubes of dimension ≥ 1, by increasing dimension.
    pub fn cubes(&self) -> impl Iterator<Item = (CubeId, &[VertexId])> + '_ {
        (1..=self.cubes.len()).flat_map(move |d| self.cubes_of_dim(d))
    }

    pub fn corners(&self, id: CubeId) -> &[VertexId] {
        &self.cubes[id.dim - 1][id.index]
    }

    pub fn corner_labels(&self, id: CubeId) -> Vec<Label> {
        self.corners(id).iter().map(|&v| self.labels[v].clone()).collect()
    }

    /// Looks up a cube from any corner tuple (in any symmetric ordering).
    pub fn find_cube(&self, corners: &[VertexId]) -> Option<CubeId> {
        if !corners.len().is_power_of_two() || corners.len() < 2 {
            return None;
        }
        self.lookup.get(&canonical_corners(corners)).copied()
    }

    /// Cubes of dimension ≥ 1 having `v` as a corner.
    pub fn cubes_at(&self, v: VertexId) -> &[CubeId] {
        &self.incident[v]
    }

    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<CubeId> {
        self.lookup.get(&canonical_corners(&[a, b])).copied()
    }

    /// The edge of `cube` leaving `corner` in coordinate direction `coord`.
    pub fn edge_of(&self, cube: CubeId, corner: usize, coord: usize) -> CubeId {
        let c = self.corners(cube);
        self.edge_between(c[corner], c[corner ^ (1 << coord)])
            .expect("validated complex lists every edge")
    }

    pub fn one_skeleton(&self) -> Graph {
        Graph::new(
            self.labels.len(),
            self.cubes_of_dim(1).map(|(_, c)| (c[0], c[1])),
        )
    }

    pub fn to_raw(&self) -> RawComplex {
        let mut cubes = BTreeMap::new();
        for (k, list) in self.cubes.iter().enumerate() {
            if list.is_empty() {
                continue;
            }
            cubes.insert(
                (k + 1).to_string(),
                list.iter()
                    .map(|c| c.iter().map(|&v| self.labels[v].clone()).collect())
                    .collect(),
            );
        }
        RawComplex {
            vertices: self.labels.clone(),
            cubes,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, CubeError> {
        Self::build(&RawComplex::from_json(text)?)
    }
}

fn has_repeat(c: &[VertexId]) -> bool {
    let mut s = c.to_vec();
    s.sort_unstable();
    s.windows(2).any(|w| w[0] == w[1])
}

/// The face of a cube obtained by freezing coordinate `coord` to `side`.
pub fn face_corners(corners: &[VertexId], coord: usize, side: usize) -> Vec<VertexId> {
    let half = corners.len() / 2;
    let low = (1usize << coord) - 1;
    (0..half)
        .map(|b| {
            let pos = (b & low) | (side << coord) | ((b & !low) << 1);
            corners[pos]
        })
        .collect()
}

/// Lexicographically least image of a corner tuple under the symmetry group of
/// the cube: the least corner goes to position 0 and coordinates are ordered
/// by the ids of its neighbours.
pub fn canonical_corners(corners: &[VertexId]) -> Vec<VertexId> {
    let n = corners.len();
    debug_assert!(n.is_power_of_two());
    let k = n.trailing_zeros() as usize;
    let base = (0..n).min_by_key(|&b| corners[b]).expect("nonempty cube");
    let mut coords: Vec<usize> = (0..k).collect();
    coords.sort_by_key(|&i| corners[base ^ (1 << i)]);
    (0..n)
        .map(|b| {
            let mut pos = base;
            for (j, &i) in coords.iter().enumerate() {
                if b >> j & 1 == 1 {
                    pos ^= 1 << i;
                }
            }
            corners[pos]
        })
        .collect()
}

/// If `subset` is the corner set of a face of the cube, returns that face in canonical form.
fn face_spanned(corners: &[VertexId], subset: &[VertexId]) -> Option<Vec<VertexId>> {
    let positions: Vec<usize> = subset
        .iter()
        .map(|v| corners.iter().position(|c| c == v))
        .collect::<Option<_>>()?;
    let k = corners.len().trailing_zeros();
    let full = (1usize << k) - 1;
    let and = positions.iter().fold(full, |a, &p| a & p);
    let or = positions.iter().fold(0, |a, &p| a | p);
    let free = and ^ or;
    if positions.len() != 1 << free.count_ones() {
        return None;
    }
    let free_bits: Vec<usize> = (0..k as usize).filter(|&i| free >> i & 1 == 1).collect();
    let face: Vec<VertexId> = (0..positions.len())
        .map(|b| {
            let mut pos = and;
            for (j, &i) in free_bits.iter().enumerate() {
                if b >> j & 1 == 1 {
                    pos |= 1 << i;
                }
            }
            corners[pos]
        })
        .collect();
    Some(if face.len() == 1 { face } else { canonical_corners(&face) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(vertices: &[i64], cubes: &[(usize, &[&[i64]])]) -> RawComplex {
        RawComplex {
            vertices: vertices.iter().map(|&v| Label::Int(v)).collect(),
            cubes: cubes
                .iter()
                .map(|(d, list)| {
                    (
                        d.to_string(),
                        list.iter().map(|c| c.iter().map(|&v| Label::Int(v)).collect()).collect(),
                    )
                })
                .collect(),
        }
    }

    fn square() -> RawComplex {
        raw(
            &[0, 1, 2, 3],
            &[(1, &[&[0, 1], &[0, 2], &[1, 3], &[2, 3]]), (2, &[&[0, 1, 2, 3]])],
        )
    }

    #[test]
    fn single_square_is_valid() {
        let x = CubeComplex::build(&square()).unwrap();
        assert_eq!(x.f_vector(), vec![4, 4, 1]);
        assert_eq!(x.dimension(), 2);
        assert_eq!(x.euler_characteristic(), 1);
    }

    #[test]
    fn loop_edge_is_self_gluing() {
        let err = CubeComplex::build(&raw(&[0], &[(1, &[&[0, 0]])])).unwrap_err();
        assert!(matches!(err, CubeError::SelfGluing { dim: 1, .. }));
    }

    #[test]
    fn missing_edge_is_rejected() {
        let r = raw(&[0, 1, 2, 3], &[(1, &[&[0, 1], &[0, 2], &[1, 3]]), (2, &[&[0, 1, 2, 3]])]);
        assert!(matches!(CubeComplex::build(&r), Err(CubeError::MissingFace { .. })));
    }

    #[test]
    fn symmetric_relisting_is_a_duplicate() {
        let mut r = square();
        r.cubes.get_mut("2").unwrap().push(vec![3i64.into(), 2i64.into(), 1i64.into(), 0i64.into()]);
        assert!(matches!(CubeComplex::build(&r), Err(CubeError::DuplicateCube { .. })));
        let r = raw(&[0, 1], &[(1, &[&[0, 1], &[1, 0]])]);
        assert!(matches!(CubeComplex::build(&r), Err(CubeError::DuplicateCube { .. })));
    }

    #[test]
    fn squares_sharing_a_diagonal_are_double_glued() {
        // Both squares contain corners 0 and 3 as opposite corners.
        let r = raw(
            &[0, 1, 2, 3, 4, 5],
            &[
                (1, &[&[0, 1], &[0, 2], &[1, 3], &[2, 3], &[0, 4], &[4, 3], &[0, 5], &[5, 3]]),
                (2, &[&[0, 1, 2, 3], &[0, 4, 5, 3]]),
            ],
        );
        assert!(matches!(CubeComplex::build(&r), Err(CubeError::DoubleGluing { .. })));
    }

    #[test]
    fn same_corners_different_square_is_double_glued() {
        let r = raw(
            &[0, 1, 2, 3],
            &[
                (1, &[&[0, 1], &[0, 2], &[1, 3], &[2, 3], &[0, 3], &[1, 2]]),
                (2, &[&[0, 1, 2, 3], &[0, 1, 3, 2]]),
            ],
        );
        assert!(matches!(CubeComplex::build(&r), Err(CubeError::DoubleGluing { .. })));
    }

    #[test]
    fn canonical_form_is_symmetry_invariant() {
        let c = vec![7, 3, 9, 1, 4, 8, 2, 6];
        let canon = canonical_corners(&c);
        assert_eq!(canon[0], 1);
        // Any coordinate reflection or permutation gives the same canonical form.
        for mask in 0..8 {
            let reflected: Vec<_> = (0..8).map(|b| c[b ^ mask]).collect();
            assert_eq!(canonical_corners(&reflected), canon);
        }
        let swapped: Vec<_> = (0..8usize)
            .map(|b| {
                let (x, y, z) = (b & 1, b >> 1 & 1, b >> 2 & 1);
                c[y | x << 1 | z << 2]
            })
            .collect();
        assert_eq!(canonical_corners(&swapped), canon);
    }

    #[test]
    fn faces_of_a_square() {
        let c = [10, 11, 12, 13];
        assert_eq!(face_corners(&c, 0, 0), vec![10, 12]);
        assert_eq!(face_corners(&c, 0, 1), vec![11, 13]);
        assert_eq!(face_corners(&c, 1, 0), vec![10, 11]);
        assert_eq!(face_corners(&c, 1, 1), vec![12, 13]);
    }

    #[test]
    fn json_round_trip() {
        let x = CubeComplex::build(&square()).unwrap();
        let y = CubeComplex::from_json(&x.to_json()).unwrap();
        assert_eq!(x, y);
    }
}
