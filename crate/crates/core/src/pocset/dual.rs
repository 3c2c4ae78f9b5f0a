use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::orientation::{is_vertex, minimal_hyperplanes_unchecked, Orientation};
use super::system::HalfspaceSystem;
use super::PocsetError;
use crate::complex::{CubeComplex, CubeId};
use crate::label::Label;

/// One component of the dual cube complex, with the orientation of every vertex.
#[derive(Clone, Debug)]
pub struct DualComplex {
    pub complex: CubeComplex,
    /// Orientation of vertex `i` (vertex labels are their BFS indices).
    pub orientations: Vec<Orientation>,
    pub seed: Orientation,
    index: HashMap<Orientation, usize>,
}

/// Sidecar for the dual complex JSON: per vertex, one bit per hyperplane with
/// `1` = oriented opposite to the seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationTable {
    pub hyperplanes: Vec<Label>,
    pub vertices: BTreeMap<String, String>,
}

impl DualComplex {
    pub fn vertex_of(&self, o: &Orientation) -> Option<usize> {
        self.index.get(o).copied()
    }

    /// Hyperplanes crossed by a cube: those on which its corners disagree.
    pub fn cube_family(&self, cube: CubeId) -> Vec<usize> {
        let corners = self.complex.corners(cube);
        let base = &self.orientations[corners[0]];
        let mut family: Vec<usize> = (0..cube.dim)
            .flat_map(|i| base.differences(&self.orientations[corners[1 << i]]))
            .collect();
        family.sort_unstable();
        family
    }

    pub fn orientation_table(&self, s: &HalfspaceSystem) -> OrientationTable {
        OrientationTable {
            hyperplanes: (0..s.hyperplane_count()).map(|i| s.label(2 * i).clone()).collect(),
            vertices: self
                .orientations
                .iter()
                .enumerate()
                .map(|(v, o)| (v.to_string(), o.bits_relative_to(&self.seed)))
                .collect(),
        }
    }
}

/// Enumerates the component of `seed` by breadth-first flips and glues an
/// n-cube at each vertex for every n pairwise transversal minimal halfspaces.
pub fn dual_complex(s: &HalfspaceSystem, seed: &Orientation, cap: usize) -> Result<DualComplex, PocsetError> {
    if let Some((i, j)) = is_vertex(s, seed)?.witness {
        return Err(PocsetError::NotAVertex {
            first: s.label(seed.chosen(i)).clone(),
            second: s.label(seed.chosen(j)).clone(),
        });
    }
    let mut orientations = vec![seed.clone()];
    let mut index: HashMap<Orientation, usize> = HashMap::from([(seed.clone(), 0)]);
    let mut minimal: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let o = orientations[v].clone();
        let mins = minimal_hyperplanes_unchecked(s, &o, &o.chosen_set());
        for &i in &mins {
            let w = o.flipped(i);
            if !index.contains_key(&w) {
                if orientations.len() >= cap {
                    return Err(PocsetError::CapExceeded { cap });
                }
                index.insert(w.clone(), orientations.len());
                queue.push_back(orientations.len());
                orientations.push(w);
            }
        }
        debug_assert_eq!(minimal.len(), v);
        minimal.push(mins);
    }

    let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();
    let mut cubes: Vec<Vec<Vec<usize>>> = Vec::new();
    for (v, mins) in minimal.iter().enumerate() {
        let mut families = Vec::new();
        transversal_subsets(s, mins, &mut Vec::new(), 0, &mut families);
        for family in families {
            let corners: Vec<usize> = (0..1usize << family.len())
                .map(|b| {
                    let mut o = orientations[v].clone();
                    for (j, &i) in family.iter().enumerate() {
                        if b >> j & 1 == 1 {
                            o = o.flipped(i);
                        }
                    }
                    *index.get(&o).expect("corners of a cube lie in the component")
                })
                .collect();
            let mut key = corners.clone();
            key.sort_unstable();
            if seen.insert(key, ()).is_none() {
                let k = family.len();
                if cubes.len() < k {
                    cubes.resize(k, Vec::new());
                }
                cubes[k - 1].push(corners);
            }
        }
    }
    let complex = CubeComplex::from_indices(orientations.len(), cubes)?;
    Ok(DualComplex {
        complex,
        orientations,
        seed: seed.clone(),
        index,
    })
}

/// All nonempty pairwise-transversal subsets of `pool` (sorted hyperplane ids).
fn transversal_subsets(
    s: &HalfspaceSystem,
    pool: &[usize],
    current: &mut Vec<usize>,
    from: usize,
    out: &mut Vec<Vec<usize>>,
) {
    for idx in from..pool.len() {
        let h = pool[idx];
        if current.iter().all(|&c| s.hyperplanes_transversal(c, h)) {
            current.push(h);
            out.push(current.clone());
            transversal_subsets(s, pool, current, idx + 1, out);
            current.pop();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalCube {
    pub cube: CubeId,
    pub family: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalCubes {
    pub cubes: Vec<MaximalCube>,
    /// Maximal pairwise-transversal hyperplane families of the system.
    pub families: Vec<Vec<usize>>,
    /// Maximal cubes and maximal families correspond one-to-one.
    pub bijection: bool,
}

impl MaximalCubes {
    /// Sorted distinct dimensions of maximal cubes.
    pub fn dimensions(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.cubes.iter().map(|c| c.cube.dim).collect();
        d.sort_unstable();
        d.dedup();
        d
    }
}

/// Maximal cubes of a dual component paired with their hyperplane families.
pub fn maximal_cubes(s: &HalfspaceSystem, dual: &DualComplex) -> MaximalCubes {
    let x = &dual.complex;
    let mut covered: HashMap<CubeId, ()> = HashMap::new();
    for (id, corners) in x.cubes() {
        for coord in 0..id.dim {
            for side in 0..2 {
                let face = crate::complex::face_corners(corners, coord, side);
                if face.len() >= 2 {
                    covered.insert(x.find_cube(&face).expect("face listed"), ());
                }
            }
        }
    }
    let cubes: Vec<MaximalCube> = x
        .cubes()
        .filter(|(id, _)| !covered.contains_key(id))
        .map(|(id, _)| MaximalCube {
            cube: id,
            family: dual.cube_family(id),
        })
        .collect();
    let m = s.hyperplane_count();
    let g = crate::graph::Graph::new(
        m,
        (0..m).flat_map(|i| s.transversal_to(i).ones().filter(move |&j| j > i).map(move |j| (i, j))),
    );
    let families = if m == 0 { Vec::new() } else { g.maximal_cliques() };
    let mut from_cubes: Vec<Vec<usize>> = cubes.iter().map(|c| c.family.clone()).collect();
    from_cubes.sort();
    let bijection = from_cubes == families;
    MaximalCubes {
        cubes,
        families,
        bijection,
    }
}
