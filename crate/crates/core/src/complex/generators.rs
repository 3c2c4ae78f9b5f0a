//! Standard families of cube complexes used as fixtures and test corpora.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};

use super::{CubeComplex, VertexId};
use crate::label::Label;

/// Label `"i,j,..."` used for lattice points.
pub fn grid_label(coords: &[i64]) -> Label {
    Label::Str(
        coords
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(","),
    )
}

/// Union of unit cubes of `Z^d` with lower corners `cells`, with all their faces.
pub fn lattice_union(dim: usize, cells: &[Vec<i64>]) -> CubeComplex {
    let mut faces: BTreeSet<(Vec<i64>, u32)> = BTreeSet::new();
    for cell in cells {
        assert_eq!(cell.len(), dim);
        for free in 0u32..(1 << dim) {
            let fixed: Vec<usize> = (0..dim).filter(|&i| free >> i & 1 == 0).collect();
            for offset in 0u32..(1 << fixed.len()) {
                let mut base = cell.clone();
                for (j, &i) in fixed.iter().enumerate() {
                    base[i] += i64::from(offset >> j & 1);
                }
                faces.insert((base, free));
            }
        }
    }
    let points: BTreeSet<Vec<i64>> = faces
        .iter()
        .filter(|(_, free)| *free == 0)
        .map(|(p, _)| p.clone())
        .collect();
    let index: BTreeMap<&Vec<i64>, VertexId> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut cubes = vec![Vec::new(); dim];
    for (base, free) in &faces {
        let k = free.count_ones() as usize;
        if k == 0 {
            continue;
        }
        let axes: Vec<usize> = (0..dim).filter(|&i| free >> i & 1 == 1).collect();
        let corners = (0..1usize << k)
            .map(|b| {
                let mut p = base.clone();
                for (j, &i) in axes.iter().enumerate() {
                    p[i] += (b >> j & 1) as i64;
                }
                index[&p]
            })
            .collect();
        cubes[k - 1].push(corners);
    }
    let labels = points.iter().map(|p| grid_label(p)).collect();
    CubeComplex::from_labelled(labels, cubes).expect("lattice unions are valid cube complexes")
}

/// Box `[0,d_1] × ... × [0,d_k]` with its standard cubing (all `d_i ≥ 1`).
pub fn grid(sides: &[usize]) -> CubeComplex {
    assert!(sides.iter().all(|&s| s >= 1), "grid sides must be positive");
    let mut cells: Vec<Vec<i64>> = vec![Vec::new()];
    for &s in sides {
        cells = cells
            .into_iter()
            .flat_map(|c| {
                (0..s as i64).map(move |i| {
                    let mut c = c.clone();
                    c.push(i);
                    c
                })
            })
            .collect();
    }
    lattice_union(sides.len(), &cells)
}

/// The standard cube `[0,1]^n` with all faces.
pub fn cube(n: usize) -> CubeComplex {
    grid(&vec![1; n])
}

/// All proper faces of `[0,1]^n`.
pub fn cube_boundary(n: usize) -> CubeComplex {
    let full = cube(n);
    let mut raw = full.to_raw();
    raw.cubes.remove(&n.to_string());
    CubeComplex::build(&raw).expect("boundary of a cube")
}

/// Path with `k` edges on vertices `0..=k`.
pub fn path(k: usize) -> CubeComplex {
    CubeComplex::from_indices(k + 1, vec![(0..k).map(|i| vec![i, i + 1]).collect()]).expect("path")
}

/// Cycle graph with `n ≥ 3` vertices as a 1-dimensional complex.
pub fn cycle(n: usize) -> CubeComplex {
    CubeComplex::from_indices(n, vec![(0..n).map(|i| vec![i, (i + 1) % n]).collect()]).expect("cycle")
}

/// Tree on `0..parents.len()+1`: vertex `i + 1` hangs below `parents[i] ≤ i`.
pub fn tree_from_parents(parents: &[usize]) -> CubeComplex {
    let edges = parents
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            assert!(p <= i, "parent must precede child");
            vec![p, i + 1]
        })
        .collect();
    CubeComplex::from_indices(parents.len() + 1, vec![edges]).expect("tree")
}

/// Uniform random recursive tree on `n ≥ 1` vertices.
pub fn random_tree(n: usize, rng: &mut impl Rng) -> CubeComplex {
    let parents: Vec<usize> = (0..n.saturating_sub(1)).map(|i| rng.gen_range(0..=i)).collect();
    tree_from_parents(&parents)
}

/// The `p × q` torus: a `p × q` square grid with opposite sides identified (`p, q ≥ 3`).
pub fn torus(p: usize, q: usize) -> CubeComplex {
    assert!(p >= 3 && q >= 3, "smaller tori violate the gluing axioms");
    let id = |i: usize, j: usize| (i % p) * q + (j % q);
    let labels = (0..p)
        .flat_map(|i| (0..q).map(move |j| grid_label(&[i as i64, j as i64])))
        .collect();
    let mut edges = Vec::new();
    let mut squares = Vec::new();
    for i in 0..p {
        for j in 0..q {
            edges.push(vec![id(i, j), id(i + 1, j)]);
            edges.push(vec![id(i, j), id(i, j + 1)]);
            squares.push(vec![id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1)]);
        }
    }
    CubeComplex::from_labelled(labels, vec![edges, squares]).expect("torus")
}

/// Cartesian product; vertex labels are `"(a,b)"`.
pub fn product(x: &CubeComplex, y: &CubeComplex) -> CubeComplex {
    let ny = y.vertex_count();
    let labels = x
        .labels()
        .iter()
        .flat_map(|a| y.labels().iter().map(move |b| Label::Str(format!("({a},{b})"))))
        .collect();
    let cells = |c: &CubeComplex| -> Vec<(usize, Vec<VertexId>)> {
        (0..c.vertex_count())
            .map(|v| (0, vec![v]))
            .chain(c.cubes().map(|(id, corners)| (id.dim, corners.to_vec())))
            .collect()
    };
    let (cx, cy) = (cells(x), cells(y));
    let top = x.dimension() + y.dimension();
    let mut cubes = vec![Vec::new(); top];
    for (dx, a) in &cx {
        for (dy, b) in &cy {
            let k = dx + dy;
            if k == 0 {
                continue;
            }
            let corners = (0..1usize << k)
                .map(|i| a[i & ((1 << dx) - 1)] * ny + b[i >> dx])
                .collect();
            cubes[k - 1].push(corners);
        }
    }
    CubeComplex::from_labelled(labels, cubes).expect("products of complexes are complexes")
}

/// A deterministic corpus of CAT(0) complexes with at most 64 vertices.
pub fn cat0_corpus(seed: u64) -> Vec<(String, CubeComplex)> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut out: Vec<(String, CubeComplex)> = Vec::new();
    for n in 1..=4 {
        out.push((format!("cube{n}"), cube(n)));
    }
    for sides in [vec![3, 1], vec![2, 2], vec![4, 3], vec![7, 7], vec![2, 2, 2], vec![3, 3, 3], vec![2, 1, 1, 1]] {
        let name = format!("grid{}", sides.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("x"));
        out.push((name, grid(&sides)));
    }
    out.push(("path5".into(), path(5)));
    for n in [6, 12, 20, 40] {
        out.push((format!("tree{n}"), random_tree(n, &mut rng)));
    }
    let staircase: Vec<Vec<i64>> = [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (2, 1), (0, 2), (0, 3)]
        .iter()
        .map(|&(i, j)| vec![i, j])
        .collect();
    out.push(("young4321".into(), lattice_union(2, &staircase)));
    let corner_touch: Vec<Vec<i64>> = vec![vec![0, 0], vec![1, 1], vec![2, 2]];
    out.push(("diagonal_squares".into(), lattice_union(2, &corner_touch)));
    let solid_l: Vec<Vec<i64>> = vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
    out.push(("tripod_cubes".into(), lattice_union(3, &solid_l)));
    let t = random_tree(7, &mut rng);
    out.push(("tree7_x_edge".into(), product(&t, &path(1))));
    let t1 = tree_from_parents(&[0, 0, 0]);
    let t2 = tree_from_parents(&[0, 1, 1]);
    out.push(("star_x_tree".into(), product(&t1, &t2)));
    out.push(("tree_x_square".into(), product(&tree_from_parents(&[0, 0, 1]), &cube(2))));
    out
}
