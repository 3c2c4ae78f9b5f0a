//! Acceptance checks, one line per criterion. Expected values come from
//! oracles written here (integer reflection representations, brute-force
//! medians and cliques, closed-form counts), not from the library.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;

use cubeplex::complex::{
    generators, halfspace_system_of, is_cat0, Cat0Witness, CubeComplex, Hyperplanes, DEFAULT_MEDIAN_CAP,
};
use cubeplex::coxeter::{cubulate, ends_estimate, CayleyBall, EndsVerdict};
use cubeplex::pocset::dual_complex;
use cubeplex::treespace::{
    cone_distance, count_binary, enumerate_topologies, link_of_origin, treespace_complex,
};
use cubeplex::{CoxeterSystem, HalfspaceSystem, Label, Orientation, PhyloTree, RawPocset, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// ---------- graph oracles ----------

fn adjacency(x: &CubeComplex) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); x.vertex_count()];
    for (_, c) in x.cubes_of_dim(1) {
        adj[c[0]].push(c[1]);
        adj[c[1]].push(c[0]);
    }
    adj
}

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if d[w] == usize::MAX {
                d[w] = d[v] + 1;
                q.push_back(w);
            }
        }
    }
    d
}

/// First triple without exactly one median, by exhaustive search.
fn bad_median_triple(adj: &[Vec<usize>]) -> Option<([usize; 3], usize)> {
    let n = adj.len();
    let d: Vec<Vec<usize>> = (0..n).map(|v| bfs(adj, v)).collect();
    let between = |a: usize, m: usize, b: usize| d[a][m] + d[m][b] == d[a][b];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let count = (0..n)
                    .filter(|&m| between(a, m, b) && between(b, m, c) && between(a, m, c))
                    .take(2)
                    .count();
                if count != 1 {
                    return Some(([a, b, c], count));
                }
            }
        }
    }
    None
}

/// Some 4-cycle of the 1-skeleton whose vertices are not the corners of a square.
fn unfilled_four_cycle(x: &CubeComplex) -> Option<[usize; 4]> {
    let adj = adjacency(x);
    let squares: BTreeSet<Vec<usize>> = x
        .cubes_of_dim(2)
        .map(|(_, c)| {
            let mut c = c.to_vec();
            c.sort_unstable();
            c
        })
        .collect();
    for v in 0..adj.len() {
        for &a in &adj[v] {
            for &b in &adj[v] {
                for &w in &adj[a] {
                    if a < b && w != v && adj[b].contains(&w) {
                        let mut q = vec![v, a, b, w];
                        q.sort_unstable();
                        if !squares.contains(&q) {
                            return Some([v, a, w, b]);
                        }
                    }
                }
            }
        }
    }
    None
}

fn components(n: usize, edges: impl Iterator<Item = (usize, usize)>, keep: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (a, b) in edges {
        if keep(a) && keep(b) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

fn maximal_cliques(n: usize, adj: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    fn grow(r: &mut Vec<usize>, p: Vec<usize>, x: Vec<usize>, adj: &dyn Fn(usize, usize) -> bool, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() && x.is_empty() {
            out.push(r.clone());
            return;
        }
        let mut p = p;
        let mut x = x;
        while let Some(v) = p.pop() {
            r.push(v);
            grow(
                r,
                p.iter().copied().filter(|&u| adj(u, v)).collect(),
                x.iter().copied().filter(|&u| adj(u, v)).collect(),
                adj,
                out,
            );
            r.pop();
            x.push(v);
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), (0..n).collect(), Vec::new(), adj, &mut out);
    out
}

/// Checks that `map` is a cube-complex isomorphism `a -> b`.
fn verify_isomorphism(a: &CubeComplex, b: &CubeComplex, map: &[usize]) -> bool {
    let distinct: BTreeSet<usize> = map.iter().copied().collect();
    distinct.len() == a.vertex_count()
        && a.vertex_count() == b.vertex_count()
        && a.f_vector() == b.f_vector()
        && a.cubes().all(|(_, c)| {
            let image: Vec<usize> = c.iter().map(|&v| map[v]).collect();
            b.find_cube(&image).is_some()
        })
}

fn isomorphic(a: &CubeComplex, b: &CubeComplex) -> bool {
    match a.one_skeleton().find_isomorphism(&b.one_skeleton()) {
        Some(map) => verify_isomorphism(a, b, &map),
        None => false,
    }
}

// ---------- criterion 1 ----------

fn gromov() -> Outcome {
    let torus = generators::torus(3, 3);
    let v = is_cat0(&torus, DEFAULT_MEDIAN_CAP).map_err(|e| e.to_string())?;
    ensure(v.locally_cat0 && !v.cat0, "torus: expected locally CAT(0), not CAT(0)")?;
    let Some(Cat0Witness::MedianTriple { triple, medians }) = v.witness else {
        return Err("torus: missing median certificate".into());
    };
    let d: Vec<Vec<usize>> = (0..9).map(|s| bfs(&adjacency(&torus), s)).collect();
    let [a, b, c] = triple;
    let oracle_medians = (0..9)
        .filter(|&m| d[a][m] + d[m][b] == d[a][b] && d[b][m] + d[m][c] == d[b][c] && d[a][m] + d[m][c] == d[a][c])
        .count();
    ensure(oracle_medians != 1 && oracle_medians == medians.len(), "torus: certificate is not a bad triple")?;

    let boundary = generators::cube_boundary(3);
    let v = is_cat0(&boundary, DEFAULT_MEDIAN_CAP).map_err(|e| e.to_string())?;
    ensure(!v.locally_cat0 && !v.cat0, "cube boundary: expected not locally CAT(0)")?;
    let Some(Cat0Witness::EmptySimplex { vertex, simplex }) = v.witness else {
        return Err("cube boundary: missing empty simplex".into());
    };
    ensure(simplex.len() == 3, "cube boundary: witness is not a triangle")?;
    let adj = adjacency(&boundary);
    ensure(simplex.iter().all(|u| adj[vertex].contains(u)), "witness vertices are not neighbours")?;
    // Each pair spans a square at `vertex`, but no 3-cube holds all three.
    for i in 0..3 {
        for j in i + 1..3 {
            let spans = boundary.cubes_of_dim(2).any(|(_, c)| {
                [vertex, simplex[i], simplex[j]].iter().all(|v| c.contains(v))
            });
            ensure(spans, "witness edge is not a square")?;
        }
    }
    ensure(boundary.count(3) == 0, "cube boundary has a 3-cube")?;

    // Flag links and a median 1-skeleton, but a hole in the middle.
    let ring = generators::lattice_union(2, &[vec![1, 1], vec![2, 0], vec![2, 2], vec![3, 1]]);
    let v = is_cat0(&ring, DEFAULT_MEDIAN_CAP).map_err(|e| e.to_string())?;
    ensure(bad_median_triple(&adjacency(&ring)).is_none(), "ring: oracle expects a median 1-skeleton")?;
    ensure(unfilled_four_cycle(&ring).is_some(), "ring: oracle expects an unfilled 4-cycle")?;
    ensure(v.locally_cat0 && !v.cat0, "ring of four squares: expected locally CAT(0), not CAT(0)")?;
    let Some(Cat0Witness::EmptySquare { cycle }) = v.witness else {
        return Err("ring: missing empty-square certificate".into());
    };
    let ring_adj = adjacency(&ring);
    let is_cycle = (0..4).all(|i| ring_adj[cycle[i]].contains(&cycle[(i + 1) % 4]));
    ensure(is_cycle && ring.find_cube(&cycle).is_none(), "ring: certificate is not an unfilled 4-cycle")?;

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut positives = vec![
        ("grid3x3", generators::grid(&[3, 3])),
        ("grid2x2x2", generators::grid(&[2, 2, 2])),
        ("grid4x2", generators::grid(&[4, 2])),
        ("path7", generators::path(7)),
    ];
    for n in [8, 20, 45] {
        positives.push(("tree", generators::random_tree(n, &mut rng)));
    }
    for (name, x) in &positives {
        let v = is_cat0(x, DEFAULT_MEDIAN_CAP).map_err(|e| e.to_string())?;
        ensure(v.cat0, format!("{name}: expected CAT(0)"))?;
        ensure(bad_median_triple(&adjacency(x)).is_none(), format!("{name}: oracle finds a bad triple"))?;
        ensure(unfilled_four_cycle(x).is_none(), format!("{name}: oracle finds an unfilled 4-cycle"))?;
    }
    Ok(format!("torus, cube boundary, square ring and {} trees/grids", positives.len()))
}

// ---------- criterion 2 ----------

fn hyperplane_laws() -> Outcome {
    let corpus = generators::cat0_corpus(2);
    ensure(corpus.len() >= 20, "corpus has fewer than 20 complexes")?;
    let mut planes = 0;
    let mut families = 0;
    for (name, x) in &corpus {
        ensure(x.vertex_count() <= 64, format!("{name} has more than 64 vertices"))?;
        let hs = Hyperplanes::new(x);
        // Directions of each cube, recomputed from the edges at its first corner.
        let dirs = |id| -> Vec<usize> {
            (0..x.corners(id).len().trailing_zeros() as usize)
                .map(|k| hs.hyperplane_of_edge(x.edge_of(id, 0, k).index))
                .collect()
        };
        for (h, hp) in hs.iter().enumerate() {
            planes += 1;
            let cut: BTreeSet<usize> = hp.edge_class.iter().copied().collect();
            let edges: Vec<(usize, usize)> = x
                .cubes_of_dim(1)
                .filter(|(id, _)| !cut.contains(&id.index))
                .map(|(_, c)| (c[0], c[1]))
                .collect();
            let comp = components(x.vertex_count(), edges.into_iter(), |_| true);
            let parts: BTreeSet<usize> = comp.iter().copied().collect();
            ensure(parts.len() == 2, format!("{name}: hyperplane {h} has {} sides", parts.len()))?;
        }
        let squares: Vec<Vec<usize>> = x.cubes_of_dim(2).map(|(id, _)| dirs(id)).collect();
        let cross = |a: usize, b: usize| {
            squares.iter().any(|d| (d[0] == a && d[1] == b) || (d[0] == b && d[1] == a))
        };
        let cube_dirs: Vec<BTreeSet<usize>> = x.cubes().map(|(id, _)| dirs(id).into_iter().collect()).collect();
        for fam in maximal_cliques(hs.len(), &cross) {
            families += 1;
            ensure(fam.len() <= x.dimension(), format!("{name}: crossing family larger than dimension"))?;
            let common = fam.len() <= 1 || cube_dirs.iter().any(|d| fam.iter().all(|h| d.contains(h)));
            ensure(common, format!("{name}: crossing family {fam:?} has no common cube"))?;
            ensure(hs.helly_check(&fam).map_err(|e| e.to_string())?.holds, "library Helly check disagrees")?;
        }
    }
    Ok(format!("{} complexes, {planes} hyperplanes, {families} maximal crossing families", corpus.len()))
}

// ---------- criterion 3 ----------

fn pairs(m: usize, leq: &[(usize, usize)]) -> HalfspaceSystem {
    let labels: Vec<Label> = (0..m)
        .flat_map(|i| [Label::Str(format!("h{i}")), Label::Str(format!("h{i}*"))])
        .collect();
    HalfspaceSystem::build(&RawPocset {
        halfspaces: labels.clone(),
        star: (0..m).map(|i| (labels[2 * i].clone(), labels[2 * i + 1].clone())).collect(),
        leq: leq.iter().map(|&(a, b)| (labels[a].clone(), labels[b].clone())).collect(),
        strict: false,
    })
    .expect("valid system")
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn sageev() -> Outcome {
    for k in 1..=5 {
        let chain: Vec<(usize, usize)> = (0..k - 1).map(|i| (2 * i, 2 * i + 2)).collect();
        let s = pairs(k, &chain);
        let seed = Orientation::unstarred(k);
        let d = dual_complex(&s, &seed, 10_000).map_err(|e| e.to_string())?;
        let x = &d.complex;
        let adj = adjacency(x);
        let degrees: Vec<usize> = adj.iter().map(Vec::len).collect();
        let path_like = x.vertex_count() == k + 1
            && x.f_vector() == vec![k + 1, k]
            && degrees.iter().filter(|&&g| g == 1).count() == 2
            && bfs(&adj, 0).iter().all(|&t| t != usize::MAX);
        ensure(path_like, format!("{k} nested pairs: dual is not a path"))?;
    }
    for n in 1..=4 {
        let s = pairs(n, &[]);
        let d = dual_complex(&s, &Orientation::unstarred(n), 10_000).map_err(|e| e.to_string())?;
        let expected: Vec<usize> = (0..=n).map(|k| binomial(n, k) << (n - k)).collect();
        ensure(d.complex.f_vector() == expected, format!("{n} transversal pairs: f-vector {:?}", d.complex.f_vector()))?;
        ensure(d.complex.count(n) == 1, "not a single top cube")?;
    }
    let corpus = generators::cat0_corpus(2);
    for (name, x) in &corpus {
        let hs = halfspace_system_of(x, DEFAULT_MEDIAN_CAP).map_err(|e| e.to_string())?;
        let d = dual_complex(&hs.system, &hs.principal_orientation(0), 100_000).map_err(|e| e.to_string())?;
        ensure(isomorphic(&d.complex, x), format!("{name}: dual is not isomorphic to the complex"))?;
    }
    Ok(format!("paths k<=5, cubes n<=4, {} round trips", corpus.len()))
}

// ---------- criterion 4 ----------

/// `s1: x -> -x`, `s2: x -> 1 - x` on `Z/m`, composed left to right.
fn dihedral_eval(m: u32, w: &[u8]) -> (u32, bool) {
    w.iter().fold((0, false), |(k, f), &s| {
        let k2 = s as u32;
        ((if f { k + m - k2 } else { k + k2 }) % m, !f)
    })
}

fn dihedral_normal_form(m: u32, w: &[u8]) -> Word {
    let target = dihedral_eval(m, w);
    (0..=m as usize)
        .flat_map(|len| [0u8, 1].map(|start| (0..len).map(|i| start ^ (i % 2) as u8).collect::<Word>()))
        .find(|cand| dihedral_eval(m, cand) == target)
        .expect("dihedral elements have length at most m")
}

fn dihedral() -> Outcome {
    let words: Vec<Word> = (0..=8usize)
        .flat_map(|len| (0..1u32 << len).map(move |bits| (0..len).map(|i| (bits >> i & 1) as u8).collect()))
        .collect();
    ensure(words.len() <= 2000, "too many words")?;
    for m in 2..=6u32 {
        let sys = CoxeterSystem::dihedral(m);
        for radius in [m as usize, 8] {
            let ball = CayleyBall::new(&sys, radius, 10_000).map_err(|e| e.to_string())?;
            ensure(ball.len() == 2 * m as usize, format!("I2({m}) ball of radius {radius} has {}", ball.len()))?;
        }
        for w in &words {
            let r = sys.reduce(w).map_err(|e| e.to_string())?;
            ensure(r == dihedral_normal_form(m, w), format!("I2({m}): reduce({w:?}) = {r:?}"))?;
        }
    }
    Ok(format!("m = 2..6, {} words each", words.len()))
}

// ---------- reflection representation ----------

/// Integer matrices of the geometric representation, for Coxeter matrices
/// with entries in {2, 3, inf} (where 2cos(pi/m) is an integer).
struct Rep {
    r: usize,
    gens: Vec<Vec<i64>>,
}

impl Rep {
    fn new(m: &[Vec<u32>]) -> Rep {
        let r = m.len();
        let b2 = |i: usize, j: usize| -> i64 {
            match m[i][j] {
                1 => 2,
                2 => 0,
                3 => -1,
                0 => -2,
                other => panic!("m = {other} has no integer representation"),
            }
        };
        let gens = (0..r)
            .map(|i| {
                let mut a = vec![0i64; r * r];
                for k in 0..r {
                    a[k * r + k] = 1;
                }
                for j in 0..r {
                    a[i * r + j] -= b2(i, j);
                }
                a
            })
            .collect();
        Rep { r, gens }
    }

    fn mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let r = self.r;
        let mut c = vec![0; r * r];
        for i in 0..r {
            for k in 0..r {
                for j in 0..r {
                    c[i * r + j] += a[i * r + k] * b[k * r + j];
                }
            }
        }
        c
    }

    fn identity(&self) -> Vec<i64> {
        let mut a = vec![0; self.r * self.r];
        (0..self.r).for_each(|k| a[k * self.r + k] = 1);
        a
    }

    fn of(&self, w: &[u8]) -> Vec<i64> {
        w.iter().fold(self.identity(), |acc, &s| self.mul(&acc, &self.gens[s as usize]))
    }

    fn inverse_of(&self, w: &[u8]) -> Vec<i64> {
        w.iter().rev().fold(self.identity(), |acc, &s| self.mul(&acc, &self.gens[s as usize]))
    }

    /// Word lengths of all elements up to `radius`, by breadth-first search.
    fn lengths(&self, radius: usize) -> HashMap<Vec<i64>, usize> {
        let mut len = HashMap::from([(self.identity(), 0)]);
        let mut layer = vec![self.identity()];
        for d in 1..=radius {
            let mut next = Vec::new();
            for g in &layer {
                for s in &self.gens {
                    let h = self.mul(g, s);
                    if !len.contains_key(&h) {
                        len.insert(h.clone(), d);
                        next.push(h);
                    }
                }
            }
            layer = next;
        }
        len
    }
}

fn coxeter_matrix(sys: &CoxeterSystem) -> Vec<Vec<u32>> {
    sys.to_raw().m
}

// ---------- criterion 5 ----------

fn wall_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut paths = 0usize;
    for (name, sys) in [("I2(3)", CoxeterSystem::dihedral(3)), ("A2~", CoxeterSystem::affine_a2())] {
        let radius = 4;
        let rep = Rep::new(&coxeter_matrix(&sys));
        let ball = CayleyBall::new(&sys, radius, 100_000).map_err(|e| e.to_string())?;
        let lengths = rep.lengths(2 * radius);
        let n = ball.len();
        let mats: Vec<Vec<i64>> = ball.elements().iter().map(|w| rep.of(w)).collect();
        let invs: Vec<Vec<i64>> = ball.elements().iter().map(|w| rep.inverse_of(w)).collect();
        let expected = lengths.values().filter(|&&l| l <= radius).count();
        ensure(n == expected, format!("{name}: ball has {n} elements, oracle {expected}"))?;
        let index: HashMap<&Vec<i64>, usize> = mats.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let dist = |a: usize, b: usize| lengths[&rep.mul(&invs[a], &mats[b])];

        // Edges g -- gs inside the ball, each labelled by its reflection g s g^-1.
        let mut adj = vec![Vec::new(); n];
        let mut reflection_of: HashMap<(usize, usize), Vec<i64>> = HashMap::new();
        for g in 0..n {
            for (s, gen) in rep.gens.iter().enumerate() {
                if let Some(&h) = index.get(&rep.mul(&mats[g], gen)) {
                    adj[g].push(h);
                    let t = rep.mul(&rep.mul(&mats[g], gen), &invs[g]);
                    reflection_of.insert((g, h), t);
                    let _ = s;
                }
            }
        }
        let walls: Vec<Vec<i64>> = reflection_of.values().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let wall_id: HashMap<&Vec<i64>, usize> = walls.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let wall = |a: usize, b: usize| wall_id[&reflection_of[&(a, b)]];

        // Each edge lies in exactly one wall, and the library partition agrees.
        ensure(ball.walls().len() == walls.len(), format!("{name}: {} walls, oracle {}", ball.walls().len(), walls.len()))?;
        let mut lib_to_oracle: HashMap<usize, usize> = HashMap::new();
        for (e, ed) in ball.edges().iter().enumerate() {
            let w = wall(ed.from, ed.to);
            let lw = ball.wall_of_edge(e);
            ensure(*lib_to_oracle.entry(lw).or_insert(w) == w, format!("{name}: wall partition differs"))?;
            ensure(ball.walls().iter().filter(|wl| wl.edges.contains(&e)).count() == 1, "edge in several walls")?;
        }

        // The +-1 law, exhaustively.
        for x in 0..n {
            for u in 0..n {
                for &v in &adj[u] {
                    ensure(dist(x, u).abs_diff(dist(x, v)) == 1, format!("{name}: +-1 law fails"))?;
                }
            }
        }

        // Reference parities along breadth-first paths.
        let parity_from = |x: usize| -> Vec<Vec<u8>> {
            let mut par = vec![vec![u8::MAX; walls.len()]; n];
            par[x] = vec![0; walls.len()];
            let mut q = VecDeque::from([x]);
            while let Some(g) = q.pop_front() {
                for &h in &adj[g] {
                    if par[h][0] == u8::MAX {
                        let mut p = par[g].clone();
                        p[wall(g, h)] ^= 1;
                        par[h] = p;
                        q.push_back(h);
                    }
                }
            }
            par
        };
        let reference: Vec<Vec<Vec<u8>>> = (0..n).map(parity_from).collect();
        let ball_dist: Vec<Vec<usize>> = (0..n).map(|y| bfs(&adj, y)).collect();
        for x in 0..n {
            for y in 0..n {
                for _ in 0..100 {
                    let mut path = vec![x];
                    for _ in 0..rng.gen_range(0..=2 * radius) {
                        let cur = *path.last().unwrap();
                        path.push(adj[cur][rng.gen_range(0..adj[cur].len())]);
                    }
                    let mut cur = *path.last().unwrap();
                    while cur != y {
                        let closer: Vec<usize> =
                            adj[cur].iter().copied().filter(|&h| ball_dist[y][h] + 1 == ball_dist[y][cur]).collect();
                        cur = closer[rng.gen_range(0..closer.len())];
                        path.push(cur);
                    }
                    let mut par = vec![0u8; walls.len()];
                    path.windows(2).for_each(|p| par[wall(p[0], p[1])] ^= 1);
                    ensure(par == reference[x][y], format!("{name}: parity depends on the path"))?;
                    paths += 1;
                }
            }
        }

        // H(u,v) is the parity-0 root of the wall through (u,v).
        for (e, ed) in ball.edges().iter().enumerate() {
            let (u, v) = (ed.from, ed.to);
            let w = wall(u, v);
            let h: BTreeSet<usize> = (0..n).filter(|&x| dist(x, u) < dist(x, v)).collect();
            let root: BTreeSet<usize> = (0..n).filter(|&x| reference[u][x][w] == 0).collect();
            ensure(h == root, format!("{name}: H(u,v) differs from the root"))?;
            let lib_h: BTreeSet<usize> = ball.halfspace(u, v).map_err(|e| e.to_string())?.elements().into_iter().collect();
            let lib_root: BTreeSet<usize> =
                ball.root(u, ball.wall_of_edge(e)).map_err(|e| e.to_string())?.elements().into_iter().collect();
            ensure(lib_h == h && lib_root == root, format!("{name}: library halfspace or root differs"))?;
        }
    }
    Ok(format!("I2(3) and A2~ at R = 4, {paths} sampled paths"))
}

// ---------- criterion 6 ----------

fn maximal_dims(x: &CubeComplex) -> Vec<usize> {
    let mut dims: BTreeSet<usize> = BTreeSet::new();
    for (id, c) in x.cubes() {
        let covered = x.cubes_of_dim(id.dim + 1).any(|(_, big)| c.iter().all(|v| big.contains(v)));
        if !covered {
            dims.insert(id.dim);
        }
    }
    dims.into_iter().collect()
}

fn cubulation() -> Outcome {
    let s3 = CoxeterSystem::dihedral(3);
    let ball = CayleyBall::new(&s3, 3, 1000).map_err(|e| e.to_string())?;
    let c = cubulate(&ball, 2, 100_000).map_err(|e| e.to_string())?;
    ensure(c.dual.complex.f_vector() == vec![8, 12, 6, 1], format!("I2(3): dual f-vector {:?}", c.dual.complex.f_vector()))?;
    ensure(maximal_dims(&c.dual.complex) == vec![3], "I2(3): dual is not one 3-cube")?;
    ensure(ball.len() == 6, "I2(3) has 6 elements")?;
    let distinct: BTreeSet<usize> = c.nu.iter().copied().collect();
    ensure(distinct.len() == 6, "I2(3): embedding is not injective")?;
    // Dual distance between images equals the word distance (all walls kept).
    let rep = Rep::new(&coxeter_matrix(&s3));
    let lengths = rep.lengths(6);
    let adj = adjacency(&c.dual.complex);
    for a in 0..6 {
        let d = bfs(&adj, c.nu[a]);
        for b in 0..6 {
            let word = lengths[&rep.mul(&rep.inverse_of(ball.element(a)), &rep.of(ball.element(b)))];
            ensure(d[c.nu[b]] == word, "I2(3): embedding is not isometric")?;
        }
    }
    ensure(c.equivariant && c.adjacent, "I2(3): embedding is not equivariant")?;

    let a2 = CoxeterSystem::affine_a2();
    let ball = CayleyBall::new(&a2, 4, 100_000).map_err(|e| e.to_string())?;
    let c = cubulate(&ball, 2, 1_000_000).map_err(|e| e.to_string())?;
    let a2_dims = maximal_dims(&c.dual.complex);
    ensure(a2_dims == vec![3], format!("A2~: maximal cube dimensions {a2_dims:?}"))?;
    ensure(c.maximal.dimensions() == a2_dims, "A2~: library maximal cubes differ")?;

    let pgl = CoxeterSystem::pgl2z();
    let ball = CayleyBall::new(&pgl, 4, 100_000).map_err(|e| e.to_string())?;
    let c = cubulate(&ball, 2, 1_000_000).map_err(|e| e.to_string())?;
    let pgl_dims = maximal_dims(&c.dual.complex);
    ensure(pgl_dims == vec![2, 3], format!("PGL(2,Z): maximal cube dimensions {pgl_dims:?}"))?;
    ensure(c.maximal.dimensions() == pgl_dims, "PGL(2,Z): library maximal cubes differ")?;
    Ok("I2(3) one 3-cube; A2~ dims [3]; PGL(2,Z) dims [2, 3]".into())
}

// ---------- criterion 7 ----------

/// Components of the annulus r < |g| <= R that reach the sphere of radius R.
fn oracle_ends(m: &[Vec<u32>], r: usize, radius: usize) -> usize {
    let rep = Rep::new(m);
    let lengths = rep.lengths(radius);
    let elems: Vec<&Vec<i64>> = lengths.keys().collect();
    let index: HashMap<&Vec<i64>, usize> = elems.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let mut edges = Vec::new();
    for (i, g) in elems.iter().enumerate() {
        for s in &rep.gens {
            if let Some(&j) = index.get(&rep.mul(g, s)) {
                edges.push((i, j));
            }
        }
    }
    let len = |i: usize| lengths[elems[i]];
    let comp = components(elems.len(), edges.into_iter(), |i| len(i) > r);
    (0..elems.len()).filter(|&i| len(i) == radius).map(|i| comp[i]).collect::<BTreeSet<_>>().len()
}

fn ends() -> Outcome {
    let in_hopf = |v: EndsVerdict| matches!(v, EndsVerdict::Zero | EndsVerdict::One | EndsVerdict::Two | EndsVerdict::Many);
    let dinf = CoxeterSystem::dihedral(0);
    for r in 1..=3 {
        let e = ends_estimate(&dinf, r, 6, 100_000).map_err(|e| e.to_string())?;
        ensure(e.components == 2 && oracle_ends(&coxeter_matrix(&dinf), r, 6) == 2, "D_inf: expected 2 components")?;
        ensure(e.verdict == EndsVerdict::Two, "D_inf: verdict is not 2")?;
    }
    let a2 = CoxeterSystem::affine_a2();
    for r in 1..=3 {
        let e = ends_estimate(&a2, r, 6, 100_000).map_err(|e| e.to_string())?;
        ensure(e.components == 1 && oracle_ends(&coxeter_matrix(&a2), r, 6) == 1, "A2~: expected 1 component")?;
        ensure(e.verdict == EndsVerdict::One, "A2~: verdict is not 1")?;
    }
    let free = CoxeterSystem::universal(3);
    let mut counts = Vec::new();
    for r in 1..=4 {
        let e = ends_estimate(&free, r, 6, 100_000).map_err(|e| e.to_string())?;
        ensure(e.components == oracle_ends(&coxeter_matrix(&free), r, 6), "W(3,inf): oracle disagrees")?;
        ensure(e.components == 3 << r, "W(3,inf): count is not 3*2^r")?;
        ensure(e.verdict == EndsVerdict::Many && in_hopf(e.verdict), "W(3,inf): verdict is not inf")?;
        counts.push(e.components);
    }
    ensure(counts.windows(2).all(|w| w[0] < w[1]), "W(3,inf): counts not increasing")?;
    Ok(format!("D_inf -> 2, A2~ -> 1, W(3,inf) components {counts:?} -> inf"))
}

// ---------- criterion 8 ----------

fn double_factorial(n: usize) -> u128 {
    (1..=(2 * n - 3) as u128).step_by(2).product()
}

fn compatible(a: u64, b: u64) -> bool {
    a & b == 0 || a & b == a || a & b == b
}

/// All pairwise-compatible sets of clusters on `n` leaves.
fn compatible_sets(n: usize) -> Vec<Vec<u64>> {
    let clusters: Vec<u64> = (1..(1u64 << n) - 1).filter(|c| c.count_ones() >= 2).collect();
    let mut out = Vec::new();
    fn extend(i: usize, cur: &mut Vec<u64>, clusters: &[u64], out: &mut Vec<Vec<u64>>) {
        if i == clusters.len() {
            out.push(cur.clone());
            return;
        }
        extend(i + 1, cur, clusters, out);
        if cur.iter().all(|&c| compatible(c, clusters[i])) {
            cur.push(clusters[i]);
            extend(i + 1, cur, clusters, out);
            cur.pop();
        }
    }
    extend(0, &mut Vec::new(), &clusters, &mut out);
    out
}

fn girth(adj: &[Vec<usize>]) -> usize {
    let mut best = usize::MAX;
    for s in 0..adj.len() {
        let mut d = vec![usize::MAX; adj.len()];
        let mut parent = vec![usize::MAX; adj.len()];
        d[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &w in &adj[v] {
                if d[w] == usize::MAX {
                    d[w] = d[v] + 1;
                    parent[w] = v;
                    q.push_back(w);
                } else if parent[v] != w {
                    best = best.min(d[v] + d[w] + 1);
                }
            }
        }
    }
    best
}

fn treespace() -> Outcome {
    for n in 2..=7 {
        let formula = double_factorial(n);
        let topologies = enumerate_topologies(n, 100_000).map_err(|e| e.to_string())?;
        ensure(count_binary(n).map_err(|e| e.to_string())? == formula, format!("n={n}: count differs"))?;
        ensure(topologies.len() as u128 == formula, format!("n={n}: enumeration gives {}", topologies.len()))?;
        let distinct: BTreeSet<&Vec<u64>> = topologies.iter().collect();
        ensure(distinct.len() == topologies.len(), format!("n={n}: repeated topologies"))?;
        let valid = topologies.iter().all(|t| {
            t.len() == n - 2
                && t.iter().collect::<BTreeSet<_>>().len() == t.len()
                && t.iter().all(|&a| t.iter().all(|&b| compatible(a, b)))
        });
        ensure(valid, format!("n={n}: a topology is not a binary tree"))?;
    }
    ensure([3u128, 15, 105, 945] == [3, 4, 5, 6].map(double_factorial), "closed form")?;

    let link = link_of_origin(4).map_err(|e| e.to_string())?;
    let g = &link.graph;
    let adj: Vec<Vec<usize>> = (0..g.vertex_count()).map(|v| g.neighbors(v).to_vec()).collect();
    let clusters: Vec<u64> = (1..15u64).filter(|c| c.count_ones() >= 2 && c.count_ones() <= 3).collect();
    let oracle_edges = (0..clusters.len())
        .flat_map(|i| (i + 1..clusters.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| compatible(clusters[i], clusters[j]))
        .count();
    // Ten vertices, 3-regular, girth 5 characterises the Petersen graph.
    ensure(
        adj.len() == 10 && g.edge_count() == 15 && oracle_edges == 15 && adj.iter().all(|a| a.len() == 3) && girth(&adj) == 5,
        "link of the origin is not the Petersen graph",
    )?;

    for n in 3..=5 {
        let x = treespace_complex(n, 5, 1_000_000).map_err(|e| e.to_string())?;
        let sets = compatible_sets(n);
        let top = sets.iter().map(Vec::len).max().unwrap_or(0);
        let f: Vec<usize> = (0..=top).map(|k| sets.iter().map(|s| binomial(s.len(), k)).sum()).collect();
        ensure(x.f_vector() == f, format!("n={n}: f-vector {:?}, oracle {f:?}", x.f_vector()))?;
        let index: HashMap<Vec<u64>, usize> = sets
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut k = s.clone();
                k.sort_unstable();
                (k, i)
            })
            .collect();
        let mut adj = vec![Vec::new(); sets.len()];
        for (i, s) in sets.iter().enumerate() {
            for j in 0..s.len() {
                let mut t: Vec<u64> = s.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &c)| c).collect();
                t.sort_unstable();
                let k = index[&t];
                adj[i].push(k);
                adj[k].push(i);
            }
        }
        ensure(bad_median_triple(&adj).is_none(), format!("n={n}: oracle finds a bad median triple"))?;
        let v = is_cat0(&x, DEFAULT_MEDIAN_CAP).map_err(|e| e.to_string())?;
        ensure(v.cat0, format!("n={n}: truncated tree space is not CAT(0)"))?;
    }

    let tripod = [0b011u64, 0b101, 0b110];
    let lengths = [0.25f64, 0.5, 1.75, 3.0];
    let tree = |c: Option<u64>, l: f64| match c {
        Some(c) => PhyloTree::from_clusters(3, &[c], &[l]).expect("tripod tree"),
        None => PhyloTree::star(3).expect("star"),
    };
    let mut cases = 0;
    for ca in tripod.iter().map(|&c| Some(c)).chain([None]) {
        for cb in tripod.iter().map(|&c| Some(c)).chain([None]) {
            for &a in &lengths {
                for &b in &lengths {
                    let (la, lb) = (if ca.is_some() { a } else { 0.0 }, if cb.is_some() { b } else { 0.0 });
                    let expected = if ca == cb { (la - lb).abs() } else { la + lb };
                    let d = cone_distance(&tree(ca, a), &tree(cb, b)).map_err(|e| e.to_string())?;
                    ensure(d.exact && d.value == expected, format!("tripod distance {} != {expected}", d.value))?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("counts n=2..7, Petersen link, CAT(0) truncations n=3..5, {cases} tripod distances"))
}

// ---------- criterion 9 ----------

fn headless_suite() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_cubeplex"))
            .args(["suite", "--seed", "7"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (first, second) = (run()?, run()?);
    ensure(first.status.code() == Some(0), format!("suite exited with {:?}", first.status.code()))?;
    ensure(first.stdout == second.stdout, "two seeded runs differ")?;
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).map_err(|e| e.to_string())?;
    ensure(v["ok"] == true, "suite verdict is not ok")?;
    let checks = v["result"]["checks"].as_array().map(Vec::len).unwrap_or(0);
    ensure(checks > 0, "suite ran no checks")?;
    Ok(format!("{checks} checks, {} identical bytes", first.stdout.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Gromov criterion corpus", gromov),
        ("hyperplane laws on the CAT(0) corpus", hyperplane_laws),
        ("Sageev duality", sageev),
        ("dihedral normal forms", dihedral),
        ("Coxeter wall laws", wall_laws),
        ("cubulation landmarks", cubulation),
        ("ends estimator", ends),
        ("tree space", treespace),
        ("headless deterministic suite", headless_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
