//! Seeded property checks over every module, run headless by `cubeplex suite`.
//! Output depends only on the seed and the arguments.

use std::error::Error;

use clap::Args;
use cubeplex::complex::{
    generators, halfspace_system_of, is_cat0, Cat0Witness, CubeComplex, Hyperplanes, DEFAULT_MEDIAN_CAP,
};
use cubeplex::coxeter::{cubulate, ends_estimate, CayleyBall, EndsVerdict};
use cubeplex::pocset::{dual_complex, maximal_cubes};
use cubeplex::treespace::{
    cone_distance, count_binary, enumerate_topologies, is_petersen, link_of_origin, treespace_complex,
};
use cubeplex::{CoxeterSystem, HalfspaceSystem, Label, Orientation, PhyloTree, RawPocset, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::{Ctx, InputError, Res, Verdict};

#[derive(Args, Debug, Clone)]
pub struct SuiteArgs {
    /// Run only these checks (comma separated)
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    /// Random paths per sampled element pair in the wall-parity check
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
}

type CheckResult = Result<(bool, Value), Box<dyn Error>>;
type CheckFn = fn(u64, usize) -> CheckResult;

pub const CHECKS: &[(&str, CheckFn)] = &[
    ("gromov", gromov),
    ("hyperplanes", hyperplane_laws),
    ("duality", duality),
    ("dihedral", dihedral),
    ("walls", wall_laws),
    ("cubulation", cubulation),
    ("ends", ends),
    ("treespace", treespace),
];

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub ok: bool,
    pub detail: Value,
}

/// Runs the selected checks in a fixed order; library errors count as failures.
pub fn run_checks(seed: u64, samples: usize, only: &[String]) -> Res<Vec<CheckReport>> {
    if let Some(bad) = only.iter().find(|n| !CHECKS.iter().any(|(c, _)| c == n)) {
        return Err(InputError::new("UnknownCheck", format!("no check named {bad:?}")));
    }
    Ok(CHECKS
        .iter()
        .filter(|(name, _)| only.is_empty() || only.iter().any(|n| n == name))
        .map(|&(name, check)| match check(seed, samples) {
            Ok((ok, detail)) => CheckReport { name, ok, detail },
            Err(e) => CheckReport {
                name,
                ok: false,
                detail: json!({ "error": e.to_string() }),
            },
        })
        .collect())
}

pub(crate) fn run_suite(ctx: &Ctx, args: &SuiteArgs) -> Res<Verdict> {
    let reports = run_checks(ctx.global.seed, args.samples, &args.only)?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.ok).map(|r| r.name).collect();
    let certificate = if failed.is_empty() { Value::Null } else { json!({ "failed": failed }) };
    Ok(Verdict::new("suite", failed.is_empty())
        .certificate(certificate)
        .stats(json!({ "seed": ctx.global.seed, "checks": reports.len(), "failed": failed.len() }))
        .result(json!({ "checks": reports })))
}

fn gromov(seed: u64, _: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let torus = is_cat0(&generators::torus(3, 3), DEFAULT_MEDIAN_CAP)?;
    let torus_ok =
        torus.locally_cat0 && !torus.cat0 && matches!(torus.witness, Some(Cat0Witness::MedianTriple { .. }));
    let boundary = is_cat0(&generators::cube_boundary(3), DEFAULT_MEDIAN_CAP)?;
    let boundary_ok = !boundary.locally_cat0
        && matches!(&boundary.witness, Some(Cat0Witness::EmptySimplex { simplex, .. }) if simplex.len() == 3);
    let ring = generators::lattice_union(2, &[vec![1, 1], vec![2, 0], vec![2, 2], vec![3, 1]]);
    let ring = is_cat0(&ring, DEFAULT_MEDIAN_CAP)?;
    let ring_ok = ring.locally_cat0 && !ring.cat0 && matches!(ring.witness, Some(Cat0Witness::EmptySquare { .. }));
    let mut positives = vec![
        generators::grid(&[3, 3]),
        generators::grid(&[2, 2, 2]),
        generators::grid(&[4, 1]),
        generators::path(6),
    ];
    for n in [5, 15, 40] {
        positives.push(generators::random_tree(n, &mut rng));
    }
    let mut failures = Vec::new();
    for (i, x) in positives.iter().enumerate() {
        if !is_cat0(x, DEFAULT_MEDIAN_CAP)?.cat0 {
            failures.push(i);
        }
    }
    Ok((
        torus_ok && boundary_ok && ring_ok && failures.is_empty(),
        json!({ "torus": torus_ok, "cube_boundary": boundary_ok, "square_ring": ring_ok, "positives": positives.len(), "failed_positives": failures }),
    ))
}

fn hyperplane_laws(seed: u64, _: usize) -> CheckResult {
    let corpus = generators::cat0_corpus(seed);
    let mut hyperplanes = 0;
    let mut families = 0;
    let mut failures = Vec::new();
    for (name, x) in &corpus {
        let hs = Hyperplanes::new(x);
        hyperplanes += hs.len();
        let two_sided = (0..hs.len()).all(|h| hs.halfspaces(h).map(|p| p.len() == 2).unwrap_or(false));
        let mut helly = true;
        for fam in hs.crossing_graph().maximal_cliques() {
            families += 1;
            helly &= hs.helly_check(&fam)?.holds;
        }
        if !(two_sided && helly) {
            failures.push(name.clone());
        }
    }
    Ok((
        failures.is_empty(),
        json!({ "complexes": corpus.len(), "hyperplanes": hyperplanes, "families": families, "failures": failures }),
    ))
}

/// `m` complementary pairs `h{i}`, `h{i}*` with the given generating relations.
pub fn pair_system(m: usize, leq: &[(usize, usize)]) -> Result<HalfspaceSystem, Box<dyn Error>> {
    let labels: Vec<Label> = (0..m)
        .flat_map(|i| [Label::Str(format!("h{i}")), Label::Str(format!("h{i}*"))])
        .collect();
    Ok(HalfspaceSystem::build(&RawPocset {
        halfspaces: labels.clone(),
        star: (0..m).map(|i| (labels[2 * i].clone(), labels[2 * i + 1].clone())).collect(),
        leq: leq.iter().map(|&(a, b)| (labels[a].clone(), labels[b].clone())).collect(),
        strict: false,
    })?)
}

fn isomorphic(a: &CubeComplex, b: &CubeComplex) -> bool {
    a.f_vector() == b.f_vector() && a.one_skeleton().find_isomorphism(&b.one_skeleton()).is_some()
}

fn duality(seed: u64, _: usize) -> CheckResult {
    let mut ok = true;
    for k in 1..=5 {
        let chain: Vec<(usize, usize)> = (0..k - 1).map(|i| (2 * i, 2 * (i + 1))).collect();
        let s = pair_system(k, &chain)?;
        let d = dual_complex(&s, &Orientation::unstarred(k), 10_000)?;
        ok &= isomorphic(&d.complex, &generators::path(k));
    }
    for n in 1..=4 {
        let s = pair_system(n, &[])?;
        let d = dual_complex(&s, &Orientation::unstarred(n), 10_000)?;
        ok &= isomorphic(&d.complex, &generators::cube(n)) && maximal_cubes(&s, &d).bijection;
    }
    let corpus = generators::cat0_corpus(seed);
    let mut failures = Vec::new();
    for (name, x) in &corpus {
        let hs = halfspace_system_of(x, DEFAULT_MEDIAN_CAP)?;
        let d = dual_complex(&hs.system, &hs.principal_orientation(0), 100_000)?;
        if !isomorphic(&d.complex, x) {
            failures.push(name.clone());
        }
    }
    Ok((
        ok && failures.is_empty(),
        json!({ "small_cases": ok, "round_trips": corpus.len(), "failures": failures }),
    ))
}

/// Dihedral element as the affine map `x -> ±x + k` on `Z/m`; `s1: x -> -x`,
/// `s2: x -> 1 - x`.
fn dihedral_eval(m: u32, w: &[u8]) -> (u32, bool) {
    w.iter().fold((0, false), |(k, f), &s| {
        let (k2, f2) = (s as u32, true);
        ((if f { k + m - k2 } else { k + k2 }) % m, f ^ f2)
    })
}

/// Lexicographically least alternating word of minimal length for `w`.
fn dihedral_normal_form(m: u32, w: &[u8]) -> Word {
    let target = dihedral_eval(m, w);
    for len in 0..=m as usize {
        for start in [0u8, 1] {
            let cand: Word = (0..len).map(|i| start ^ (i % 2) as u8).collect();
            if dihedral_eval(m, &cand) == target {
                return cand;
            }
        }
    }
    unreachable!("every dihedral element has length at most m")
}

fn dihedral(seed: u64, samples: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sizes = Vec::new();
    let mut mismatches = 0;
    let words = 20 * samples.max(1);
    for m in 2..=6u32 {
        let sys = CoxeterSystem::dihedral(m);
        sizes.push(CayleyBall::new(&sys, m as usize, 1000)?.len());
        for _ in 0..words {
            let len = rng.gen_range(0..=8);
            let w: Word = (0..len).map(|_| rng.gen_range(0..2u8)).collect();
            if sys.reduce(&w)? != dihedral_normal_form(m, &w) {
                mismatches += 1;
            }
        }
    }
    let sizes_ok = sizes.iter().zip(2..).all(|(&s, m)| s == 2 * m);
    Ok((
        sizes_ok && mismatches == 0,
        json!({ "ball_sizes": sizes, "words_per_group": words, "mismatches": mismatches }),
    ))
}

fn wall_laws(seed: u64, samples: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut detail = Vec::new();
    let mut ok = true;
    for (name, sys, radius) in [("i2:3", CoxeterSystem::dihedral(3), 3), ("a2tilde", CoxeterSystem::affine_a2(), 4)] {
        let ball = CayleyBall::new(&sys, radius, 100_000)?;
        let mut count = vec![0usize; ball.edges().len()];
        ball.walls().iter().flat_map(|w| &w.edges).for_each(|&e| count[e] += 1);
        let partition = count.iter().all(|&c| c == 1);
        let mut plusminus = true;
        for x in 0..ball.len() {
            for ed in ball.edges() {
                plusminus &= ball.plusminus_check(x, ed.from, ed.to)?;
            }
        }
        let mut roots = true;
        for (e, ed) in ball.edges().iter().enumerate() {
            let w = ball.wall_of_edge(e);
            roots &= ball.halfspace(ed.from, ed.to)? == ball.root(ed.from, w)?;
            roots &= ball.halfspace(ed.to, ed.from)? == ball.root(ed.to, w)?;
        }
        let mut parity = true;
        let pairs = 50.min(ball.len() * ball.len());
        for _ in 0..pairs {
            let (x, y) = (rng.gen_range(0..ball.len()), rng.gen_range(0..ball.len()));
            let reference: Vec<u8> = (0..ball.walls().len())
                .map(|w| ball.crossing_parity(x, y, w))
                .collect::<Result<_, _>>()?;
            for _ in 0..samples {
                let path = ball.random_path(x, y, &mut rng);
                let crossed = ball.crossings(&path)?;
                parity &= crossed.iter().zip(&reference).all(|(&c, &r)| (c % 2) as u8 == r);
            }
        }
        ok &= partition && plusminus && roots && parity;
        detail.push(json!({
            "group": name,
            "elements": ball.len(),
            "walls": ball.walls().len(),
            "edge_partition": partition,
            "plusminus": plusminus,
            "roots_are_halfspaces": roots,
            "parity_path_independent": parity,
        }));
    }
    Ok((ok, json!(detail)))
}

fn cubulation(_: u64, _: usize) -> CheckResult {
    let mut detail = Vec::new();
    let mut ok = true;
    for (name, sys, radius, expected) in [
        ("i2:3", CoxeterSystem::dihedral(3), 3, vec![3]),
        ("a2tilde", CoxeterSystem::affine_a2(), 4, vec![3]),
        ("pgl2z", CoxeterSystem::pgl2z(), 4, vec![2, 3]),
    ] {
        let ball = CayleyBall::new(&sys, radius, 100_000)?;
        let c = cubulate(&ball, 2, 1_000_000)?;
        let dims = c.maximal.dimensions();
        let pass = dims == expected && c.adjacent && c.injective_inner && c.equivariant;
        ok &= pass;
        detail.push(json!({
            "group": name,
            "radius": radius,
            "f_vector": c.dual.complex.f_vector(),
            "maximal_cube_dimensions": dims,
            "injective": c.injective,
            "equivariant": c.equivariant,
            "ok": pass,
        }));
    }
    Ok((ok, json!(detail)))
}

fn ends(_: u64, _: usize) -> CheckResult {
    let dinf = ends_estimate(&CoxeterSystem::dihedral(0), 2, 6, 100_000)?;
    let a2 = ends_estimate(&CoxeterSystem::affine_a2(), 2, 6, 100_000)?;
    let free: Vec<usize> = (1..=3)
        .map(|r| ends_estimate(&CoxeterSystem::universal(3), r, 5, 100_000).map(|e| e.components))
        .collect::<Result<_, _>>()?;
    let finite = ends_estimate(&CoxeterSystem::dihedral(4), 1, 6, 100_000)?;
    let ok = dinf.verdict == EndsVerdict::Two
        && a2.verdict == EndsVerdict::One
        && free.windows(2).all(|w| w[0] < w[1])
        && finite.verdict == EndsVerdict::Zero;
    Ok((
        ok,
        json!({ "infinite_dihedral": dinf, "a2tilde": a2, "universal3_components": free, "i2_4": finite }),
    ))
}

fn random_tree(n: usize, topologies: &[Vec<u64>], rng: &mut impl Rng) -> Result<PhyloTree, Box<dyn Error>> {
    let t = &topologies[rng.gen_range(0..topologies.len())];
    let keep: Vec<u64> = t.iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
    let lengths: Vec<f64> = keep.iter().map(|_| rng.gen_range(1..=40) as f64 / 8.0).collect();
    Ok(PhyloTree::from_clusters(n, &keep, &lengths)?)
}

fn treespace(seed: u64, samples: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts_ok = (2..=7).all(|n| {
        let e = enumerate_topologies(n, 100_000).map(|t| t.len() as u128).ok();
        e.is_some() && e == count_binary(n).ok()
    });
    let petersen = is_petersen(&link_of_origin(4)?.graph).is_petersen;
    let mut cat0 = Vec::new();
    for n in 3..=5 {
        let x = treespace_complex(n, 5, 1_000_000)?;
        cat0.push(is_cat0(&x, DEFAULT_MEDIAN_CAP.max(x.vertex_count()))?.cat0);
    }
    let mut metric = true;
    for n in [3, 5] {
        let topologies = enumerate_topologies(n, 100_000)?;
        for _ in 0..samples.max(1) * 5 {
            let a = random_tree(n, &topologies, &mut rng)?;
            let b = random_tree(n, &topologies, &mut rng)?;
            let ab = cone_distance(&a, &b)?;
            let ba = cone_distance(&b, &a)?;
            metric &= cone_distance(&a, &a)?.value == 0.0 && ab.value == ba.value && ab.value >= 0.0;
            metric &= n != 3 || ab.exact;
        }
    }
    let ok = counts_ok && petersen && cat0.iter().all(|&c| c) && metric;
    Ok((
        ok,
        json!({ "counts": counts_ok, "petersen": petersen, "truncation_cat0": cat0, "metric": metric }),
    ))
}
