use cubeplex::complex::{
    generators, halfspace_system_of, is_cat0, is_flag, vertex_link, Cat0Witness, CubeComplex, CubeError, Hyperplanes,
    RawComplex, DEFAULT_MEDIAN_CAP,
};
use cubeplex::dot::{crossing_dot, graph_dot, skeleton_dot};
use cubeplex::treespace::{treespace_complex, DEFAULT_TREESPACE_BOUND};
use cubeplex::Label;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{ComplexCmd, ComplexInput};
use crate::{Ctx, InputError, Res, Verdict};

fn dims(spec: &str) -> Res<Vec<usize>> {
    spec.split('x')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| InputError::new("BadGenerator", format!("bad dimensions {spec:?}")))
}

fn one(spec: &str) -> Res<usize> {
    match dims(spec)?.as_slice() {
        [k] => Ok(*k),
        _ => Err(InputError::new("BadGenerator", format!("expected one number, got {spec:?}"))),
    }
}

/// Builds a complex from a generator spec such as `torus:3x3`.
pub(crate) fn generate(spec: &str, seed: u64) -> Res<CubeComplex> {
    let bad = |why: &str| InputError::new("BadGenerator", format!("{spec}: {why}"));
    let (name, arg) = spec.split_once(':').ok_or_else(|| bad("expected NAME:ARGS"))?;
    Ok(match name {
        "torus" => match dims(arg)?.as_slice() {
            [p, q] if *p >= 3 && *q >= 3 => generators::torus(*p, *q),
            _ => return Err(bad("torus needs PxQ with P, Q >= 3")),
        },
        "grid" => {
            let sides = dims(arg)?;
            if sides.is_empty() || sides.contains(&0) {
                return Err(bad("grid sides must be positive"));
            }
            generators::grid(&sides)
        }
        "cube" => generators::cube(one(arg)?),
        "boundary" => match one(arg)? {
            n if n >= 2 => generators::cube_boundary(n),
            _ => return Err(bad("boundary needs N >= 2")),
        },
        "path" => generators::path(one(arg)?),
        "cycle" => match one(arg)? {
            n if n >= 3 => generators::cycle(n),
            _ => return Err(bad("cycle needs N >= 3")),
        },
        "tree" => match one(arg)? {
            n if n >= 1 => generators::random_tree(n, &mut ChaCha8Rng::seed_from_u64(seed)),
            _ => return Err(bad("tree needs N >= 1")),
        },
        "treespace" => treespace_complex(one(arg)?, DEFAULT_TREESPACE_BOUND, 1_000_000)?,
        _ => return Err(bad("unknown family")),
    })
}

/// Parsed input, or the validation error (reported as a verdict by `check`).
fn load(ctx: &Ctx, input: &ComplexInput) -> Res<Result<CubeComplex, CubeError>> {
    if let Some(spec) = &input.generate {
        return Ok(Ok(generate(spec, ctx.global.seed)?));
    }
    let path = input.file.as_ref().expect("clap requires a file or --generate");
    let raw: RawComplex = crate::read_json(path)?;
    Ok(CubeComplex::build(&raw))
}

fn load_valid(ctx: &Ctx, input: &ComplexInput) -> Res<CubeComplex> {
    Ok(load(ctx, input)??)
}

fn labels(x: &CubeComplex, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| x.label(v).to_string()).collect()
}

pub(crate) fn stats(x: &CubeComplex) -> Value {
    json!({
        "vertices": x.vertex_count(),
        "dimension": x.dimension(),
        "f_vector": x.f_vector(),
        "euler_characteristic": x.euler_characteristic(),
    })
}

pub(super) fn run(ctx: &Ctx, cmd: ComplexCmd) -> Res<Verdict> {
    match cmd {
        ComplexCmd::Check(input) => check(ctx, &input),
        ComplexCmd::Links { input, vertex } => links(ctx, &input, vertex.as_deref()),
        ComplexCmd::Hyperplanes(input) => hyperplanes(ctx, &input),
        ComplexCmd::Export(input) => export(ctx, &input),
    }
}

fn check(ctx: &Ctx, input: &ComplexInput) -> Res<Verdict> {
    let x = match load(ctx, input)? {
        Ok(x) => x,
        Err(e) => return Ok(Verdict::rejected("complex check", &e)),
    };
    ctx.write_dot(|| skeleton_dot(&x, None))?;
    ctx.write_out(|| x.to_json())?;
    let verdict = match is_cat0(&x, ctx.cap(DEFAULT_MEDIAN_CAP)) {
        Ok(v) => v,
        Err(e @ CubeError::Disconnected) => {
            return Ok(Verdict::rejected("complex check", &e).stats(stats(&x)));
        }
        Err(e) => return Err(e.into()),
    };
    let certificate = match &verdict.witness {
        None => Value::Null,
        Some(Cat0Witness::EmptySimplex { vertex, simplex }) => json!({
            "kind": "empty_simplex",
            "vertex": x.label(*vertex).to_string(),
            "simplex": labels(&x, simplex),
        }),
        Some(Cat0Witness::MedianTriple { triple, medians }) => json!({
            "kind": "median_triple",
            "triple": labels(&x, triple),
            "medians": labels(&x, medians),
        }),
        Some(Cat0Witness::EmptySquare { cycle }) => json!({
            "kind": "empty_square",
            "cycle": labels(&x, cycle),
        }),
    };
    Ok(Verdict::new("complex check", verdict.cat0)
        .certificate(certificate)
        .stats(stats(&x))
        .result(json!({ "valid": true, "locally_cat0": verdict.locally_cat0, "cat0": verdict.cat0 })))
}

fn links(ctx: &Ctx, input: &ComplexInput, vertex: Option<&str>) -> Res<Verdict> {
    let x = load_valid(ctx, input)?;
    let drawn = match vertex {
        None => 0,
        Some(l) => {
            let label = l.parse::<i64>().map(Label::Int).unwrap_or_else(|_| Label::str(l));
            x.vertex_by_label(&label)
                .or_else(|| x.vertex_by_label(&Label::str(l)))
                .ok_or_else(|| InputError::new("UnknownVertex", format!("no vertex {l}")))?
        }
    };
    let mut rows = Vec::with_capacity(x.vertex_count());
    let mut certificate = Value::Null;
    for v in 0..x.vertex_count() {
        let link = vertex_link(&x, v)?;
        let flag = is_flag(&link);
        if let (Some(simplex), true) = (&flag.empty_simplex, certificate.is_null()) {
            certificate = json!({
                "kind": "empty_simplex",
                "vertex": x.label(v).to_string(),
                "simplex": simplex.iter().map(|&i| link.labels()[i].to_string()).collect::<Vec<_>>(),
            });
        }
        let counts: Vec<usize> = (0..=link.dimension().max(0) as usize).map(|k| link.count(k)).collect();
        rows.push(json!({
            "vertex": x.label(v).to_string(),
            "simplices": counts,
            "flag": flag.flag,
        }));
        if v == drawn && x.vertex_count() > 0 {
            ctx.write_dot(|| graph_dot("link", &link.one_skeleton(), link.labels()))?;
        }
    }
    Ok(Verdict::new("complex links", certificate.is_null())
        .certificate(certificate)
        .stats(stats(&x))
        .result(json!({ "links": rows })))
}

fn hyperplanes(ctx: &Ctx, input: &ComplexInput) -> Res<Verdict> {
    let x = load_valid(ctx, input)?;
    let cap = ctx.cap(DEFAULT_MEDIAN_CAP);
    let hs = Hyperplanes::with_median_cap(&x, cap);
    ctx.write_dot(|| format!("{}{}", skeleton_dot(&x, Some(&hs)), crossing_dot(&hs)))?;
    let mut rows = Vec::with_capacity(hs.len());
    let mut certificate = Value::Null;
    for (h, hp) in hs.iter().enumerate() {
        let parts = hs.halfspaces(h)?;
        if parts.len() != 2 && certificate.is_null() {
            certificate = json!({ "kind": "not_two_sided", "hyperplane": h, "components": parts.len() });
        }
        rows.push(json!({
            "id": h,
            "edges": hp.edge_class.len(),
            "squares": hp.crossed_of_dim(2),
            "crossed_cubes": hp.crossed_cubes.len(),
            "halfspace_sizes": parts.iter().map(Vec::len).collect::<Vec<_>>(),
        }));
    }
    let crossings: Vec<(usize, usize)> = hs.crossing_graph().edges().collect();
    let families = hs.crossing_graph().maximal_cliques();
    let mut helly_ok = true;
    let mut largest = 0;
    match is_cat0(&x, cap) {
        Ok(v) if v.cat0 => {
            for fam in &families {
                largest = largest.max(fam.len());
                let hv = hs.helly_check(fam)?;
                if !hv.holds && certificate.is_null() {
                    helly_ok = false;
                    certificate = json!({ "kind": "helly", "family": fam, "verdict": hv });
                }
            }
        }
        Ok(_) | Err(CubeError::Disconnected) => {
            helly_ok = false;
            if certificate.is_null() {
                certificate = json!({ "kind": "not_cat0", "message": "hyperplane laws are only guaranteed for CAT(0) complexes" });
            }
        }
        Err(e) => return Err(e.into()),
    }
    if ctx.global.out.is_some() && helly_ok {
        let system = halfspace_system_of(&x, cap)?;
        ctx.write_out(|| system.system.to_json())?;
    }
    let mut st = stats(&x);
    st["hyperplanes"] = json!(hs.len());
    st["crossing_pairs"] = json!(crossings.len());
    st["max_crossing_family"] = json!(largest);
    Ok(Verdict::new("complex hyperplanes", certificate.is_null())
        .certificate(certificate)
        .stats(st)
        .result(json!({ "hyperplanes": rows, "crossings": crossings, "maximal_crossing_families": families })))
}

fn export(ctx: &Ctx, input: &ComplexInput) -> Res<Verdict> {
    let x = load_valid(ctx, input)?;
    ctx.write_dot(|| skeleton_dot(&x, None))?;
    let result = if ctx.global.out.is_some() {
        ctx.write_out(|| x.to_json())?;
        Value::Null
    } else {
        serde_json::to_value(x.to_raw())?
    };
    Ok(Verdict::new("complex export", true).stats(stats(&x)).result(result))
}
