use cubeplex::coxeter::{cubulate, ends_estimate, halfspace_system, CayleyBall};
use cubeplex::dot::{ball_dot, skeleton_dot};
use cubeplex::CoxeterSystem;
use serde_json::{json, Value};

use super::complex::stats;
use super::{BallArgs, CoxeterCmd, GroupInput};
use crate::{read_file, Ctx, InputError, Res, Verdict};

pub(crate) const DEFAULT_BALL_CAP: usize = 100_000;

/// `i2:M`, `a2tilde`, `pgl2z` or `universal:N`.
pub(crate) fn builtin_group(name: &str) -> Res<CoxeterSystem> {
    let bad = || InputError::new("BadGroup", format!("unknown group {name:?}"));
    let number = |s: &str| s.parse::<u32>().map_err(|_| bad());
    Ok(match name.split_once(':') {
        Some(("i2", m)) => match number(m)? {
            1 => return Err(bad()),
            m => CoxeterSystem::dihedral(m),
        },
        Some(("universal", n)) => match number(n)? {
            0 => return Err(bad()),
            n => CoxeterSystem::universal(n as usize),
        },
        None if name == "a2tilde" => CoxeterSystem::affine_a2(),
        None if name == "pgl2z" => CoxeterSystem::pgl2z(),
        _ => return Err(bad()),
    })
}

fn load(input: &GroupInput) -> Res<CoxeterSystem> {
    match (&input.matrix, &input.group) {
        (Some(path), _) => Ok(CoxeterSystem::from_json(&read_file(path)?)?),
        (None, Some(name)) => builtin_group(name),
        (None, None) => unreachable!("clap requires --matrix or --group"),
    }
}

fn ball_stats(ball: &CayleyBall) -> Value {
    let spheres: Vec<usize> = (0..=ball.radius()).map(|r| ball.sphere(r).count()).collect();
    json!({
        "rank": ball.system().rank(),
        "radius": ball.radius(),
        "elements": ball.len(),
        "edges": ball.edges().len(),
        "walls": ball.walls().len(),
        "spheres": spheres,
    })
}

pub(super) fn run(ctx: &Ctx, cmd: CoxeterCmd) -> Res<Verdict> {
    let cap = ctx.cap(DEFAULT_BALL_CAP);
    match cmd {
        CoxeterCmd::Ball(args) => {
            let sys = load(&args.group)?;
            let ball = CayleyBall::new(&sys, args.radius, cap)?;
            ctx.write_dot(|| ball_dot(&ball, None))?;
            ctx.write_out(|| sys.to_json())?;
            let elements: Vec<String> = ball.elements().iter().map(|w| sys.format(w)).collect();
            Ok(Verdict::new("coxeter ball", true)
                .stats(ball_stats(&ball))
                .result(json!({ "elements": elements })))
        }
        CoxeterCmd::Walls(args) => walls(ctx, &args, cap),
        CoxeterCmd::Halfspaces {
            ball: args,
            margin,
            seed_element,
        } => {
            let sys = load(&args.group)?;
            let ball = CayleyBall::new(&sys, args.radius, cap)?;
            let hs = halfspace_system(&ball, margin)?;
            ctx.write_dot(|| ball_dot(&ball, hs.sides.first()))?;
            ctx.write_out(|| hs.system.to_json())?;
            let mut result = json!({
                "walls": hs.walls.iter().map(|&w| sys.format(&ball.walls()[w].reflection)).collect::<Vec<_>>(),
            });
            if let Some(word) = seed_element {
                let g = ball.find(&sys.parse_word(&word)?)?;
                let o = hs.principal_orientation(g);
                result["seed_element"] = json!({
                    "element": sys.format(ball.element(g)),
                    "orientation": o.bits_relative_to(&hs.principal_orientation(0)),
                });
            }
            let mut st = ball_stats(&ball);
            st["hyperplanes"] = json!(hs.system.hyperplane_count());
            Ok(Verdict::new("coxeter halfspaces", true)
                .certificate(json!({ "trust": hs.trust }))
                .stats(st)
                .result(result))
        }
        CoxeterCmd::Cubulate {
            ball: args,
            margin,
            seed_element,
        } => {
            let sys = load(&args.group)?;
            let ball = CayleyBall::new(&sys, args.radius, cap)?;
            let c = cubulate(&ball, margin, cap)?;
            ctx.write_dot(|| skeleton_dot(&c.dual.complex, None))?;
            ctx.write_out(|| c.dual.complex.to_json())?;
            let checks = json!({
                "adjacent": c.adjacent,
                "injective_inner": c.injective_inner,
                "injective": c.injective,
                "equivariant": c.equivariant,
                "cube_family_bijection": c.maximal.bijection,
            });
            let ok = c.adjacent && c.injective_inner && c.equivariant && c.maximal.bijection;
            let certificate = if ok {
                json!({ "trust": c.halfspaces.trust })
            } else {
                json!({ "kind": "cubulation_check_failed", "checks": checks, "trust": c.halfspaces.trust })
            };
            let nu: serde_json::Map<String, Value> =
                (0..ball.len()).map(|g| (sys.format(ball.element(g)), json!(c.nu[g]))).collect();
            let mut result = json!({
                "maximal_cube_dimensions": c.maximal.dimensions(),
                "checks": checks,
                "nu": nu,
            });
            if let Some(word) = seed_element {
                let g = ball.find(&sys.parse_word(&word)?)?;
                result["seed_element"] = json!({ "element": sys.format(ball.element(g)), "vertex": c.nu[g] });
            }
            let mut st = stats(&c.dual.complex);
            st["ball"] = ball_stats(&ball);
            st["hyperplanes"] = json!(c.halfspaces.system.hyperplane_count());
            st["maximal_cubes"] = json!(c.maximal.cubes.len());
            st["maximal_cube_dimensions"] = json!(c.maximal.dimensions());
            Ok(Verdict::new("coxeter cubulate", ok)
                .certificate(certificate)
                .stats(st)
                .result(result))
        }
        CoxeterCmd::Ends { ball: args, mut inner } => {
            let sys = load(&args.group)?;
            inner.sort_unstable();
            inner.dedup();
            let reports = inner
                .iter()
                .map(|&r| ends_estimate(&sys, r, args.radius, cap))
                .collect::<Result<Vec<_>, _>>()?;
            let counts: Vec<usize> = reports.iter().map(|r| r.components).collect();
            let increasing = counts.windows(2).all(|w| w[0] < w[1]);
            let verdict = reports.last().map(|r| r.verdict.as_str());
            Ok(Verdict::new("coxeter ends", true)
                .stats(json!({ "radius": args.radius, "components": counts, "strictly_increasing": increasing }))
                .result(json!({ "verdict": verdict, "reports": reports })))
        }
        CoxeterCmd::Reduce { group, words } => {
            let sys = load(&group)?;
            let rows = words
                .iter()
                .map(|w| {
                    let word = sys.parse_word(w)?;
                    let reduced = sys.reduce(&word)?;
                    Ok(json!({ "word": w, "reduced": sys.format(&reduced), "length": reduced.len() }))
                })
                .collect::<Res<Vec<_>>>()?;
            Ok(Verdict::new("coxeter reduce", true)
                .stats(json!({ "rank": sys.rank(), "words": rows.len() }))
                .result(json!({ "words": rows })))
        }
    }
}

fn walls(ctx: &Ctx, args: &BallArgs, cap: usize) -> Res<Verdict> {
    let sys = load(&args.group)?;
    let ball = CayleyBall::new(&sys, args.radius, cap)?;
    ctx.write_dot(|| ball_dot(&ball, None))?;
    let mut certificate = Value::Null;
    let mut seen = vec![0usize; ball.edges().len()];
    for w in ball.walls() {
        w.edges.iter().for_each(|&e| seen[e] += 1);
    }
    if let Some(e) = seen.iter().position(|&k| k != 1) {
        certificate = json!({ "kind": "edge_not_in_one_wall", "edge": e, "walls": seen[e] });
    }
    let mut plusminus = 0usize;
    'law: for x in 0..ball.len() {
        for ed in ball.edges() {
            plusminus += 1;
            if !ball.plusminus_check(x, ed.from, ed.to)? {
                if certificate.is_null() {
                    certificate = json!({
                        "kind": "plusminus",
                        "x": sys.format(ball.element(x)),
                        "edge": [sys.format(ball.element(ed.from)), sys.format(ball.element(ed.to))],
                    });
                }
                break 'law;
            }
        }
    }
    let rows: Vec<Value> = ball
        .walls()
        .iter()
        .map(|w| json!({ "reflection": sys.format(&w.reflection), "edges": w.edges.len() }))
        .collect();
    let mut st = ball_stats(&ball);
    st["plusminus_checked"] = json!(plusminus);
    Ok(Verdict::new("coxeter walls", certificate.is_null())
        .certificate(certificate)
        .stats(st)
        .result(json!({ "walls": rows })))
}
