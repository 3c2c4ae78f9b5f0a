use std::path::{Path, PathBuf};

use cubeplex::complex::{is_cat0, CubeError, DEFAULT_MEDIAN_CAP};
use cubeplex::dot::skeleton_dot;
use cubeplex::pocset::{dual_complex, maximal_cubes, seed_vertex, DualComplex, PocsetError};
use cubeplex::{HalfspaceSystem, Orientation, RawPocset};
use serde_json::{json, Value};

use super::complex::stats;
use super::PocsetCmd;
use crate::{read_json, Ctx, InputError, Res, Verdict};

pub(crate) const DEFAULT_DUAL_CAP: usize = 100_000;

fn load(path: &Path) -> Res<Result<HalfspaceSystem, PocsetError>> {
    let raw: RawPocset = read_json(path)?;
    Ok(HalfspaceSystem::build(&raw))
}

fn system_stats(s: &HalfspaceSystem) -> Value {
    let m = s.hyperplane_count();
    let transversal = (0..m).map(|i| s.transversal_to(i).ones().filter(|&j| j > i).count()).sum::<usize>();
    json!({ "hyperplanes": m, "halfspaces": s.halfspace_count(), "transversal_pairs": transversal })
}

fn parse_seed(s: &HalfspaceSystem, bits: &str) -> Res<Orientation> {
    let m = s.hyperplane_count();
    if bits.len() != m || !bits.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(InputError::new(
            "BadOrientation",
            format!("expected {m} bits of 0/1, got {bits:?}"),
        ));
    }
    Ok(Orientation::from_starred(m, bits.bytes().enumerate().filter(|(_, b)| *b == b'1').map(|(i, _)| i)))
}

fn sidecar(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".orientations.json");
    PathBuf::from(name)
}

pub(super) fn run(ctx: &Ctx, cmd: PocsetCmd) -> Res<Verdict> {
    match cmd {
        PocsetCmd::Validate { file } => match load(&file)? {
            Ok(s) => Ok(Verdict::new("pocset validate", true).stats(system_stats(&s))),
            Err(e) => Ok(Verdict::rejected("pocset validate", &e)),
        },
        PocsetCmd::Dual { file, seed_orientation } => {
            let s = load(&file)??;
            let seed = match seed_orientation {
                Some(bits) => parse_seed(&s, &bits)?,
                None => seed_vertex(&s)?,
            };
            let dual = dual_complex(&s, &seed, ctx.cap(DEFAULT_DUAL_CAP))?;
            emit_dual(ctx, &s, &dual)?;
            let x = &dual.complex;
            // The median test is cubic in the vertex count; larger duals skip it.
            let (ok, cat0, certificate) = match is_cat0(x, DEFAULT_MEDIAN_CAP) {
                Ok(v) if v.cat0 => (true, json!(true), Value::Null),
                Ok(v) => (false, json!(false), json!({ "kind": "dual_not_cat0", "witness": v.witness })),
                Err(e @ CubeError::Disconnected) => {
                    (false, json!(false), json!({ "kind": "dual_not_cat0", "message": e.to_string() }))
                }
                Err(e @ CubeError::CapExceeded { .. }) => (true, Value::Null, json!({ "skipped": e.to_string() })),
                Err(e) => return Err(e.into()),
            };
            let mut st = stats(x);
            st["system"] = system_stats(&s);
            Ok(Verdict::new("pocset dual", ok)
                .certificate(certificate)
                .stats(st)
                .result(json!({ "seed": seed.bits_relative_to(&Orientation::unstarred(s.hyperplane_count())), "cat0": cat0 })))
        }
        PocsetCmd::Cubes { file } => {
            let s = load(&file)??;
            let seed = seed_vertex(&s)?;
            let dual = dual_complex(&s, &seed, ctx.cap(DEFAULT_DUAL_CAP))?;
            emit_dual(ctx, &s, &dual)?;
            let mc = maximal_cubes(&s, &dual);
            let name = |i: usize| s.label(2 * i).to_string();
            let cubes: Vec<Value> = mc
                .cubes
                .iter()
                .map(|c| {
                    json!({
                        "dim": c.cube.dim,
                        "corners": dual.complex.corner_labels(c.cube).iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                        "family": c.family.iter().map(|&i| name(i)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let families: Vec<Vec<String>> = mc.families.iter().map(|f| f.iter().map(|&i| name(i)).collect()).collect();
            let certificate = if mc.bijection {
                Value::Null
            } else {
                json!({ "kind": "cube_family_mismatch", "cubes": cubes.len(), "families": families.len() })
            };
            let mut st = stats(&dual.complex);
            st["maximal_cube_dimensions"] = json!(mc.dimensions());
            Ok(Verdict::new("pocset cubes", mc.bijection)
                .certificate(certificate)
                .stats(st)
                .result(json!({ "maximal_cubes": cubes, "maximal_families": families })))
        }
    }
}

fn emit_dual(ctx: &Ctx, s: &HalfspaceSystem, dual: &DualComplex) -> Res<()> {
    ctx.write_dot(|| skeleton_dot(&dual.complex, None))?;
    ctx.write_out(|| dual.complex.to_json())?;
    if let Some(out) = &ctx.global.out {
        let table = serde_json::to_string(&dual.orientation_table(s))?;
        crate::write_file(&sidecar(out), &table)?;
    }
    Ok(())
}
