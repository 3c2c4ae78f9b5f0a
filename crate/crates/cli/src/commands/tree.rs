use std::path::Path;

use cubeplex::complex::{is_cat0, is_flag, DEFAULT_MEDIAN_CAP};
use cubeplex::dot::{graph_dot, skeleton_dot};
use cubeplex::treespace::{
    cone_distance, count_binary, enumerate_topologies, format_cluster, is_petersen, link_of_origin, treespace_complex,
    validate_tree, TreeError, Validated,
};
use cubeplex::{Orthant, PhyloTree, RawTree};
use serde_json::{json, Value};

use super::complex::stats;
use super::TreeCmd;
use crate::{read_json, Ctx, Res, Verdict};

const DEFAULT_TOPOLOGY_CAP: usize = 1_000_000;
const DEFAULT_COMPLEX_CAP: usize = 1_000_000;
/// Largest n for which `tree count` also enumerates.
const ENUMERATE_CHECK_BOUND: usize = 8;

fn load(path: &Path, orthant: bool) -> Res<Result<Validated, TreeError>> {
    if orthant {
        let o: Orthant = read_json(path)?;
        Ok(PhyloTree::from_orthant(&o).map(|tree| Validated {
            tree,
            collapsed_edges: 0,
            ignored_leaf_lengths: 0,
        }))
    } else {
        let raw: RawTree = read_json(path)?;
        Ok(validate_tree(&raw))
    }
}

fn count_json(c: u128) -> Value {
    match u64::try_from(c) {
        Ok(small) => json!(small),
        Err(_) => json!(c.to_string()),
    }
}

pub(super) fn run(ctx: &Ctx, cmd: TreeCmd) -> Res<Verdict> {
    match cmd {
        TreeCmd::Validate { file, orthant } => {
            let v = match load(&file, orthant)? {
                Ok(v) => v,
                Err(e) => return Ok(Verdict::rejected("tree validate", &e)),
            };
            ctx.write_out(|| v.tree.to_json())?;
            let mut warnings = Vec::new();
            if v.ignored_leaf_lengths > 0 {
                warnings.push(format!("ignored {} leaf edge lengths", v.ignored_leaf_lengths));
            }
            if v.collapsed_edges > 0 {
                warnings.push(format!("collapsed {} zero-length edges", v.collapsed_edges));
            }
            Ok(Verdict::new("tree validate", true)
                .stats(json!({
                    "leaves": v.tree.n(),
                    "interior_edges": v.tree.interior_edge_count(),
                    "binary": v.tree.is_binary(),
                    "collapsed_edges": v.collapsed_edges,
                    "ignored_leaf_lengths": v.ignored_leaf_lengths,
                }))
                .result(json!({ "orthant": v.tree.to_orthant(), "warnings": warnings })))
        }
        TreeCmd::Count { n } => {
            let count = count_binary(n)?;
            let mut st = json!({ "n": n, "count": count_json(count) });
            let mut certificate = Value::Null;
            if n <= ENUMERATE_CHECK_BOUND {
                let found = enumerate_topologies(n, ctx.cap(DEFAULT_TOPOLOGY_CAP))?.len();
                st["enumerated"] = json!(found);
                if found as u128 != count {
                    certificate = json!({ "kind": "count_mismatch", "formula": count_json(count), "enumerated": found });
                }
            }
            Ok(Verdict::new("tree count", certificate.is_null())
                .certificate(certificate)
                .stats(st))
        }
        TreeCmd::Enumerate { n } => {
            let topologies = enumerate_topologies(n, ctx.cap(DEFAULT_TOPOLOGY_CAP))?;
            let rows: Vec<Vec<String>> = topologies
                .iter()
                .map(|t| t.iter().map(|&c| format_cluster(c, n)).collect())
                .collect();
            Ok(Verdict::new("tree enumerate", true)
                .stats(json!({ "n": n, "topologies": rows.len(), "count": count_json(count_binary(n)?) }))
                .result(json!({ "topologies": rows })))
        }
        TreeCmd::Link { n } => {
            let link = link_of_origin(n)?;
            ctx.write_dot(|| graph_dot("link", &link.graph, link.complex.labels()))?;
            let flag = is_flag(&link.complex);
            let mut certificate = json!({ "flag": flag });
            let mut ok = flag.flag;
            if n == 4 {
                let cert = is_petersen(&link.graph);
                ok &= cert.is_petersen;
                certificate["is_petersen"] = json!(cert);
            }
            Ok(Verdict::new("tree link", ok).certificate(certificate).stats(json!({
                "n": n,
                "vertices": link.graph.vertex_count(),
                "edges": link.graph.edge_count(),
                "dimension": link.complex.dimension(),
                "maximal_simplices": link.complex.maximal_simplices().len(),
            })))
        }
        TreeCmd::Complex { n, bound } => {
            let x = treespace_complex(n, bound, DEFAULT_COMPLEX_CAP)?;
            ctx.write_dot(|| skeleton_dot(&x, None))?;
            ctx.write_out(|| x.to_json())?;
            let v = is_cat0(&x, ctx.cap(DEFAULT_MEDIAN_CAP))?;
            let certificate = match &v.witness {
                None => Value::Null,
                Some(w) => json!(w),
            };
            Ok(Verdict::new("tree complex", v.cat0)
                .certificate(certificate)
                .stats(stats(&x))
                .result(json!({ "n": n, "locally_cat0": v.locally_cat0, "cat0": v.cat0 })))
        }
        TreeCmd::Dist { first, second, orthant } => {
            let a = load(&first, orthant)??.tree;
            let b = load(&second, orthant)??.tree;
            let d = cone_distance(&a, &b)?;
            Ok(Verdict::new("tree dist", true)
                .stats(json!({ "n": a.n() }))
                .result(json!({ "distance": d.value, "exact": d.exact })))
        }
    }
}
