//! Graphviz output for 1-skeletons, crossing graphs, Cayley balls and links.

use std::fmt::Write;

use crate::complex::{CubeComplex, Hyperplanes};
use crate::coxeter::{CayleyBall, Root};
use crate::graph::Graph;
use crate::label::Label;

fn color(i: usize, k: usize) -> String {
    format!("\"{:.3} 0.85 0.75\"", i as f64 / k.max(1) as f64)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// An undirected graph with the given vertex labels.
pub fn graph_dot(name: &str, g: &Graph, labels: &[Label]) -> String {
    let mut out = format!("graph {} {{\n", quote(name));
    for (v, l) in labels.iter().enumerate().take(g.vertex_count()) {
        writeln!(out, "  {v} [label={}];", quote(&l.to_string())).unwrap();
    }
    for (a, b) in g.edges() {
        writeln!(out, "  {a} -- {b};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// The 1-skeleton; with hyperplanes, each edge is coloured by its class.
pub fn skeleton_dot(x: &CubeComplex, hyperplanes: Option<&Hyperplanes>) -> String {
    let mut out = String::from("graph skeleton {\n");
    for (v, l) in x.labels().iter().enumerate() {
        writeln!(out, "  {v} [label={}];", quote(&l.to_string())).unwrap();
    }
    for (id, c) in x.cubes_of_dim(1) {
        match hyperplanes {
            Some(hs) => {
                let h = hs.hyperplane_of_edge(id.index);
                writeln!(out, "  {} -- {} [color={}, label=\"h{h}\"];", c[0], c[1], color(h, hs.len())).unwrap();
            }
            None => writeln!(out, "  {} -- {};", c[0], c[1]).unwrap(),
        }
    }
    out.push_str("}\n");
    out
}

/// Hyperplanes as vertices, one colour each; edges join crossing pairs.
pub fn crossing_dot(hs: &Hyperplanes) -> String {
    let mut out = String::from("graph crossing {\n");
    for h in 0..hs.len() {
        writeln!(out, "  {h} [label=\"h{h}\", style=filled, fillcolor={}];", color(h, hs.len())).unwrap();
    }
    for (a, b) in hs.crossing_graph().edges() {
        writeln!(out, "  {a} -- {b};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Ball edges coloured by wall; with a root, its elements are filled.
pub fn ball_dot(ball: &CayleyBall, root: Option<&Root>) -> String {
    let sys = ball.system();
    let mut out = String::from("graph ball {\n");
    for g in 0..ball.len() {
        let fill = match root {
            Some(r) if r.contains(g) => ", style=filled, fillcolor=gray70",
            Some(_) => ", style=filled, fillcolor=white",
            None => "",
        };
        writeln!(out, "  {g} [label={}{fill}];", quote(&sys.format(ball.element(g)))).unwrap();
    }
    let k = ball.walls().len();
    for (e, edge) in ball.edges().iter().enumerate() {
        let w = ball.wall_of_edge(e);
        writeln!(
            out,
            "  {} -- {} [color={}, label=\"{}\"];",
            edge.from,
            edge.to,
            color(w, k),
            edge.generator as usize + 1
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
