//! Graphviz export. Degree-k vertices render as boxes, degree-2
//! vertices as circles; a labelling adds edge label attributes, and a
//! total labelling additionally annotates every vertex with its sum.

use std::fmt::Write as _;

use crate::graph::BiregularGraph;
use crate::labelling::Labelling;

pub fn export_dot(g: &BiregularGraph, lab: Option<&Labelling>) -> String {
    let sums = lab.filter(|l| l.is_total());
    let mut out = String::from("graph biregular {\n");
    for x in 0..g.x_count() {
        match sums {
            Some(l) => {
                let _ = writeln!(out, "  x{x} [shape=box, label=\"x{x} sum={}\"];", l.x_partial_sum(x));
            }
            None => {
                let _ = writeln!(out, "  x{x} [shape=box];");
            }
        }
    }
    for y in 0..g.y_count() {
        match sums {
            Some(l) => {
                let _ = writeln!(out, "  y{y} [shape=circle, label=\"y{y} sum={}\"];", l.y_partial_sum(y));
            }
            None => {
                let _ = writeln!(out, "  y{y} [shape=circle];");
            }
        }
    }
    for (e, &(x, y)) in g.edges().iter().enumerate() {
        match lab.and_then(|l| l.get(e)) {
            Some(label) => {
                let _ = writeln!(out, "  x{x} -- y{y} [label=\"{label}\"];");
            }
            None => {
                let _ = writeln!(out, "  x{x} -- y{y};");
            }
        }
    }
    out.push_str("}\n");
    out
}
