//! Edge labellings and the `.lbl` exchange format.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::BiregularGraph;

/// A (possibly partial) assignment of labels to edges. Tracks per-vertex
/// partial sums and per-x-vertex labelled-edge counts as labels arrive,
/// so step ordering decisions can read them in O(1).
#[derive(Debug, Clone)]
pub struct Labelling {
    labels: Vec<Option<u64>>,
    x_sum: Vec<u64>,
    y_sum: Vec<u64>,
    x_labelled: Vec<usize>,
    watch_count: Option<usize>,
    watch_log: Vec<(usize, u64)>,
}

impl Labelling {
    pub fn empty(g: &BiregularGraph) -> Self {
        Labelling {
            labels: vec![None; g.m()],
            x_sum: vec![0; g.x_count()],
            y_sum: vec![0; g.y_count()],
            x_labelled: vec![0; g.x_count()],
            watch_count: None,
            watch_log: Vec::new(),
        }
    }

    pub fn assign(&mut self, g: &BiregularGraph, e: usize, label: u64) {
        assert!(
            self.labels[e].is_none(),
            "edge {e} already labelled {:?}",
            self.labels[e]
        );
        self.labels[e] = Some(label);
        let (x, y) = g.edge(e);
        self.x_sum[x] += label;
        self.y_sum[y] += label;
        self.x_labelled[x] += 1;
        if self.watch_count == Some(self.x_labelled[x]) {
            self.watch_log.push((x, self.x_sum[x]));
        }
    }

    /// Record (vertex, partial sum) whenever an x-vertex reaches `count`
    /// labelled edges; read back via `watch_log`.
    pub fn watch_kth(&mut self, count: usize) {
        self.watch_count = Some(count);
    }

    pub fn watch_log(&self) -> &[(usize, u64)] {
        &self.watch_log
    }

    pub fn get(&self, e: usize) -> Option<u64> {
        self.labels[e]
    }

    pub fn is_total(&self) -> bool {
        self.labels.iter().all(|l| l.is_some())
    }

    pub fn assigned(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    /// Partial sum at an x-vertex over the labels assigned so far.
    pub fn x_partial_sum(&self, x: usize) -> u64 {
        self.x_sum[x]
    }

    pub fn y_partial_sum(&self, y: usize) -> u64 {
        self.y_sum[y]
    }

    pub fn x_labelled_count(&self, x: usize) -> usize {
        self.x_labelled[x]
    }

    pub fn labels(&self) -> &[Option<u64>] {
        &self.labels
    }

    /// Edge carrying `label`, if any.
    pub fn edge_with_label(&self, label: u64) -> Option<usize> {
        self.labels.iter().position(|&l| l == Some(label))
    }

    /// Swap the labels of two already-labelled edges.
    pub fn swap(&mut self, g: &BiregularGraph, e1: usize, e2: usize) {
        let l1 = self.labels[e1].expect("swap of unlabelled edge");
        let l2 = self.labels[e2].expect("swap of unlabelled edge");
        for (e, old, new) in [(e1, l1, l2), (e2, l2, l1)] {
            let (x, y) = g.edge(e);
            self.labels[e] = Some(new);
            self.x_sum[x] = self.x_sum[x] + new - old;
            self.y_sum[y] = self.y_sum[y] + new - old;
        }
    }

    /// Replace the label of an already-labelled edge. Does not rewind
    /// the watch log: callers doing mid-run relabels must not instrument.
    pub fn reassign(&mut self, g: &BiregularGraph, e: usize, label: u64) {
        let old = self.labels[e].expect("reassign of unlabelled edge");
        let (x, y) = g.edge(e);
        self.labels[e] = Some(label);
        self.x_sum[x] = self.x_sum[x] + label - old;
        self.y_sum[y] = self.y_sum[y] + label - old;
    }
}

/// Serialise a total labelling: header `lbl m`, then one `x y label`
/// line per edge in edge order.
pub fn serialize_labelling(g: &BiregularGraph, lab: &Labelling) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "lbl {}", g.m());
    for (e, &(x, y)) in g.edges().iter().enumerate() {
        let label = lab.get(e).expect("serialize of partial labelling");
        let _ = writeln!(out, "{x} {y} {label}");
    }
    out
}

/// Parse a `.lbl` file against a known graph. Structural problems (bad
/// header, unknown edge, missing or repeated edge) are errors; label
/// values are taken as-is so that non-bijective labellings can still be
/// loaded and reported by the checks.
pub fn parse_labelling(g: &BiregularGraph, input: &str) -> Result<Labelling> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, header) = lines.next().ok_or(Error::HeaderMissing)?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let m = match fields.as_slice() {
        ["lbl", m] => m.parse::<usize>().map_err(|_| Error::MalformedLine {
            line,
            msg: format!("bad edge count {m:?}"),
        })?,
        _ => return Err(Error::HeaderMissing),
    };
    if m != g.m() {
        return Err(Error::LabellingMismatch(format!(
            "labelling declares {m} edges, graph has {}",
            g.m()
        )));
    }

    let mut lab = Labelling::empty(g);
    for (line, text) in lines {
        let fields: Vec<&str> = text.split_whitespace().collect();
        let [xs, ys, ls] = fields.as_slice() else {
            return Err(Error::MalformedLine {
                line,
                msg: format!("expected `x y label`, got {text:?}"),
            });
        };
        let parse = |s: &str| {
            s.parse::<u64>().map_err(|_| Error::MalformedLine {
                line,
                msg: format!("bad number {s:?}"),
            })
        };
        let (x, y, label) = (parse(xs)? as usize, parse(ys)? as usize, parse(ls)?);
        let e = g.edge_between(x, y).ok_or_else(|| {
            Error::LabellingMismatch(format!("edge ({x}, {y}) is not in the graph"))
        })?;
        if lab.get(e).is_some() {
            return Err(Error::LabellingMismatch(format!(
                "edge ({x}, {y}) labelled twice"
            )));
        }
        lab.assign(g, e, label);
    }
    if !lab.is_total() {
        return Err(Error::LabellingMismatch(format!(
            "{} of {} edges labelled",
            lab.assigned(),
            g.m()
        )));
    }
    Ok(lab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gen_kk2;

    fn labelled_k32() -> (BiregularGraph, Labelling) {
        let g = gen_kk2(3).unwrap();
        let mut lab = Labelling::empty(&g);
        for (e, label) in (0..6).zip(1..=6) {
            lab.assign(&g, e, label);
        }
        (g, lab)
    }

    #[test]
    fn partial_sums_track_assignments() {
        let g = gen_kk2(3).unwrap();
        let mut lab = Labelling::empty(&g);
        lab.assign(&g, 0, 5);
        lab.assign(&g, 1, 2);
        assert_eq!(lab.x_partial_sum(0), 7);
        assert_eq!(lab.x_labelled_count(0), 2);
        assert_eq!(lab.y_partial_sum(g.edge(0).1), 5);
        assert!(!lab.is_total());
    }

    #[test]
    fn swap_updates_sums() {
        let (g, mut lab) = labelled_k32();
        let before_x0 = lab.x_partial_sum(0);
        lab.swap(&g, 0, 5);
        assert_eq!(lab.get(0), Some(6));
        assert_eq!(lab.get(5), Some(1));
        assert_eq!(lab.x_partial_sum(0), before_x0 + 5);
    }

    #[test]
    fn round_trip() {
        let (g, lab) = labelled_k32();
        let text = serialize_labelling(&g, &lab);
        let back = parse_labelling(&g, &text).unwrap();
        assert_eq!(lab.labels(), back.labels());
    }

    #[test]
    fn parse_rejects_structural_problems() {
        let (g, lab) = labelled_k32();
        let good = serialize_labelling(&g, &lab);

        assert!(matches!(parse_labelling(&g, ""), Err(Error::HeaderMissing)));
        assert!(matches!(
            parse_labelling(&g, &good.replace("lbl 6", "lbl 8")),
            Err(Error::LabellingMismatch(_))
        ));
        let truncated: String = good.lines().take(4).collect::<Vec<_>>().join("\n");
        assert!(matches!(
            parse_labelling(&g, &truncated),
            Err(Error::LabellingMismatch(_))
        ));
        assert!(matches!(
            parse_labelling(&g, "lbl 6\n0 9 1\n"),
            Err(Error::LabellingMismatch(_))
        ));
    }

    #[test]
    fn parse_keeps_bad_label_values() {
        let (g, lab) = labelled_k32();
        let text = serialize_labelling(&g, &lab).replace("0 0 1", "0 0 6");
        let back = parse_labelling(&g, &text).unwrap();
        assert_eq!(back.get(0), Some(6));
    }
}
