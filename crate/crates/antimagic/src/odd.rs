//! The connected labelling for odd k: the alternating Step-1 traversal
//! over F, plus the complete-graph shortcut.
//!
//! Step 1 walks paths that zig-zag between V_{2i-2} and V_{2i}, spending
//! the F range of the layer slice from both ends: an upward move (away
//! from the current V_{2i-2} vertex) places (M, M-1) on a predecessor /
//! successor edge pair through a shared degree-2 vertex, a downward move
//! places (m, m+1) the opposite way round. Moves strictly alternate,
//! starting upward; when the path cannot be extended from the vertex
//! just reached, it restarts at the smallest-id vertex of the needed
//! side that still has an open F-edge.

use crate::error::{Error, Result};
use crate::graph::{is_complete_k2, BiregularGraph, Side, VertexRef};
use crate::labelling::Labelling;
use crate::layering::{FSet, Layering};
use crate::steps::{run_pipeline, PipelineOptions, PipelineOutput, StartOverride, Step1Kind};

/// Label one layer's F set per the traversal contract. `ov` forces the
/// first upward and first downward moves (conflict repair only).
pub(crate) fn step1_label_f(
    g: &BiregularGraph,
    lay: &Layering,
    f: &FSet,
    lab: &mut Labelling,
    cur: &mut crate::steps::LayerCursor,
    ov: Option<&StartOverride>,
) -> Result<()> {
    if f.is_empty() {
        if ov.is_some() {
            return Err(Error::Internal("start override on an empty F".into()));
        }
        return Ok(());
    }
    // Degree-2 vertices whose F-edge pair is still unlabelled.
    let mut open = vec![false; g.y_count()];
    for &e in &f.edges {
        open[g.edge(e).1] = true;
    }
    let i = f.layer;
    let total_moves = f.len() / 2;
    let mut moves = 0;
    let mut up = true;
    let mut pos: Option<usize> = None;

    // The candidate through-vertex for a move from x: the smallest-id
    // open neighbour reachable over an F-edge on the requested side.
    let pick = |open: &[bool], x: usize, succ_side: bool| -> Option<usize> {
        g.x_edges(x)
            .iter()
            .filter(|&&e| f.contains(e) && lay.is_succ_side(g, e) == succ_side)
            .map(|&e| g.edge(e).1)
            .filter(|&y| open[y])
            .min()
    };
    let restart = |open: &[bool], level: usize, succ_side: bool| -> Option<usize> {
        lay.levels[level]
            .iter()
            .map(|v| v.index)
            .find(|&x| pick(open, x, succ_side).is_some())
    };

    if let Some(ov) = ov {
        for (e_first, e_second) in [ov.up, ov.down] {
            for e in [e_first, e_second] {
                if !f.contains(e) {
                    return Err(Error::Internal(format!("override edge {e} is not in F")));
                }
            }
            if g.edge(e_first).1 != g.edge(e_second).1 {
                return Err(Error::Internal(
                    "override pair does not share a degree-2 vertex".into(),
                ));
            }
        }
        // First upward move: (M, M-1) along pred edge then succ edge.
        let (e_pred, e_succ) = ov.up;
        if lay.is_succ_side(g, e_pred) || !lay.is_succ_side(g, e_succ) {
            return Err(Error::Internal("override up pair has wrong orientation".into()));
        }
        let (hi, hi1) = cur.take_high_pair()?;
        lab.assign(g, e_pred, hi);
        lab.assign(g, e_succ, hi1);
        open[g.edge(e_pred).1] = false;

        // First downward move: (m, m+1), starting from the vertex the
        // upward move just reached.
        let (e_succ2, e_pred2) = ov.down;
        if !lay.is_succ_side(g, e_succ2) || lay.is_succ_side(g, e_pred2) {
            return Err(Error::Internal("override down pair has wrong orientation".into()));
        }
        if g.edge(e_succ2).0 != g.edge(e_succ).0 {
            return Err(Error::Internal(
                "override down move does not start at the vertex reached by the up move".into(),
            ));
        }
        let (lo, lo1) = cur.take_low_pair()?;
        lab.assign(g, e_succ2, lo);
        lab.assign(g, e_pred2, lo1);
        open[g.edge(e_succ2).1] = false;

        pos = Some(g.edge(e_pred2).0);
        moves = 2;
    }

    while moves < total_moves {
        if up {
            // From V_{2i-2}: extend (Case 1a) or restart (Case 1b).
            let u = match pos.filter(|&u| pick(&open, u, false).is_some()) {
                Some(u) => u,
                None => restart(&open, 2 * i - 2, false).ok_or_else(|| {
                    Error::Internal(format!("layer {i}: no upward start available"))
                })?,
            };
            let y = pick(&open, u, false).expect("picked vertex has a candidate");
            let e_pred = lay.pred_edge_of_y(g, y);
            let e_succ = lay.succ_edge_of_y(g, y).expect("included vertex is type 1");
            let (hi, hi1) = cur.take_high_pair()?;
            lab.assign(g, e_pred, hi);
            lab.assign(g, e_succ, hi1);
            open[y] = false;
            pos = Some(g.edge(e_succ).0);
        } else {
            // From V_{2i}: extend (Case 2a) or restart (Case 2b).
            let w = match pos.filter(|&w| pick(&open, w, true).is_some()) {
                Some(w) => w,
                None => restart(&open, 2 * i, true).ok_or_else(|| {
                    Error::Internal(format!("layer {i}: no downward start available"))
                })?,
            };
            let y = pick(&open, w, true).expect("picked vertex has a candidate");
            let e_succ = lay.succ_edge_of_y(g, y).expect("included vertex is type 1");
            let e_pred = lay.pred_edge_of_y(g, y);
            let (lo, lo1) = cur.take_low_pair()?;
            lab.assign(g, e_succ, lo);
            lab.assign(g, e_pred, lo1);
            open[y] = false;
            pos = Some(g.edge(e_pred).0);
        }
        up = !up;
        moves += 1;
    }
    Ok(())
}

/// The explicit antimagic labelling of K_{k,2}: with the y-vertices in
/// ascending id order as v_1..v_k, the edge r v_i gets 2i + shift and
/// u v_i gets 2i - 1 + shift. Sums (shift 0): sigma(v_i) = 4i - 1,
/// sigma(r) = k(k+1), sigma(u) = k^2.
pub fn label_kk2(g: &BiregularGraph, root: VertexRef, shift: u64) -> Result<Labelling> {
    if !is_complete_k2(g)? {
        return Err(Error::Internal("complete-graph labelling on a non-K_{k,2} graph".into()));
    }
    if root.side != Side::X || root.index >= 2 {
        return Err(Error::RootNotDegreeK(root.to_string()));
    }
    let r = root.index;
    let u = 1 - r;
    let mut lab = Labelling::empty(g);
    for y in 0..g.y_count() {
        let i = y as u64 + 1;
        lab.assign(g, g.edge_between(r, y).expect("complete"), 2 * i + shift);
        lab.assign(g, g.edge_between(u, y).expect("complete"), 2 * i - 1 + shift);
    }
    Ok(lab)
}

/// Full pipeline output for a connected odd-k graph; `instrument`
/// additionally captures the Step-1 partial-sum snapshots.
pub fn label_connected_odd_full(
    g: &BiregularGraph,
    root: Option<VertexRef>,
    instrument: bool,
) -> Result<PipelineOutput> {
    if g.k() % 2 == 0 {
        return Err(Error::KEven(g.k()));
    }
    let root = root.unwrap_or(VertexRef::x(0));
    if is_complete_k2(g)? {
        let labelling = label_kk2(g, root, 0)?;
        let layering = crate::layering::build_layering(g, root)?;
        let types = crate::layering::classify_types(g, &layering);
        return Ok(PipelineOutput { labelling, layering, types, instr: None, even_tags: vec![] });
    }
    run_pipeline(
        g,
        root,
        Step1Kind::OddTraversal,
        PipelineOptions { instrument, ..Default::default() },
    )
}

pub fn label_connected_odd(g: &BiregularGraph, root: Option<VertexRef>) -> Result<Labelling> {
    Ok(label_connected_odd_full(g, root, false)?.labelling)
}
