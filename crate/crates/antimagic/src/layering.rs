//! Breadth-first layering from a root x-vertex, vertex type classification,
//! and construction of the per-layer F-sets that drive step 1 of the
//! labelling pipelines.
//!
//! Levels V_0, V_1, ..., V_l alternate sides (even levels on the x side).
//! Layer L_i collects the edges incident to the odd level V_{2i-1}; since
//! every y-vertex has degree 2, |L_i| = 2|V_{2i-1}|. Label intervals are
//! reserved deepest layer first: L_p owns [1, 2|V_{2p-1}|], then L_{p-1}
//! owns the next block, and so on up to L_1 which ends at m.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{BiregularGraph, Side, VertexRef};

#[derive(Debug, Clone)]
pub struct Layering {
    pub root: usize,
    /// V_0..V_l; each level sorted by vertex index.
    pub levels: Vec<Vec<VertexRef>>,
    /// L_1..L_p as edge indices, ascending; `layers[i-1]` is L_i.
    pub layers: Vec<Vec<usize>>,
    /// Canonical label interval (a_i, b_i) per layer, 1-based.
    pub intervals: Vec<(u64, u64)>,
    x_level: Vec<usize>,
    y_level: Vec<usize>,
}

impl Layering {
    /// Depth l: the largest distance from the root.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Number of layers p = floor((l-1)/2) + 1.
    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn level_of(&self, v: VertexRef) -> usize {
        match v.side {
            Side::X => self.x_level[v.index],
            Side::Y => self.y_level[v.index],
        }
    }

    /// X-vertices at even level 2i (empty when 2i exceeds the depth).
    pub fn even_level(&self, i: usize) -> &[VertexRef] {
        static EMPTY: [VertexRef; 0] = [];
        match self.levels.get(2 * i) {
            Some(level) => level,
            None => &EMPTY,
        }
    }

    /// Y-vertices at odd level 2i-1.
    pub fn odd_level(&self, i: usize) -> &[VertexRef] {
        &self.levels[2 * i - 1]
    }

    /// Layer index i of an edge, from its y endpoint's level.
    pub fn layer_of_edge(&self, g: &BiregularGraph, e: usize) -> usize {
        (self.y_level[g.edge(e).1] + 1) / 2
    }

    /// True when the x endpoint sits one level above the y endpoint, i.e.
    /// the edge runs V_{2i-1} -> V_{2i} (a successor-side edge).
    pub fn is_succ_side(&self, g: &BiregularGraph, e: usize) -> bool {
        let (x, y) = g.edge(e);
        self.x_level[x] == self.y_level[y] + 1
    }

    /// The edge from y up towards the root (to V_{2i-2}); for a type-2
    /// vertex this returns the one with the smaller x endpoint.
    pub fn pred_edge_of_y(&self, g: &BiregularGraph, y: usize) -> usize {
        let up = self.y_level[y] - 1;
        let mut best: Option<usize> = None;
        for &e in g.y_edges(y) {
            if self.x_level[g.edge(e).0] == up {
                match best {
                    Some(b) if g.edge(b).0 <= g.edge(e).0 => {}
                    _ => best = Some(e),
                }
            }
        }
        best.expect("every non-root-level y has a predecessor edge")
    }

    /// The edge from y down away from the root, if y has one (type 1).
    pub fn succ_edge_of_y(&self, g: &BiregularGraph, y: usize) -> Option<usize> {
        let down = self.y_level[y] + 1;
        g.y_edges(y)
            .iter()
            .copied()
            .find(|&e| self.x_level[g.edge(e).0] == down)
    }

    /// Edges from x up towards the root, ascending by y index.
    pub fn pred_edges_of_x(&self, g: &BiregularGraph, x: usize) -> Vec<usize> {
        let up = self.x_level[x].wrapping_sub(1);
        let mut es: Vec<usize> = g
            .x_edges(x)
            .iter()
            .copied()
            .filter(|&e| self.y_level[g.edge(e).1] == up)
            .collect();
        es.sort_by_key(|&e| g.edge(e).1);
        es
    }

    /// Edges from x down away from the root, ascending by y index.
    pub fn succ_edges_of_x(&self, g: &BiregularGraph, x: usize) -> Vec<usize> {
        let down = self.x_level[x] + 1;
        let mut es: Vec<usize> = g
            .x_edges(x)
            .iter()
            .copied()
            .filter(|&e| self.y_level[g.edge(e).1] == down)
            .collect();
        es.sort_by_key(|&e| g.edge(e).1);
        es
    }
}

/// BFS layering of a connected graph from `root` (must be x-side).
pub fn build_layering(g: &BiregularGraph, root: VertexRef) -> Result<Layering> {
    if root.side != Side::X || root.index >= g.x_count() {
        return Err(Error::RootNotDegreeK(root.to_string()));
    }
    let mut x_level = vec![usize::MAX; g.x_count()];
    let mut y_level = vec![usize::MAX; g.y_count()];
    x_level[root.index] = 0;
    let mut queue = VecDeque::from([VertexRef::x(root.index)]);
    while let Some(v) = queue.pop_front() {
        match v.side {
            Side::X => {
                let next = x_level[v.index] + 1;
                for &e in g.x_edges(v.index) {
                    let y = g.edge(e).1;
                    if y_level[y] == usize::MAX {
                        y_level[y] = next;
                        queue.push_back(VertexRef::y(y));
                    }
                }
            }
            Side::Y => {
                let next = y_level[v.index] + 1;
                for &e in g.y_edges(v.index) {
                    let x = g.edge(e).0;
                    if x_level[x] == usize::MAX {
                        x_level[x] = next;
                        queue.push_back(VertexRef::x(x));
                    }
                }
            }
        }
    }
    if x_level.contains(&usize::MAX) || y_level.contains(&usize::MAX) {
        return Err(Error::NotConnected);
    }

    let depth = x_level.iter().chain(y_level.iter()).copied().max().unwrap_or(0);
    let mut levels = vec![Vec::new(); depth + 1];
    for (x, &lv) in x_level.iter().enumerate() {
        levels[lv].push(VertexRef::x(x));
    }
    for (y, &lv) in y_level.iter().enumerate() {
        levels[lv].push(VertexRef::y(y));
    }
    for level in &mut levels {
        level.sort_by_key(|v| v.index);
    }

    let p = (depth - 1) / 2 + 1;
    let mut layers = vec![Vec::new(); p];
    for (e, &(_, y)) in g.edges().iter().enumerate() {
        layers[(y_level[y] + 1) / 2 - 1].push(e);
    }
    for layer in &mut layers {
        layer.sort_unstable();
    }

    // Reserve intervals deepest first; a_i is always odd, b_i always even.
    let mut intervals = vec![(0u64, 0u64); p];
    let mut next = 1u64;
    for i in (0..p).rev() {
        let width = layers[i].len() as u64;
        intervals[i] = (next, next + width - 1);
        next += width;
    }
    debug_assert_eq!(next, g.m() as u64 + 1);

    Ok(Layering { root: root.index, levels, layers, intervals, x_level, y_level })
}

/// Vertex types relative to a layering. An x-vertex at level 2i has type
/// j when it has j predecessor edges (and k-j successor edges); a
/// y-vertex has type 1 (one predecessor, one successor) or type 2 (both
/// edges towards the root side).
#[derive(Debug, Clone)]
pub struct TypeTable {
    /// Type of each x-vertex; the root gets 0.
    pub x_type: Vec<usize>,
    /// Type of each y-vertex: 1 or 2.
    pub y_type: Vec<usize>,
    /// counts[i][j] = number of type-j x-vertices at level 2i.
    pub counts: Vec<Vec<usize>>,
}

pub fn classify_types(g: &BiregularGraph, lay: &Layering) -> TypeTable {
    let mut x_type = vec![0usize; g.x_count()];
    let mut y_type = vec![0usize; g.y_count()];
    for x in 0..g.x_count() {
        if x != lay.root {
            x_type[x] = lay.pred_edges_of_x(g, x).len();
        }
    }
    for y in 0..g.y_count() {
        let up = lay.level_of(VertexRef::y(y)) - 1;
        y_type[y] = g
            .y_edges(y)
            .iter()
            .filter(|&&e| lay.level_of(VertexRef::x(g.edge(e).0)) == up)
            .count();
    }
    let mut counts = vec![vec![0usize; g.k() + 1]; lay.depth() / 2 + 1];
    for (x, &t) in x_type.iter().enumerate() {
        if x != lay.root {
            counts[lay.level_of(VertexRef::x(x)) / 2][t] += 1;
        }
    }
    TypeTable { x_type, y_type, counts }
}

impl TypeTable {
    /// t_i^j: type-j x-vertices at level 2i.
    pub fn count(&self, i: usize, j: usize) -> usize {
        self.counts.get(i).map_or(0, |row| row[j])
    }
}

/// Pinning constraints for F-set construction, used by the repair path.
#[derive(Debug, Clone, Default)]
pub struct FPins {
    pub must_include: Vec<usize>,
    pub must_exclude: Vec<usize>,
}

/// The step-1 edge set of one layer. Every type-1 y-vertex contributes
/// both edges or neither; every V_{2i} vertex of type j has exactly j-1
/// of its predecessor edges included, the last one being its excluded
/// edge; type-2 y-vertices contribute nothing.
#[derive(Debug, Clone)]
pub struct FSet {
    pub layer: usize,
    /// Member edges, ascending.
    pub edges: Vec<usize>,
    /// (w, excluded edge) per V_{2i} vertex, ascending by w.
    pub excluded: Vec<(usize, usize)>,
    in_f: Vec<bool>,
}

impl FSet {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.in_f[e]
    }

    pub fn excluded_edge_of(&self, w: usize) -> Option<usize> {
        self.excluded
            .iter()
            .find(|&&(v, _)| v == w)
            .map(|&(_, e)| e)
    }
}

/// Build F for layer i. Unpinned exclusion choices default to the
/// predecessor edge with the smallest y index.
pub fn build_f(
    g: &BiregularGraph,
    lay: &Layering,
    types: &TypeTable,
    i: usize,
    pins: Option<&FPins>,
) -> Result<FSet> {
    // Normalise pins into per-w "must exclude e" / "must not exclude e"
    // requirements on successor-side edges.
    let mut force_excl: Vec<(usize, usize)> = Vec::new();
    let mut forbid_excl: Vec<(usize, usize)> = Vec::new();
    if let Some(pins) = pins {
        for (&e, forbid) in pins
            .must_include
            .iter()
            .map(|e| (e, true))
            .chain(pins.must_exclude.iter().map(|e| (e, false)))
        {
            if lay.layer_of_edge(g, e) != i {
                return Err(Error::PinConflict(format!(
                    "pinned edge {e} is not in layer {i}"
                )));
            }
            let succ = if lay.is_succ_side(g, e) {
                e
            } else {
                // Predecessor-side pin: membership is decided by the paired
                // successor edge of the same y-vertex.
                let y = g.edge(e).1;
                match lay.succ_edge_of_y(g, y) {
                    Some(s) => s,
                    None if forbid => {
                        return Err(Error::PinConflict(format!(
                            "edge {e} touches a type-2 vertex y{y} and can never be in F"
                        )))
                    }
                    None => continue, // type-2 edges are excluded by construction
                }
            };
            let w = g.edge(succ).0;
            if forbid {
                forbid_excl.push((w, succ));
            } else {
                force_excl.push((w, succ));
            }
        }
    }

    let mut edges = Vec::new();
    let mut excluded = Vec::new();
    let mut in_f = vec![false; g.m()];
    for v in lay.even_level(i) {
        let w = v.index;
        let preds = lay.pred_edges_of_x(g, w);
        let forced: Vec<usize> = force_excl.iter().filter(|&&(v, _)| v == w).map(|&(_, e)| e).collect();
        let excl = match forced.as_slice() {
            [] => preds
                .iter()
                .copied()
                .find(|&e| !forbid_excl.contains(&(w, e)))
                .ok_or_else(|| {
                    Error::PinConflict(format!("every predecessor edge of x{w} is pinned into F"))
                })?,
            [e] => {
                if forbid_excl.contains(&(w, *e)) {
                    return Err(Error::PinConflict(format!(
                        "edge {e} of x{w} is pinned both into and out of F"
                    )));
                }
                *e
            }
            _ => {
                return Err(Error::PinConflict(format!(
                    "x{w} has more than one predecessor edge pinned out of F"
                )))
            }
        };
        excluded.push((w, excl));
        for e in preds {
            if e != excl {
                let partner = lay.pred_edge_of_y(g, g.edge(e).1);
                in_f[e] = true;
                in_f[partner] = true;
                edges.push(e);
                edges.push(partner);
            }
        }
    }
    edges.sort_unstable();

    debug_assert!(edges.len() % 2 == 0);
    debug_assert!(lay
        .odd_level(i)
        .iter()
        .all(|v| g.y_edges(v.index).iter().filter(|&&e| in_f[e]).count() % 2 == 0));
    debug_assert!(lay.even_level(i).iter().all(|v| {
        lay.pred_edges_of_x(g, v.index).iter().filter(|&&e| in_f[e]).count()
            == types.x_type[v.index] - 1
    }));
    Ok(FSet { layer: i, edges, excluded, in_f })
}
