//! (k,2)-biregular bipartite graphs: every x-side vertex has degree k,
//! every y-side vertex has degree 2. Covers construction, validation,
//! the `.bgl` text format, and component decomposition.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Smallest admissible x-side degree.
pub const MIN_K: usize = 3;

/// Side of the bipartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    X,
    Y,
}

/// A vertex, addressed by side and per-side index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexRef {
    pub side: Side,
    pub index: usize,
}

impl VertexRef {
    pub fn x(index: usize) -> Self {
        VertexRef { side: Side::X, index }
    }

    pub fn y(index: usize) -> Self {
        VertexRef { side: Side::Y, index }
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::X => write!(f, "x{}", self.index),
            Side::Y => write!(f, "y{}", self.index),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationCode {
    DupEdge,
    BadDegreeX,
    BadDegreeY,
    CountMismatch,
    KTooSmall,
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationCode::DupEdge => "DUP_EDGE",
            ViolationCode::BadDegreeX => "BAD_DEGREE_X",
            ViolationCode::BadDegreeY => "BAD_DEGREE_Y",
            ViolationCode::CountMismatch => "COUNT_MISMATCH",
            ViolationCode::KTooSmall => "K_TOO_SMALL",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub code: ViolationCode,
    pub message: String,
}

/// Outcome of structural validation; empty means the data describes a
/// well-formed (k,2)-biregular graph.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_code(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{} {}", v.code, v.message)?;
        }
        Ok(())
    }
}

/// Check a candidate (k, xCount, yCount, edges) quadruple against the
/// biregularity invariants without building a graph.
pub fn validate(k: usize, x_count: usize, y_count: usize, edges: &[(usize, usize)]) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut push = |code, message: String| report.violations.push(Violation { code, message });

    if k < MIN_K {
        push(ViolationCode::KTooSmall, format!("k = {k}, minimum is {MIN_K}"));
    }
    if k * x_count != 2 * y_count {
        push(
            ViolationCode::CountMismatch,
            format!("k*xCount = {} but 2*yCount = {}", k * x_count, 2 * y_count),
        );
    }
    if edges.len() != k * x_count {
        push(
            ViolationCode::CountMismatch,
            format!("{} edge(s) given, k*xCount = {}", edges.len(), k * x_count),
        );
    }

    let mut deg_x = vec![0usize; x_count];
    let mut deg_y = vec![0usize; y_count];
    let mut seen = std::collections::HashSet::new();
    for &(x, y) in edges {
        if x >= x_count || y >= y_count {
            // Endpoint outside the declared vertex counts.
            push(
                ViolationCode::CountMismatch,
                format!("edge (x{x}, y{y}) is outside the declared vertex counts"),
            );
            continue;
        }
        if !seen.insert((x, y)) {
            push(ViolationCode::DupEdge, format!("edge (x{x}, y{y}) appears more than once"));
            continue;
        }
        deg_x[x] += 1;
        deg_y[y] += 1;
    }
    for (x, &d) in deg_x.iter().enumerate() {
        if d != k {
            push(ViolationCode::BadDegreeX, format!("x{x} has degree {d}, expected {k}"));
        }
    }
    for (y, &d) in deg_y.iter().enumerate() {
        if d != 2 {
            push(ViolationCode::BadDegreeY, format!("y{y} has degree {d}, expected 2"));
        }
    }
    report
}

/// A validated (k,2)-biregular bipartite graph. Edge order is preserved
/// from construction; adjacency lists hold edge indices in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiregularGraph {
    k: usize,
    x_count: usize,
    y_count: usize,
    edges: Vec<(usize, usize)>,
    x_adj: Vec<Vec<usize>>,
    y_adj: Vec<Vec<usize>>,
}

impl BiregularGraph {
    pub fn new(k: usize, x_count: usize, y_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let report = validate(k, x_count, y_count, &edges);
        if !report.ok() {
            return Err(Error::ValidationFailed(report));
        }
        let mut x_adj = vec![Vec::with_capacity(k); x_count];
        let mut y_adj = vec![Vec::with_capacity(2); y_count];
        for (e, &(x, y)) in edges.iter().enumerate() {
            x_adj[x].push(e);
            y_adj[y].push(e);
        }
        Ok(BiregularGraph { k, x_count, y_count, edges, x_adj, y_adj })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn x_count(&self) -> usize {
        self.x_count
    }

    pub fn y_count(&self) -> usize {
        self.y_count
    }

    /// Edge count; always k*xCount = 2*yCount.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.x_count + self.y_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Edge indices incident to x-vertex `x`, in edge insertion order.
    pub fn x_edges(&self, x: usize) -> &[usize] {
        &self.x_adj[x]
    }

    /// Edge indices incident to y-vertex `y` (always two of them).
    pub fn y_edges(&self, y: usize) -> &[usize] {
        &self.y_adj[y]
    }

    pub fn degree(&self, v: VertexRef) -> usize {
        match v.side {
            Side::X => self.x_adj[v.index].len(),
            Side::Y => self.y_adj[v.index].len(),
        }
    }

    /// The edge joining `x` and `y`, if present.
    pub fn edge_between(&self, x: usize, y: usize) -> Option<usize> {
        self.x_adj[x].iter().copied().find(|&e| self.edges[e].1 == y)
    }

    /// Given an edge and its y endpoint, return the x endpoint on the other
    /// side of the y vertex (the neighbour through `y` other than `x`).
    pub fn other_x_neighbour(&self, y: usize, x: usize) -> usize {
        let es = &self.y_adj[y];
        let e = if self.edges[es[0]].0 == x { es[1] } else { es[0] };
        self.edges[e].0
    }
}

/// True when every vertex is reachable from x0.
pub(crate) fn is_connected(g: &BiregularGraph) -> bool {
    if g.x_count() == 0 {
        return true;
    }
    let (seen_x, seen_y) = reach_from(g, 0);
    seen_x.iter().all(|&s| s) && seen_y.iter().all(|&s| s)
}

fn reach_from(g: &BiregularGraph, start_x: usize) -> (Vec<bool>, Vec<bool>) {
    let mut seen_x = vec![false; g.x_count()];
    let mut seen_y = vec![false; g.y_count()];
    let mut queue = VecDeque::new();
    seen_x[start_x] = true;
    queue.push_back(VertexRef::x(start_x));
    while let Some(v) = queue.pop_front() {
        match v.side {
            Side::X => {
                for &e in g.x_edges(v.index) {
                    let y = g.edge(e).1;
                    if !seen_y[y] {
                        seen_y[y] = true;
                        queue.push_back(VertexRef::y(y));
                    }
                }
            }
            Side::Y => {
                for &e in g.y_edges(v.index) {
                    let x = g.edge(e).0;
                    if !seen_x[x] {
                        seen_x[x] = true;
                        queue.push_back(VertexRef::x(x));
                    }
                }
            }
        }
    }
    (seen_x, seen_y)
}

/// One connected component, re-indexed to local contiguous ids. Local ids
/// follow ascending global id, so local x0 is the smallest global x-id.
#[derive(Debug, Clone)]
pub struct Component {
    pub graph: BiregularGraph,
    /// Local x index -> global x index.
    pub x_ids: Vec<usize>,
    /// Local y index -> global y index.
    pub y_ids: Vec<usize>,
    /// Local edge index -> global edge index.
    pub edge_ids: Vec<usize>,
}

impl Component {
    pub fn vertex_count(&self) -> usize {
        self.x_ids.len() + self.y_ids.len()
    }
}

/// Split `g` into connected components, sorted by ascending vertex count
/// with ties broken by the smallest global x-id they contain.
pub fn connected_components(g: &BiregularGraph) -> Vec<Component> {
    let mut comp_of_x = vec![usize::MAX; g.x_count()];
    let mut count = 0;
    for x in 0..g.x_count() {
        if comp_of_x[x] != usize::MAX {
            continue;
        }
        let (seen_x, _) = reach_from(g, x);
        for (i, &s) in seen_x.iter().enumerate() {
            if s {
                comp_of_x[i] = count;
            }
        }
        count += 1;
    }

    let mut x_sets: Vec<Vec<usize>> = vec![Vec::new(); count];
    for (x, &c) in comp_of_x.iter().enumerate() {
        x_sets[c].push(x);
    }

    let mut components: Vec<Component> = x_sets
        .into_iter()
        .map(|x_ids| induce(g, x_ids))
        .collect();
    components.sort_by_key(|c| (c.vertex_count(), c.x_ids[0]));
    components
}

fn induce(g: &BiregularGraph, x_ids: Vec<usize>) -> Component {
    let mut x_local = vec![usize::MAX; g.x_count()];
    for (lx, &x) in x_ids.iter().enumerate() {
        x_local[x] = lx;
    }
    let mut y_ids = Vec::new();
    let mut y_local = vec![usize::MAX; g.y_count()];
    let mut edge_ids = Vec::new();
    let mut edges = Vec::new();
    for (e, &(x, y)) in g.edges().iter().enumerate() {
        if x_local[x] == usize::MAX {
            continue;
        }
        if y_local[y] == usize::MAX {
            y_local[y] = y_ids.len();
            y_ids.push(y);
        }
        edge_ids.push(e);
        edges.push((x_local[x], y_local[y]));
    }
    let graph = BiregularGraph::new(g.k(), x_ids.len(), y_ids.len(), edges)
        .expect("induced component must stay biregular");
    Component { graph, x_ids, y_ids, edge_ids }
}

/// True iff `g` is the complete bipartite graph K_{k,2}: two x-vertices
/// both adjacent to every y-vertex. Requires a connected input.
pub fn is_complete_k2(g: &BiregularGraph) -> Result<bool> {
    if !is_connected(g) {
        return Err(Error::NotConnected);
    }
    Ok(g.x_count() == 2)
}

/// Parse the `.bgl` format: `#` comment lines and blank lines are skipped,
/// the first significant line is `bgl <k> <xCount> <yCount>`, followed by
/// one `<x> <y>` pair per edge.
pub fn parse_graph(text: &str) -> Result<BiregularGraph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match header {
            None => {
                if tokens.len() != 4 || tokens[0] != "bgl" {
                    return Err(Error::HeaderMissing);
                }
                let nums = parse_fields::<3>(&tokens[1..], line_no)?;
                header = Some((nums[0], nums[1], nums[2]));
            }
            Some((_, x_count, y_count)) => {
                if tokens.len() != 2 {
                    return Err(Error::MalformedLine {
                        line: line_no,
                        msg: format!("expected `<x> <y>`, got {line:?}"),
                    });
                }
                let nums = parse_fields::<2>(&tokens, line_no)?;
                let (x, y) = (nums[0], nums[1]);
                if x >= x_count || y >= y_count {
                    return Err(Error::MalformedLine {
                        line: line_no,
                        msg: format!("edge ({x}, {y}) out of range for {x_count} x / {y_count} y vertices"),
                    });
                }
                edges.push((x, y));
            }
        }
    }
    let (k, x_count, y_count) = header.ok_or(Error::HeaderMissing)?;
    BiregularGraph::new(k, x_count, y_count, edges)
}

fn parse_fields<const N: usize>(tokens: &[&str], line_no: usize) -> Result<[usize; N]> {
    let mut out = [0usize; N];
    for (slot, tok) in out.iter_mut().zip(tokens) {
        *slot = tok.parse().map_err(|_| Error::MalformedLine {
            line: line_no,
            msg: format!("{tok:?} is not a non-negative integer"),
        })?;
    }
    Ok(out)
}

/// Render `g` in canonical `.bgl` form: edges sorted lexicographically
/// by (x, y). Parsing the output reproduces `g` up to edge order.
pub fn serialize_graph(g: &BiregularGraph) -> String {
    let mut out = format!("bgl {} {} {}\n", g.k(), g.x_count(), g.y_count());
    let mut sorted: Vec<(usize, usize)> = g.edges().to_vec();
    sorted.sort_unstable();
    for (x, y) in sorted {
        out.push_str(&format!("{x} {y}\n"));
    }
    out
}
