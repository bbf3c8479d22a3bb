//! Independent checking: exact vertex sums, the antimagic predicate,
//! structural invariant suites for the three construction profiles, the
//! Step-1 partial-sum bounds, and a brute-force oracle for small
//! instances.
//!
//! Everything here recomputes sums from the raw edge labels instead of
//! trusting the labellers' running totals, so a bookkeeping bug in the
//! construction cannot hide from its own checker.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{self, BiregularGraph, Side, VertexRef};
use crate::labelling::Labelling;
use crate::layering::{build_f, build_layering, classify_types, Layering, TypeTable};
use crate::steps::Instrumentation;

/// Exact vertex sums of a total, bijective labelling.
#[derive(Debug, Clone)]
pub struct SumTable {
    x: Vec<u64>,
    y: Vec<u64>,
}

impl SumTable {
    pub fn get(&self, v: VertexRef) -> u64 {
        match v.side {
            Side::X => self.x[v.index],
            Side::Y => self.y[v.index],
        }
    }

    /// Sum over all vertices; m(m+1) for any bijective labelling, since
    /// each label is counted once per endpoint.
    pub fn total(&self) -> u64 {
        self.x.iter().chain(self.y.iter()).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexRef, u64)> + '_ {
        let xs = self.x.iter().enumerate().map(|(i, &s)| (VertexRef::x(i), s));
        let ys = self.y.iter().enumerate().map(|(i, &s)| (VertexRef::y(i), s));
        xs.chain(ys)
    }
}

/// Recompute sigma for every vertex from the edge labels.
pub fn vertex_sums(g: &BiregularGraph, lab: &Labelling) -> Result<SumTable> {
    if !lab.is_total() {
        return Err(Error::PartialLabelling { assigned: lab.assigned(), expected: g.m() });
    }
    let m = g.m() as u64;
    let mut seen = vec![false; g.m() + 1];
    for e in 0..g.m() {
        let l = lab.get(e).expect("labelling is total");
        if l < 1 || l > m {
            return Err(Error::NotBijective { m: g.m(), msg: format!("label {l} out of range") });
        }
        if seen[l as usize] {
            return Err(Error::NotBijective { m: g.m(), msg: format!("label {l} used twice") });
        }
        seen[l as usize] = true;
    }
    let mut x = vec![0u64; g.x_count()];
    let mut y = vec![0u64; g.y_count()];
    for (e, &(xe, ye)) in g.edges().iter().enumerate() {
        let l = lab.get(e).expect("labelling is total");
        x[xe] += l;
        y[ye] += l;
    }
    Ok(SumTable { x, y })
}

#[derive(Debug, Clone)]
pub struct AntimagicReport {
    pub antimagic: bool,
    /// Every pair of vertices sharing a sum, with that sum.
    pub collisions: Vec<(VertexRef, VertexRef, u64)>,
}

/// The antimagic predicate: labels form a bijection onto 1..m (checked by
/// `vertex_sums`, which errors otherwise) and all vertex sums are
/// pairwise distinct.
pub fn check_antimagic(g: &BiregularGraph, lab: &Labelling) -> Result<AntimagicReport> {
    let sums = vertex_sums(g, lab)?;
    let mut all: Vec<(u64, VertexRef)> = sums.iter().map(|(v, s)| (s, v)).collect();
    all.sort_unstable();
    let mut collisions = Vec::new();
    let mut i = 0;
    while i < all.len() {
        let mut j = i + 1;
        while j < all.len() && all[j].0 == all[i].0 {
            j += 1;
        }
        for a in i..j {
            for b in a + 1..j {
                collisions.push((all[a].1, all[b].1, all[a].0));
            }
        }
        i = j;
    }
    Ok(AntimagicReport { antimagic: collisions.is_empty(), collisions })
}

#[derive(Debug, Clone)]
pub struct CheckLine {
    pub code: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Line-oriented invariant report; failures are data, not errors.
#[derive(Debug, Clone, Default)]
pub struct CheckReport {
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn line(&self, code: &str) -> Option<&CheckLine> {
        self.lines.iter().find(|l| l.code == code)
    }

    fn push(&mut self, code: &'static str, failures: Vec<String>) {
        let line = match failures.len() {
            0 => CheckLine { code, pass: true, detail: String::new() },
            1 => CheckLine { code, pass: false, detail: failures.into_iter().next().unwrap() },
            n => CheckLine {
                code,
                pass: false,
                detail: format!("{} (+{} more)", failures[0], n - 1),
            },
        };
        self.lines.push(line);
    }

    fn push_note(&mut self, code: &'static str, note: &str) {
        self.lines.push(CheckLine { code, pass: true, detail: note.to_string() });
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            let status = if l.pass { "PASS" } else { "FAIL" };
            if l.detail.is_empty() {
                writeln!(f, "{status} {}", l.code)?;
            } else {
                writeln!(f, "{status} {} {}", l.code, l.detail)?;
            }
        }
        Ok(())
    }
}

/// Which construction produced the labelling, hence which invariants the
/// output is expected to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    OddPipeline,
    EvenPipeline,
    Multi,
}

#[derive(Default)]
struct Acc {
    parity: Vec<String>,
    distinct: Vec<String>,
    monotone: Vec<String>,
    dominant: Vec<String>,
    dominant_checked: usize,
    consecutive: Vec<String>,
    gap: Vec<String>,
    even_f: Vec<String>,
    even_gap: Vec<String>,
    even_checked: usize,
}

/// Structural invariant suite. For the connected profiles `lay` defaults
/// to the layering rooted at x0; the multi profile rebuilds one layering
/// per component (rooted at its smallest x-id, matching the
/// construction) and ignores `lay`.
pub fn check_structural_invariants(
    g: &BiregularGraph,
    lab: &Labelling,
    lay: Option<&Layering>,
    profile: Profile,
) -> Result<CheckReport> {
    let sums = vertex_sums(g, lab)?;
    let mut acc = Acc::default();
    match profile {
        Profile::OddPipeline | Profile::EvenPipeline => {
            let built;
            let lay = match lay {
                Some(l) => l,
                None => {
                    built = build_layering(g, VertexRef::x(0))?;
                    &built
                }
            };
            check_levels(g, &sums, lay, "", &mut acc);
            if profile == Profile::OddPipeline {
                check_consecutive_pairs(g, lab, "", &mut acc);
                check_deg2_gap(sums.y.clone(), &mut acc);
            } else {
                let types = classify_types(g, lay);
                check_even_layers(g, &sums, lay, &types, "", &mut acc)?;
            }
        }
        Profile::Multi => {
            for (ci, comp) in graph::connected_components(g).iter().enumerate() {
                let prefix = format!("component {ci}: ");
                let local = SumTable {
                    x: comp.x_ids.iter().map(|&x| sums.x[x]).collect(),
                    y: comp.y_ids.iter().map(|&y| sums.y[y]).collect(),
                };
                let lay = build_layering(&comp.graph, VertexRef::x(0))?;
                check_levels(&comp.graph, &local, &lay, &prefix, &mut acc);
            }
            check_consecutive_pairs(g, lab, "", &mut acc);
            check_deg2_gap(sums.y.clone(), &mut acc);
        }
    }

    let mut rep = CheckReport::default();
    rep.push("PARITY", acc.parity);
    rep.push("LEVEL_DISTINCT", acc.distinct);
    rep.push("LEVEL_MONOTONE", acc.monotone);
    if acc.dominant_checked == 0 {
        rep.push_note("ROOT_DOMINANT", "skipped: complete bipartite");
    } else {
        rep.push("ROOT_DOMINANT", acc.dominant);
    }
    match profile {
        Profile::OddPipeline | Profile::Multi => {
            rep.push("CONSECUTIVE_PAIRS", acc.consecutive);
            rep.push("DEG2_GAP", acc.gap);
        }
        Profile::EvenPipeline => {
            if acc.even_checked == 0 {
                rep.push_note("EVEN_F_SUMS", "skipped: complete bipartite");
                rep.push_note("EVEN_TYPEK_GAP", "skipped: complete bipartite");
            } else {
                rep.push("EVEN_F_SUMS", acc.even_f);
                rep.push("EVEN_TYPEK_GAP", acc.even_gap);
            }
        }
    }
    Ok(rep)
}

/// Parity, intra-level distinctness, level monotonicity and root
/// dominance for one connected (component) graph.
fn check_levels(g: &BiregularGraph, sums: &SumTable, lay: &Layering, prefix: &str, acc: &mut Acc) {
    // Connected input, so two x-vertices means the complete K_{k,2}: its
    // closed-form labelling predates the parity scheme and both x-sums
    // are exempt, as is root dominance.
    let kk2 = g.x_count() == 2;

    for (x, &s) in sums.x.iter().enumerate() {
        if !kk2 && x != lay.root && s % 2 != 0 {
            acc.parity.push(format!("{prefix}x{x} sum {s} odd"));
        }
    }
    for (y, &s) in sums.y.iter().enumerate() {
        if s % 2 != 1 {
            acc.parity.push(format!("{prefix}y{y} sum {s} even"));
        }
    }

    let mut prev: Option<(u64, usize)> = None;
    for lv in (0..=lay.depth()).step_by(2) {
        let mut level: Vec<(u64, usize)> = lay.levels[lv]
            .iter()
            .map(|v| (sums.x[v.index], v.index))
            .collect();
        level.sort_unstable();
        for w in level.windows(2) {
            if w[0].0 == w[1].0 {
                acc.distinct.push(format!(
                    "{prefix}level {lv}: x{} and x{} both sum {}",
                    w[0].1, w[1].1, w[0].0
                ));
            }
        }
        let min = level.first().expect("even levels are never empty").0;
        let max = level.last().expect("even levels are never empty").0;
        if let Some((pmin, plv)) = prev {
            if pmin <= max {
                acc.monotone.push(format!(
                    "{prefix}level {plv} min {pmin} not above level {lv} max {max}"
                ));
            }
        }
        prev = Some((min, lv));
    }

    if !kk2 {
        acc.dominant_checked += 1;
        let rs = sums.x[lay.root];
        for (v, s) in sums.iter() {
            if v != VertexRef::x(lay.root) && s >= rs {
                acc.dominant.push(format!("{prefix}{v} sum {s} not below root sum {rs}"));
            }
        }
    }
}

fn check_consecutive_pairs(g: &BiregularGraph, lab: &Labelling, prefix: &str, acc: &mut Acc) {
    for y in 0..g.y_count() {
        let es = g.y_edges(y);
        let a = lab.get(es[0]).expect("labelling is total");
        let b = lab.get(es[1]).expect("labelling is total");
        if a.abs_diff(b) != 1 {
            acc.consecutive.push(format!("{prefix}y{y} labels {a} and {b} not consecutive"));
        }
    }
}

fn check_deg2_gap(mut ysums: Vec<u64>, acc: &mut Acc) {
    ysums.sort_unstable();
    for w in ysums.windows(2) {
        if w[1] - w[0] < 4 {
            acc.gap.push(format!("degree-2 sums {} and {} closer than 4", w[0], w[1]));
        }
    }
}

/// Per-layer F-vertex sum shape and the type-k sum gap, for the even-k
/// pipeline. Rebuilds the F-sets with default exclusions, which is what
/// the pipeline used.
fn check_even_layers(
    g: &BiregularGraph,
    sums: &SumTable,
    lay: &Layering,
    types: &TypeTable,
    prefix: &str,
    acc: &mut Acc,
) -> Result<()> {
    if g.x_count() == 2 {
        return Ok(());
    }
    acc.even_checked += 1;
    let k = g.k() as i128;
    for i in 1..=lay.layer_count() {
        let f = build_f(g, lay, types, i, None)?;
        if f.is_empty() {
            continue;
        }
        let mut fsums: Vec<u64> = lay
            .odd_level(i)
            .iter()
            .filter(|v| g.y_edges(v.index).iter().all(|&e| f.contains(e)))
            .map(|v| sums.y[v.index])
            .collect();
        fsums.sort_unstable();
        if f.len() % 4 == 2 {
            if fsums[0] % 2 == 0 {
                acc.even_f.push(format!("{prefix}layer {i}: first F-sum {} even", fsums[0]));
            }
            for w in fsums.windows(2) {
                if w[1] != w[0] + 2 {
                    acc.even_f.push(format!(
                        "{prefix}layer {i}: F-sums {} and {} break the step-2 progression",
                        w[0], w[1]
                    ));
                }
            }
        } else {
            for &s in &fsums {
                if s % 2 == 0 {
                    acc.even_f.push(format!("{prefix}layer {i}: F-sum {s} even"));
                }
            }
            for w in fsums.windows(2) {
                if w[0] == w[1] {
                    acc.even_f.push(format!("{prefix}layer {i}: F-sum {} repeated", w[0]));
                }
            }
            let t = types.count(i, g.k());
            if t > 0 {
                let rhs = (k - 1) * t as i128 * (k / 2 - 2) + (k - 1) * (k - 2) / 2 + 2;
                for u in lay.even_level(i) {
                    if types.x_type[u.index] != g.k() {
                        continue;
                    }
                    let su = sums.x[u.index] as i128;
                    for v in lay.even_level(i - 1) {
                        if v.index == lay.root {
                            continue;
                        }
                        let sv = sums.x[v.index] as i128;
                        if sv - su < rhs {
                            acc.even_gap.push(format!(
                                "{prefix}layer {i}: sum gap {} between x{} and type-k x{} below {rhs}",
                                sv - su,
                                v.index,
                                u.index
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Check the Step-1 partial-sum bounds captured by instrumentation:
/// right after Step 1 of layer i, every V_{2i} vertex w satisfies
/// 2 sigma'(w) <= (m_i + M_i - 1)(k - 1); and the moment a vertex u with
/// a layer below it receives its (k-1)-th label, 2 sigma'(u) is at least
/// the bound of that lower layer.
pub fn check_step1_bounds(
    g: &BiregularGraph,
    lay: &Layering,
    instr: &Instrumentation,
) -> CheckReport {
    let k = g.k() as u64;
    let mut upper = Vec::new();
    for li in &instr.layers {
        let bound2 = (li.m + li.big_m - 1) * (k - 1);
        for &(x, s) in &li.sigma_after_step1 {
            if 2 * s > bound2 {
                upper.push(format!(
                    "layer {}: x{x} partial sum {s} above bound {}",
                    li.layer,
                    bound2 / 2
                ));
            }
        }
    }
    let mut lower = Vec::new();
    for &(x, s) in &instr.sigma_at_k_minus_1 {
        let i = lay.level_of(VertexRef::x(x)) / 2 + 1;
        // Vertices on the deepest even level have no layer below them.
        let Some(li) = instr.layers.iter().find(|li| li.layer == i) else {
            continue;
        };
        let bound2 = (li.m + li.big_m - 1) * (k - 1);
        if 2 * s < bound2 {
            lower.push(format!(
                "x{x} reached k-1 labels at {s}, below the layer {i} bound {}",
                bound2 / 2
            ));
        }
    }
    let mut rep = CheckReport::default();
    rep.push("STEP1_UPPER", upper);
    rep.push("STEP1_LOWER", lower);
    rep
}

pub const DEFAULT_ORACLE_BUDGET: usize = 10;

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub exists: bool,
    /// Labels per edge index of the first antimagic assignment found.
    pub witness: Option<Vec<u64>>,
    /// Number of antimagic bijections, when counting was requested.
    pub count: Option<u64>,
    pub states_explored: u64,
}

/// Exhaustive backtracking search over label-to-edge assignments,
/// pruning a branch as soon as two vertices with all incident edges
/// labelled share a sum. Sums are tallied here from the raw edge list;
/// the oracle shares no arithmetic with the labelling pipelines it
/// cross-checks.
pub fn brute_force_search(
    g: &BiregularGraph,
    budget: Option<usize>,
    count_all: bool,
) -> Result<OracleResult> {
    let budget = budget.unwrap_or(DEFAULT_ORACLE_BUDGET);
    if g.m() > budget {
        return Err(Error::BudgetExceeded { m: g.m(), budget });
    }
    let m = g.m();
    let n = g.x_count() + g.y_count();
    let mut ends = Vec::with_capacity(m);
    let mut left = vec![0usize; n];
    for &(x, y) in g.edges() {
        ends.push((x, g.x_count() + y));
        left[x] += 1;
        left[g.x_count() + y] += 1;
    }
    let mut search = Search {
        ends,
        left,
        sum: vec![0u64; n],
        finished: vec![0u16; g.k() * m + 2],
        used: vec![false; m + 1],
        label_of: vec![0u64; m],
        count: 0,
        states: 0,
        witness: None,
        count_all,
    };
    search.dfs(0, m);
    Ok(OracleResult {
        exists: search.witness.is_some(),
        witness: search.witness,
        count: count_all.then_some(search.count),
        states_explored: search.states,
    })
}

struct Search {
    ends: Vec<(usize, usize)>,
    left: Vec<usize>,
    sum: Vec<u64>,
    /// finished[s] = number of fully-labelled vertices with sum s.
    finished: Vec<u16>,
    used: Vec<bool>,
    label_of: Vec<u64>,
    count: u64,
    states: u64,
    witness: Option<Vec<u64>>,
    count_all: bool,
}

impl Search {
    /// Returns true when the search should stop (witness found and the
    /// caller does not want a full count).
    fn dfs(&mut self, e: usize, m: usize) -> bool {
        if e == m {
            self.count += 1;
            if self.witness.is_none() {
                self.witness = Some(self.label_of.clone());
            }
            return !self.count_all;
        }
        for l in 1..=m as u64 {
            if self.used[l as usize] {
                continue;
            }
            self.states += 1;
            self.used[l as usize] = true;
            self.label_of[e] = l;
            let viable = self.apply(e, l);
            let stop = viable && self.dfs(e + 1, m);
            self.unapply(e, l);
            self.used[l as usize] = false;
            if stop {
                return true;
            }
        }
        false
    }

    fn apply(&mut self, e: usize, l: u64) -> bool {
        let (a, b) = self.ends[e];
        let mut viable = true;
        for v in [a, b] {
            self.sum[v] += l;
            self.left[v] -= 1;
            if self.left[v] == 0 {
                let s = self.sum[v] as usize;
                self.finished[s] += 1;
                if self.finished[s] > 1 {
                    viable = false;
                }
            }
        }
        viable
    }

    fn unapply(&mut self, e: usize, l: u64) {
        let (a, b) = self.ends[e];
        for v in [b, a] {
            if self.left[v] == 0 {
                self.finished[self.sum[v] as usize] -= 1;
            }
            self.left[v] += 1;
            self.sum[v] -= l;
        }
    }
}

/// Direct validity check of a raw per-edge label vector, bypassing the
/// `Labelling` bookkeeping entirely.
pub fn is_valid_assignment(g: &BiregularGraph, labels: &[u64]) -> bool {
    let m = g.m();
    if labels.len() != m {
        return false;
    }
    let mut seen = vec![false; m + 1];
    for &l in labels {
        if l < 1 || l > m as u64 || seen[l as usize] {
            return false;
        }
        seen[l as usize] = true;
    }
    let mut sum = vec![0u64; g.x_count() + g.y_count()];
    for (e, &(x, y)) in g.edges().iter().enumerate() {
        sum[x] += labels[e];
        sum[g.x_count() + y] += labels[e];
    }
    sum.sort_unstable();
    sum.windows(2).all(|w| w[0] != w[1])
}
