//! The layer-by-layer labelling pipeline shared by the odd-k and even-k
//! builders: label slice planning, the per-layer cursor, and Steps 2 and
//! 3 (which are identical for both parities).
//!
//! Layers are processed deepest first. Step 1 (parity-specific, see the
//! sibling modules) consumes the first |F_i| labels of the layer's
//! slice; Step 2 gives each V_{2i} vertex its last unlabelled edge and
//! the partner edge as a consecutive pair, in increasing order of
//! partial sum; Step 3 hands the remaining pairs to type-2 vertices in
//! increasing id order.
//!
//! In the plain connected case the slice of layer i is the contiguous
//! interval [a_i, b_i]. Component repair relabels with arbitrary label
//! pools and pre-labelled edges, so slices are just sorted label lists
//! and "consecutive" means adjacent in the slice.

use crate::error::{Error, Result};
use crate::even::{self, EvenCaseTag};
use crate::graph::{BiregularGraph, VertexRef};
use crate::labelling::Labelling;
use crate::layering::{build_f, build_layering, classify_types, FPins, Layering, TypeTable};
use crate::odd;

#[derive(Debug, Clone, Copy)]
pub enum Step1Kind {
    OddTraversal,
    EvenCases,
}

/// Forces the first two moves of the odd Step-1 traversal, used by the
/// conflict repair. `up` is (predecessor-side edge, successor-side edge)
/// receiving (M_i, M_i - 1); `down` is (successor-side edge,
/// predecessor-side edge) receiving (m_i, m_i + 1).
#[derive(Debug, Clone)]
pub struct StartOverride {
    pub up: (usize, usize),
    pub down: (usize, usize),
}

#[derive(Debug, Clone, Default)]
pub struct PipelineOptions {
    /// Labels to distribute; defaults to 1..=m. Need not be contiguous.
    pub pool: Option<Vec<u64>>,
    /// Edges labelled before the pipeline runs, excluded from slices.
    pub pinned: Vec<(usize, u64)>,
    /// F constraints for the deepest layer.
    pub f_pins: Option<FPins>,
    /// Traversal override for the deepest layer.
    pub start_override: Option<StartOverride>,
    /// Edge relabels applied right after Step 1 of the deepest layer,
    /// before any sum-ordering decisions. The conflict repair uses this
    /// to pull the forced (m, m + 1) pair down to (m - 2, m - 1) so
    /// Steps 2 and 3 see the shifted sums.
    pub post_f_relabel: Vec<(usize, u64)>,
    pub instrument: bool,
}

/// Per-layer snapshot taken right after Step 1.
#[derive(Debug, Clone)]
pub struct LayerInstr {
    pub layer: usize,
    pub m: u64,
    pub big_m: u64,
    pub f_len: usize,
    /// (vertex, partial sum) for every V_{2i} vertex.
    pub sigma_after_step1: Vec<(usize, u64)>,
}

#[derive(Debug, Clone)]
pub struct Instrumentation {
    pub layers: Vec<LayerInstr>,
    /// (vertex, partial sum) captured the moment the vertex's (k-1)-th
    /// incident edge was labelled.
    pub sigma_at_k_minus_1: Vec<(usize, u64)>,
}

pub struct PipelineOutput {
    pub labelling: Labelling,
    pub layering: Layering,
    pub types: TypeTable,
    pub instr: Option<Instrumentation>,
    pub even_tags: Vec<EvenCaseTag>,
}

/// Label dispenser for one layer. `slice` is ascending; positions
/// [0, f_len) belong to Step 1, the rest to Steps 2 and 3.
#[derive(Debug)]
pub struct LayerCursor {
    slice: Vec<u64>,
    f_len: usize,
    lo: usize,
    hi: usize,
    next: usize,
}

impl LayerCursor {
    pub fn new(slice: Vec<u64>, f_len: usize) -> Self {
        assert!(f_len <= slice.len());
        LayerCursor { slice, f_len, lo: 0, hi: f_len, next: f_len }
    }

    /// m_i, the smallest Step-1 label (slice start when F is empty).
    pub fn m(&self) -> u64 {
        self.slice[0]
    }

    /// M_i, the largest Step-1 label; m_i - 1 when F is empty.
    pub fn big_m(&self) -> u64 {
        if self.f_len == 0 {
            self.slice[0] - 1
        } else {
            self.slice[self.f_len - 1]
        }
    }

    fn take(&mut self, idx: usize) -> u64 {
        self.slice[idx]
    }

    /// Upward move: (high, high - 1), consumed from the top of the F range.
    pub fn take_high_pair(&mut self) -> Result<(u64, u64)> {
        if self.hi < self.lo + 2 {
            return Err(Error::Internal("step-1 high cursor exhausted".into()));
        }
        self.hi -= 2;
        Ok((self.take(self.hi + 1), self.take(self.hi)))
    }

    /// Downward move: (low, low + 1), consumed from the bottom.
    pub fn take_low_pair(&mut self) -> Result<(u64, u64)> {
        if self.lo + 2 > self.hi {
            return Err(Error::Internal("step-1 low cursor exhausted".into()));
        }
        self.lo += 2;
        Ok((self.take(self.lo - 2), self.take(self.lo - 1)))
    }

    /// Next single Step-1 label in ascending order (even-k variants).
    pub fn take_f_next(&mut self) -> Result<u64> {
        if self.lo >= self.hi {
            return Err(Error::Internal("step-1 cursor exhausted".into()));
        }
        self.lo += 1;
        Ok(self.take(self.lo - 1))
    }

    pub fn f_consumed(&self) -> bool {
        self.lo == self.hi
    }

    /// Steps 2/3 pair (alpha, alpha + 1) in slice order.
    pub fn take_pair(&mut self) -> Result<(u64, u64)> {
        if self.next + 2 > self.slice.len() {
            return Err(Error::Internal("layer slice exhausted".into()));
        }
        self.next += 2;
        Ok((self.take(self.next - 2), self.take(self.next - 1)))
    }

    pub fn done(&self) -> bool {
        self.next == self.slice.len()
    }

    /// True when every edge of the layer was pinned up front.
    pub fn is_empty(&self) -> bool {
        self.slice.is_empty()
    }
}

/// Split the pool into per-layer slices, deepest layer first, after
/// removing pinned edges from the per-layer counts.
fn plan_slices(
    g: &BiregularGraph,
    lay: &Layering,
    pool: &[u64],
    pinned: &[(usize, u64)],
) -> Result<Vec<Vec<u64>>> {
    if pool.len() + pinned.len() != g.m() {
        return Err(Error::PoolSizeMismatch {
            pool: pool.len(),
            pinned: pinned.len(),
            m: g.m(),
        });
    }
    let mut pinned_in_layer = vec![0usize; lay.layer_count()];
    for &(e, _) in pinned {
        pinned_in_layer[lay.layer_of_edge(g, e) - 1] += 1;
    }
    let mut slices = vec![Vec::new(); lay.layer_count()];
    let mut at = 0;
    for i in (0..lay.layer_count()).rev() {
        let n = lay.layers[i].len() - pinned_in_layer[i];
        slices[i] = pool[at..at + n].to_vec();
        at += n;
    }
    Ok(slices)
}

pub fn run_pipeline(
    g: &BiregularGraph,
    root: VertexRef,
    kind: Step1Kind,
    opts: PipelineOptions,
) -> Result<PipelineOutput> {
    let lay = build_layering(g, root)?;
    let types = classify_types(g, &lay);

    let mut pool = match opts.pool {
        Some(p) => p,
        None => (1..=g.m() as u64).collect(),
    };
    pool.sort_unstable();
    pool.dedup();
    let mut seen = pool.clone();
    seen.extend(opts.pinned.iter().map(|&(_, l)| l));
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != pool.len() + opts.pinned.len() {
        return Err(Error::PinConflict(
            "pool and pinned labels are not pairwise distinct".into(),
        ));
    }
    let slices = plan_slices(g, &lay, &pool, &opts.pinned)?;

    let mut lab = Labelling::empty(g);
    for &(e, label) in &opts.pinned {
        if lab.get(e).is_some() {
            return Err(Error::PinConflict(format!("edge {e} pinned twice")));
        }
        lab.assign(g, e, label);
    }
    if opts.instrument {
        lab.watch_kth(g.k() - 1);
    }

    let mut instr_layers = Vec::new();
    let mut even_tags = Vec::new();
    for i in (1..=lay.layer_count()).rev() {
        let deepest = i == lay.layer_count();
        let f = build_f(g, &lay, &types, i, if deepest { opts.f_pins.as_ref() } else { None })?;
        for &(e, _) in &opts.pinned {
            if f.contains(e) {
                return Err(Error::Internal(format!(
                    "pinned edge {e} lies in F of layer {i}"
                )));
            }
        }
        let mut cur = LayerCursor::new(slices[i - 1].clone(), f.len());
        let bounds = if cur.is_empty() { None } else { Some((cur.m(), cur.big_m())) };
        match kind {
            Step1Kind::OddTraversal => {
                let ov = if deepest { opts.start_override.as_ref() } else { None };
                odd::step1_label_f(g, &lay, &f, &mut lab, &mut cur, ov)?;
            }
            Step1Kind::EvenCases => {
                even_tags.push(even::step1_dispatch(g, &lay, &types, &f, &mut lab, &mut cur)?);
            }
        }
        if !cur.f_consumed() {
            return Err(Error::Internal(format!(
                "layer {i}: step 1 left part of the F range unused"
            )));
        }
        if deepest {
            for &(e, label) in &opts.post_f_relabel {
                lab.reassign(g, e, label);
            }
        }
        if opts.instrument {
            if let Some((m_i, big_m_i)) = bounds {
                instr_layers.push(LayerInstr {
                    layer: i,
                    m: m_i,
                    big_m: big_m_i,
                    f_len: f.len(),
                    sigma_after_step1: lay
                        .even_level(i)
                        .iter()
                        .map(|v| (v.index, lab.x_partial_sum(v.index)))
                        .collect(),
                });
            }
        }
        step2_sorted_pairs(g, &lay, &types, i, &mut lab, &mut cur)?;
        step3_type2_pairs(g, &lay, &types, i, &mut lab, &mut cur)?;
        if !cur.done() {
            return Err(Error::Internal(format!(
                "layer {i}: slice not fully consumed after step 3"
            )));
        }
    }

    if !lab.is_total() {
        return Err(Error::PartialLabelling {
            assigned: lab.assigned(),
            expected: g.m(),
        });
    }
    let instr = opts.instrument.then(|| Instrumentation {
        layers: instr_layers,
        sigma_at_k_minus_1: lab.watch_log().to_vec(),
    });
    Ok(PipelineOutput { labelling: lab, layering: lay, types, instr, even_tags })
}

/// Step 2: each V_{2i} vertex has exactly one unlabelled edge left (its
/// excluded predecessor edge, running to a type-1 vertex). Process the
/// vertices by increasing partial sum (ties by id); give the pair
/// (alpha, alpha+1) to the edge and its partner, oriented so the vertex
/// ends on an even sum.
fn step2_sorted_pairs(
    g: &BiregularGraph,
    lay: &Layering,
    types: &TypeTable,
    i: usize,
    lab: &mut Labelling,
    cur: &mut LayerCursor,
) -> Result<()> {
    let mut order: Vec<(u64, usize)> = Vec::new();
    for v in lay.even_level(i) {
        let x = v.index;
        match g.degree(VertexRef::x(x)) - lab.x_labelled_count(x) {
            0 => continue, // fully pinned by a repair
            1 => order.push((lab.x_partial_sum(x), x)),
            n => {
                return Err(Error::Internal(format!(
                    "x{x} entered step 2 with {n} unlabelled edges"
                )))
            }
        }
    }
    order.sort_unstable();
    for (sigma, x) in order {
        let e = g
            .x_edges(x)
            .iter()
            .copied()
            .find(|&e| lab.get(e).is_none())
            .expect("counted one unlabelled edge");
        let y = g.edge(e).1;
        let partner = lay.pred_edge_of_y(g, y);
        if types.y_type[y] != 1 || lab.get(partner).is_some() {
            return Err(Error::Internal(format!(
                "excluded edge of x{x} does not run through an open type-1 vertex"
            )));
        }
        let (alpha, alpha1) = cur.take_pair()?;
        if sigma % 2 == 1 {
            lab.assign(g, e, alpha);
            lab.assign(g, partner, alpha1);
        } else {
            lab.assign(g, e, alpha1);
            lab.assign(g, partner, alpha);
        }
    }
    Ok(())
}

/// Step 3: type-2 vertices of V_{2i-1} in increasing id order each get
/// the next pair, the smaller label on the edge to the lower-id
/// x-endpoint.
fn step3_type2_pairs(
    g: &BiregularGraph,
    lay: &Layering,
    types: &TypeTable,
    i: usize,
    lab: &mut Labelling,
    cur: &mut LayerCursor,
) -> Result<()> {
    for v in lay.odd_level(i) {
        let y = v.index;
        if types.y_type[y] != 2 {
            continue;
        }
        let es = g.y_edges(y);
        match es.iter().filter(|&&e| lab.get(e).is_none()).count() {
            0 => continue, // fully pinned by a repair
            2 => {}
            _ => {
                return Err(Error::Internal(format!(
                    "type-2 vertex y{y} entered step 3 half labelled"
                )))
            }
        }
        let (mut e1, mut e2) = (es[0], es[1]);
        if g.edge(e1).0 > g.edge(e2).0 {
            std::mem::swap(&mut e1, &mut e2);
        }
        let (alpha, alpha1) = cur.take_pair()?;
        lab.assign(g, e1, alpha);
        lab.assign(g, e2, alpha1);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cursor_pairs_and_exhaustion() {
        let mut cur = LayerCursor::new((1..=8).collect(), 4);
        assert_eq!(cur.m(), 1);
        assert_eq!(cur.big_m(), 4);
        assert_eq!(cur.take_high_pair().unwrap(), (4, 3));
        assert_eq!(cur.take_low_pair().unwrap(), (1, 2));
        assert!(cur.f_consumed());
        assert!(cur.take_low_pair().is_err());
        assert_eq!(cur.take_pair().unwrap(), (5, 6));
        assert_eq!(cur.take_pair().unwrap(), (7, 8));
        assert!(cur.done());
        assert!(cur.take_pair().is_err());
    }

    #[test]
    fn cursor_with_empty_f() {
        let cur = LayerCursor::new(vec![7, 8, 9, 10], 0);
        assert_eq!(cur.m(), 7);
        assert_eq!(cur.big_m(), 6);
        assert!(cur.f_consumed());
    }

    #[test]
    fn slices_follow_pool_order_and_pins() {
        use crate::generate::gen_kk2;
        let g = gen_kk2(3).unwrap();
        let lay = build_layering(&g, VertexRef::x(0)).unwrap();
        let slices = plan_slices(&g, &lay, &[1, 2, 3, 4, 5, 6], &[]).unwrap();
        assert_eq!(slices, vec![vec![1, 2, 3, 4, 5, 6]]);
        let slices = plan_slices(&g, &lay, &[3, 4, 5, 6], &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(slices, vec![vec![3, 4, 5, 6]]);
        assert!(matches!(
            plan_slices(&g, &lay, &[1, 2, 3], &[]),
            Err(Error::PoolSizeMismatch { pool: 3, pinned: 0, m: 6 })
        ));
    }
}
