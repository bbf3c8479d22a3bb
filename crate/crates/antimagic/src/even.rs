//! The connected labelling for even k. Steps 2 and 3 are shared with
//! the odd pipeline; Step 1 splits on |F_i| mod 4 because the
//! alternating traversal needs |F_i|/2 to pair an even number of moves.
//!
//! All three variants label the successor side of F with the smallest
//! labels and the predecessor side with the rest in increasing partial
//! sum of the shared degree-2 vertex, so F-vertex sums end up odd and
//! pairwise distinct. The mod-0 variants spend one label pair on a seed
//! path first to fix the parity of the remainder; with type-k vertices
//! present, the successor side is dealt round-robin so no type-k vertex
//! hoards small labels.

use crate::error::{Error, Result};
use crate::graph::{is_complete_k2, BiregularGraph, VertexRef};
use crate::labelling::Labelling;
use crate::layering::{FSet, Layering, TypeTable};
use crate::odd::label_kk2;
use crate::steps::{run_pipeline, LayerCursor, PipelineOptions, PipelineOutput, Step1Kind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvenCase {
    Mod2,
    Mod0NoTypeK,
    Mod0TypeK,
}

#[derive(Debug, Clone)]
pub struct EvenCaseTag {
    pub layer: usize,
    pub case: EvenCase,
    pub t_k: usize,
}

pub(crate) fn step1_dispatch(
    g: &BiregularGraph,
    lay: &Layering,
    types: &TypeTable,
    f: &FSet,
    lab: &mut Labelling,
    cur: &mut LayerCursor,
) -> Result<EvenCaseTag> {
    let t_k = types.count(f.layer, g.k());
    let case = if f.len() % 4 == 2 {
        step1_even_mod2(g, lay, f, lab, cur)?;
        EvenCase::Mod2
    } else if t_k == 0 {
        step1_even_mod0_no_typek(g, lay, types, f, lab, cur)?;
        EvenCase::Mod0NoTypeK
    } else {
        step1_even_mod0_typek(g, lay, types, f, lab, cur)?;
        EvenCase::Mod0TypeK
    };
    Ok(EvenCaseTag { layer: f.layer, case, t_k })
}

/// Successor-side F-edges of w, ascending by degree-2 endpoint id.
fn succ_f_edges(g: &BiregularGraph, lay: &Layering, f: &FSet, w: usize) -> Vec<usize> {
    lay.pred_edges_of_x(g, w)
        .into_iter()
        .filter(|&e| f.contains(e))
        .collect()
}

/// Label every still-open predecessor-side F-edge with the next Step-1
/// labels, in increasing partial sum of the edge's degree-2 endpoint.
fn label_pred_side(
    g: &BiregularGraph,
    lay: &Layering,
    f: &FSet,
    lab: &mut Labelling,
    cur: &mut LayerCursor,
) -> Result<()> {
    let mut pred: Vec<(u64, usize, usize)> = f
        .edges
        .iter()
        .copied()
        .filter(|&e| !lay.is_succ_side(g, e) && lab.get(e).is_none())
        .map(|e| (lab.y_partial_sum(g.edge(e).1), g.edge(e).1, e))
        .collect();
    pred.sort_unstable();
    for (_, _, e) in pred {
        let label = cur.take_f_next()?;
        lab.assign(g, e, label);
    }
    Ok(())
}

/// |F| = 2 (mod 4): successor side in edge order, predecessor side by
/// partial sum. F-vertex sums form an arithmetic progression of step 2
/// from an odd start.
pub fn step1_even_mod2(
    g: &BiregularGraph,
    lay: &Layering,
    f: &FSet,
    lab: &mut Labelling,
    cur: &mut LayerCursor,
) -> Result<()> {
    if f.len() % 4 != 2 {
        return Err(Error::WrongCase(format!("|F| = {} is not 2 mod 4", f.len())));
    }
    for &e in &f.edges {
        if lay.is_succ_side(g, e) {
            let label = cur.take_f_next()?;
            lab.assign(g, e, label);
        }
    }
    label_pred_side(g, lay, f, lab, cur)
}

/// |F| = 0 (mod 4) with no type-k vertex: as mod 2, but a seed pair
/// (one successor edge and its partner) takes the two smallest labels
/// first, so the leftover counts realign.
pub fn step1_even_mod0_no_typek(
    g: &BiregularGraph,
    lay: &Layering,
    types: &TypeTable,
    f: &FSet,
    lab: &mut Labelling,
    cur: &mut LayerCursor,
) -> Result<()> {
    if f.len() % 4 != 0 {
        return Err(Error::WrongCase(format!("|F| = {} is not 0 mod 4", f.len())));
    }
    if types.count(f.layer, g.k()) != 0 {
        return Err(Error::WrongCase("layer has type-k vertices".into()));
    }
    if f.is_empty() {
        return Ok(());
    }
    let seed_w = lay
        .even_level(f.layer)
        .iter()
        .map(|v| v.index)
        .find(|&w| !succ_f_edges(g, lay, f, w).is_empty())
        .expect("nonempty F has an eligible vertex");
    let seed = succ_f_edges(g, lay, f, seed_w)[0];
    let partner = lay.pred_edge_of_y(g, g.edge(seed).1);
    let a = cur.take_f_next()?;
    lab.assign(g, seed, a);
    let a1 = cur.take_f_next()?;
    lab.assign(g, partner, a1);
    for &e in &f.edges {
        if lay.is_succ_side(g, e) && lab.get(e).is_none() {
            let label = cur.take_f_next()?;
            lab.assign(g, e, label);
        }
    }
    label_pred_side(g, lay, f, lab, cur)
}

/// |F| = 0 (mod 4) with q >= 1 type-k vertices: seed on the smallest-id
/// type-k vertex, then deal the successor side round-robin over the
/// type-k vertices (starting after the seed vertex, skipping exhausted
/// ones), then remaining successor edges in edge order, then the
/// predecessor side by partial sum.
pub fn step1_even_mod0_typek(
    g: &BiregularGraph,
    lay: &Layering,
    types: &TypeTable,
    f: &FSet,
    lab: &mut Labelling,
    cur: &mut LayerCursor,
) -> Result<()> {
    if f.len() % 4 != 0 {
        return Err(Error::WrongCase(format!("|F| = {} is not 0 mod 4", f.len())));
    }
    let us: Vec<usize> = lay
        .even_level(f.layer)
        .iter()
        .map(|v| v.index)
        .filter(|&w| types.x_type[w] == g.k())
        .collect();
    if us.is_empty() {
        return Err(Error::WrongCase("layer has no type-k vertex".into()));
    }
    let mut remaining: Vec<Vec<usize>> = us.iter().map(|&u| succ_f_edges(g, lay, f, u)).collect();

    let seed = remaining[0].remove(0);
    let partner = lay.pred_edge_of_y(g, g.edge(seed).1);
    let a = cur.take_f_next()?;
    lab.assign(g, seed, a);
    let a1 = cur.take_f_next()?;
    lab.assign(g, partner, a1);

    let mut left: usize = remaining.iter().map(Vec::len).sum();
    let mut at = 1 % us.len();
    while left > 0 {
        if !remaining[at].is_empty() {
            let e = remaining[at].remove(0);
            let label = cur.take_f_next()?;
            lab.assign(g, e, label);
            left -= 1;
        }
        at = (at + 1) % us.len();
    }
    for &e in &f.edges {
        if lay.is_succ_side(g, e) && lab.get(e).is_none() {
            let label = cur.take_f_next()?;
            lab.assign(g, e, label);
        }
    }
    label_pred_side(g, lay, f, lab, cur)
}

pub fn label_connected_even_full(
    g: &BiregularGraph,
    root: Option<VertexRef>,
) -> Result<PipelineOutput> {
    if g.k() % 2 == 1 {
        return Err(Error::KOdd(g.k()));
    }
    let root = root.unwrap_or(VertexRef::x(0));
    if is_complete_k2(g)? {
        let labelling = label_kk2(g, root, 0)?;
        let layering = crate::layering::build_layering(g, root)?;
        let types = crate::layering::classify_types(g, &layering);
        return Ok(PipelineOutput { labelling, layering, types, instr: None, even_tags: vec![] });
    }
    run_pipeline(g, root, Step1Kind::EvenCases, PipelineOptions::default())
}

pub fn label_connected_even(g: &BiregularGraph, root: Option<VertexRef>) -> Result<Labelling> {
    Ok(label_connected_even_full(g, root)?.labelling)
}

/// k = 4 with two type-4 vertices u1, u2 under the deepest layer:
/// r - y0..y3; a has predecessors y0, y1 and successors y4, y5;
/// b: y2 up, y6..y8 down; c: y3 up, y9..y11 down; u1 - y4..y7;
/// u2 - y8..y11.
#[cfg(test)]
pub(crate) fn two_typek_fixture() -> BiregularGraph {
    let edges = vec![
        (0, 0), (0, 1), (0, 2), (0, 3),
        (1, 0), (1, 1), (1, 4), (1, 5),
        (2, 2), (2, 6), (2, 7), (2, 8),
        (3, 3), (3, 9), (3, 10), (3, 11),
        (4, 4), (4, 5), (4, 6), (4, 7),
        (5, 8), (5, 9), (5, 10), (5, 11),
    ];
    BiregularGraph::new(4, 6, 12, edges).unwrap()
}

/// k = 4 with a type-3 vertex at level 2, so the upper layer has
/// |F| = 4 and no type-4 vertex: r - y0..y3; x1: y0..y2 up, y4 down;
/// x2: y3 up, y5..y7 down; x3 - y4..y7.
#[cfg(test)]
pub(crate) fn mod0_no_typek_fixture() -> BiregularGraph {
    let edges = vec![
        (0, 0), (0, 1), (0, 2), (0, 3),
        (1, 0), (1, 1), (1, 2), (1, 4),
        (2, 3), (2, 5), (2, 6), (2, 7),
        (3, 4), (3, 5), (3, 6), (3, 7),
    ];
    BiregularGraph::new(4, 4, 8, edges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_connected, gen_kk2, GenConfig};
    use crate::layering::{build_f, build_layering, classify_types};

    #[test]
    fn round_robin_matches_worked_example() {
        let g = two_typek_fixture();
        let out = label_connected_even_full(&g, None).unwrap();
        let lab = &out.labelling;
        let get = |x, y| lab.get(g.edge_between(x, y).unwrap()).unwrap();

        assert_eq!(out.even_tags.len(), 2);
        assert_eq!(out.even_tags[0].case, EvenCase::Mod0TypeK);
        assert_eq!(out.even_tags[0].t_k, 2);
        assert_eq!(out.even_tags[1].case, EvenCase::Mod2);

        // Seed pair on u1's smallest open vertex, then labels dealt
        // round-robin from u2.
        assert_eq!(get(4, 5), 1);
        assert_eq!(get(1, 5), 2);
        assert_eq!([get(4, 6), get(4, 7)], [4, 6]);
        assert_eq!([get(5, 9), get(5, 10), get(5, 11)], [3, 5, 7]);
        // Predecessor side in increasing partial-sum order.
        assert_eq!(get(3, 9), 8);
        assert_eq!(get(2, 6), 9);
        assert_eq!(get(3, 10), 10);
        assert_eq!(get(2, 7), 11);
        assert_eq!(get(3, 11), 12);

        let x_sums: Vec<u64> = (0..6).map(|x| lab.x_partial_sum(x)).collect();
        assert_eq!(x_sums, vec![82, 54, 60, 50, 24, 30]);
    }

    #[test]
    fn seeded_mod0_without_typek() {
        let g = mod0_no_typek_fixture();
        let out = label_connected_even_full(&g, None).unwrap();
        let lab = &out.labelling;
        let get = |x, y| lab.get(g.edge_between(x, y).unwrap()).unwrap();

        assert_eq!(out.even_tags[0].case, EvenCase::Mod2);
        assert_eq!(out.even_tags[1].case, EvenCase::Mod0NoTypeK);
        assert_eq!(out.even_tags[1].t_k, 0);

        // Upper layer (slice 9..16): seed pair through y1, third
        // successor edge, then the predecessor side.
        assert_eq!(get(1, 1), 9);
        assert_eq!(get(0, 1), 10);
        assert_eq!(get(1, 2), 11);
        assert_eq!(get(0, 2), 12);

        let x_sums: Vec<u64> = (0..4).map(|x| lab.x_partial_sum(x)).collect();
        assert_eq!(x_sums, vec![52, 42, 28, 14]);
    }

    #[test]
    fn wrong_case_rejected() {
        let g = mod0_no_typek_fixture();
        let lay = build_layering(&g, VertexRef::x(0)).unwrap();
        let types = classify_types(&g, &lay);
        let f1 = build_f(&g, &lay, &types, 1, None).unwrap();
        assert_eq!(f1.len(), 4);
        let mut lab = Labelling::empty(&g);
        let mut cur = LayerCursor::new((9..=16).collect(), f1.len());
        assert!(matches!(
            step1_even_mod2(&g, &lay, &f1, &mut lab, &mut cur),
            Err(Error::WrongCase(_))
        ));
        assert!(matches!(
            step1_even_mod0_typek(&g, &lay, &types, &f1, &mut lab, &mut cur),
            Err(Error::WrongCase(_))
        ));
    }

    #[test]
    fn kk2_dispatch_and_odd_k_rejected() {
        let g = gen_kk2(4).unwrap();
        let lab = label_connected_even(&g, None).unwrap();
        assert_eq!(lab.x_partial_sum(0), 20);
        assert_eq!(lab.x_partial_sum(1), 16);

        let g = gen_connected(&GenConfig::new(3, 4, 0)).unwrap();
        assert!(matches!(label_connected_even(&g, None), Err(Error::KOdd(3))));
    }

    #[test]
    fn random_instances_get_total_bijective_labellings() {
        let mut cases_seen = [false; 3];
        for seed in 0..40 {
            let g = gen_connected(&GenConfig::new(4, 3 + (seed as usize % 6), seed)).unwrap();
            let out = label_connected_even_full(&g, None).unwrap();
            for tag in &out.even_tags {
                cases_seen[match tag.case {
                    EvenCase::Mod2 => 0,
                    EvenCase::Mod0NoTypeK => 1,
                    EvenCase::Mod0TypeK => 2,
                }] = true;
            }
            let lab = &out.labelling;
            assert!(lab.is_total());
            let mut labels: Vec<u64> = (0..g.m()).map(|e| lab.get(e).unwrap()).collect();
            labels.sort_unstable();
            assert_eq!(labels, (1..=g.m() as u64).collect::<Vec<_>>(), "seed {seed}");
        }
        assert!(cases_seen[0] && cases_seen[2], "dispatch coverage: {cases_seen:?}");
    }
}
