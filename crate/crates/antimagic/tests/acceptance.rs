//! Acceptance harness. Each criterion runs standalone and prints one
//! PASS/FAIL line; the test fails if any criterion does. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines on a
//! passing build.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use antimagic::even::label_connected_even_full;
use antimagic::generate::{gen_connected, gen_kk2, gen_multi, subdivided_k4, GenConfig};
use antimagic::graph::connected_components;
use antimagic::labelling::Labelling;
use antimagic::multi::label_disconnected_odd;
use antimagic::odd::{label_connected_odd, label_connected_odd_full};
use antimagic::verify::{
    brute_force_search, check_antimagic, check_step1_bounds, check_structural_invariants,
    is_valid_assignment, vertex_sums, Profile,
};
use antimagic::{BiregularGraph, Side};

type Outcome = Result<String, String>;

fn sums_by_side(g: &BiregularGraph, lab: &Labelling) -> (Vec<u64>, Vec<u64>) {
    let sums = vertex_sums(g, lab).expect("labelling is total");
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (v, s) in sums.iter() {
        match v.side {
            Side::X => x.push(s),
            Side::Y => y.push(s),
        }
    }
    (x, y)
}

fn labels_vec(g: &BiregularGraph, lab: &Labelling) -> Vec<u64> {
    (0..g.m()).map(|e| lab.get(e).expect("total")).collect()
}

/// Criterion 1: the complete-graph labelling is exact for k = 3..=10.
/// Degree-2 sums must be 3, 7, ..., 4k-1, the root sum k(k+1), the
/// other degree-k sum k^2, all inside 1 ms per instance.
fn complete_graph_exactness() -> Outcome {
    let mut slowest = Duration::ZERO;
    for k in 3..=10usize {
        let g = gen_kk2(k).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let lab = if k % 2 == 1 {
            label_connected_odd(&g, None)
        } else {
            antimagic::even::label_connected_even(&g, None)
        }
        .map_err(|e| format!("k={k}: {e}"))?;
        let took = start.elapsed();
        slowest = slowest.max(took);
        if took >= Duration::from_millis(1) {
            return Err(format!("k={k} took {took:?}, budget is 1 ms"));
        }
        let (x, mut y) = sums_by_side(&g, &lab);
        y.sort_unstable();
        let want: Vec<u64> = (1..=k as u64).map(|i| 4 * i - 1).collect();
        if y != want {
            return Err(format!("k={k}: degree-2 sums {y:?}, expected {want:?}"));
        }
        let (r, u) = (x[0], x[1]);
        if r != (k * (k + 1)) as u64 || u != (k * k) as u64 {
            return Err(format!(
                "k={k}: root/other sums ({r}, {u}), expected ({}, {})",
                k * (k + 1),
                k * k
            ));
        }
    }
    Ok(format!("k=3..=10 exact, slowest {slowest:?}"))
}

/// Criterion 2: the subdivided-K_4 end-to-end run reproduces the worked
/// fixture sums and the assignment survives independent re-validation.
fn golden_subdivided_k4() -> Outcome {
    let g = subdivided_k4();
    let lab = label_connected_odd(&g, None).map_err(|e| e.to_string())?;
    let (mut x, mut y) = sums_by_side(&g, &lab);
    let root = x.remove(0);
    x.sort_unstable();
    y.sort_unstable();
    if y != vec![3, 7, 11, 15, 19, 23] {
        return Err(format!("degree-2 sums {y:?}"));
    }
    if x != vec![12, 16, 22] || root != 28 {
        return Err(format!("degree-3 sums {x:?}, root {root}"));
    }
    if !is_valid_assignment(&g, &labels_vec(&g, &lab)) {
        return Err("independent re-validation rejected the assignment".into());
    }
    Ok("sums {3,7,11,15,19,23} / {12,16,22} / root 28, re-validated".into())
}

/// Criterion 3: 500 random connected instances per odd k in {3,5,7},
/// |X| in [3,60]: antimagic plus the odd-pipeline invariants and the
/// instrumented Step-1 partial-sum bounds, under 10 s total.
fn odd_pipeline_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let mut done = 0usize;
    for k in [3, 5, 7] {
        for _ in 0..500 {
            let nx = 2 * rng.gen_range(2..=30usize);
            let cfg = GenConfig::new(k, nx, rng.gen());
            let g = gen_connected(&cfg).map_err(|e| format!("k={k} nx={nx}: {e}"))?;
            let out = label_connected_odd_full(&g, None, true)
                .map_err(|e| format!("k={k} nx={nx} seed={}: {e}", cfg.seed))?;
            let tag = format!("k={k} nx={nx} seed={}", cfg.seed);
            if !check_antimagic(&g, &out.labelling).map_err(|e| e.to_string())?.antimagic {
                return Err(format!("{tag}: sums collide"));
            }
            let rep =
                check_structural_invariants(&g, &out.labelling, Some(&out.layering), Profile::OddPipeline)
                    .map_err(|e| e.to_string())?;
            if !rep.ok() {
                return Err(format!("{tag}: {rep}"));
            }
            let instr = out.instr.as_ref().ok_or_else(|| format!("{tag}: no instrumentation"))?;
            let bounds = check_step1_bounds(&g, &out.layering, instr);
            if !bounds.ok() {
                return Err(format!("{tag}: {bounds}"));
            }
            done += 1;
        }
    }
    let took = start.elapsed();
    if took >= Duration::from_secs(10) {
        return Err(format!("{done} instances took {took:?}, budget is 10 s"));
    }
    Ok(format!("{done} instances in {took:?}"))
}

/// Criterion 4: 500 random connected instances per even k in {4,6}:
/// antimagic plus the even-pipeline invariants, which include the
/// per-layer type-k sum gap.
fn even_pipeline_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce + 1);
    let mut done = 0usize;
    for k in [4, 6] {
        for _ in 0..500 {
            let nx = rng.gen_range(3..=60usize);
            let cfg = GenConfig::new(k, nx, rng.gen());
            let g = gen_connected(&cfg).map_err(|e| format!("k={k} nx={nx}: {e}"))?;
            let out = label_connected_even_full(&g, None)
                .map_err(|e| format!("k={k} nx={nx} seed={}: {e}", cfg.seed))?;
            let tag = format!("k={k} nx={nx} seed={}", cfg.seed);
            if !check_antimagic(&g, &out.labelling).map_err(|e| e.to_string())?.antimagic {
                return Err(format!("{tag}: sums collide"));
            }
            let rep = check_structural_invariants(
                &g,
                &out.labelling,
                Some(&out.layering),
                Profile::EvenPipeline,
            )
            .map_err(|e| e.to_string())?;
            if !rep.ok() {
                return Err(format!("{tag}: {rep}"));
            }
            if rep.line("EVEN_TYPEK_GAP").is_none() {
                return Err(format!("{tag}: type-k gap line missing from the report"));
            }
            done += 1;
        }
    }
    Ok(format!("{done} instances in {:?}", start.elapsed()))
}

/// Criterion 5: 300 random disconnected odd-k instances with 2 to 5
/// components all end antimagic; every repair adds exactly 2 to the
/// conflicting root and preserves the degree-2 sum multiset, and at
/// least one instance in the suite needs a repair.
fn multi_component_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce + 2);
    let mut repaired_instances = 0usize;
    let mut repair_rounds = 0usize;
    for _ in 0..300 {
        let ncomp = rng.gen_range(2..=5usize);
        let configs: Vec<GenConfig> =
            (0..ncomp).map(|_| GenConfig::new(3, 2 * rng.gen_range(2..=5usize), rng.gen())).collect();
        let g = gen_multi(&configs).map_err(|e| e.to_string())?;
        let seeds: Vec<u64> = configs.iter().map(|c| c.seed).collect();
        let tag = format!("seeds {seeds:?}");
        let out = label_disconnected_odd(&g).map_err(|e| format!("{tag}: {e}"))?;
        if !check_antimagic(&g, &out.labelling).map_err(|e| e.to_string())?.antimagic {
            return Err(format!("{tag}: sums collide"));
        }
        let rep = check_structural_invariants(&g, &out.labelling, None, Profile::Multi)
            .map_err(|e| e.to_string())?;
        if !rep.ok() {
            return Err(format!("{tag}: {rep}"));
        }
        let cap = connected_components(&g).len() * g.m();
        if out.repairs.len() > cap {
            return Err(format!("{tag}: {} repair rounds, cap {cap}", out.repairs.len()));
        }
        if out.repairs.is_empty() {
            continue;
        }
        repaired_instances += 1;
        repair_rounds += out.repairs.len();
        if check_antimagic(&g, &out.pre_repair).map_err(|e| e.to_string())?.antimagic {
            return Err(format!("{tag}: repairs recorded but the pre-repair labelling was clean"));
        }
        let (bx, mut by) = sums_by_side(&g, &out.pre_repair);
        let (ax, mut ay) = sums_by_side(&g, &out.labelling);
        // Each round is validated against the previous round's sums
        // inside the labeller; across rounds the deltas compose, so the
        // pre/post comparison is only conclusive for single-round runs.
        if let [rec] = out.repairs.as_slice() {
            let root = out.plan.components[rec.index].root();
            if ax[root] != bx[root] + 2 {
                return Err(format!(
                    "{tag}: repaired root x{root} moved {} -> {}, expected +2",
                    bx[root], ax[root]
                ));
            }
        }
        by.sort_unstable();
        ay.sort_unstable();
        if by != ay {
            return Err(format!("{tag}: degree-2 sum multiset changed across repair"));
        }
    }
    if repaired_instances == 0 {
        return Err("no instance in the suite exercised a repair".into());
    }
    Ok(format!(
        "300 instances, {repaired_instances} repaired ({repair_rounds} rounds), in {:?}",
        start.elapsed()
    ))
}

/// Criterion 6: the exhaustive oracle agrees with the construction on
/// K_{3,2} and K_{4,2}, and the total-sum identity holds on every
/// fixture.
fn oracle_agreement() -> Outcome {
    let mut details = Vec::new();
    for (k, expected) in [(3usize, 204u64), (4, 16080)] {
        let g = gen_kk2(k).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let res = brute_force_search(&g, None, true).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        if took >= Duration::from_secs(5) {
            return Err(format!("K_{{{k},2}} search took {took:?}, budget is 5 s"));
        }
        if !res.exists || res.count != Some(expected) {
            return Err(format!(
                "K_{{{k},2}}: exists={} count={:?}, expected {expected}",
                res.exists, res.count
            ));
        }
        let lab = if k % 2 == 1 {
            label_connected_odd(&g, None)
        } else {
            antimagic::even::label_connected_even(&g, None)
        }
        .map_err(|e| e.to_string())?;
        if !is_valid_assignment(&g, &labels_vec(&g, &lab)) {
            return Err(format!("K_{{{k},2}}: constructed labelling rejected by the oracle check"));
        }
        details.push(format!("K_{{{k},2}} count {expected} in {took:?}"));
    }
    for g in [gen_kk2(3).unwrap(), gen_kk2(4).unwrap(), subdivided_k4()] {
        let lab = if g.k() % 2 == 1 {
            label_connected_odd(&g, None)
        } else {
            antimagic::even::label_connected_even(&g, None)
        }
        .map_err(|e| e.to_string())?;
        let total = vertex_sums(&g, &lab).map_err(|e| e.to_string())?.total();
        let m = g.m() as u64;
        if total != m * (m + 1) {
            return Err(format!("total sum {total} on m={m}, expected {}", m * (m + 1)));
        }
    }
    Ok(details.join(", "))
}

/// Criterion 7: ten repeated binary runs with the same seed produce
/// byte-identical graph, labelling and DOT outputs. The fixture is a
/// two-component instance whose labelling needs a conflict repair.
fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_antimagic");
    let dir = std::env::temp_dir().join(format!("antimagic-acc-{}", std::process::id()));
    fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut baseline: Option<(Vec<u8>, Vec<u8>, Vec<u8>)> = None;
    for rep in 0..10 {
        let g = dir.join(format!("g{rep}.bgl"));
        let l = dir.join(format!("g{rep}.lbl"));
        let out = Command::new(bin)
            .args(["generate", "--k", "3", "--nx", "12", "--components", "6,6", "--seed", "23757"])
            .args(["--out", g.to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("generate failed: {}", String::from_utf8_lossy(&out.stderr)));
        }
        let out = Command::new(bin)
            .args(["label", "--input", g.to_str().unwrap(), "--output", l.to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("label failed: {}", String::from_utf8_lossy(&out.stderr)));
        }
        let dot = Command::new(bin)
            .args(["export-dot", "--graph", g.to_str().unwrap(), "--labelling", l.to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        let triple = (
            fs::read(&g).map_err(|e| e.to_string())?,
            fs::read(&l).map_err(|e| e.to_string())?,
            dot.stdout,
        );
        match &baseline {
            None => baseline = Some(triple),
            Some(b) if *b != triple => {
                return Err(format!("run {rep} produced different bytes"));
            }
            Some(_) => {}
        }
    }
    fs::remove_dir_all(&dir).ok();
    Ok("10 runs byte-identical (.bgl, .lbl, DOT)".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("c1 complete-graph-exactness", complete_graph_exactness),
        ("c2 golden-subdivided-k4", golden_subdivided_k4),
        ("c3 odd-pipeline-suite", odd_pipeline_suite),
        ("c4 even-pipeline-suite", even_pipeline_suite),
        ("c5 multi-component-suite", multi_component_suite),
        ("c6 oracle-agreement", oracle_agreement),
        ("c7 determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                println!("FAIL {name}: {detail}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
