//! Command-line front end. Maps verbs onto the library, with exit code
//! 0 for success, 1 for a failed verification, and 2 for input errors.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::generate::{gen_connected, gen_kk2, gen_multi, GenConfig};
use crate::graph::{self, is_connected, parse_graph, serialize_graph, BiregularGraph, VertexRef};
use crate::labelling::{parse_labelling, serialize_labelling};
use crate::layering::{build_f, build_layering, classify_types};
use crate::multi::{label_disconnected_even_best_effort, label_disconnected_odd};
use crate::verify::{brute_force_search, check_antimagic, check_structural_invariants, Profile};
use crate::{dot, even, odd};

#[derive(Parser)]
#[command(name = "antimagic", version, about = "Antimagic labellings of (k,2)-biregular bipartite graphs")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random graph and write it in .bgl format.
    Generate {
        /// Degree of the X side (k >= 3).
        #[arg(long)]
        k: usize,
        /// Number of X-side vertices (with --components: their total).
        #[arg(long)]
        nx: usize,
        /// Comma-separated X-side sizes, one per component.
        #[arg(long)]
        components: Option<String>,
        /// Emit the canonical complete bipartite graph K_{k,2}.
        #[arg(long)]
        kk2: bool,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Construct an antimagic labelling for a .bgl graph.
    Label {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// X-side vertex to use as the layering root (connected only).
        #[arg(long)]
        root: Option<usize>,
        /// Label disconnected even-k graphs per component and report,
        /// even though no distinctness guarantee exists across blocks.
        #[arg(long)]
        best_effort: bool,
    },
    /// Check a labelling: bijectivity, distinct sums, structural claims.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        labelling: PathBuf,
        /// Which claim family to check; default picks by parity and
        /// connectedness.
        #[arg(long, value_enum)]
        profile: Option<ProfileArg>,
    },
    /// Exhaustive search for antimagic labellings on small graphs.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        /// Edge-count budget for the search (default 10).
        #[arg(long)]
        max_edges: Option<usize>,
        /// Count all antimagic bijections instead of stopping at one.
        #[arg(long)]
        count: bool,
    },
    /// Print structural information about a graph.
    Info {
        #[arg(long)]
        input: PathBuf,
        /// Layering root override (connected only).
        #[arg(long)]
        root: Option<usize>,
    },
    /// Write the graph (optionally with a labelling) as DOT text.
    ExportDot {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        labelling: Option<PathBuf>,
    },
    /// Generate-label-verify loops with derived per-trial seeds.
    Stress {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        nx_min: Option<usize>,
        #[arg(long)]
        nx_max: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = PipelineArg::Auto)]
        pipeline: PipelineArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Odd,
    Even,
    Multi,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum PipelineArg {
    Auto,
    Odd,
    Even,
    Multi,
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Generate { k, nx, components, kk2, seed, out } => {
            generate(k, nx, components.as_deref(), kk2, seed, &out)
        }
        Command::Label { input, output, root, best_effort } => {
            label(&input, &output, root, best_effort)
        }
        Command::Verify { graph, labelling, profile } => verify(&graph, &labelling, profile),
        Command::Oracle { input, max_edges, count } => oracle(&input, max_edges, count),
        Command::Info { input, root } => info(&input, root),
        Command::ExportDot { graph, labelling } => export_dot(&graph, labelling.as_deref()),
        Command::Stress { k, trials, nx_min, nx_max, seed, pipeline } => {
            stress(k, trials, nx_min, nx_max, seed, pipeline)
        }
    }
}

fn generate(
    k: usize,
    nx: usize,
    components: Option<&str>,
    kk2: bool,
    seed: u64,
    out: &Path,
) -> Result<i32> {
    let g = if kk2 {
        if nx != 2 {
            return Err(Error::Usage(format!(
                "--kk2 fixes the X side to 2 vertices, got --nx {nx}"
            )));
        }
        gen_kk2(k)?
    } else if let Some(list) = components {
        let sizes: Vec<usize> = list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Usage(format!("bad component size {s:?}")))
            })
            .collect::<Result<_>>()?;
        if sizes.iter().sum::<usize>() != nx {
            return Err(Error::Usage(format!(
                "--nx {nx} does not match the component total {}",
                sizes.iter().sum::<usize>()
            )));
        }
        let configs: Vec<GenConfig> = sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| GenConfig::new(k, n, seed.wrapping_add(i as u64)))
            .collect();
        gen_multi(&configs)?
    } else {
        gen_connected(&GenConfig::new(k, nx, seed))?
    };
    write_atomic(out, &serialize_graph(&g))?;
    println!("wrote {} ({} edges)", out.display(), g.m());
    Ok(0)
}

fn root_ref(g: &BiregularGraph, root: Option<usize>) -> Result<Option<VertexRef>> {
    match root {
        None => Ok(None),
        Some(r) if r < g.x_count() => Ok(Some(VertexRef::x(r))),
        Some(r) => Err(Error::Usage(format!(
            "root x{r} does not exist (X side has {} vertices)",
            g.x_count()
        ))),
    }
}

fn label(input: &Path, output: &Path, root: Option<usize>, best_effort: bool) -> Result<i32> {
    let g = parse_graph(&fs::read_to_string(input)?)?;
    let connected = is_connected(&g);
    if !connected && root.is_some() {
        return Err(Error::Usage(
            "--root applies to connected graphs; components pick their own roots".into(),
        ));
    }
    let odd_k = g.k() % 2 == 1;
    let (lab, exit) = match (connected, odd_k) {
        (true, true) => (odd::label_connected_odd(&g, root_ref(&g, root)?)?, 0),
        (true, false) => (even::label_connected_even(&g, root_ref(&g, root)?)?, 0),
        (false, true) => (label_disconnected_odd(&g)?.labelling, 0),
        (false, false) => {
            if !best_effort {
                return Err(Error::KEvenDisconnected);
            }
            let (lab, report) = label_disconnected_even_best_effort(&g)?;
            if report.antimagic {
                println!("best effort: antimagic");
                (lab, 0)
            } else {
                println!("best effort: {} sum collisions across components", report.collisions.len());
                (lab, 1)
            }
        }
    };
    write_atomic(output, &serialize_labelling(&g, &lab))?;
    println!("wrote {}", output.display());
    Ok(exit)
}

/// Profile implied by the graph shape. `None` for disconnected even-k
/// input, which no construction path covers: only best-effort labels
/// exist there, so no structural claim applies.
fn auto_profile(g: &BiregularGraph) -> Option<Profile> {
    match (is_connected(g), g.k() % 2 == 1) {
        (true, true) => Some(Profile::OddPipeline),
        (true, false) => Some(Profile::EvenPipeline),
        (false, true) => Some(Profile::Multi),
        (false, false) => None,
    }
}

fn verify(graph: &Path, labelling: &Path, profile: Option<ProfileArg>) -> Result<i32> {
    let g = parse_graph(&fs::read_to_string(graph)?)?;
    let lab = parse_labelling(&g, &fs::read_to_string(labelling)?)?;
    let profile = match profile {
        Some(ProfileArg::Odd) => Some(Profile::OddPipeline),
        Some(ProfileArg::Even) => Some(Profile::EvenPipeline),
        Some(ProfileArg::Multi) => Some(Profile::Multi),
        None => auto_profile(&g),
    };
    let antimagic = match check_antimagic(&g, &lab) {
        Ok(rep) if rep.antimagic => {
            println!("PASS ANTIMAGIC");
            true
        }
        Ok(rep) => {
            let (a, b, s) = rep.collisions[0];
            let more = rep.collisions.len() - 1;
            if more > 0 {
                println!("FAIL ANTIMAGIC {a} and {b} share sum {s} (+{more} more)");
            } else {
                println!("FAIL ANTIMAGIC {a} and {b} share sum {s}");
            }
            false
        }
        Err(e @ (Error::NotBijective { .. } | Error::PartialLabelling { .. })) => {
            println!("FAIL BIJECTION {e}");
            return Ok(1);
        }
        Err(e) => return Err(e),
    };
    let structural = match profile {
        Some(p) => {
            let report = check_structural_invariants(&g, &lab, None, p)?;
            print!("{report}");
            report.ok()
        }
        None => {
            println!("PASS STRUCTURAL skipped: disconnected even-degree graph has no construction profile");
            true
        }
    };
    Ok(if antimagic && structural { 0 } else { 1 })
}

fn oracle(input: &Path, max_edges: Option<usize>, count: bool) -> Result<i32> {
    let g = parse_graph(&fs::read_to_string(input)?)?;
    let res = brute_force_search(&g, max_edges, count)?;
    println!("exists={}", res.exists);
    if let Some(c) = res.count {
        println!("count={c}");
    }
    if let Some(w) = &res.witness {
        let rendered: Vec<String> = w.iter().map(|l| l.to_string()).collect();
        println!("witness={}", rendered.join(","));
    }
    println!("states={}", res.states_explored);
    Ok(0)
}

fn info(input: &Path, root: Option<usize>) -> Result<i32> {
    let g = parse_graph(&fs::read_to_string(input)?)?;
    let comps = graph::connected_components(&g);
    println!(
        "k={} x={} y={} m={} components={}",
        g.k(),
        g.x_count(),
        g.y_count(),
        g.m(),
        comps.len()
    );
    if comps.len() > 1 && root.is_some() {
        return Err(Error::Usage(
            "--root applies to connected graphs; components pick their own roots".into(),
        ));
    }
    for (ci, comp) in comps.iter().enumerate() {
        let cg = &comp.graph;
        let local_root = match root {
            Some(r) => {
                root_ref(&g, Some(r))?;
                VertexRef::x(r)
            }
            None => VertexRef::x(0),
        };
        let lay = build_layering(cg, local_root)?;
        let types = classify_types(cg, &lay);
        let kk2 = cg.x_count() == 2;
        println!(
            "component {ci}: x={} y={} m={} root=x{} depth={} layers={} kk2={}",
            cg.x_count(),
            cg.y_count(),
            cg.m(),
            comp.x_ids[local_root.index],
            lay.depth(),
            lay.layer_count(),
            kk2
        );
        for i in (1..=lay.layer_count()).rev() {
            let f = build_f(cg, &lay, &types, i, None)?;
            let (a, b) = lay.intervals[i - 1];
            println!(
                "  layer {i}: {} edges, interval [{a},{b}], f={}",
                lay.layers[i - 1].len(),
                f.len()
            );
        }
    }
    Ok(0)
}

fn export_dot(graph: &Path, labelling: Option<&Path>) -> Result<i32> {
    let g = parse_graph(&fs::read_to_string(graph)?)?;
    let lab = match labelling {
        Some(p) => Some(parse_labelling(&g, &fs::read_to_string(p)?)?),
        None => None,
    };
    print!("{}", dot::export_dot(&g, lab.as_ref()));
    Ok(0)
}

fn stress(
    k: usize,
    trials: usize,
    nx_min: Option<usize>,
    nx_max: Option<usize>,
    seed: u64,
    pipeline: PipelineArg,
) -> Result<i32> {
    if trials == 0 {
        return Err(Error::Usage("need at least one trial".into()));
    }
    let odd_k = k % 2 == 1;
    match pipeline {
        PipelineArg::Odd if !odd_k => {
            return Err(Error::Usage(format!("pipeline odd needs odd k, got {k}")))
        }
        PipelineArg::Even if odd_k => {
            return Err(Error::Usage(format!("pipeline even needs even k, got {k}")))
        }
        PipelineArg::Multi if !odd_k => {
            return Err(Error::Usage(
                "pipeline multi labels disconnected graphs, which need odd k".into(),
            ))
        }
        _ => {}
    }
    let lo = nx_min.unwrap_or(4);
    let hi = nx_max.unwrap_or(24);
    let sizes: Vec<usize> = (lo..=hi.max(lo))
        .filter(|&n| n >= 2 && (!odd_k || n % 2 == 0))
        .collect();
    if sizes.is_empty() {
        return Err(Error::Usage(format!(
            "no valid X-side sizes in [{lo}, {hi}] for k={k}"
        )));
    }

    let mut pass = 0usize;
    let mut fail = 0usize;
    let mut gen_errors = 0usize;
    let mut first_failure: Option<u64> = None;
    for t in 0..trials {
        let tseed = seed.wrapping_add((t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut rng = ChaCha8Rng::seed_from_u64(tseed);
        let built = if pipeline == PipelineArg::Multi {
            let n = rng.gen_range(2..=4usize);
            let configs: Vec<GenConfig> = (0..n)
                .map(|i| {
                    let nx = sizes[rng.gen_range(0..sizes.len())];
                    GenConfig::new(k, nx, tseed.wrapping_add(1 + i as u64))
                })
                .collect();
            gen_multi(&configs)
        } else {
            let nx = sizes[rng.gen_range(0..sizes.len())];
            gen_connected(&GenConfig::new(k, nx, tseed))
        };
        let g = match built {
            Ok(g) => g,
            Err(_) => {
                gen_errors += 1;
                continue;
            }
        };
        let outcome = (|| -> Result<bool> {
            let (lab, prof) = match pipeline {
                PipelineArg::Multi => (label_disconnected_odd(&g)?.labelling, Profile::Multi),
                _ if odd_k => (odd::label_connected_odd(&g, None)?, Profile::OddPipeline),
                _ => (even::label_connected_even(&g, None)?, Profile::EvenPipeline),
            };
            let ok = check_antimagic(&g, &lab)?.antimagic
                && check_structural_invariants(&g, &lab, None, prof)?.ok();
            Ok(ok)
        })();
        match outcome {
            Ok(true) => pass += 1,
            _ => {
                fail += 1;
                first_failure.get_or_insert(tseed);
            }
        }
    }
    println!("trials={trials} pass={pass} fail={fail} generator_errors={gen_errors}");
    if let Some(s) = first_failure {
        println!("first_failure_seed={s}");
    }
    Ok(if fail == 0 { 0 } else { 1 })
}

/// Write via a sibling temp file and rename, so interrupted runs never
/// leave a partial artifact at the target path.
fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let mut tmp_name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?
        .to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_declares_all_verbs() {
        use clap::CommandFactory;
        let cmd = Cli::command();
        let verbs: Vec<&str> = cmd.get_subcommands().map(|c| c.get_name()).collect();
        assert_eq!(
            verbs,
            vec!["generate", "label", "verify", "oracle", "info", "export-dot", "stress"]
        );
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = std::env::temp_dir().join(format!("antimagic-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let target = dir.join("out.bgl");
        write_atomic(&target, "first").unwrap();
        write_atomic(&target, "second").unwrap();
        assert_eq!(fs::read_to_string(&target).unwrap(), "second");
        assert!(!target.with_file_name("out.bgl.tmp").exists());
        fs::remove_dir_all(&dir).unwrap();
    }
}
