//! `geodecity` command-line tool. Exit codes: 0 when the checked property
//! holds, 1 when it fails (a witness is printed), 2 on malformed input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use geodecity::cyclespace::{cycle_space_report, Cycle};
use geodecity::geodesic::{is_fully_geodesic, is_k_geodesic_with_cap, GeodesicVerdict, DEFAULT_SUBSET_CAP};
use geodecity::harness::{instance_digest, run_suite, RunReport, Suite, SuiteParams};
use geodecity::shortcut::{search_shortcut_trees, verify_sct, SearchConfig, ShortcutTree};
use geodecity::steiner::{steiner_tree_with_cap, DEFAULT_TERMINAL_CAP};
use geodecity::{Error, SubgraphRef, VertexSet, WeightedMultigraph};
use serde_json::{json, Value};

/// `println!` that ignores a closed stdout (e.g. when piped into `head`).
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "geodecity", version, about = "Exact Steiner geodecity checks for weighted multigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steiner distance and a Steiner tree for a set of terminals.
    Steiner {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated vertex names.
        #[arg(long)]
        terminals: String,
        #[arg(long, default_value_t = DEFAULT_TERMINAL_CAP)]
        cap: usize,
    },
    /// Decide whether a subgraph is k-geodesic (or fully geodesic).
    GeodesicCheck {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated edge ids of the subgraph.
        #[arg(long, default_value = "")]
        subgraph_edges: String,
        /// Extra (possibly isolated) subgraph vertices, comma-separated names.
        #[arg(long, default_value = "")]
        subgraph_vertices: String,
        #[arg(long, required_unless_present = "full")]
        k: Option<usize>,
        /// Check every k.
        #[arg(long)]
        full: bool,
        /// Refuse queries with more terminal sets than this.
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        subset_cap: u64,
    },
    /// Check the shortcut-tree conditions for an instance file.
    SctVerify {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Search for shortcut trees over all tree shapes and leaf placements.
    SctSearch {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        min_leaves: usize,
        #[arg(long, default_value_t = 6)]
        max_leaves: usize,
        /// Host length functions to sample; 0 keeps the graph's lengths.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the property suites.
    PaperVerify {
        #[arg(long, value_enum, conflicts_with = "family")]
        suite: Option<SuiteArg>,
        /// A single construction family, at the given --k.
        #[arg(long, value_enum, requires = "k")]
        family: Option<Family>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Instances or host samples per randomized check.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 7)]
        max_leaves: usize,
        /// Extra instance for the cycle-space suite.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Fully geodesic cycles, non-2-sum cycles and their ranks.
    CycleSpace {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Toolbox,
    Trees,
    Cycles,
    Hierarchy,
    K22k,
    Cyclespace,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Hierarchy,
    K22k,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<WeightedMultigraph, Error> {
    WeightedMultigraph::from_json_str(&read(path)?)
}

fn names(g: &WeightedMultigraph, list: &str) -> Result<VertexSet, Error> {
    g.vertex_ids(list.split(',').map(str::trim).filter(|s| !s.is_empty()))
}

fn edge_ids(list: &str) -> Result<Vec<usize>, Error> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad edge id {s:?}"))))
        .collect()
}

fn print(v: &Value) {
    say!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

/// Runs one command; `Ok(true)` when the checked property holds.
fn run(command: Command) -> Result<bool, Error> {
    match command {
        Command::Steiner { graph, terminals, cap } => {
            let g = read_graph(&graph)?;
            let terminals = names(&g, &terminals)?;
            let r = steiner_tree_with_cap(&g, &terminals, cap)?;
            print(&json!({
                "distance": r.distance,
                "tree_edges": r.tree.map(|t| t.edges),
            }));
            Ok(true)
        }
        Command::GeodesicCheck { graph, subgraph_edges, subgraph_vertices, k, full, subset_cap } => {
            let g = read_graph(&graph)?;
            let edges = edge_ids(&subgraph_edges)?;
            if let Some(&e) = edges.iter().find(|&&e| e >= g.edge_count()) {
                return Err(Error::UnknownEdge(e));
            }
            let mut vertices = names(&g, &subgraph_vertices)?;
            for &e in &edges {
                vertices.insert(g.edge(e).u);
                vertices.insert(g.edge(e).v);
            }
            let h = SubgraphRef::new(&g, vertices, edges.into_iter().collect())?;
            let verdict = if full {
                is_fully_geodesic(&g, &h)?
            } else {
                is_k_geodesic_with_cap(&g, &h, k.expect("clap requires k without --full"), subset_cap)?
            };
            print(&verdict_json(&g, &verdict));
            Ok(verdict.holds)
        }
        Command::SctVerify { instance } => {
            let st = ShortcutTree::from_json_str(&read(&instance)?)?;
            let report = verify_sct(&st)?;
            print(&serde_json::to_value(&report).expect("reports serialize"));
            Ok(report.is_valid())
        }
        Command::SctSearch { graph, min_leaves, max_leaves, samples, seed } => {
            let g = read_graph(&graph)?;
            let config = SearchConfig { min_leaves, max_leaves, samples, seed, ..SearchConfig::default() };
            let out = search_shortcut_trees(&g, &config)?;
            let found: Vec<Value> = out
                .found
                .iter()
                .map(|st| {
                    let report = verify_sct(st)?;
                    Ok(json!({ "shortcut_tree": st.to_json(), "report": report }))
                })
                .collect::<Result<_, Error>>()?;
            print(&json!({
                "host_samples": out.hosts.len(),
                "lp_solves": out.solves,
                "found_count": found.len(),
                "found": found,
            }));
            Ok(found.is_empty())
        }
        Command::PaperVerify { suite, family, k, seed, samples, max_leaves, graph, json } => {
            let graph_text = graph.as_deref().map(read).transpose()?;
            let graph = match &graph_text {
                Some(text) => {
                    let g = WeightedMultigraph::from_json_str(text)?;
                    if g.vertex_count() == 0 {
                        return Err(Error::InvalidGraph("the graph has no vertices".into()));
                    }
                    Some(g)
                }
                None => None,
            };
            let suites = match (family, suite) {
                (Some(Family::Hierarchy), _) => vec![Suite::Hierarchy],
                (Some(Family::K22k), _) => vec![Suite::K22k],
                (None, None | Some(SuiteArg::All)) => Suite::ALL.to_vec(),
                (None, Some(s)) => vec![match s {
                    SuiteArg::Toolbox => Suite::Toolbox,
                    SuiteArg::Trees => Suite::Trees,
                    SuiteArg::Cycles => Suite::Cycles,
                    SuiteArg::Hierarchy => Suite::Hierarchy,
                    SuiteArg::K22k => Suite::K22k,
                    SuiteArg::Cyclespace => Suite::CycleSpace,
                    SuiteArg::All => unreachable!("handled above"),
                }],
            };
            let params = SuiteParams { seed, samples, max_leaves, k, graph };
            let started = Instant::now();
            let reports = suites.iter().map(|&s| run_suite(s, &params)).collect::<Result<Vec<_>, _>>()?;
            let suite_names: Vec<&str> = suites.iter().map(|s| s.name()).collect();
            let digest = instance_digest(&[
                "paper-verify".to_string(),
                suite_names.join(","),
                seed.to_string(),
                format!("{samples:?}"),
                max_leaves.to_string(),
                format!("{k:?}"),
                graph_text.unwrap_or_default(),
            ]);
            let report = RunReport::new("paper-verify", seed, digest, reports);
            if json {
                print(&serde_json::to_value(&report).expect("reports serialize"));
            } else {
                for s in &report.suites {
                    for c in &s.checks {
                        say!("{} {}/{}", if c.passed { "PASS" } else { "FAIL" }, s.suite.name(), c.name);
                        if !c.passed {
                            say!("  {}", c.details);
                        }
                    }
                }
                let x = &report.extraction_soundness;
                say!(
                    "{} extraction_soundness ({} extracted, {} invalid)",
                    if x.passed { "PASS" } else { "FAIL" },
                    x.extractions.checked,
                    x.extractions.invalid
                );
                say!("seed {} digest {}", report.seed, report.instance_digest);
            }
            eprintln!("wall time {:.2}s", started.elapsed().as_secs_f64());
            Ok(report.passed)
        }
        Command::CycleSpace { graph, json } => {
            let g = read_graph(&graph)?;
            let r = cycle_space_report(&g)?;
            let listing = |cs: &[Cycle]| -> Vec<Value> {
                cs.iter()
                    .map(|c| {
                        json!({
                            "vertices": c.vertices.iter().map(|&v| g.name(v)).collect::<Vec<_>>(),
                            "edges": c.edges,
                            "length": c.length,
                        })
                    })
                    .collect()
            };
            if json {
                print(&json!({
                    "cycles": r.cycle_count,
                    "fully_geodesic": listing(&r.fully_geodesic),
                    "non_2sum": listing(&r.non_2sum),
                    "fully_geodesic_span": r.fully_geodesic_span,
                    "non_2sum_span": r.non_2sum_span,
                    "two_geodesic_span": r.two_geodesic_span,
                    "non_2sum_all_fully_geodesic": r.non_2sum_all_fully_geodesic,
                    "holds": r.holds(),
                }));
            } else {
                let show = |c: &Cycle| {
                    let vs: Vec<&str> = c.vertices.iter().map(|&v| g.name(v)).collect();
                    format!("  {} (length {})", vs.join("-"), c.length)
                };
                say!("cycles: {}", r.cycle_count);
                say!("fully geodesic cycles: {}", r.fully_geodesic.len());
                r.fully_geodesic.iter().for_each(|c| say!("{}", show(c)));
                say!("cycles not a sum of shorter cycles: {}", r.non_2sum.len());
                r.non_2sum.iter().for_each(|c| say!("{}", show(c)));
                let s = r.fully_geodesic_span;
                say!("rank {} of dimension {}", s.rank, s.cycle_space_dimension);
                say!("verdict: {}", if r.holds() { "spans" } else { "fails" });
            }
            Ok(r.holds())
        }
    }
}

fn verdict_json(g: &WeightedMultigraph, v: &GeodesicVerdict) -> Value {
    let names = |s: &VertexSet| s.iter().map(|&x| g.name(x).to_string()).collect::<Vec<_>>();
    json!({
        "holds": v.holds,
        "k": v.k,
        "subsets_checked": v.subsets_checked,
        "witness": v.witness.as_ref().map(names),
        "sd_g": v.witness_gap.map(|(a, _)| a.to_string()),
        "sd_h": v.witness_gap.map(|(_, b)| b.to_string()),
        "witness_tree_edges": v.witness_tree,
        "shortcut_tree": v.extracted.as_ref().map(ShortcutTree::to_json),
    })
}
