//! `hypergh`: exact and estimated distances, invariant lower bounds, Dowker
//! persistence, powerset kernels, convexity checks, and graphifications for
//! weighted hypernetworks, reported as JSON.
//!
//! Exit codes: 0 success, 1 usage error, 2 input error, 3 budget exceeded.

mod io;
mod report;
mod svg;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use hypergh::dowker::{bottleneck, dowker_bound, dowker_filtration, persistence, Axis, Barcode};
use hypergh::graphify::{
    bipartite, clique_expansion, dendrogram, edge_affinity, line_graph, node_affinity,
    slhc_ultrametric, Dendrogram, GraphifyError,
};
use hypergh::invariants::{lower_bounds, summary};
use hypergh::matrix::Matrix;
use hypergh::metrics::{
    decide_dn_leq, exact_dh_with, exact_dn_with, is_weakly_isomorphic, upper_bound_dh,
    MetricsError, SearchConfig,
};
use hypergh::model::Network;
use hypergh::transport::{hausdorff_hyper, hausdorff_network, nncc_check, TransportError};
use io::{file_value, load, IoError, Loaded};
use report::{digest, Report};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "hypergh",
    version,
    about = "Distances, bounds, persistence, and graphifications for weighted hypernetworks"
)]
struct Cli {
    /// Write the JSON report to this path instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Enumeration budget for the exact searches (default 1e8); the
    /// HYPERGH_BUDGET environment variable changes the default.
    #[arg(long, global = true, value_name = "N")]
    budget: Option<f64>,

    /// Slack added to every weight comparison inside the decision searches.
    #[arg(long, global = true, value_name = "EPS")]
    tolerance: Option<f64>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Distance between two kernels (exact unless --upper).
    Dist {
        /// Run the exact search (the default; kept for explicit scripts).
        #[arg(long)]
        exact: bool,
        /// Alternation upper estimate instead; hypernetwork inputs only.
        #[arg(long, conflicts_with = "exact")]
        upper: bool,
        /// Random restarts for the estimate.
        #[arg(long, default_value_t = 8, value_name = "N")]
        restarts: usize,
        /// Seed for the estimate's restarts.
        #[arg(long, default_value_t = 0, value_name = "S")]
        seed: u64,
        a: PathBuf,
        b: PathBuf,
    },
    /// Decide whether two kernels are weakly isomorphic (distance zero).
    Weakiso { a: PathBuf, b: PathBuf },
    /// Turn a kernel into a network, a bipartite form, or an ultrametric.
    Graphify {
        #[arg(value_enum)]
        mode: GraphifyMode,
        input: PathBuf,
        /// Dendrogram drawing (node-affinity, edge-affinity, and slhc modes).
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        /// Write the resulting kernel as a loadable file (network modes).
        #[arg(long, value_name = "PATH")]
        save: Option<PathBuf>,
    },
    /// Capacity, radius, and spectrum summaries of one kernel.
    Invariants { input: PathBuf },
    /// Every invariant lower bound for a pair of kernels.
    Bounds { a: PathBuf, b: PathBuf },
    /// Dowker filtrations, barcodes, and barcode distances.
    #[command(subcommand)]
    Dowker(DowkerCmd),
    /// Powerset kernel under the two-sided Hausdorff value.
    Haus {
        input: PathBuf,
        /// Per-axis size cap for the subset expansion.
        #[arg(long, default_value_t = hypergh::transport::DEFAULT_SUBSET_CAP, value_name = "N")]
        cap: usize,
        /// Write the resulting kernel as a loadable file.
        #[arg(long, value_name = "PATH")]
        save: Option<PathBuf>,
    },
    /// Check convexity of interpolated node profiles.
    Nncc {
        input: PathBuf,
        /// Realization tolerance for interpolated profiles.
        #[arg(long, default_value_t = 0.0, value_name = "EPS")]
        tol: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphifyMode {
    Bipartite,
    Clique,
    Line,
    NodeAffinity,
    EdgeAffinity,
    Slhc,
}

#[derive(Subcommand)]
enum DowkerCmd {
    /// The filtered complex on one axis.
    Filtration {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = AxisArg::Node)]
        axis: AxisArg,
        /// Largest simplex dimension retained.
        #[arg(long, default_value_t = 2, value_name = "D")]
        max_dim: usize,
    },
    /// Persistence barcode in degrees 0 through max-dim − 1.
    Barcode {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = AxisArg::Node)]
        axis: AxisArg,
        #[arg(long, default_value_t = 2, value_name = "D")]
        max_dim: usize,
        /// Barcode drawing.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Bottleneck distance between two barcodes in one degree.
    Bottleneck {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = AxisArg::Node)]
        axis: AxisArg,
        /// Homology degree to compare.
        #[arg(long, default_value_t = 0, value_name = "K")]
        k: usize,
    },
    /// Stability estimate: largest bottleneck distance over degrees 0..=k.
    Bound {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 0, value_name = "K")]
        k: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AxisArg {
    Node,
    Edge,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Axis {
        match a {
            AxisArg::Node => Axis::Node,
            AxisArg::Edge => Axis::Edge,
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(String),
    Budget(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Budget(m) => f.write_str(m),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        match e {
            MetricsError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            MetricsError::Model(_) => CliError::Input(e.to_string()),
        }
    }
}

impl From<TransportError> for CliError {
    fn from(e: TransportError) -> Self {
        match e {
            TransportError::CapExceeded { .. } | TransportError::OutputTooLarge { .. } => {
                CliError::Budget(e.to_string())
            }
            TransportError::InvalidTolerance(_) => CliError::Usage(e.to_string()),
            TransportError::Model(_) => CliError::Input(e.to_string()),
            TransportError::Metrics(m) => m.into(),
        }
    }
}

impl From<GraphifyError> for CliError {
    fn from(e: GraphifyError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let started = Instant::now();
    let cfg = search_config(cli)?;
    let (paths, results) = execute(&cli.cmd, &cfg)?;

    let mut inputs = Vec::new();
    for p in &paths {
        inputs.push(digest(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?);
    }
    let report = Report {
        command: std::env::args().skip(1).collect(),
        inputs,
        results,
        timing_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, report.render())
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{}", report.render());
            Ok(())
        }
    }
}

fn search_config(cli: &Cli) -> Result<SearchConfig, CliError> {
    let mut cfg = SearchConfig::default();
    if let Some(b) = cli.budget {
        cfg.budget = b;
    } else if let Ok(text) = std::env::var("HYPERGH_BUDGET") {
        cfg.budget = text
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("HYPERGH_BUDGET is not a number: {text:?}")))?;
    }
    if !cfg.budget.is_finite() || cfg.budget <= 0.0 {
        return Err(CliError::Usage("the budget must be positive and finite".into()));
    }
    if let Some(t) = cli.tolerance {
        if !t.is_finite() || t < 0.0 {
            return Err(CliError::Usage("the tolerance must be nonnegative and finite".into()));
        }
        cfg.tolerance = t;
    }
    Ok(cfg)
}

fn execute(cmd: &Cmd, cfg: &SearchConfig) -> Result<(Vec<PathBuf>, Value), CliError> {
    match cmd {
        Cmd::Dist { exact: _, upper, restarts, seed, a, b } => {
            let (la, lb) = (load(a)?, load(b)?);
            let results = if *upper {
                let (Loaded::Hyper(ha), Loaded::Hyper(hb)) = (&la, &lb) else {
                    return Err(CliError::Usage("--upper expects two hypernetwork inputs".into()));
                };
                let est = upper_bound_dh(ha, hb, *restarts, *seed);
                json!({"metric": "hypernetwork", "mode": "upper", "distance": est})
            } else if let (Loaded::Net(na), Loaded::Net(nb)) = (&la, &lb) {
                let r = exact_dn_with(na, nb, cfg)?;
                json!({"metric": "network", "mode": "exact", "distance": r})
            } else {
                let r = exact_dh_with(&la.embedded(), &lb.embedded(), cfg)?;
                json!({"metric": "hypernetwork", "mode": "exact", "distance": r})
            };
            Ok((vec![a.clone(), b.clone()], results))
        }

        Cmd::Weakiso { a, b } => {
            let (la, lb) = (load(a)?, load(b)?);
            let results = if let (Loaded::Net(na), Loaded::Net(nb)) = (&la, &lb) {
                let w = decide_dn_leq(na, nb, 0.0, cfg)?;
                json!({
                    "metric": "network",
                    "weakly_isomorphic": w.is_some(),
                    "witness": w.map(|(phi, phi_back)| json!({"phi": phi, "phi_back": phi_back})),
                })
            } else {
                let w = is_weakly_isomorphic(&la.embedded(), &lb.embedded(), cfg)?;
                json!({
                    "metric": "hypernetwork",
                    "weakly_isomorphic": w.is_some(),
                    "witness": w,
                })
            };
            Ok((vec![a.clone(), b.clone()], results))
        }

        Cmd::Graphify { mode, input, svg: svg_path, save: save_path } => {
            let l = load(input)?;
            let h = l.embedded();
            let (label, out, dendro): (&str, Option<Loaded>, Option<Dendrogram>) = match mode {
                GraphifyMode::Bipartite => ("bipartite", None, None),
                GraphifyMode::Clique => ("clique", Some(Loaded::Net(clique_expansion(&h))), None),
                GraphifyMode::Line => ("line", Some(Loaded::Net(line_graph(&h))), None),
                GraphifyMode::NodeAffinity => {
                    let net = node_affinity(&h);
                    let d = dendrogram(&net);
                    ("node-affinity", Some(Loaded::Net(net)), Some(d))
                }
                GraphifyMode::EdgeAffinity => {
                    let net = edge_affinity(&h);
                    let d = dendrogram(&net);
                    ("edge-affinity", Some(Loaded::Net(net)), Some(d))
                }
                GraphifyMode::Slhc => {
                    let Loaded::Net(n) = &l else {
                        return Err(CliError::Input(
                            "slhc expects a network kernel (mark the file `\"network\": true`)"
                                .into(),
                        ));
                    };
                    let u = slhc_ultrametric(n)?;
                    let d = ascending_dendrogram(&u);
                    ("slhc", Some(Loaded::Net(u)), Some(d))
                }
            };
            let mut results = json!({"mode": label});
            match &out {
                Some(out) => results["output"] = file_value(out),
                None => {
                    results["bipartite"] =
                        serde_json::to_value(bipartite(&h)).expect("bipartite forms serialize");
                }
            }
            if let Some(d) = &dendro {
                results["dendrogram"] = serde_json::to_value(d).expect("dendrograms serialize");
            }
            if let Some(path) = svg_path {
                let Some(d) = &dendro else {
                    return Err(CliError::Usage(
                        "--svg draws dendrograms; use node-affinity, edge-affinity, or slhc".into(),
                    ));
                };
                write_file(path, &svg::dendrogram_svg(d))?;
                results["svg"] = json!(path.display().to_string());
            }
            if let Some(path) = save_path {
                let Some(out) = &out else {
                    return Err(CliError::Usage(
                        "--save writes kernels; the bipartite form lives in the report".into(),
                    ));
                };
                io::save(out, path)?;
                results["save"] = json!(path.display().to_string());
            }
            Ok((vec![input.clone()], results))
        }

        Cmd::Invariants { input } => {
            let l = load(input)?;
            Ok((vec![input.clone()], json!({"invariants": summary(&l.embedded())})))
        }

        Cmd::Bounds { a, b } => {
            let (la, lb) = (load(a)?, load(b)?);
            let report = lower_bounds(&la.embedded(), &lb.embedded());
            Ok((vec![a.clone(), b.clone()], json!({"bounds": report})))
        }

        Cmd::Dowker(DowkerCmd::Filtration { input, axis, max_dim }) => {
            let h = load(input)?.embedded();
            let f = dowker_filtration(&h, (*axis).into(), *max_dim);
            Ok((vec![input.clone()], json!({"filtration": f})))
        }

        Cmd::Dowker(DowkerCmd::Barcode { input, axis, max_dim, svg: svg_path }) => {
            if *max_dim == 0 {
                return Err(CliError::Usage(
                    "--max-dim must be at least 1 (degree k needs simplices of dimension k + 1)"
                        .into(),
                ));
            }
            let h = load(input)?.embedded();
            let bc = persistence(&dowker_filtration(&h, (*axis).into(), *max_dim), *max_dim - 1);
            let mut results = json!({"barcode": barcode_value(&bc)});
            if let Some(path) = svg_path {
                let s = summary(&h);
                let floor = s.spectrum.first().copied().unwrap_or(0.0);
                write_file(path, &svg::barcode_svg(&bc, s.capacity, floor))?;
                results["svg"] = json!(path.display().to_string());
            }
            Ok((vec![input.clone()], results))
        }

        Cmd::Dowker(DowkerCmd::Bottleneck { a, b, axis, k }) => {
            let (ha, hb) = (load(a)?.embedded(), load(b)?.embedded());
            let pa = persistence(&dowker_filtration(&ha, (*axis).into(), k + 1), *k);
            let pb = persistence(&dowker_filtration(&hb, (*axis).into(), k + 1), *k);
            let v = bottleneck(&pa, &pb, *k);
            let results = json!({
                "degree": k,
                "value": if v.is_finite() { json!(v) } else { Value::Null },
                "finite": v.is_finite(),
            });
            Ok((vec![a.clone(), b.clone()], results))
        }

        Cmd::Dowker(DowkerCmd::Bound { a, b, k }) => {
            let (ha, hb) = (load(a)?.embedded(), load(b)?.embedded());
            let v = dowker_bound(&ha, &hb, *k);
            let results = json!({
                "k_max": k,
                "value": if v.is_finite() { json!(v) } else { Value::Null },
                "finite": v.is_finite(),
            });
            Ok((vec![a.clone(), b.clone()], results))
        }

        Cmd::Haus { input, cap, save: save_path } => {
            let l = load(input)?;
            let out = match &l {
                Loaded::Net(n) => Loaded::Net(hausdorff_network(n, *cap)?),
                Loaded::Hyper(h) => Loaded::Hyper(hausdorff_hyper(h, *cap)?),
            };
            let mut results = json!({
                "cap": cap,
                "network": out.is_network(),
                "output": file_value(&out),
            });
            if let Some(path) = save_path {
                io::save(&out, path)?;
                results["save"] = json!(path.display().to_string());
            }
            Ok((vec![input.clone()], results))
        }

        Cmd::Nncc { input, tol } => {
            let h = load(input)?.embedded();
            let verdict = nncc_check(&h, *tol)?;
            Ok((vec![input.clone()], json!({"tol": tol, "nncc": verdict})))
        }
    }
}

/// Bars as JSON-safe objects (`death: null` for essential classes, whose
/// in-memory death is −∞), grouped by degree.
fn barcode_value(bc: &Barcode) -> Value {
    let degrees: Vec<Value> = (0..=bc.max_degree())
        .map(|k| {
            bc.degree(k)
                .iter()
                .map(|bar| {
                    json!({
                        "birth": bar.birth,
                        "death": if bar.is_essential() { Value::Null } else { json!(bar.death) },
                        "essential": bar.is_essential(),
                    })
                })
                .collect()
        })
        .collect();
    json!(degrees)
}

/// Single-linkage dendrograms merge as the threshold rises, which is the
/// descending-threshold construction applied to the negated kernel.
fn ascending_dendrogram(u: &Network) -> Dendrogram {
    let n = u.n_nodes();
    let neg = Network::new(u.nodes().to_vec(), Matrix::build(n, n, |i, j| -u.weight(i, j)))
        .expect("negation preserves the shape");
    let mut d = dendrogram(&neg);
    for h in &mut d.leaf_heights {
        *h = -*h;
    }
    for m in &mut d.merges {
        m.height = -m.height;
    }
    d
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}
