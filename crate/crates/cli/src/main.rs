use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use orichrom::experiments::{self, mnm_edges, Experiment, ExperimentConfig, ExperimentError, ThresholdModel};
use orichrom::formats::{self, FormatError};
use orichrom::output::{check_output_path, write_outcome, OutputFormat};
use orichrom_core::birkhoff::{eta_min_check, maximize_gamma, AscentOptions};
use orichrom_core::bounds::{bounds_report, check_dr_order_doubling};
use orichrom_core::colouring::{greedy_partial_colouring, oriented_chromatic_number_with, window_extension_colouring, Chi, ChiOptions};
use orichrom_core::moments::{self, brute, MomentValue};
use orichrom_core::product::SrgParams;
use orichrom_core::randmodels::{gen_config_oriented, gen_gnd_oriented, gen_gnp_oriented, gen_mnm};
use orichrom_core::rng::TrialSeed;
use orichrom_core::{ProductGraph, Tournament};
use serde::Serialize;
use serde_json::json;

/// Largest `n` accepted by the brute-force moment oracle.
const ORACLE_MAX_N: usize = 9;

#[derive(Parser)]
#[command(name = "orichrom", version, about = "Oriented colourings of random digraphs")]
struct Cli {
    /// Master seed; the ORICHROM_SEED environment variable takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random oriented graph.
    Gen(GenArgs),
    /// Exact oriented chromatic number of a graph file.
    Chi(ChiArgs),
    /// Double regularity, triangle census and signed square of a tournament.
    VerifyTournament(TournamentArg),
    /// Strong regularity and spectrum of the Kronecker square.
    VerifyProduct(TournamentArg),
    /// Threshold degrees and the resulting chromatic interval for `d`.
    Bounds(BoundsArgs),
    /// Multistart maximization over the Birkhoff polytope.
    Optimize(OptimizeArgs),
    /// First and second moments of the number of equitable colourings.
    Moments(MomentsArgs),
    /// Monte Carlo experiments.
    Mc(McArgs),
    /// Window extension colouring of one random regular graph.
    Window(WindowArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenModel {
    Mnm,
    Config,
    Gnd,
    Gnp,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Text,
    Json,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: GenModel,
    #[arg(long)]
    n: usize,
    /// Edge count for `mnm`.
    #[arg(long)]
    m: Option<usize>,
    /// Degree for `config` and `gnd`.
    #[arg(long)]
    d: Option<usize>,
    /// Edge probability for `gnp`.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    trial: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: GraphFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ChiArgs {
    /// Graph in text or JSON format.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 16)]
    cap: usize,
    #[arg(long)]
    node_limit: Option<u64>,
}

#[derive(Args)]
struct TournamentArg {
    /// `paley:Q`, `rot:K`, `c3`, `t3`, `t4`, `t5` or `file:PATH`.
    #[arg(long)]
    tournament: String,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    d: f64,
    /// Also check that a doubly regular order lies in `[n, 2n]` for all
    /// `n` up to this limit.
    #[arg(long)]
    doubling_limit: Option<u64>,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long, default_value = "paley:7")]
    tournament: String,
    #[arg(long)]
    d: f64,
    #[arg(long, default_value_t = 200)]
    starts: usize,
    /// Also locate the minimum of eta for this `k`.
    #[arg(long)]
    eta: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum MomentModel {
    Mnm,
    Cnd,
}

#[derive(Args)]
struct MomentsArgs {
    #[arg(long, value_enum)]
    model: MomentModel,
    #[arg(long)]
    n: usize,
    #[arg(long, required_if_eq("model", "mnm"))]
    m: Option<usize>,
    #[arg(long, required_if_eq("model", "cnd"))]
    d: Option<usize>,
    #[arg(long)]
    k: usize,
    /// Defaults to the Paley tournament of order `k`.
    #[arg(long)]
    tournament: Option<String>,
    #[arg(long, group = "mode")]
    exact: bool,
    #[arg(long, group = "mode")]
    asymptotic: bool,
    #[arg(long, group = "mode")]
    oracle: bool,
    #[arg(long, default_value_t = moments::DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct McArgs {
    #[command(subcommand)]
    experiment: McExperiment,
    #[arg(long, global = true, default_value_t = 1000)]
    trials: u64,
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Output file; standard output if omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Record per-trial wall-clock time (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum McExperiment {
    /// chi of uniform 2-regular oriented graphs.
    TwoRegular {
        #[arg(long)]
        n: usize,
    },
    /// chi of G(n, d/n) below the giant component.
    SmallD {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: f64,
    },
    /// Whether G(n, p) is an oriented clique.
    Clique {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        omega: f64,
    },
    /// k-colourability (or T-colourability) of C(n, d) or G(n, d).
    Threshold {
        #[arg(long, value_enum)]
        model: ThresholdModel,
        #[arg(long, num_args = 1.., required = true)]
        n: Vec<usize>,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        tournament: Option<String>,
    },
    /// Fraction of simple configuration-model draws.
    SimpleConfig {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Fraction of simple M(n, m) draws.
    SimpleMnm {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "c")]
        m: Option<usize>,
        /// Uses `m = floor(c n + n^(2/3))`.
        #[arg(long)]
        c: Option<f64>,
    },
    /// Window extension colouring of G(n, d).
    Window {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value = "paley:7")]
        tournament: String,
    },
}

#[derive(Args)]
struct WindowArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value = "paley:7")]
    tournament: String,
    #[arg(long, default_value_t = 0)]
    trial: u64,
}

/// Errors in the invocation rather than in the computation; exit status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct UsageError(String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn is_usage(e: &anyhow::Error) -> bool {
    e.is::<UsageError>()
        || e.is::<FormatError>()
        || matches!(e.downcast_ref::<ExperimentError>(), Some(ExperimentError::Config(_) | ExperimentError::Tournament(_)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        // A closed downstream pipe (`| head`) is not an error.
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage(&e) { 2 } else { 1 })
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    fn io_kind(e: &(dyn std::error::Error + 'static)) -> Option<io::ErrorKind> {
        if let Some(io) = e.downcast_ref::<io::Error>() {
            // csv errors reach us wrapped in an `io::Error` of kind `Other`.
            return io.get_ref().and_then(|inner| io_kind(inner)).or(Some(io.kind()));
        }
        if let Some(c) = e.downcast_ref::<csv::Error>() {
            return match c.kind() {
                csv::ErrorKind::Io(io) => Some(io.kind()),
                _ => None,
            };
        }
        e.downcast_ref::<serde_json::Error>().and_then(|j| j.io_error_kind())
    }
    e.chain().any(|c| io_kind(c) == Some(io::ErrorKind::BrokenPipe))
}

fn effective_seed(cli_seed: u64) -> Result<u64> {
    match std::env::var("ORICHROM_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| usage(format!("ORICHROM_SEED={s:?} is not a u64"))),
        Err(_) => Ok(cli_seed),
    }
}

fn print_json(v: &impl Serialize) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

/// Opens `path` for writing, or standard output.
fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) => {
            check_output_path(p).map_err(usage)?;
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn run(cli: Cli) -> Result<()> {
    let seed = effective_seed(cli.seed)?;
    match cli.command {
        Command::Gen(a) => gen(a, seed),
        Command::Chi(a) => chi(a),
        Command::VerifyTournament(a) => verify_tournament(&formats::parse_tournament_spec(&a.tournament)?),
        Command::VerifyProduct(a) => verify_product(&formats::parse_tournament_spec(&a.tournament)?),
        Command::Bounds(a) => bounds(a),
        Command::Optimize(a) => optimize(a, seed),
        Command::Moments(a) => moments_cmd(a),
        Command::Mc(a) => mc(a, seed),
        Command::Window(a) => window(a, seed),
    }
}

fn gen(a: GenArgs, seed: u64) -> Result<()> {
    let ts = TrialSeed::new(seed, a.trial);
    let need = |x: Option<usize>, name: &str| x.ok_or_else(|| usage(format!("--{name} is required for this model")));
    let g = match a.model {
        GenModel::Mnm => gen_mnm(a.n, need(a.m, "m")?, ts),
        GenModel::Config => gen_config_oriented(a.n, need(a.d, "d")?, ts).map_err(|e| usage(e.to_string()))?,
        GenModel::Gnd => gen_gnd_oriented(a.n, need(a.d, "d")?, ts)?,
        GenModel::Gnp => {
            let p = a.p.ok_or_else(|| usage("--p is required for gnp"))?;
            gen_gnp_oriented(a.n, p, ts).map_err(|e| usage(e.to_string()))?
        }
    };
    let text = match a.format {
        GraphFormat::Text => formats::write_graph_text(&g),
        GraphFormat::Json => formats::write_graph_json(&g) + "\n",
    };
    let mut w = sink(a.out.as_deref())?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

fn chi(a: ChiArgs) -> Result<()> {
    if a.cap > 64 {
        return Err(usage("--cap must be at most 64"));
    }
    let text = std::fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let g = formats::parse_graph(&text)?;
    let r = oriented_chromatic_number_with(&g, ChiOptions { node_limit: a.node_limit, ..ChiOptions::with_cap(a.cap) });
    let chi = match r.chi {
        _ if r.obstruction.is_some() => json!("uncolourable"),
        Chi::Exact(c) => json!(c),
        Chi::AboveCap => json!(format!(">{}", a.cap)),
        Chi::Unknown => json!(null),
    };
    print_json(&json!({
        "n": g.n,
        "arcs": g.num_arcs(),
        "chi": chi,
        "witness": r.witness.map(|w| w.colours),
        "nodes_explored": r.nodes_explored,
        "obstruction": r.obstruction,
    }))
}

fn verify_tournament(t: &Tournament) -> Result<()> {
    let reg = t.double_regularity();
    let census: Option<Vec<[usize; 4]>> = reg.doubly_regular.then(|| {
        let mut c: Vec<[usize; 4]> = t.arcs().into_iter().map(|(u, v)| t.triangle_census(u, v).expect("doubly regular")).collect();
        c.sort_unstable();
        c.dedup();
        c
    });
    let k = t.order();
    let expected_census = (k % 4 == 3).then(|| [(k - 3) / 4, (k - 3) / 4, (k + 1) / 4, (k - 3) / 4]);
    print_json(&json!({
        "order": k,
        "regularity": reg,
        "distinct_census_vectors": census,
        "census_matches_table": census.as_ref().map(|c| c.len() == 1 && Some(c[0]) == expected_census),
        "signed_square_is_j_minus_k_i": t.verify_signed_square().ok(),
        "signed_spectrum_ok": t.signed_spectrum_check().ok(),
    }))
}

fn verify_product(t: &Tournament) -> Result<()> {
    let g = ProductGraph::kronecker_square(t);
    let k = t.order();
    let srg = g.strong_regularity_params();
    print_json(&json!({
        "k": k,
        "vertices": g.num_vertices(),
        "edges": g.num_edges(),
        "connected": g.is_connected(),
        "component_sizes": g.components().iter().map(Vec::len).collect::<Vec<_>>(),
        "srg": srg,
        "srg_matches_prediction": srg.map(|p| p == SrgParams::predicted(k)),
        "adjacency_identity": ProductGraph::adjacency_identity_check(t),
        "spectrum": srg.and_then(|p| p.spectrum()),
        "spectrum_check": ProductGraph::spectrum_check(t).ok(),
    }))
}

fn bounds(a: BoundsArgs) -> Result<()> {
    let r = bounds_report(a.d).map_err(|e| usage(e.to_string()))?;
    let doubling = a.doubling_limit.map(|l| match check_dr_order_doubling(l) {
        Ok(()) => json!({ "limit": l, "holds": true }),
        Err(n) => json!({ "limit": l, "holds": false, "first_failure": n }),
    });
    print_json(&json!({ "report": r, "doubling": doubling }))
}

fn optimize(a: OptimizeArgs, seed: u64) -> Result<()> {
    let t = formats::parse_tournament_spec(&a.tournament)?;
    if !t.is_doubly_regular() || t.order() < 7 {
        return Err(usage("optimize needs a doubly regular tournament of order at least 7"));
    }
    let g = ProductGraph::kronecker_square(&t);
    let outcome = maximize_gamma(&g, a.d, a.starts, seed, &AscentOptions::default()).map_err(|e| usage(e.to_string()))?;
    let eta = a.eta.map(|k| eta_min_check(k, 1e-8)).transpose().map_err(|e| usage(e.to_string()))?;
    print_json(&json!({ "k": t.order(), "d": a.d, "seed": seed, "outcome": outcome, "eta": eta }))
}

#[derive(Serialize)]
struct MomentJson {
    exact: Option<String>,
    float: f64,
    ln: f64,
    tag: moments::FormulaTag,
}

impl From<MomentValue> for MomentJson {
    fn from(v: MomentValue) -> Self {
        Self { exact: v.exact.map(|q| q.to_string()), float: v.float, ln: v.ln, tag: v.tag }
    }
}

fn moments_cmd(a: MomentsArgs) -> Result<()> {
    let spec = a.tournament.clone().unwrap_or_else(|| format!("paley:{}", a.k));
    let t = formats::parse_tournament_spec(&spec)?;
    if t.order() != a.k {
        return Err(usage(format!("tournament {spec} has order {}, not k = {}", t.order(), a.k)));
    }
    let bad = |e: moments::MomentError| usage(e.to_string());
    let (first, second, ratio): (MomentValue, Option<MomentValue>, Option<f64>) = if a.asymptotic {
        match a.model {
            MomentModel::Mnm => {
                let m = a.m.expect("required by clap");
                let ratio = moments::second_moment_ratio_mnm(a.k, m as f64 / a.n as f64).ok();
                (moments::asymptotic_first_moment_mnm(a.n, m, a.k), None, ratio)
            }
            MomentModel::Cnd => (moments::asymptotic_first_moment_cnd(a.n, a.d.expect("required by clap"), a.k).map_err(bad)?, None, None),
        }
    } else if a.oracle {
        if a.n > ORACLE_MAX_N {
            return Err(usage(format!("the brute-force oracle accepts n <= {ORACLE_MAX_N}")));
        }
        let tag = moments::FormulaTag::BruteForce;
        let (f, s) = match a.model {
            MomentModel::Mnm => {
                let m = a.m.expect("required by clap");
                (brute::first_moment_mnm(a.n, m, &t), brute::second_moment_mnm(a.n, m, &t))
            }
            MomentModel::Cnd => {
                let d = a.d.expect("required by clap");
                if a.n * d % 2 == 1 {
                    return Err(bad(moments::MomentError::OddPointCount(a.n * d)));
                }
                (brute::first_moment_cnd(a.n, d, &t), brute::second_moment_cnd(a.n, d, &t))
            }
        };
        let (f, s) = (MomentValue::from_exact(f, tag), MomentValue::from_exact(s, tag));
        let r = (s.ln - 2.0 * f.ln).exp();
        (f, Some(s), Some(r))
    } else {
        let (f, s) = match a.model {
            MomentModel::Mnm => {
                let m = a.m.expect("required by clap");
                (moments::first_moment_mnm_exact(a.n, m, a.k).map_err(bad)?, moments::second_moment_mnm_exact(a.n, m, &t, a.budget))
            }
            MomentModel::Cnd => {
                let d = a.d.expect("required by clap");
                (moments::first_moment_cnd(a.n, d, &t, a.budget).map_err(bad)?, moments::second_moment_cnd_exact(a.n, d, &t, a.budget))
            }
        };
        // The second moment is reported only when its lattice fits the budget.
        let s = s.ok();
        let r = s.as_ref().map(|s| (s.ln - 2.0 * f.ln).exp());
        (f, s, r)
    };
    let mode = if a.asymptotic {
        "asymptotic"
    } else if a.oracle {
        "oracle"
    } else {
        "exact"
    };
    print_json(&json!({
        "model": a.model,
        "mode": mode,
        "n": a.n,
        "m": a.m,
        "d": a.d,
        "k": a.k,
        "tournament": spec,
        "first": MomentJson::from(first),
        "second": second.map(MomentJson::from),
        "ratio": ratio,
    }))
}

fn mc(a: McArgs, seed: u64) -> Result<()> {
    let experiment = match a.experiment {
        McExperiment::TwoRegular { n } => Experiment::TwoRegular { n },
        McExperiment::SmallD { n, d } => Experiment::SmallD { n, d },
        McExperiment::Clique { n, omega } => Experiment::Clique { n, omega },
        McExperiment::Threshold { model, n, d, k, tournament } => Experiment::Threshold { model, n, d, k, tournament },
        McExperiment::SimpleConfig { n, d } => Experiment::SimpleConfig { n, d },
        McExperiment::SimpleMnm { n, m, c } => {
            let m = match (m, c) {
                (Some(m), _) => m,
                (None, Some(c)) if c >= 0.0 => mnm_edges(n, c),
                _ => return Err(usage("simple-mnm needs --m or a nonnegative --c")),
            };
            Experiment::SimpleMnm { n, m }
        }
        McExperiment::Window { n, d, tournament } => Experiment::Window { n, d, tournament },
    };
    let cfg = ExperimentConfig { experiment, trials: a.trials, seed, workers: a.workers, timing: a.timing };
    cfg.validate()?;
    // Fail on a missing directory before spending time on trials.
    if let Some(p) = &a.out {
        check_output_path(p).map_err(usage)?;
    }
    let outcome = experiments::run(&cfg)?;
    write_outcome(sink(a.out.as_deref())?, a.format, &cfg, &outcome)?;
    if a.out.is_some() {
        let mut err = io::stderr().lock();
        serde_json::to_writer_pretty(&mut err, &outcome.summary)?;
        writeln!(err)?;
    }
    Ok(())
}

fn window(a: WindowArgs, seed: u64) -> Result<()> {
    let t = formats::parse_tournament_spec(&a.tournament)?;
    if a.n * a.d % 2 == 1 {
        return Err(usage("n * d must be even"));
    }
    let g = gen_gnd_oriented(a.n, a.d, TrialSeed::new(seed, a.trial))?;
    let (base, s) = greedy_partial_colouring(&g, &t)?;
    let w = window_extension_colouring(&g, &t, &s, &base)?;
    let checks = experiments::window_checks(&g, t.order(), &s, &w);
    print_json(&json!({
        "n": g.n,
        "arcs": g.num_arcs(),
        "s": s,
        "core_size": w.core.len(),
        "n_in": w.n_in.len(),
        "n_out": w.n_out.len(),
        "growth": w.growth,
        "core_sparse": w.core_sparse,
        "core_colours": w.core_colours,
        "colours": w.colouring.num_colours(),
        "checks_passed": checks.is_ok(),
        "check_failure": checks.err(),
        "colouring": w.colouring.colours,
    }))
}
