//! Monte Carlo experiments on the random oriented graph models.
//!
//! Trial `t` of an experiment with master seed `s` draws only from
//! `TrialSeed::new(s, t)`, and records are collected in trial order, so the
//! output does not depend on the number of worker threads.

use std::collections::BTreeMap;
use std::time::Instant;

use orichrom_core::colouring::{
    colour_unicyclic_45, greedy_partial_colouring, oriented_chromatic_number_with, t_colourable, t_colourable_with,
    two_regular_chi, window_extension_colouring, Chi, ChiOptions, HomOutcome, CORE_COLOURS,
};
use orichrom_core::randmodels::{
    gen_config_oriented, gen_gnd_oriented_capped, gen_gnp_oriented, gen_mnm, ModelError, DEFAULT_REJECTION_CAP,
};
use orichrom_core::rng::TrialSeed;
use orichrom_core::{colouring, OrientedMultigraph, Tournament};
use rayon::prelude::*;
use serde::Serialize;

use crate::formats::{parse_tournament_spec, FormatError};

/// Node budget for exact searches inside a single trial.
pub const TRIAL_NODE_LIMIT: u64 = 1_000_000;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Tournament(#[from] FormatError),
    #[error("trial {trial}: {source}")]
    Model { trial: u64, source: ModelError },
    #[error("trial {trial}: {msg}")]
    Trial { trial: u64, msg: String },
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdModel {
    /// Oriented configuration multigraph.
    Cnd,
    /// Uniform simple regular graph, by rejection.
    Gnd,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Experiment {
    /// Uniform simple 2-regular oriented graphs; records chi.
    TwoRegular { n: usize },
    /// `G(n, d/n)` with `d < 1`; records chi where every component has at
    /// most one cycle.
    SmallD { n: usize, d: f64 },
    /// `G(n, p)` with `p = sqrt((4 ln n + omega) / n)`; records whether the
    /// graph is an oriented clique.
    Clique { n: usize, omega: f64 },
    /// Whether `C(n, d)` or `G(n, d)` has an oriented colouring with at
    /// most `k` colours, or a `T`-colouring when a tournament is given.
    Threshold { model: ThresholdModel, n: Vec<usize>, d: usize, k: usize, tournament: Option<String> },
    /// Fraction of simple draws of `C(n, d)`.
    SimpleConfig { n: usize, d: usize },
    /// Fraction of simple draws of `M(n, m)`.
    SimpleMnm { n: usize, m: usize },
    /// Window extension colouring of `G(n, d)` from a greedy `T`-colouring.
    Window { n: usize, d: usize, tournament: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub timing: bool,
}

/// One row of output. Columns that do not apply to the experiment are empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub n: usize,
    pub arcs: usize,
    pub simple: bool,
    pub attempts: Option<usize>,
    pub chi: Option<usize>,
    pub colourable: Option<bool>,
    pub has_5_cycle: Option<bool>,
    pub clique: Option<bool>,
    pub colours: Option<usize>,
    pub runtime_us: Option<u64>,
}

impl TrialRecord {
    fn new(trial: u64, seed: u64, g: &OrientedMultigraph) -> Self {
        Self {
            trial,
            seed,
            n: g.n,
            arcs: g.num_arcs(),
            simple: g.is_simple(),
            attempts: None,
            chi: None,
            colourable: None,
            has_5_cycle: None,
            clique: None,
            colours: None,
            runtime_us: None,
        }
    }
}

/// A Bernoulli proportion with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub count: u64,
    pub trials: u64,
    pub fraction: f64,
    pub std_err: f64,
}

impl Estimate {
    pub fn from_counts(count: u64, trials: u64) -> Self {
        let fraction = if trials == 0 { 0.0 } else { count as f64 / trials as f64 };
        let std_err = if trials == 0 { 0.0 } else { (fraction * (1.0 - fraction) / trials as f64).sqrt() };
        Self { count, trials, fraction, std_err }
    }

    /// `|fraction - target| <= 3 se + slack`.
    pub fn agrees_with(&self, target: f64, slack: f64) -> bool {
        (self.fraction - target).abs() <= 3.0 * self.std_err + slack
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub summary: BTreeMap<String, Estimate>,
    pub records: Vec<TrialRecord>,
}

/// `p = sqrt((4 ln n + omega) / n)`, clamped to `[0, 1]`.
pub fn clique_probability(n: usize, omega: f64) -> f64 {
    let n = n as f64;
    ((4.0 * n.ln() + omega) / n).max(0.0).sqrt().min(1.0)
}

/// `m = floor(c n + n^(2/3))`.
pub fn mnm_edges(n: usize, c: f64) -> usize {
    (c * n as f64 + (n as f64).powf(2.0 / 3.0)).floor() as usize
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::Config(m.to_string()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        match &self.experiment {
            Experiment::TwoRegular { n } if *n < 3 => bad("2-regular graphs need n >= 3"),
            Experiment::SmallD { d, .. } if !(*d > 0.0 && *d < 1.0) => bad("small-d needs 0 < d < 1"),
            Experiment::SmallD { n, .. } | Experiment::Clique { n, .. } if *n < 2 => bad("n must be at least 2"),
            Experiment::Clique { omega, .. } if !omega.is_finite() => bad("omega must be finite"),
            Experiment::Threshold { n, d, k, tournament, .. } => {
                if n.is_empty() || n.iter().any(|&n| n == 0 || n * d % 2 == 1) {
                    return bad("every n must be positive with n * d even");
                }
                match tournament {
                    Some(spec) => {
                        let t = parse_tournament_spec(spec)?;
                        if t.order() > 64 {
                            return bad("tournament order exceeds 64");
                        }
                    }
                    None if *k == 0 || *k > 64 => return bad("k must be in 1..=64"),
                    None => {}
                }
                Ok(())
            }
            Experiment::SimpleConfig { n, d } | Experiment::Window { n, d, .. } if n * d % 2 == 1 => {
                bad("n * d must be even")
            }
            Experiment::Window { tournament, .. } => {
                if parse_tournament_spec(tournament)?.order() > 64 {
                    return bad("tournament order exceeds 64");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

fn model_err(trial: u64) -> impl Fn(ModelError) -> ExperimentError {
    move |source| ExperimentError::Model { trial, source }
}

fn two_regular_trial(n: usize, seed: TrialSeed) -> Result<TrialRecord, ExperimentError> {
    let r = gen_gnd_oriented_capped(n, 2, seed, DEFAULT_REJECTION_CAP).map_err(model_err(seed.trial))?;
    let chi = two_regular_chi(&r.graph).map_err(|e| ExperimentError::Trial { trial: seed.trial, msg: e.to_string() })?;
    let mut rec = TrialRecord::new(seed.trial, seed.master, &r.graph);
    rec.attempts = Some(r.attempts);
    rec.chi = Some(chi);
    rec.has_5_cycle = Some(chi == 5);
    Ok(rec)
}

/// Oriented chromatic number of a graph whose components each have at most
/// one cycle, or `None` if some component has more. The second value is
/// whether a directed 5-cycle is present.
pub fn sparse_chi(g: &OrientedMultigraph) -> (Option<usize>, bool) {
    if g.num_arcs() == 0 {
        return (Some(usize::from(g.n > 0)), false);
    }
    let mut out = vec![false; g.n];
    let mut inn = vec![false; g.n];
    for &(u, v) in &g.arcs {
        out[u as usize] = true;
        inn[v as usize] = true;
    }
    if g.is_simple() && (0..g.n).all(|v| !(out[v] && inn[v])) {
        return (Some(2), false);
    }
    match colour_unicyclic_45(g) {
        Err(_) => (None, false),
        Ok(c) => {
            if t_colourable(g, &Tournament::c3()).is_some() || t_colourable(g, &Tournament::t3()).is_some() {
                (Some(3), false)
            } else if c.has_directed_5_cycle {
                (Some(5), true)
            } else {
                (Some(4), false)
            }
        }
    }
}

fn small_d_trial(n: usize, d: f64, seed: TrialSeed) -> Result<TrialRecord, ExperimentError> {
    let g = gen_gnp_oriented(n, d / n as f64, seed).map_err(model_err(seed.trial))?;
    let (chi, five) = sparse_chi(&g);
    let mut rec = TrialRecord::new(seed.trial, seed.master, &g);
    rec.chi = chi;
    rec.has_5_cycle = chi.map(|_| five);
    Ok(rec)
}

fn clique_trial(n: usize, omega: f64, seed: TrialSeed) -> Result<TrialRecord, ExperimentError> {
    let g = gen_gnp_oriented(n, clique_probability(n, omega), seed).map_err(model_err(seed.trial))?;
    let mut rec = TrialRecord::new(seed.trial, seed.master, &g);
    rec.clique = Some(colouring::is_oriented_clique(&g));
    Ok(rec)
}

fn threshold_trial(
    model: ThresholdModel,
    n: usize,
    d: usize,
    k: usize,
    t: Option<&Tournament>,
    seed: TrialSeed,
) -> Result<TrialRecord, ExperimentError> {
    let (g, attempts) = match model {
        ThresholdModel::Cnd => (gen_config_oriented(n, d, seed).map_err(model_err(seed.trial))?, None),
        ThresholdModel::Gnd => {
            let r = gen_gnd_oriented_capped(n, d, seed, DEFAULT_REJECTION_CAP).map_err(model_err(seed.trial))?;
            (r.graph, Some(r.attempts))
        }
    };
    let mut rec = TrialRecord::new(seed.trial, seed.master, &g);
    rec.attempts = attempts;
    rec.colourable = match t {
        Some(t) => match t_colourable_with(&g, t, Some(TRIAL_NODE_LIMIT)).outcome {
            HomOutcome::Found(_) => Some(true),
            HomOutcome::Infeasible => Some(false),
            HomOutcome::Aborted => None,
        },
        None => {
            let opts = ChiOptions { node_limit: Some(TRIAL_NODE_LIMIT), ..ChiOptions::with_cap(k) };
            match oriented_chromatic_number_with(&g, opts).chi {
                Chi::Exact(c) => {
                    rec.chi = Some(c);
                    Some(true)
                }
                Chi::AboveCap => Some(false),
                Chi::Unknown => None,
            }
        }
    };
    Ok(rec)
}

fn simple_config_trial(n: usize, d: usize, seed: TrialSeed) -> Result<TrialRecord, ExperimentError> {
    let g = gen_config_oriented(n, d, seed).map_err(model_err(seed.trial))?;
    Ok(TrialRecord::new(seed.trial, seed.master, &g))
}

fn simple_mnm_trial(n: usize, m: usize, seed: TrialSeed) -> Result<TrialRecord, ExperimentError> {
    Ok(TrialRecord::new(seed.trial, seed.master, &gen_mnm(n, m, seed)))
}

/// Structural checks on a window colouring: it is valid, uses at most
/// `3k + 11` colours, `S` lies inside the core `U`, no arc runs from
/// `N_in` into `U` or from `U` into `N_out`, and `N_in` together with
/// `N_out` is independent.
pub fn window_checks(g: &OrientedMultigraph, k: usize, s: &[usize], w: &colouring::WindowColouring) -> Result<(), String> {
    if !w.colouring.is_valid_for(g) {
        return Err("colouring is not a valid oriented colouring".into());
    }
    if w.colouring.num_colours() > 3 * k + CORE_COLOURS {
        return Err(format!("{} colours exceed 3k + 11", w.colouring.num_colours()));
    }
    let mut in_u = vec![false; g.n];
    w.core.iter().for_each(|&v| in_u[v] = true);
    if !s.iter().all(|&v| in_u[v]) {
        return Err("S is not contained in U".into());
    }
    let mut side = vec![0u8; g.n];
    w.n_in.iter().for_each(|&v| side[v] = 1);
    w.n_out.iter().for_each(|&v| side[v] = 2);
    for &(a, b) in &g.arcs {
        let (a, b) = (a as usize, b as usize);
        if side[a] == 1 && in_u[b] {
            return Err(format!("arc {a} -> {b} runs from N_in into U"));
        }
        if in_u[a] && side[b] == 2 {
            return Err(format!("arc {a} -> {b} runs from U into N_out"));
        }
        if side[a] != 0 && side[b] != 0 {
            return Err(format!("arc {a} -> {b} lies inside N"));
        }
    }
    Ok(())
}

fn window_trial(n: usize, d: usize, t: &Tournament, seed: TrialSeed) -> Result<TrialRecord, ExperimentError> {
    let r = gen_gnd_oriented_capped(n, d, seed, DEFAULT_REJECTION_CAP).map_err(model_err(seed.trial))?;
    let g = r.graph;
    let trial_err = |e: colouring::ColouringError| ExperimentError::Trial { trial: seed.trial, msg: e.to_string() };
    let (base, s) = greedy_partial_colouring(&g, t).map_err(trial_err)?;
    let mut rec = TrialRecord::new(seed.trial, seed.master, &g);
    rec.attempts = Some(r.attempts);
    match window_extension_colouring(&g, t, &s, &base) {
        Ok(w) => {
            rec.colours = Some(w.colouring.num_colours());
            rec.colourable = Some(window_checks(&g, t.order(), &s, &w).is_ok());
        }
        Err(_) => rec.colourable = Some(false),
    }
    Ok(rec)
}

/// Runs `f` on trials `offset..offset + trials` in a pool of `workers`
/// threads; the result is in trial order.
fn run_indexed<F>(trials: u64, offset: u64, cfg: &ExperimentConfig, pool: &rayon::ThreadPool, f: F) -> Result<Vec<TrialRecord>, ExperimentError>
where
    F: Fn(TrialSeed) -> Result<TrialRecord, ExperimentError> + Sync,
{
    pool.install(|| {
        (offset..offset + trials)
            .into_par_iter()
            .map(|t| {
                let start = cfg.timing.then(Instant::now);
                let mut rec = f(TrialSeed::new(cfg.seed, t))?;
                rec.runtime_us = start.map(|s| s.elapsed().as_micros() as u64);
                Ok(rec)
            })
            .collect()
    })
}

fn tally(summary: &mut BTreeMap<String, Estimate>, key: String, records: &[TrialRecord], pred: impl Fn(&TrialRecord) -> bool) {
    let count = records.iter().filter(|r| pred(r)).count() as u64;
    summary.insert(key, Estimate::from_counts(count, records.len() as u64));
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build()?;
    let mut summary = BTreeMap::new();
    let trials = cfg.trials;
    let records = match &cfg.experiment {
        &Experiment::TwoRegular { n } => {
            let recs = run_indexed(trials, 0, cfg, &pool, |s| two_regular_trial(n, s))?;
            for c in 2..=5 {
                tally(&mut summary, format!("chi{c}"), &recs, |r| r.chi == Some(c));
            }
            recs
        }
        &Experiment::SmallD { n, d } => {
            let recs = run_indexed(trials, 0, cfg, &pool, |s| small_d_trial(n, d, s))?;
            for c in 3..=5 {
                tally(&mut summary, format!("chi{c}"), &recs, |r| r.chi == Some(c));
            }
            tally(&mut summary, "other".into(), &recs, |r| !matches!(r.chi, Some(3..=5)));
            recs
        }
        &Experiment::Clique { n, omega } => {
            let recs = run_indexed(trials, 0, cfg, &pool, |s| clique_trial(n, omega, s))?;
            tally(&mut summary, "clique".into(), &recs, |r| r.clique == Some(true));
            recs
        }
        Experiment::Threshold { model, n, d, k, tournament } => {
            let t = tournament.as_deref().map(parse_tournament_spec).transpose()?;
            let mut all = Vec::new();
            for (i, &n) in n.iter().enumerate() {
                let recs =
                    run_indexed(trials, i as u64 * trials, cfg, &pool, |s| threshold_trial(*model, n, *d, *k, t.as_ref(), s))?;
                tally(&mut summary, format!("colourable@n={n}"), &recs, |r| r.colourable == Some(true));
                tally(&mut summary, format!("undecided@n={n}"), &recs, |r| r.colourable.is_none());
                all.extend(recs);
            }
            all
        }
        &Experiment::SimpleConfig { n, d } => {
            let recs = run_indexed(trials, 0, cfg, &pool, |s| simple_config_trial(n, d, s))?;
            tally(&mut summary, "simple".into(), &recs, |r| r.simple);
            recs
        }
        &Experiment::SimpleMnm { n, m } => {
            let recs = run_indexed(trials, 0, cfg, &pool, |s| simple_mnm_trial(n, m, s))?;
            tally(&mut summary, "simple".into(), &recs, |r| r.simple);
            recs
        }
        Experiment::Window { n, d, tournament } => {
            let t = parse_tournament_spec(tournament)?;
            let recs = run_indexed(trials, 0, cfg, &pool, |s| window_trial(*n, *d, &t, s))?;
            tally(&mut summary, "valid".into(), &recs, |r| r.colourable == Some(true));
            recs
        }
    };
    Ok(Outcome { summary, records })
}

fn config(experiment: Experiment, trials: u64, seed: u64, workers: usize) -> ExperimentConfig {
    ExperimentConfig { experiment, trials, seed, workers, timing: false }
}

/// Fractions of simple 2-regular graphs with oriented chromatic number 3, 4
/// and 5.
pub fn mc_two_regular(n: usize, trials: u64, seed: u64, workers: usize) -> Result<[Estimate; 3], ExperimentError> {
    let o = run(&config(Experiment::TwoRegular { n }, trials, seed, workers))?;
    Ok([o.summary["chi3"], o.summary["chi4"], o.summary["chi5"]])
}

/// Fractions of `G(n, d/n)` with oriented chromatic number 3, 4, 5, and
/// anything else.
pub fn mc_small_d(n: usize, d: f64, trials: u64, seed: u64, workers: usize) -> Result<[Estimate; 4], ExperimentError> {
    let o = run(&config(Experiment::SmallD { n, d }, trials, seed, workers))?;
    Ok([o.summary["chi3"], o.summary["chi4"], o.summary["chi5"], o.summary["other"]])
}

pub fn mc_oriented_clique(n: usize, omega: f64, trials: u64, seed: u64, workers: usize) -> Result<Estimate, ExperimentError> {
    Ok(run(&config(Experiment::Clique { n, omega }, trials, seed, workers))?.summary["clique"])
}

/// Colourable fraction for each `n` in `n_list`.
#[allow(clippy::too_many_arguments)]
pub fn mc_colourability_threshold(
    model: ThresholdModel,
    n_list: &[usize],
    d: usize,
    k: usize,
    tournament: Option<&str>,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<(usize, Estimate)>, ExperimentError> {
    let exp = Experiment::Threshold { model, n: n_list.to_vec(), d, k, tournament: tournament.map(str::to_string) };
    let o = run(&config(exp, trials, seed, workers))?;
    Ok(n_list.iter().map(|&n| (n, o.summary[&format!("colourable@n={n}")])).collect())
}

pub fn mc_simple_config(n: usize, d: usize, trials: u64, seed: u64, workers: usize) -> Result<Estimate, ExperimentError> {
    Ok(run(&config(Experiment::SimpleConfig { n, d }, trials, seed, workers))?.summary["simple"])
}

pub fn mc_simple_mnm(n: usize, m: usize, trials: u64, seed: u64, workers: usize) -> Result<Estimate, ExperimentError> {
    Ok(run(&config(Experiment::SimpleMnm { n, m }, trials, seed, workers))?.summary["simple"])
}
