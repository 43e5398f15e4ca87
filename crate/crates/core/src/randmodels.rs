//! Random oriented graph models.
//!
//! All generators are pure functions of their parameters and a
//! [`TrialSeed`]. Edge choices and orientations come from separate streams,
//! so orientation bits are independent of the underlying graph.

use alloc::vec::Vec;

use rand::Rng;

use crate::graph::OrientedMultigraph;
use crate::math::{floor, ln, pow};
use crate::rng::{Stream, TrialSeed};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("d * n = {0} must be even")]
    OddPointCount(usize),
    #[error("edge probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("no simple graph after {attempts} attempts")]
    RejectionBudgetExceeded { attempts: usize },
}

/// `m` arcs, each an independent uniform ordered pair (loops allowed).
pub fn gen_mnm(n: usize, m: usize, seed: TrialSeed) -> OrientedMultigraph {
    let mut rng = seed.rng(Stream::Edges);
    let mut g = OrientedMultigraph::new(n);
    if n == 0 {
        return g;
    }
    g.arcs.reserve(m);
    for _ in 0..m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        g.add_arc(u, v);
    }
    g
}

/// Configuration model: a uniform perfect matching on `d * n` points
/// (`d` per vertex), each matched pair oriented by a fair coin.
pub fn gen_config_oriented(n: usize, d: usize, seed: TrialSeed) -> Result<OrientedMultigraph, ModelError> {
    let mut matching = seed.rng(Stream::Matching);
    let mut orient = seed.rng(Stream::Orientation);
    config_with(n, d, &mut matching, &mut orient)
}

fn config_with(
    n: usize,
    d: usize,
    matching: &mut impl Rng,
    orient: &mut impl Rng,
) -> Result<OrientedMultigraph, ModelError> {
    let points = d * n;
    if !points.is_multiple_of(2) {
        return Err(ModelError::OddPointCount(points));
    }
    let mut p: Vec<u32> = (0..points as u32).collect();
    // Fisher-Yates; consecutive pairs of a uniform permutation form a
    // uniform perfect matching.
    for i in (1..points).rev() {
        let j = matching.gen_range(0..=i);
        p.swap(i, j);
    }
    let d32 = d as u32;
    let mut g = OrientedMultigraph::new(n);
    g.arcs.reserve(points / 2);
    for pair in p.chunks_exact(2) {
        let (a, b) = (pair[0] / d32, pair[1] / d32);
        g.arcs.push(if orient.gen::<bool>() { (a, b) } else { (b, a) });
    }
    Ok(g)
}

/// Erdos-Renyi `G(n, p)` with fair orientations. Skips absent pairs with
/// geometric jumps, so the cost is linear in `n` plus the number of edges.
pub fn gen_gnp_oriented(n: usize, p: f64, seed: TrialSeed) -> Result<OrientedMultigraph, ModelError> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(ModelError::InvalidProbability(p));
    }
    let mut edges = seed.rng(Stream::Edges);
    let mut orient = seed.rng(Stream::Orientation);
    let mut g = OrientedMultigraph::new(n);
    if n < 2 || p == 0.0 {
        return Ok(g);
    }
    let mut push = |g: &mut OrientedMultigraph, w: usize, v: usize| {
        g.arcs.push(if orient.gen::<bool>() { (w as u32, v as u32) } else { (v as u32, w as u32) });
    };
    if p == 1.0 {
        for v in 1..n {
            for w in 0..v {
                push(&mut g, w, v);
            }
        }
        return Ok(g);
    }
    // Pairs (w, v) with w < v, enumerated row by row.
    let log_q = ln(1.0 - p);
    let (mut v, mut w) = (1usize, -1i64);
    loop {
        let r: f64 = edges.gen();
        w += 1 + floor(ln(1.0 - r) / log_q) as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v >= n {
            break;
        }
        push(&mut g, w as usize, v);
    }
    Ok(g)
}

/// A simple graph together with the number of configuration draws it took.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub graph: OrientedMultigraph,
    pub attempts: usize,
}

pub const DEFAULT_REJECTION_CAP: usize = 100_000;

/// Uniform simple `d`-regular oriented graph, by rejecting non-simple
/// configurations.
pub fn gen_gnd_oriented(n: usize, d: usize, seed: TrialSeed) -> Result<OrientedMultigraph, ModelError> {
    gen_gnd_oriented_capped(n, d, seed, DEFAULT_REJECTION_CAP).map(|r| r.graph)
}

/// As [`gen_gnd_oriented`]; attempts consume the trial's streams in order.
pub fn gen_gnd_oriented_capped(n: usize, d: usize, seed: TrialSeed, cap: usize) -> Result<Rejection, ModelError> {
    let mut matching = seed.rng(Stream::Matching);
    let mut orient = seed.rng(Stream::Orientation);
    for attempt in 1..=cap {
        let g = config_with(n, d, &mut matching, &mut orient)?;
        if g.is_simple() {
            return Ok(Rejection { graph: g, attempts: attempt });
        }
    }
    Err(ModelError::RejectionBudgetExceeded { attempts: cap })
}

/// Fraction of `G(n, d/n)` draws whose edge count deviates from `dn/2` by
/// at least `n^(2/3)`.
pub fn edge_count_deviation(n: usize, d: f64, trials: u64, master: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let p = (d / n as f64).clamp(0.0, 1.0);
    let window = pow(n as f64, 2.0 / 3.0);
    let centre = d * n as f64 / 2.0;
    let mut bad = 0u64;
    for trial in 0..trials {
        let g = gen_gnp_oriented(n, p, TrialSeed::new(master, trial)).expect("p clamped");
        if (g.num_arcs() as f64 - centre).abs() >= window {
            bad += 1;
        }
    }
    bad as f64 / trials as f64
}

/// Limit probability that the configuration model is simple:
/// `exp(-(d-1)/2 - (d-1)^2/4)`.
pub fn config_simple_limit(d: usize) -> f64 {
    let x = d as f64 - 1.0;
    crate::math::exp(-x / 2.0 - x * x / 4.0)
}

/// Lower bound `exp(-5c(c+1))` on the probability that `M(n, cn + n^(2/3))`
/// is simple.
pub fn mnm_simple_lower_bound(c: f64) -> f64 {
    crate::math::exp(-5.0 * c * (c + 1.0))
}
