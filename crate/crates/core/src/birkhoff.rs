//! The functional
//! `gamma_d(A) = -(1/k) sum a_v ln a_v + (d/2) ln(2 L(A) / k^2)` on doubly
//! stochastic `k x k` matrices, where `a_v` is the entry of `A` at the
//! product-graph vertex `v = (i, j)` and `L` is the graph Lagrangian
//! `sum_{uv in E} a_u a_v`.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::math::{abs, ln, sqrt, xlnx};
use crate::product::ProductGraph;
use crate::rng::{Stream, TrialSeed};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BirkhoffError {
    #[error("matrix is not doubly stochastic (max deviation {0:e})")]
    NotDoublyStochastic(f64),
    #[error("Lagrangian is not positive")]
    NonPositiveLagrangian,
    #[error("argument outside the domain: {0}")]
    Domain(&'static str),
}

pub const STOCHASTIC_TOL: f64 = 1e-10;
const FLOOR: f64 = 1e-300;

/// Row-major `k x k`; rows and columns sum to 1 within [`STOCHASTIC_TOL`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DoublyStochasticMatrix {
    k: usize,
    entries: Vec<f64>,
}

impl DoublyStochasticMatrix {
    pub fn new(k: usize, entries: Vec<f64>) -> Result<Self, BirkhoffError> {
        assert_eq!(entries.len(), k * k);
        if entries.iter().any(|&x| !(x >= 0.0)) {
            return Err(BirkhoffError::NotDoublyStochastic(f64::INFINITY));
        }
        let dev = max_sum_deviation(k, &entries);
        if dev > STOCHASTIC_TOL {
            return Err(BirkhoffError::NotDoublyStochastic(dev));
        }
        Ok(Self { k, entries })
    }

    /// `(1/k) J`.
    pub fn barycenter(k: usize) -> Self {
        Self { k, entries: vec![1.0 / k as f64; k * k] }
    }

    pub fn permutation(perm: &[usize]) -> Self {
        let k = perm.len();
        let mut entries = vec![0.0; k * k];
        for (i, &j) in perm.iter().enumerate() {
            entries[i * k + j] = 1.0;
        }
        Self::new(k, entries).expect("a permutation matrix is doubly stochastic")
    }

    /// Sinkhorn-normalizes a positive matrix.
    pub fn sinkhorn(k: usize, mut entries: Vec<f64>) -> Self {
        sinkhorn_in_place(k, &mut entries);
        Self { k, entries }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum()
    }

    /// Infinity-norm distance to the barycenter.
    pub fn distance_to_barycenter(&self) -> f64 {
        let c = 1.0 / self.k as f64;
        self.entries.iter().fold(0.0, |m, x| m.max(abs(x - c)))
    }
}

fn max_sum_deviation(k: usize, a: &[f64]) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..k {
        let r: f64 = a[i * k..(i + 1) * k].iter().sum();
        let c: f64 = (0..k).map(|r| a[r * k + i]).sum();
        dev = dev.max(abs(r - 1.0)).max(abs(c - 1.0));
    }
    dev
}

fn sinkhorn_in_place(k: usize, a: &mut [f64]) {
    for x in a.iter_mut() {
        *x = x.max(FLOOR);
    }
    for _ in 0..100_000 {
        for i in 0..k {
            let s: f64 = a[i * k..(i + 1) * k].iter().sum();
            a[i * k..(i + 1) * k].iter_mut().for_each(|x| *x /= s);
        }
        for j in 0..k {
            let s: f64 = (0..k).map(|i| a[i * k + j]).sum();
            (0..k).for_each(|i| a[i * k + j] /= s);
        }
        if max_sum_deviation(k, a) < 1e-12 {
            break;
        }
    }
}

/// `sum_{uv in E} a_u a_v` over an explicit edge list.
pub fn lagrangian_edges(edges: &[(usize, usize)], a: &[f64]) -> f64 {
    edges.iter().map(|&(u, v)| a[u] * a[v]).sum()
}

pub fn lagrangian(g: &ProductGraph, a: &[f64]) -> f64 {
    assert_eq!(a.len(), g.num_vertices());
    lagrangian_edges(&g.edges(), a)
}

/// Neighbour lists, reused across evaluations.
#[derive(Debug, Clone)]
pub struct GammaContext {
    k: usize,
    adj: Vec<Vec<usize>>,
}

impl GammaContext {
    pub fn new(g: &ProductGraph) -> Self {
        let adj: Vec<Vec<usize>> = (0..g.num_vertices()).map(|v| g.neighbours(v).collect()).collect();
        Self { k: g.k(), adj }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn neighbour_sums(&self, a: &[f64]) -> Vec<f64> {
        self.adj.iter().map(|l| l.iter().map(|&w| a[w]).sum()).collect()
    }

    /// `gamma_d` at a flattened matrix without checking stochasticity.
    pub fn value(&self, a: &[f64], d: f64) -> Result<f64, BirkhoffError> {
        let k = self.k as f64;
        let s = self.neighbour_sums(a);
        let two_l: f64 = a.iter().zip(&s).map(|(x, y)| x * y).sum();
        if !(two_l > 0.0) {
            if d == 0.0 {
                return Ok(-a.iter().map(|&x| xlnx(x)).sum::<f64>() / k);
            }
            return Err(BirkhoffError::NonPositiveLagrangian);
        }
        let entropy = -a.iter().map(|&x| xlnx(x)).sum::<f64>() / k;
        Ok(entropy + d / 2.0 * ln(two_l / (k * k)))
    }

    /// Unconstrained gradient over all `k^2` coordinates. Exact zeros get
    /// a zero entropy term.
    pub fn gradient(&self, a: &[f64], d: f64) -> Vec<f64> {
        let k = self.k as f64;
        let s = self.neighbour_sums(a);
        let two_l: f64 = a.iter().zip(&s).map(|(x, y)| x * y).sum();
        a.iter()
            .zip(&s)
            .map(|(&x, &sv)| {
                let ent = if x > 0.0 { -(ln(x) + 1.0) / k } else { 0.0 };
                ent + if d == 0.0 { 0.0 } else { d * sv / two_l }
            })
            .collect()
    }
}

pub fn gamma_d(a: &DoublyStochasticMatrix, g: &ProductGraph, d: f64) -> Result<f64, BirkhoffError> {
    assert_eq!(a.k() * a.k(), g.num_vertices());
    GammaContext::new(g).value(a.entries(), d)
}

/// `ln k + (d/2) ln((k-1)^2 / (2 k^2))`, the value at the barycenter.
pub fn barycenter_value(k: usize, d: f64) -> f64 {
    let k = k as f64;
    ln(k) + d / 2.0 * ln((k - 1.0) * (k - 1.0) / (2.0 * k * k))
}

/// Projection onto the tangent space of the Birkhoff polytope.
fn project_tangent(k: usize, g: &[f64]) -> Vec<f64> {
    let kf = k as f64;
    let row: Vec<f64> = (0..k).map(|i| g[i * k..(i + 1) * k].iter().sum::<f64>() / kf).collect();
    let col: Vec<f64> = (0..k).map(|j| (0..k).map(|i| g[i * k + j]).sum::<f64>() / kf).collect();
    let all: f64 = row.iter().sum::<f64>() / kf;
    (0..k * k).map(|v| g[v] - row[v / k] - col[v % k] + all).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub armijo_c: f64,
    pub barycenter_tol: f64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 100_000, armijo_c: 1e-4, barycenter_tol: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StartOutcome {
    pub start: usize,
    pub point: DoublyStochasticMatrix,
    pub initial_value: f64,
    pub value: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Projected-gradient ascent from the `start`-th random point.
pub fn ascend_from_start(ctx: &GammaContext, d: f64, start: usize, master: u64, opts: &AscentOptions) -> StartOutcome {
    let k = ctx.k();
    let mut rng = TrialSeed::new(master, start as u64).rng(Stream::Start);
    let raw: Vec<f64> = (0..k * k).map(|_| rng.gen_range(0.1..1.0)).collect();
    let init = DoublyStochasticMatrix::sinkhorn(k, raw);
    ascend(ctx, d, start, init, opts)
}

pub fn ascend(ctx: &GammaContext, d: f64, start: usize, init: DoublyStochasticMatrix, opts: &AscentOptions) -> StartOutcome {
    let k = ctx.k();
    let mut a = init.entries;
    let mut val = ctx.value(&a, d).expect("interior start has positive Lagrangian");
    let initial_value = val;
    let mut step = 1.0 / (k * k) as f64;
    let mut iterations = 0;
    let mut pg_norm;
    loop {
        let g = ctx.gradient(&a, d);
        let pg = project_tangent(k, &g);
        pg_norm = sqrt(pg.iter().map(|x| x * x).sum());
        if pg_norm < opts.tol || iterations >= opts.max_iter {
            break;
        }
        iterations += 1;
        let mut accepted = false;
        while step > 1e-30 {
            let mut trial: Vec<f64> = a.iter().zip(&pg).map(|(x, p)| x + step * p).collect();
            sinkhorn_in_place(k, &mut trial);
            let ascent: f64 = g.iter().zip(trial.iter().zip(&a)).map(|(gi, (t, x))| gi * (t - x)).sum();
            if let Ok(tv) = ctx.value(&trial, d) {
                if tv >= val + opts.armijo_c * ascent {
                    a = trial;
                    val = tv;
                    accepted = true;
                    break;
                }
            }
            step /= 2.0;
        }
        if !accepted {
            break;
        }
        step = (step * 2.0).min(1e3);
    }
    StartOutcome {
        start,
        point: DoublyStochasticMatrix { k, entries: a },
        initial_value,
        value: val,
        gradient_norm: pg_norm,
        iterations,
        converged: pg_norm < opts.tol,
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OptimizationOutcome {
    pub maximizer: DoublyStochasticMatrix,
    pub value: f64,
    pub starts: usize,
    /// The best point is within the barycenter tolerance.
    pub converged_to_barycenter: bool,
    /// Every start ended within the barycenter tolerance.
    pub all_starts_at_barycenter: bool,
    pub gradient_norm: f64,
    pub barycenter_value: f64,
    /// Starts whose gradient residual stayed above `tol`.
    pub nonconverged_starts: usize,
}

/// Merges start outcomes by maximum value, ties to the lower start index.
pub fn merge_starts(k: usize, d: f64, outcomes: &[StartOutcome], opts: &AscentOptions) -> OptimizationOutcome {
    let best = outcomes
        .iter()
        .fold(None::<&StartOutcome>, |b, o| match b {
            Some(b) if b.value > o.value || (b.value == o.value && b.start <= o.start) => Some(b),
            _ => Some(o),
        })
        .expect("at least one start");
    OptimizationOutcome {
        maximizer: best.point.clone(),
        value: best.value,
        starts: outcomes.len(),
        converged_to_barycenter: best.point.distance_to_barycenter() < opts.barycenter_tol,
        all_starts_at_barycenter: outcomes.iter().all(|o| o.point.distance_to_barycenter() < opts.barycenter_tol),
        gradient_norm: best.gradient_norm,
        barycenter_value: barycenter_value(k, d),
        nonconverged_starts: outcomes.iter().filter(|o| !o.converged).count(),
    }
}

/// Multistart maximization of `gamma_d` over the Birkhoff polytope.
pub fn maximize_gamma(
    g: &ProductGraph,
    d: f64,
    n_starts: usize,
    master: u64,
    opts: &AscentOptions,
) -> Result<OptimizationOutcome, BirkhoffError> {
    if n_starts == 0 {
        return Err(BirkhoffError::Domain("need at least one start"));
    }
    if !(d >= 0.0) {
        return Err(BirkhoffError::Domain("d must be nonnegative"));
    }
    let ctx = GammaContext::new(g);
    let outcomes: Vec<StartOutcome> = (0..n_starts).map(|s| ascend_from_start(&ctx, d, s, master, opts)).collect();
    Ok(merge_starts(g.k(), d, &outcomes, opts))
}

/// The row maximizing entropy subject to squared norm `r`: one entry `x`,
/// the other `k-1` equal to `y`.
pub fn x_y_of_r(r: f64, k: usize) -> Result<(f64, f64), BirkhoffError> {
    let kf = k as f64;
    if k < 2 || !(r >= 1.0 / kf - 1e-15 && r <= 1.0 + 1e-15) {
        return Err(BirkhoffError::Domain("need 1/k <= r <= 1"));
    }
    let x = (1.0 + sqrt(((kf - 1.0) * (kf * r - 1.0)).max(0.0))) / kf;
    let y = ((1.0 - x) / (kf - 1.0)).max(0.0);
    Ok((x, y))
}

pub fn f_r(r: f64, k: usize) -> Result<f64, BirkhoffError> {
    let (x, y) = x_y_of_r(r, k)?;
    Ok(-xlnx(x) - (k as f64 - 1.0) * xlnx(y))
}

/// `(f(1/k) - f(1/k + x)) / x`, with the limit `k/2` at `x = 0`.
pub fn eta(x: f64, k: usize) -> Result<f64, BirkhoffError> {
    let kf = k as f64;
    if !(x >= 0.0 && x <= 1.0 - 1.0 / kf + 1e-15) {
        return Err(BirkhoffError::Domain("need 0 <= x <= 1 - 1/k"));
    }
    if x == 0.0 {
        return Ok(kf / 2.0);
    }
    Ok((ln(kf) - f_r(1.0 / kf + x, k)?) / x)
}

/// `df/dr` for `1/k < r < 1`.
fn f_prime(r: f64, k: usize) -> f64 {
    let kf = k as f64;
    let (x, y) = x_y_of_r(r, k).expect("interior r");
    ln(y / x) * (kf - 1.0) / (2.0 * sqrt((kf - 1.0) * (kf * r - 1.0)))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EtaMinReport {
    pub k: usize,
    pub x_expected: f64,
    pub x_found: f64,
    pub value_expected: f64,
    pub value_found: f64,
    /// Interior strict local minima on the scan grid.
    pub grid_local_minima: usize,
    pub passed: bool,
}

/// Grid scan of `eta` on `[0, 1 - 1/k]`, then bisection on the sign of
/// `eta'` around the best grid point.
pub fn eta_min_check(k: usize, tol: f64) -> Result<EtaMinReport, BirkhoffError> {
    if k < 3 {
        return Err(BirkhoffError::Domain("need k >= 3"));
    }
    let kf = k as f64;
    let hi = 1.0 - 1.0 / kf;
    const N: usize = 20_000;
    let xs: Vec<f64> = (0..=N).map(|i| hi * i as f64 / N as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| eta(x, k)).collect::<Result<_, _>>()?;
    let best = (0..=N).min_by(|&i, &j| vals[i].partial_cmp(&vals[j]).expect("finite")).expect("nonempty grid");
    let grid_local_minima = (1..N).filter(|&i| vals[i] < vals[i - 1] && vals[i] < vals[i + 1]).count();
    // Numerator of eta': negative left of the minimum, positive right of it.
    let num = |x: f64| -x * f_prime(1.0 / kf + x, k) - ln(kf) + f_r(1.0 / kf + x, k).expect("in domain");
    let (mut lo, mut up) = (xs[best.saturating_sub(1).max(1)], xs[(best + 1).min(N - 1)]);
    if num(lo) > 0.0 || num(up) < 0.0 {
        lo = xs[1];
        up = xs[N - 1];
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + up);
        if num(mid) < 0.0 {
            lo = mid;
        } else {
            up = mid;
        }
    }
    let x_found = 0.5 * (lo + up);
    let value_found = eta(x_found, k)?;
    let x_expected = (kf - 2.0) * (kf - 2.0) / (kf * (kf - 1.0));
    let value_expected = (kf - 1.0) / (kf - 2.0) * ln(kf - 1.0);
    let passed =
        grid_local_minima == 1 && abs(x_found - x_expected) <= tol && abs(value_found - value_expected) <= tol;
    Ok(EtaMinReport { k, x_expected, x_found, value_expected, value_found, grid_local_minima, passed })
}

/// Second largest adjacency eigenvalue counted with multiplicity, from the
/// exact strongly regular spectrum.
pub fn second_eigenvalue(g: &ProductGraph) -> Option<f64> {
    let spec = g.strong_regularity_params()?.spectrum()?;
    let (top, mult) = spec[0];
    Some(if mult > 1 { top } else { spec.get(1)?.0 } as f64)
}

/// `(2 L(A), lambda (|A|^2 - 1) + 2|E| / k^2)`.
pub fn rayleigh_lagrangian_bound(g: &ProductGraph, a: &DoublyStochasticMatrix) -> Option<(f64, f64)> {
    let lambda = second_eigenvalue(g)?;
    let k = g.k() as f64;
    let lhs = 2.0 * lagrangian(g, a.entries());
    let rhs = lambda * (a.frobenius_sq() - 1.0) + 2.0 * g.num_edges() as f64 / (k * k);
    Some((lhs, rhs))
}
