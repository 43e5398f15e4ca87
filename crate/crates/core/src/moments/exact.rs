// Exact rational moments by lattice summation.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use super::lattice::{complete_graph_edges, degree_constrained, transportation};
use super::{ratio, Factorials, FormulaTag, MomentError, MomentValue};
use crate::product::ProductGraph;
use crate::tournament::Tournament;

fn check_divisible(n: usize, k: usize) -> Result<(), MomentError> {
    if k == 0 || !n.is_multiple_of(k) {
        return Err(MomentError::Divisibility { n, k });
    }
    Ok(())
}

/// Near-equitable class sizes: the first `n mod k` classes get one extra.
pub fn class_sizes(n: usize, k: usize) -> Vec<usize> {
    let (q, r) = (n / k, n % k);
    (0..k).map(|i| q + (i < r) as usize).collect()
}

/// `n! / ((n/k)!)^k * ((k-1)/(2k))^m`.
pub fn first_moment_mnm_exact(n: usize, m: usize, k: usize) -> Result<MomentValue, MomentError> {
    check_divisible(n, k)?;
    let mut f = Factorials::new();
    let count = f.int(n) / Pow::pow(f.int(n / k), k);
    let p = ratio(BigInt::from(k - 1), BigInt::from(2 * k));
    Ok(MomentValue::from_exact(BigRational::from_integer(count) * Pow::pow(p, m), FormulaTag::FirstMnmExact))
}

/// First moment over colourings with the near-equitable class sizes of
/// [`class_sizes`]; each arc lands between classes `i -> j` of `T` with
/// probability `s_i s_j / n^2`.
pub fn first_moment_mnm_near_equitable(n: usize, m: usize, t: &Tournament) -> Result<MomentValue, MomentError> {
    let k = t.order();
    if k == 0 || n == 0 {
        return Err(MomentError::Domain("need n, k >= 1"));
    }
    let sizes = class_sizes(n, k);
    let mut f = Factorials::new();
    let mut count = f.int(n);
    for &s in &sizes {
        count /= f.int(s);
    }
    let mut good = 0u64;
    for (i, j) in t.arcs() {
        good += (sizes[i] * sizes[j]) as u64;
    }
    let p = ratio(BigInt::from(good), BigInt::from((n * n) as u64));
    Ok(MomentValue::from_exact(BigRational::from_integer(count) * Pow::pow(p, m), FormulaTag::FirstMnmNearEquitable))
}

/// `sum_X n!/prod X_v! * (sum_{uv in E} X_u X_v / n^2)^m` over integer
/// overlap matrices `X = nA` with row and column sums `n/k`.
pub fn second_moment_mnm_exact(n: usize, m: usize, t: &Tournament, budget: u64) -> Result<MomentValue, MomentError> {
    let k = t.order();
    check_divisible(n, k)?;
    if !t.is_doubly_regular() {
        return Err(MomentError::NotDoublyRegular);
    }
    let edges = ProductGraph::kronecker_square(t).edges();
    let mut f = Factorials::new();
    let fact: Vec<BigInt> = (0..=n).map(|i| f.int(i)).collect();
    let mut total = BigInt::zero();
    transportation(k, (n / k) as u32, budget, |x| {
        let mut multi = fact[n].clone();
        for &v in x {
            multi /= &fact[v as usize];
        }
        let s: u64 = edges.iter().map(|&(a, b)| x[a] as u64 * x[b] as u64).sum();
        total += multi * Pow::pow(BigInt::from(s), m);
    })?;
    let den = Pow::pow(BigInt::from(n as u64), 2 * m);
    Ok(MomentValue::from_exact(ratio(total, den), FormulaTag::SecondMnmExact))
}

/// Exact first moment in `C(n, d)`. An unoriented proper colouring admits
/// exactly one orientation consistent with `T`, so the sum runs over
/// symmetric zero-diagonal class-pair edge counts `x` with row sums `dn/k`.
pub fn first_moment_cnd(n: usize, d: usize, t: &Tournament, budget: u64) -> Result<MomentValue, MomentError> {
    let k = t.order();
    check_divisible(n, k)?;
    let points = d * n;
    if !points.is_multiple_of(2) {
        return Err(MomentError::OddPointCount(points));
    }
    let r = points / k;
    let mut f = Factorials::new();
    let colourings = f.int(n) / Pow::pow(f.int(n / k), k);
    let fact: Vec<BigInt> = (0..=r.max(1)).map(|i| f.int(i)).collect();
    let pairs = complete_graph_edges(k);
    let mut matchings = BigInt::zero();
    degree_constrained(k, &pairs, &vec![r as u32; k], budget, |x| {
        // prod_i r!/prod_{i'} x_{ii'}! * prod_{i<i'} x_{ii'}!
        let mut term = Pow::pow(fact[r].clone(), k);
        for &v in x {
            term /= &fact[v as usize];
        }
        matchings += term;
    })?;
    // (dn - 1)!! 2^{dn/2} = (dn)! / (dn/2)!
    let all = f.int(points) / f.int(points / 2);
    Ok(MomentValue::from_exact(ratio(colourings * matchings, all), FormulaTag::FirstCndExact))
}

/// Exact second moment in `C(n, d)`: outer walk over integer overlap
/// matrices `X = nA`, inner walk over edge counts `Y = dn B` on the edges
/// of the Kronecker square with vertex totals `d X_v`.
pub fn second_moment_cnd_exact(n: usize, d: usize, t: &Tournament, budget: u64) -> Result<MomentValue, MomentError> {
    let k = t.order();
    check_divisible(n, k)?;
    let points = d * n;
    if !points.is_multiple_of(2) {
        return Err(MomentError::OddPointCount(points));
    }
    if !t.is_doubly_regular() {
        return Err(MomentError::NotDoublyRegular);
    }
    let edges = ProductGraph::kronecker_square(t).edges();
    let mut f = Factorials::new();
    let fact: Vec<BigInt> = (0..=points.max(n)).map(|i| f.int(i)).collect();
    let half = points / 2;
    let mut total = BigRational::zero();
    let mut spent = 0u64;
    let mut inner_err = None;
    transportation(k, (n / k) as u32, budget, |x| {
        if inner_err.is_some() {
            return;
        }
        let target: Vec<u32> = x.iter().map(|&v| v * d as u32).collect();
        let mut inner = BigInt::zero();
        let res = degree_constrained(k * k, &edges, &target, budget.saturating_sub(spent), |y| {
            let mut term = fact[half].clone();
            for &w in y {
                term /= &fact[w as usize];
            }
            inner += term;
        });
        match res {
            Ok(c) => spent += c,
            Err(e) => {
                inner_err = Some(e);
                return;
            }
        }
        if inner.is_zero() {
            return;
        }
        // n!/prod X_v! * prod (d X_v)! / (dn)!
        let mut num = fact[n].clone();
        for &v in x {
            num /= &fact[v as usize];
            num *= &fact[(v as usize) * d];
        }
        total += ratio(num * inner, fact[points].clone());
    })?;
    if let Some(e) = inner_err {
        return Err(e);
    }
    Ok(MomentValue::from_exact(total, FormulaTag::SecondCndExact))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mnm_first_moment_small() {
        let v = first_moment_mnm_exact(3, 2, 3).unwrap();
        assert_eq!(v.exact.unwrap(), ratio(BigInt::from(2), BigInt::from(3)));
        assert_eq!(first_moment_mnm_exact(3, 0, 3).unwrap().exact.unwrap(), BigRational::from_integer(6.into()));
        assert!(matches!(first_moment_mnm_exact(4, 0, 3), Err(MomentError::Divisibility { .. })));
    }

    #[test]
    fn mnm_second_moment_at_m0_is_square() {
        let v = second_moment_mnm_exact(3, 0, &Tournament::c3(), 1000).unwrap();
        assert_eq!(v.exact.unwrap(), BigRational::from_integer(36.into()));
    }

    #[test]
    fn cnd_first_moment_d0() {
        let v = first_moment_cnd(6, 0, &Tournament::c3(), 1000).unwrap();
        assert_eq!(v.exact.unwrap(), BigRational::from_integer(90.into()));
    }

    #[test]
    fn near_equitable_agrees_when_divisible() {
        let a = first_moment_mnm_near_equitable(6, 3, &Tournament::c3()).unwrap();
        let b = first_moment_mnm_exact(6, 3, 3).unwrap();
        assert_eq!(a.exact, b.exact);
    }
}
