// Exponential-order functionals of the moment sums.
//
// First moment: `a` is the class-size vector (sums to 1), `b` the symmetric
// zero-diagonal `k x k` matrix of class-pair edge densities with row sums
// `a_i` (ordered entries sum to 1).
//
// Second moment: `A` is the `k x k` overlap matrix with row and column sums
// `1/k`, `B` holds one density per edge of the Kronecker square (edge-list
// order of `ProductGraph::edges`) with `sum_{u~v} b_uv = a_v`, so the edge
// densities sum to 1/2.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::MomentError;
use crate::math::{abs, ln, xlnx};
use crate::product::ProductGraph;

const TOL: f64 = 1e-9;

/// `b_ii' = 1/(k(k-1))` off the diagonal.
pub fn b_hat(k: usize) -> Vec<f64> {
    let v = 1.0 / (k * (k - 1)) as f64;
    (0..k * k).map(|c| if c / k == c % k { 0.0 } else { v }).collect()
}

fn pair_term(ai: f64, aj: f64, b: f64, d: f64) -> f64 {
    if b == 0.0 {
        return 0.0;
    }
    b * ((d - 1.0) * ln(ai * aj) - d * ln(2.0 * b))
}

/// `sum_{i<i'} b_ii' ln((a_i a_i')^(d-1) / (2 b_ii')^d)`.
pub fn f_ab(a: &[f64], b: &[f64], d: f64) -> Result<f64, MomentError> {
    let k = a.len();
    if b.len() != k * k || a.iter().any(|&x| !(x > 0.0)) || abs(a.iter().sum::<f64>() - 1.0) > TOL {
        return Err(MomentError::Domain("a must be a positive probability vector"));
    }
    for i in 0..k {
        if b[i * k + i] != 0.0 {
            return Err(MomentError::Domain("b must vanish on the diagonal"));
        }
        for j in 0..k {
            if b[i * k + j] < 0.0 || abs(b[i * k + j] - b[j * k + i]) > TOL {
                return Err(MomentError::Domain("b must be symmetric and nonnegative"));
            }
        }
        if abs(b[i * k..(i + 1) * k].iter().sum::<f64>() - a[i]) > TOL {
            return Err(MomentError::Domain("row sums of b must equal a"));
        }
    }
    let mut f = 0.0;
    for i in 0..k {
        for j in i + 1..k {
            f += pair_term(a[i], a[j], b[i * k + j], d);
        }
    }
    Ok(f)
}

/// The same expression over ordered pairs, halved, for any nonnegative `b`
/// with ordered total 1 and zero diagonal.
pub fn f_ab_relaxed(a: &[f64], b: &[f64], d: f64) -> Result<f64, MomentError> {
    let k = a.len();
    if b.len() != k * k || b.iter().any(|&x| x < 0.0) || abs(b.iter().sum::<f64>() - 1.0) > TOL {
        return Err(MomentError::Domain("b must be a distribution on ordered pairs"));
    }
    if (0..k).any(|i| b[i * k + i] != 0.0) {
        return Err(MomentError::Domain("b must vanish on the diagonal"));
    }
    let mut f = 0.0;
    for i in 0..k {
        for j in 0..k {
            if i != j {
                f += pair_term(a[i], a[j], b[i * k + j], d);
            }
        }
    }
    Ok(f / 2.0)
}

fn check_overlap(g: &ProductGraph, a: &[f64]) -> Result<(), MomentError> {
    let k = g.k();
    if a.len() != k * k || a.iter().any(|&x| x < 0.0) {
        return Err(MomentError::Domain("A must be a nonnegative k x k matrix"));
    }
    let t = 1.0 / k as f64;
    for i in 0..k {
        let r: f64 = a[i * k..(i + 1) * k].iter().sum();
        let c: f64 = (0..k).map(|j| a[j * k + i]).sum();
        if abs(r - t) > TOL || abs(c - t) > TOL {
            return Err(MomentError::Domain("A must have row and column sums 1/k"));
        }
    }
    Ok(())
}

/// `(d-1) sum_v a_v ln a_v - d sum_E b ln(2b)`, requiring
/// `sum_{u~v} b_uv = a_v` at every vertex.
pub fn f_big_ab(g: &ProductGraph, a: &[f64], b: &[f64], d: f64) -> Result<f64, MomentError> {
    check_overlap(g, a)?;
    let edges = g.edges();
    if b.len() != edges.len() || b.iter().any(|&x| x < 0.0) {
        return Err(MomentError::Domain("B must be nonnegative on the edges"));
    }
    let mut deg = vec![0.0; a.len()];
    for (&(u, v), &w) in edges.iter().zip(b) {
        deg[u] += w;
        deg[v] += w;
    }
    if deg.iter().zip(a).any(|(x, y)| abs(x - y) > TOL) {
        return Err(MomentError::Domain("B must have vertex sums a_v"));
    }
    let ent: f64 = a.iter().map(|&x| xlnx(x)).sum();
    let edge: f64 = b.iter().map(|&w| if w == 0.0 { 0.0 } else { w * ln(2.0 * w) }).sum();
    Ok((d - 1.0) * ent - d * edge)
}

/// `-sum_v a_v ln a_v + d sum_E b ln(a_u a_v / (2b))`, for `B` only
/// required to have edge total 1/2 (ordered total 1).
pub fn f_big_ab_relaxed(g: &ProductGraph, a: &[f64], b: &[f64], d: f64) -> Result<f64, MomentError> {
    check_overlap(g, a)?;
    let edges = g.edges();
    if b.len() != edges.len() || b.iter().any(|&x| x < 0.0) || abs(b.iter().sum::<f64>() - 0.5) > TOL {
        return Err(MomentError::Domain("B must have edge total 1/2"));
    }
    let ent: f64 = a.iter().map(|&x| xlnx(x)).sum();
    let edge: f64 = edges
        .iter()
        .zip(b)
        .map(|(&(u, v), &w)| if w == 0.0 { 0.0 } else { w * ln(a[u] * a[v] / (2.0 * w)) })
        .sum();
    Ok(-ent + d * edge)
}

/// `b*_uv = a_u a_v / (2 sum_E a_x a_y)`, one value per edge.
pub fn kl_argmax_b(g: &ProductGraph, a: &[f64]) -> Vec<f64> {
    let edges = g.edges();
    let s: f64 = edges.iter().map(|&(u, v)| a[u] * a[v]).sum();
    edges.iter().map(|&(u, v)| a[u] * a[v] / (2.0 * s)).collect()
}

pub fn kl_argmax_b_exact(g: &ProductGraph, a: &[BigRational]) -> Vec<BigRational> {
    let edges = g.edges();
    let s = edges.iter().fold(BigRational::zero(), |acc, &(u, v)| acc + &a[u] * &a[v]);
    let two_s = s * BigRational::from_integer(BigInt::from(2));
    edges.iter().map(|&(u, v)| &a[u] * &a[v] / &two_s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tournament::Tournament;

    #[test]
    fn first_moment_functional_at_centre() {
        // exp f = k ((k-1)/(2k))^(d/2); equals 1 at k = 3, d = 2.
        let a = vec![1.0 / 3.0; 3];
        let f = f_ab(&a, &b_hat(3), 2.0).unwrap();
        assert!(f.abs() < 1e-14);
        assert!((f_ab_relaxed(&a, &b_hat(3), 2.0).unwrap() - f).abs() < 1e-15);
    }

    #[test]
    fn second_moment_functional_at_centre() {
        let g = ProductGraph::kronecker_square(&Tournament::paley(7).unwrap());
        let a = vec![1.0 / 49.0; 49];
        let b = kl_argmax_b(&g, &a);
        assert!(b.iter().all(|&x| (x * 882.0 - 1.0).abs() < 1e-12));
        let f = f_big_ab(&g, &a, &b, 2.0).unwrap();
        assert!((f - (49f64.ln() + 2.0 * (3.0f64 / 7.0).ln())).abs() < 1e-12);
        assert!((f_big_ab_relaxed(&g, &a, &b, 2.0).unwrap() - f).abs() < 1e-12);
    }
}
