//! Small dense linear algebra: exact integer determinants and a Jacobi
//! eigensolver for symmetric matrices.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::math::{abs, sqrt};

/// True iff every 2x2 minor of the row-major `n x n` matrix vanishes.
pub fn integer_rank_at_most_one(a: &[i64], n: usize) -> bool {
    let Some(p) = a.iter().position(|&x| x != 0) else {
        return true;
    };
    let (pi, pj) = (p / n, p % n);
    // Rank one iff every entry factors through the pivot row and column.
    (0..n).all(|i| (0..n).all(|j| a[i * n + j] as i128 * a[pi * n + pj] as i128 == a[i * n + pj] as i128 * a[pi * n + j] as i128))
}

/// Fraction-free Gaussian elimination. Consumes a row-major `n x n` matrix.
pub fn bareiss_determinant(mut a: Vec<BigInt>, n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, r * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j]) / &prev;
                a[i * n + j] = v;
            }
        }
        prev = a[k * n + k].clone();
    }
    let d = a[n * n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Eigenvalues of a real symmetric row-major matrix, ascending.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    let mut m = a.to_vec();
    let scale = m.iter().fold(0.0f64, |s, x| s.max(abs(*x))).max(1.0);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum();
        if off <= (1e-15 * scale) * (1e-15 * scale) * (n * n) as f64 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if abs(apq) < 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (abs(theta) + sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                for r in 0..n {
                    let arp = m[r * n + p];
                    let arq = m[r * n + q];
                    m[r * n + p] = c * arp - s * arq;
                    m[r * n + q] = s * arp + c * arq;
                }
                for r in 0..n {
                    let apr = m[p * n + r];
                    let aqr = m[q * n + r];
                    m[p * n + r] = c * apr - s * aqr;
                    m[q * n + r] = s * apr + c * aqr;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    ev
}

/// Groups sorted values into `(value, multiplicity)` clusters within `tol`.
pub fn cluster(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = vec![];
    for &v in values {
        match out.last_mut() {
            Some((c, m)) if abs(v - *c) <= tol => {
                *c = (*c * *m as f64 + v) / (*m as f64 + 1.0);
                *m += 1;
            }
            _ => out.push((v, 1)),
        }
    }
    out
}
