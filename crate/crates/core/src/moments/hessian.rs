// Constraint matrix of the second-moment optimisation and the determinant
// of its Gram matrix.
//
// Columns: the `k^2` overlap cells `i*k + j`, then one column per edge of
// the Kronecker square in `ProductGraph::edges` order. Rows: row sums of
// `A` for rows `1..k` (row 0 is implied by the rest), column sums for all
// `k` columns, then one row per vertex `v` stating `sum_{u~v} b_uv - a_v`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;

use super::MomentError;
use crate::linalg::bareiss_determinant;
use crate::product::ProductGraph;
use crate::tournament::Tournament;

/// Largest order for which [`hessian_det_numeric`] runs.
pub const MAX_NUMERIC_ORDER: usize = 11;

/// Sparse rows of the constraint matrix, each sorted by column, together
/// with the column count.
pub fn d_hat(t: &Tournament) -> (usize, Vec<Vec<(usize, i64)>>) {
    let k = t.order();
    let g = ProductGraph::kronecker_square(t);
    let edges = g.edges();
    let cells = k * k;
    let mut rows = Vec::with_capacity(cells + 2 * k - 1);
    for i in 1..k {
        rows.push((0..k).map(|j| (i * k + j, 1)).collect());
    }
    for j in 0..k {
        rows.push((0..k).map(|i| (i * k + j, 1)).collect());
    }
    let mut incident = vec![Vec::new(); cells];
    for (e, &(u, v)) in edges.iter().enumerate() {
        incident[u].push(e);
        incident[v].push(e);
    }
    for (a, inc) in incident.iter().enumerate() {
        let mut r = vec![(a, -1)];
        r.extend(inc.iter().map(|&e| (cells + e, 1)));
        rows.push(r);
    }
    (cells + edges.len(), rows)
}

fn sparse_dot(x: &[(usize, i64)], y: &[(usize, i64)]) -> i64 {
    let (mut i, mut j, mut s) = (0, 0, 0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                s += x[i].1 * y[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    s
}

/// `det(D D^T)` for the constraint matrix of `t`, exactly.
pub fn hessian_det_numeric(t: &Tournament) -> Result<BigInt, MomentError> {
    let k = t.order();
    if k > MAX_NUMERIC_ORDER {
        return Err(MomentError::SizeLimit(MAX_NUMERIC_ORDER as u64));
    }
    if k < 3 {
        return Err(MomentError::Domain("need k >= 3"));
    }
    let (_, rows) = d_hat(t);
    let n = rows.len();
    let mut gram = Vec::with_capacity(n * n);
    for x in &rows {
        for y in &rows {
            gram.push(BigInt::from(sparse_dot(x, y)));
        }
    }
    Ok(bareiss_determinant(gram, n))
}

/// `(k-1)^(2k) (k(k-2))^(2k-2) ((k^2-k+4)(k^2-3k+4))^((k-1)^2/2) / 2^(k^2-1)`
/// for odd `k >= 3`.
pub fn hessian_det_closed_form(k: usize) -> Result<BigRational, MomentError> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(MomentError::Domain("need odd k >= 3"));
    }
    let b = |x: usize| BigInt::from(x as u64);
    let num = Pow::pow(b(k - 1), 2 * k)
        * Pow::pow(b(k * (k - 2)), 2 * k - 2)
        * Pow::pow(b((k * k - k + 4) * (k * k - 3 * k + 4)), (k - 1) * (k - 1) / 2);
    let den = Pow::pow(BigInt::from(2u32), k * k - 1);
    Ok(BigRational::new(num, den))
}
