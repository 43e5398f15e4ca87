//! Lattice-point walks.
//!
//! - [`transportation`]: nonnegative integer `k x k` matrices with all row
//!   and column sums equal to `s`.
//! - [`degree_constrained`]: nonnegative integer weights on an edge list
//!   with prescribed weighted degree at every vertex.
//!
//! Both visit points in a fixed lexicographic order and stop with
//! [`MomentError::SizeLimit`] once more than `budget` points are visited.

use alloc::vec;
use alloc::vec::Vec;

use super::MomentError;

/// Calls `visit` with each row-major matrix.
pub fn transportation(k: usize, s: u32, budget: u64, mut visit: impl FnMut(&[u32])) -> Result<u64, MomentError> {
    let mut m = vec![0u32; k * k];
    let mut row = vec![s; k];
    let mut col = vec![s; k];
    let mut count = 0;
    if k == 0 {
        visit(&m);
        return Ok(1);
    }
    walk_cell(k, 0, &mut m, &mut row, &mut col, budget, &mut count, &mut visit)?;
    Ok(count)
}

#[allow(clippy::too_many_arguments)]
fn walk_cell(
    k: usize,
    cell: usize,
    m: &mut [u32],
    row: &mut [u32],
    col: &mut [u32],
    budget: u64,
    count: &mut u64,
    visit: &mut impl FnMut(&[u32]),
) -> Result<(), MomentError> {
    if cell == k * k {
        *count += 1;
        if *count > budget {
            return Err(MomentError::SizeLimit(budget));
        }
        visit(m);
        return Ok(());
    }
    let (i, j) = (cell / k, cell % k);
    let (lo, hi) = if j == k - 1 {
        (row[i], row[i])
    } else if i == k - 1 {
        (col[j], col[j])
    } else {
        // The rest of the row must fit into the remaining columns.
        let later: u32 = col[j + 1..].iter().sum();
        (row[i].saturating_sub(later), row[i].min(col[j]))
    };
    if lo > hi || hi > row[i] || hi > col[j] {
        return Ok(());
    }
    for v in lo..=hi {
        m[cell] = v;
        row[i] -= v;
        col[j] -= v;
        walk_cell(k, cell + 1, m, row, col, budget, count, visit)?;
        row[i] += v;
        col[j] += v;
    }
    m[cell] = 0;
    Ok(())
}

/// Calls `visit` with the weight of each edge, in edge-list order.
pub fn degree_constrained(
    num_vertices: usize,
    edges: &[(usize, usize)],
    target: &[u32],
    budget: u64,
    mut visit: impl FnMut(&[u32]),
) -> Result<u64, MomentError> {
    assert_eq!(target.len(), num_vertices);
    let mut last = vec![usize::MAX; num_vertices];
    for (e, &(u, v)) in edges.iter().enumerate() {
        last[u] = e;
        last[v] = e;
    }
    if (0..num_vertices).any(|v| last[v] == usize::MAX && target[v] != 0) {
        return Ok(0);
    }
    let mut rem = target.to_vec();
    let mut w = vec![0u32; edges.len()];
    let mut count = 0;
    walk_edge(edges, &last, 0, &mut rem, &mut w, budget, &mut count, &mut visit)?;
    Ok(count)
}

#[allow(clippy::too_many_arguments)]
fn walk_edge(
    edges: &[(usize, usize)],
    last: &[usize],
    e: usize,
    rem: &mut [u32],
    w: &mut [u32],
    budget: u64,
    count: &mut u64,
    visit: &mut impl FnMut(&[u32]),
) -> Result<(), MomentError> {
    if e == edges.len() {
        *count += 1;
        if *count > budget {
            return Err(MomentError::SizeLimit(budget));
        }
        visit(w);
        return Ok(());
    }
    let (u, v) = edges[e];
    let cap = rem[u].min(rem[v]);
    let (lo, hi) = match (last[u] == e, last[v] == e) {
        (true, true) if rem[u] != rem[v] => return Ok(()),
        (true, _) => (rem[u], rem[u]),
        (_, true) => (rem[v], rem[v]),
        _ => (0, cap),
    };
    if hi > cap {
        return Ok(());
    }
    for x in lo..=hi {
        w[e] = x;
        rem[u] -= x;
        rem[v] -= x;
        walk_edge(edges, last, e + 1, rem, w, budget, count, visit)?;
        rem[u] += x;
        rem[v] += x;
    }
    w[e] = 0;
    Ok(())
}

/// All unordered pairs `(i, j)`, `i < j < k`: the edges of `K_k`.
pub fn complete_graph_edges(k: usize) -> Vec<(usize, usize)> {
    (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect()
}
