//! The Kronecker square of a tournament.
//!
//! Vertex `(u, v)` is stored as `u * k + v`. Two vertices `(u, v)` and
//! `(x, y)` are adjacent iff `u -> x` and `v -> y`, or `x -> u` and `y -> v`:
//! exactly the colour-class pairs that can both carry an arc in two
//! simultaneous colourings by the same tournament.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::OrientedMultigraph;
use crate::tournament::{Tournament, TournamentError};

#[derive(Clone, PartialEq, Eq)]
pub struct ProductGraph {
    k: usize,
    words: usize,
    adj: Vec<u64>,
}

impl core::fmt::Debug for ProductGraph {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ProductGraph").field("k", &self.k).field("edges", &self.num_edges()).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SrgParams {
    pub v: usize,
    pub degree: usize,
    pub lambda: usize,
    pub mu: usize,
}

impl SrgParams {
    /// Predicted parameters for the square of a doubly regular tournament of
    /// order `k`.
    pub fn predicted(k: usize) -> Self {
        Self {
            v: k * k,
            degree: (k - 1) * (k - 1) / 2,
            lambda: (k - 1) * (k - 3) / 4 + 1,
            mu: (k - 1) * (k - 3) / 4,
        }
    }

    /// Integer spectrum `(eigenvalue, multiplicity)` sorted descending, or
    /// `None` if the restricted eigenvalues are irrational or the
    /// multiplicities are not integral.
    pub fn spectrum(&self) -> Option<Vec<(i64, usize)>> {
        let (n, d, l, m) = (self.v as i64, self.degree as i64, self.lambda as i64, self.mu as i64);
        // Restricted eigenvalues solve x^2 - (l - m) x - (d - m) = 0.
        let disc = (l - m) * (l - m) + 4 * (d - m);
        let s = isqrt(disc)?;
        if (l - m + s) % 2 != 0 {
            return None;
        }
        let theta = (l - m + s) / 2;
        let tau = (l - m - s) / 2;
        if theta == tau {
            return None;
        }
        // m_theta + m_tau = n - 1 and d + m_theta theta + m_tau tau = 0.
        let num = -d - (n - 1) * tau;
        if num % (theta - tau) != 0 {
            return None;
        }
        let m_theta = num / (theta - tau);
        let m_tau = n - 1 - m_theta;
        if m_theta < 0 || m_tau < 0 {
            return None;
        }
        let mut spec: Vec<(i64, usize)> = vec![(d, 1)];
        for (ev, mult) in [(theta, m_theta as usize), (tau, m_tau as usize)] {
            if mult == 0 {
                continue;
            }
            match spec.iter_mut().find(|(e, _)| *e == ev) {
                Some((_, m)) => *m += mult,
                None => spec.push((ev, mult)),
            }
        }
        spec.sort_by_key(|e| core::cmp::Reverse(e.0));
        Some(spec)
    }
}

fn isqrt(x: i64) -> Option<i64> {
    if x < 0 {
        return None;
    }
    let mut r = crate::math::sqrt(x as f64) as i64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    (r * r == x).then_some(r)
}

/// Predicted spectrum for a doubly regular tournament of order `k >= 7`:
/// `(k-1)^2/2` once, `(k+1)/2` with multiplicity `(k-1)^2/2`, and
/// `-(k-1)/2` with multiplicity `(k-1)(k+3)/2`. At `k = 3` the degree and
/// the positive restricted eigenvalue coincide.
pub fn predicted_spectrum(k: usize) -> Vec<(i64, usize)> {
    let ki = k as i64;
    let top = (ki - 1) * (ki - 1) / 2;
    let pos = (ki + 1) / 2;
    let neg = -(ki - 1) / 2;
    let mut spec = vec![(top, 1usize)];
    let pos_mult = (k - 1) * (k - 1) / 2;
    if pos == top {
        spec[0].1 += pos_mult;
    } else {
        spec.push((pos, pos_mult));
    }
    spec.push((neg, (k - 1) * (k + 3) / 2));
    spec
}

impl ProductGraph {
    pub fn kronecker_square(t: &Tournament) -> Self {
        let k = t.order();
        let n = k * k;
        let words = n.div_ceil(64).max(1);
        let mut adj = vec![0u64; n * words];
        for u in 0..k {
            for v in 0..k {
                let a = u * k + v;
                for x in 0..k {
                    for y in 0..k {
                        if x == u || y == v {
                            continue;
                        }
                        let fwd = t.has_arc(u, x) && t.has_arc(v, y);
                        let bwd = t.has_arc(x, u) && t.has_arc(y, v);
                        if fwd || bwd {
                            let b = x * k + y;
                            adj[a * words + b / 64] |= 1 << (b % 64);
                        }
                    }
                }
            }
        }
        Self { k, words, adj }
    }

    /// Order of the underlying tournament.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_vertices(&self) -> usize {
        self.k * self.k
    }

    #[inline]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    fn row(&self, a: usize) -> &[u64] {
        &self.adj[a * self.words..(a + 1) * self.words]
    }

    pub fn degree(&self, a: usize) -> usize {
        self.row(a).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn common_neighbours(&self, a: usize, b: usize) -> usize {
        self.row(a).iter().zip(self.row(b)).map(|(x, y)| (x & y).count_ones() as usize).sum()
    }

    pub fn neighbours(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_vertices()).filter(move |&b| self.adjacent(a, b))
    }

    /// Edges `(a, b)` with `a < b`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.num_vertices();
        let mut e = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.adjacent(a, b) {
                    e.push((a, b));
                }
            }
        }
        e
    }

    pub fn num_edges(&self) -> usize {
        (0..self.num_vertices()).map(|a| self.degree(a)).sum::<usize>() / 2
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let a = comp[i];
                i += 1;
                for b in self.neighbours(a) {
                    if !seen[b] {
                        seen[b] = true;
                        comp.push(b);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Parameters if the graph is strongly regular. A missing pair class
    /// (no adjacent or no non-adjacent pairs) contributes 0.
    pub fn strong_regularity_params(&self) -> Option<SrgParams> {
        let n = self.num_vertices();
        let degree = self.degree(0);
        if (1..n).any(|a| self.degree(a) != degree) {
            return None;
        }
        let (mut lambda, mut mu) = (None, None);
        for a in 0..n {
            for b in a + 1..n {
                let c = self.common_neighbours(a, b);
                let slot = if self.adjacent(a, b) { &mut lambda } else { &mut mu };
                match *slot {
                    None => *slot = Some(c),
                    Some(x) if x != c => return None,
                    _ => {}
                }
            }
        }
        Some(SrgParams { v: n, degree, lambda: lambda.unwrap_or(0), mu: mu.unwrap_or(0) })
    }

    /// Exact check of `2A = M (x) M + (J - I) (x) (J - I)` entrywise.
    pub fn adjacency_identity_check(t: &Tournament) -> bool {
        let g = Self::kronecker_square(t);
        let k = t.order();
        let m = t.signed_adjacency();
        for u in 0..k {
            for v in 0..k {
                for x in 0..k {
                    for y in 0..k {
                        let signed = m.get(u, x) as i64 * m.get(v, y) as i64;
                        let offdiag = ((u != x) && (v != y)) as i64;
                        let lhs = 2 * g.adjacent(u * k + v, x * k + y) as i64;
                        if lhs != signed + offdiag {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Exact spectrum certificate: the graph is strongly regular with the
    /// predicted parameters, `A^2 = dI + lambda A + mu (J - I - A)` holds
    /// entrywise, and the resulting integer spectrum matches
    /// [`predicted_spectrum`].
    pub fn spectrum_check(t: &Tournament) -> Result<bool, TournamentError> {
        if !t.is_doubly_regular() {
            return Err(TournamentError::NotDoublyRegular);
        }
        let k = t.order();
        let g = Self::kronecker_square(t);
        let Some(p) = g.strong_regularity_params() else {
            return Ok(false);
        };
        if p != SrgParams::predicted(k) {
            return Ok(false);
        }
        let n = g.num_vertices();
        for a in 0..n {
            for b in 0..n {
                let sq = if a == b { g.degree(a) } else { g.common_neighbours(a, b) };
                let want = if a == b {
                    p.degree
                } else if g.adjacent(a, b) {
                    p.lambda
                } else {
                    p.mu
                };
                if sq != want {
                    return Ok(false);
                }
            }
        }
        Ok(p.spectrum() == Some(predicted_spectrum(k)))
    }

    /// Floating-point eigenvalues of the adjacency matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.num_vertices();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if self.adjacent(i, j) {
                    a[i * n + j] = 1.0;
                }
            }
        }
        crate::linalg::symmetric_eigenvalues(&a, n)
    }

    /// Orients each edge by the first coordinate's tournament arc.
    pub fn to_oriented(&self, t: &Tournament) -> OrientedMultigraph {
        let k = self.k;
        let arcs = self.edges().into_iter().map(|(a, b)| if t.has_arc(a / k, b / k) { (a, b) } else { (b, a) });
        OrientedMultigraph::from_arcs(self.num_vertices(), arcs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_of_c3_is_three_triangles() {
        let g = ProductGraph::kronecker_square(&Tournament::c3());
        let comps = g.components();
        assert_eq!(comps.len(), 3);
        assert!(comps.iter().all(|c| c.len() == 3));
        assert_eq!(g.strong_regularity_params(), Some(SrgParams { v: 9, degree: 2, lambda: 1, mu: 0 }));
        assert_eq!(SrgParams::predicted(3).spectrum(), Some(vec![(2, 3), (-1, 6)]));
    }

    #[test]
    fn paley_seven_square() {
        let t = Tournament::paley(7).unwrap();
        let g = ProductGraph::kronecker_square(&t);
        assert!(g.is_connected());
        assert_eq!(g.strong_regularity_params(), Some(SrgParams { v: 49, degree: 18, lambda: 7, mu: 6 }));
        assert_eq!(g.num_edges(), 441);
        assert_eq!(ProductGraph::spectrum_check(&t), Ok(true));
        assert_eq!(predicted_spectrum(7), vec![(18, 1), (4, 18), (-3, 30)]);
    }
}
