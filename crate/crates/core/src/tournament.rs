//! Tournaments, Paley construction and double-regularity certificates.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TournamentError {
    #[error("Paley order {0} must be a prime congruent to 3 mod 4 and at most 10000")]
    InvalidOrder(u64),
    #[error("{u} -> {v} is not an arc")]
    NotAnArc { u: usize, v: usize },
    #[error("tournament is not doubly regular")]
    NotDoublyRegular,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("arc ({0}, {0}) is a loop")]
    Loop(usize),
    #[error("pair {{{0}, {1}}} appears more than once")]
    DuplicatePair(usize, usize),
    #[error("expected {expected} arcs, found {found}")]
    WrongArcCount { expected: usize, found: usize },
}

/// A tournament on `0..order`, stored as out-neighbourhood bit rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Tournament {
    order: usize,
    words: usize,
    out: Vec<u64>,
}

impl core::fmt::Debug for Tournament {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Tournament")
            .field("order", &self.order)
            .field("arcs", &self.arcs())
            .finish()
    }
}

impl Tournament {
    /// Every unordered pair must appear exactly once.
    pub fn from_arcs(order: usize, arcs: &[(usize, usize)]) -> Result<Self, TournamentError> {
        let expected = order * order.saturating_sub(1) / 2;
        if arcs.len() != expected {
            return Err(TournamentError::WrongArcCount { expected, found: arcs.len() });
        }
        let mut t = Self::empty(order);
        for &(u, v) in arcs {
            if u >= order {
                return Err(TournamentError::VertexOutOfRange(u));
            }
            if v >= order {
                return Err(TournamentError::VertexOutOfRange(v));
            }
            if u == v {
                return Err(TournamentError::Loop(u));
            }
            if t.has_arc(u, v) || t.has_arc(v, u) {
                return Err(TournamentError::DuplicatePair(u.min(v), u.max(v)));
            }
            t.set(u, v);
        }
        Ok(t)
    }

    /// Build from a predicate; `beats(u, v)` is consulted for `u < v` only.
    pub fn from_fn(order: usize, mut beats: impl FnMut(usize, usize) -> bool) -> Self {
        let mut t = Self::empty(order);
        for u in 0..order {
            for v in u + 1..order {
                if beats(u, v) {
                    t.set(u, v);
                } else {
                    t.set(v, u);
                }
            }
        }
        t
    }

    fn empty(order: usize) -> Self {
        let words = order.div_ceil(64).max(1);
        Self { order, words, out: vec![0; order * words] }
    }

    fn set(&mut self, u: usize, v: usize) {
        self.out[u * self.words + v / 64] |= 1 << (v % 64);
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out_row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn out_row(&self, u: usize) -> &[u64] {
        &self.out[u * self.words..(u + 1) * self.words]
    }

    pub fn out_neighbours(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.order).filter(move |&v| self.has_arc(u, v))
    }

    pub fn in_neighbours(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.order).filter(move |&v| self.has_arc(v, u))
    }

    /// All arcs in lexicographic order of the unordered pair.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs = Vec::with_capacity(self.order * self.order.saturating_sub(1) / 2);
        for u in 0..self.order {
            for v in u + 1..self.order {
                arcs.push(if self.has_arc(u, v) { (u, v) } else { (v, u) });
            }
        }
        arcs
    }

    /// Out-neighbourhood as a mask; only valid for order at most 64.
    pub(crate) fn out_mask(&self, u: usize) -> u64 {
        debug_assert!(self.order <= 64);
        self.out[u * self.words]
    }

    pub(crate) fn in_mask(&self, u: usize) -> u64 {
        debug_assert!(self.order <= 64);
        let mut m = 0u64;
        for v in 0..self.order {
            if self.has_arc(v, u) {
                m |= 1 << v;
            }
        }
        m
    }

    /// True if `has_arc(u, v)` depends only on `(v - u) mod order`.
    pub fn is_circulant(&self) -> bool {
        let k = self.order;
        (0..k).all(|u| (0..k).all(|v| u == v || self.has_arc(u, v) == self.has_arc(0, (v + k - u) % k)))
    }

    /// Paley tournament: `u -> v` iff `v - u` is a nonzero square mod `q`.
    pub fn paley(q: u64) -> Result<Self, TournamentError> {
        if q > 10_000 || q % 4 != 3 || !is_prime(q) {
            return Err(TournamentError::InvalidOrder(q));
        }
        let q = q as usize;
        let mut residue = vec![false; q];
        for x in 1..q {
            residue[x * x % q] = true;
        }
        Ok(Self::from_fn(q, |u, v| residue[(v + q - u) % q]))
    }

    /// The cyclic triangle `0 -> 1 -> 2 -> 0`.
    pub fn c3() -> Self {
        Self::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).expect("fixed arcs")
    }

    /// The transitive triangle with source 0 and sink 2.
    pub fn t3() -> Self {
        Self::from_arcs(3, &[(0, 1), (1, 2), (0, 2)]).expect("fixed arcs")
    }

    /// The four-vertex target for cycles without a directed 5-cycle.
    pub fn t4() -> Self {
        Self::from_arcs(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (2, 0), (1, 3)]).expect("fixed arcs")
    }

    /// The rotational five-vertex tournament `u -> u+1, u+2 (mod 5)`.
    pub fn t5() -> Self {
        Self::from_arcs(
            5,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (2, 4), (4, 1), (1, 3), (3, 0)],
        )
        .expect("fixed arcs")
    }

    /// Rotational tournament on odd `k`: `u -> u + s` for `s` in `1..=(k-1)/2`.
    /// Regular for every odd `k`; doubly regular only for `k` = 3.
    pub fn rotational(k: usize) -> Self {
        assert!(k % 2 == 1, "rotational tournament needs odd order");
        Self::from_fn(k, |u, v| (v - u) <= (k - 1) / 2)
    }

    /// Common out-neighbour count of `u` and `v`.
    pub fn common_out(&self, u: usize, v: usize) -> usize {
        self.out_row(u)
            .iter()
            .zip(self.out_row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn double_regularity(&self) -> RegularityReport {
        let k = self.order;
        let degrees: Vec<usize> = (0..k).map(|u| self.out_degree(u)).collect();
        let regular = degrees.windows(2).all(|w| w[0] == w[1]);
        let mut ell = None;
        let mut constant = true;
        'outer: for u in 0..k {
            for v in u + 1..k {
                let c = self.common_out(u, v);
                match ell {
                    None => ell = Some(c),
                    Some(e) if e != c => {
                        constant = false;
                        break 'outer;
                    }
                    _ => {}
                }
            }
        }
        let doubly_regular = k >= 3 && regular && constant;
        RegularityReport {
            order: k,
            doubly_regular,
            k_half: if regular { degrees.first().copied() } else { None },
            ell: if doubly_regular { ell } else { None },
        }
    }

    pub fn is_doubly_regular(&self) -> bool {
        self.double_regularity().doubly_regular
    }

    /// For an arc `u -> v`, counts of `w` by the pattern of arcs between
    /// `w` and the arc's ends:
    /// `[u->w & v->w, u->w & w->v, w->u & v->w, w->u & w->v]`.
    pub fn triangle_census(&self, u: usize, v: usize) -> Result<[usize; 4], TournamentError> {
        if u >= self.order || v >= self.order || u == v || !self.has_arc(u, v) {
            return Err(TournamentError::NotAnArc { u, v });
        }
        let mut c = [0; 4];
        for w in 0..self.order {
            if w == u || w == v {
                continue;
            }
            let idx = (!self.has_arc(u, w) as usize) * 2 + (!self.has_arc(v, w) as usize);
            // idx: 0 = u->w,v->w; 1 = u->w,w->v; 2 = w->u,v->w; 3 = w->u,w->v
            c[idx] += 1;
        }
        Ok(c)
    }

    pub fn signed_adjacency(&self) -> SignedAdjacency {
        let k = self.order;
        let mut entries = vec![0i8; k * k];
        for u in 0..k {
            for v in 0..k {
                if u != v {
                    entries[u * k + v] = if self.has_arc(u, v) { 1 } else { -1 };
                }
            }
        }
        SignedAdjacency { order: k, entries }
    }

    /// Checks `M^2 = J - kI` exactly.
    pub fn verify_signed_square(&self) -> Result<bool, TournamentError> {
        if !self.is_doubly_regular() {
            return Err(TournamentError::NotDoublyRegular);
        }
        let k = self.order as i64;
        let sq = self.signed_adjacency().square();
        let n = self.order;
        Ok((0..n).all(|i| (0..n).all(|j| sq[i * n + j] == if i == j { 1 - k } else { 1 })))
    }

    /// Certifies the spectrum `{0, +-i sqrt(k)}` with multiplicities
    /// `1, (k-1)/2, (k-1)/2`.
    ///
    /// `M` is real skew-symmetric, hence normal with eigenvalues in conjugate
    /// pairs on the imaginary axis. `M^2 1 = 0` and `M^2 + kI` of rank one pin
    /// the spectrum of `M^2` to `0` (once) and `-k` (`k-1` times).
    pub fn signed_spectrum_check(&self) -> Result<bool, TournamentError> {
        if !self.is_doubly_regular() {
            return Err(TournamentError::NotDoublyRegular);
        }
        let n = self.order;
        let k = n as i64;
        let m = self.signed_adjacency();
        let skew = (0..n).all(|i| (0..n).all(|j| m.get(i, j) == -m.get(j, i)));
        let mut sq = m.square();
        let kills_ones = (0..n).all(|i| sq[i * n..(i + 1) * n].iter().sum::<i64>() == 0);
        for i in 0..n {
            sq[i * n + i] += k;
        }
        Ok(skew && kills_ones && crate::linalg::integer_rank_at_most_one(&sq, n) && sq.iter().any(|&x| x != 0))
    }

    /// Moduli of the eigenvalues of `M`, ascending: square roots of the
    /// eigenvalues of `M^T M`.
    pub fn signed_eigenvalue_moduli(&self) -> Vec<f64> {
        let n = self.order;
        let m = self.signed_adjacency();
        let mut mtm = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0i64;
                for r in 0..n {
                    s += m.get(r, i) as i64 * m.get(r, j) as i64;
                }
                mtm[i * n + j] = s as f64;
            }
        }
        crate::linalg::symmetric_eigenvalues(&mtm, n)
            .into_iter()
            .map(|x| crate::math::sqrt(x.max(0.0)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RegularityReport {
    pub order: usize,
    pub doubly_regular: bool,
    /// Common out-degree, if regular.
    pub k_half: Option<usize>,
    /// Common out-neighbour count of every pair, if doubly regular.
    pub ell: Option<usize>,
}

/// `M[u][v] = +1` if `u -> v`, `-1` if `v -> u`, `0` on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedAdjacency {
    order: usize,
    entries: Vec<i8>,
}

impl SignedAdjacency {
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> i8 {
        self.entries[u * self.order + v]
    }

    /// Row-major `M^2`.
    pub fn square(&self) -> Vec<i64> {
        let n = self.order;
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for r in 0..n {
                let a = self.get(i, r) as i64;
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * self.get(r, j) as i64;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paley_seven_census_and_degrees() {
        let t = Tournament::paley(7).unwrap();
        let r = t.double_regularity();
        assert!(r.doubly_regular);
        assert_eq!((r.k_half, r.ell), (Some(3), Some(1)));
        assert_eq!(t.triangle_census(0, 1).unwrap(), [1, 1, 2, 1]);
    }

    #[test]
    fn paley_three_is_c3() {
        assert_eq!(Tournament::paley(3).unwrap(), Tournament::c3());
    }

    #[test]
    fn rejects_bad_orders() {
        for q in [1, 2, 4, 5, 9, 13, 15, 10_007] {
            assert_eq!(Tournament::paley(q), Err(TournamentError::InvalidOrder(q)));
        }
    }

    #[test]
    fn census_rejects_non_arc() {
        let t = Tournament::paley(7).unwrap();
        assert_eq!(t.triangle_census(1, 0), Err(TournamentError::NotAnArc { u: 1, v: 0 }));
    }

    #[test]
    fn t5_is_rotational_but_not_doubly_regular() {
        assert_eq!(Tournament::t5(), Tournament::rotational(5));
        let r = Tournament::t5().double_regularity();
        assert_eq!(r.k_half, Some(2));
        assert!(!r.doubly_regular);
        assert_eq!(Tournament::t5().verify_signed_square(), Err(TournamentError::NotDoublyRegular));
    }

    #[test]
    fn from_arcs_validation() {
        assert!(matches!(
            Tournament::from_arcs(3, &[(0, 1), (1, 0), (1, 2)]),
            Err(TournamentError::DuplicatePair(0, 1))
        ));
        assert!(matches!(
            Tournament::from_arcs(3, &[(0, 1), (1, 2)]),
            Err(TournamentError::WrongArcCount { expected: 3, found: 2 })
        ));
    }
}
