//! Brute-force moments by explicit enumeration of random outcomes and
//! colourings. Independent of the lattice formulas and only usable for
//! tiny instances.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use super::exact::class_sizes;
use crate::tournament::Tournament;

/// All maps `[n] -> [k]` with class sizes `sizes` (as a multiset in label
/// order), by filtering all `k^n` maps.
pub fn colourings_with_sizes(n: usize, sizes: &[usize]) -> Vec<Vec<usize>> {
    let k = sizes.len();
    let mut out = Vec::new();
    let mut h = vec![0usize; n];
    let total = (k as u64).pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut counts = vec![0usize; k];
        for slot in h.iter_mut() {
            *slot = (c % k as u64) as usize;
            c /= k as u64;
            counts[*slot] += 1;
        }
        if counts == sizes {
            out.push(h.clone());
        }
    }
    out
}

pub fn equitable_colourings(n: usize, k: usize) -> Vec<Vec<usize>> {
    colourings_with_sizes(n, &vec![n / k; k])
}

fn respects(t: &Tournament, h: &[usize], u: usize, v: usize) -> bool {
    h[u] != h[v] && t.has_arc(h[u], h[v])
}

/// Visits every sequence of `m` ordered pairs on `[n]`.
fn for_each_arc_sequence(n: usize, m: usize, mut visit: impl FnMut(&[(usize, usize)])) {
    let mut seq = vec![(0usize, 0usize); m];
    let total = (n * n).pow(m as u32);
    for code in 0..total {
        let mut c = code;
        for s in seq.iter_mut() {
            let p = c % (n * n);
            c /= n * n;
            *s = (p / n, p % n);
        }
        visit(&seq);
    }
}

fn per_sequence(n: usize, m: usize, mut count: impl FnMut(&[(usize, usize)]) -> u64) -> BigRational {
    let mut total = BigInt::zero();
    for_each_arc_sequence(n, m, |seq| total += BigInt::from(count(seq)));
    BigRational::new(total, Pow::pow(BigInt::from(n), 2 * m))
}

/// `E Y` in `M(n, m)` over colourings with the given class sizes.
pub fn first_moment_mnm_sizes(n: usize, m: usize, t: &Tournament, sizes: &[usize]) -> BigRational {
    let hs = colourings_with_sizes(n, sizes);
    per_sequence(n, m, |seq| hs.iter().filter(|h| seq.iter().all(|&(u, v)| respects(t, h, u, v))).count() as u64)
}

pub fn first_moment_mnm(n: usize, m: usize, t: &Tournament) -> BigRational {
    first_moment_mnm_sizes(n, m, t, &class_sizes(n, t.order()))
}

pub fn second_moment_mnm(n: usize, m: usize, t: &Tournament) -> BigRational {
    let hs = equitable_colourings(n, t.order());
    per_sequence(n, m, |seq| {
        let good = hs.iter().filter(|h| seq.iter().all(|&(u, v)| respects(t, h, u, v))).count() as u64;
        good * good
    })
}

/// Visits every perfect matching of `0..points` as a list of pairs.
fn for_each_matching(points: usize, mut visit: impl FnMut(&[(usize, usize)])) {
    fn rec(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, visit: &mut dyn FnMut(&[(usize, usize)])) {
        if free.is_empty() {
            visit(cur);
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            cur.push((a, b));
            rec(free, cur, visit);
            cur.pop();
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    let mut free: Vec<usize> = (0..points).collect();
    rec(&mut free, &mut Vec::new(), &mut visit);
}

/// `E Y` in `C(n, d)`, enumerating matchings, all `2^(dn/2)` orientations
/// and all equitable colourings.
pub fn first_moment_cnd(n: usize, d: usize, t: &Tournament) -> BigRational {
    let hs = equitable_colourings(n, t.order());
    let mut good = 0u64;
    let mut configs = 0u64;
    for_each_matching(d * n, |mt| {
        let edges: Vec<(usize, usize)> = mt.iter().map(|&(a, b)| (a / d, b / d)).collect();
        for bits in 0u64..(1 << edges.len()) {
            configs += 1;
            let arcs: Vec<(usize, usize)> =
                edges.iter().enumerate().map(|(i, &(u, v))| if bits >> i & 1 == 1 { (u, v) } else { (v, u) }).collect();
            good += hs.iter().filter(|h| arcs.iter().all(|&(u, v)| respects(t, h, u, v))).count() as u64;
        }
    });
    if d * n == 0 {
        return BigRational::from_integer(BigInt::from(hs.len()));
    }
    BigRational::new(BigInt::from(good), BigInt::from(configs))
}

/// `E Y^2` in `C(n, d)`. For each matching and pair of colourings, an edge
/// admits at most one orientation respecting the first colouring, so the
/// number of orientations respecting both is a product of per-edge 0/1
/// counts.
pub fn second_moment_cnd(n: usize, d: usize, t: &Tournament) -> BigRational {
    let hs = equitable_colourings(n, t.order());
    let mut good = BigInt::zero();
    let mut configs = BigInt::zero();
    let orientations = BigInt::from(2u32).pow((d * n / 2) as u32);
    for_each_matching(d * n, |mt| {
        configs += &orientations;
        let edges: Vec<(usize, usize)> = mt.iter().map(|&(a, b)| (a / d, b / d)).collect();
        let proper: Vec<&Vec<usize>> = hs.iter().filter(|h| edges.iter().all(|&(u, v)| h[u] != h[v])).collect();
        for h1 in &proper {
            for h2 in &proper {
                let both = edges.iter().all(|&(u, v)| t.has_arc(h1[u], h1[v]) == t.has_arc(h2[u], h2[v]));
                if both {
                    good += 1;
                }
            }
        }
    });
    if d * n == 0 {
        let c = BigInt::from(hs.len());
        return BigRational::from_integer(&c * &c);
    }
    BigRational::new(good, configs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_count() {
        let mut c = 0;
        for_each_matching(6, |_| c += 1);
        assert_eq!(c, 15);
    }

    #[test]
    fn equitable_count() {
        assert_eq!(equitable_colourings(6, 3).len(), 90);
    }
}
