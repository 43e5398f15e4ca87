// Maximum subgraph density e(S)/|S| of the underlying simple graph, by
// Goldberg's cut network with exact rational thresholds.
//
// For threshold p/q (scaled by q): s -> v with capacity q m, v -> t with
// q m + 2p - q deg(v), and q in both directions along every edge. A cut
// with source side {s} + S costs q m n + 2 (p |S| - q e(S)), so the minimum
// cut is below q m n iff some nonempty S has density above p/q.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::graph::OrientedMultigraph;

/// A reduced fraction `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Density {
    pub num: u64,
    pub den: u64,
}

impl Density {
    fn new(num: u64, den: u64) -> Self {
        let g = num.gcd(&den).max(1);
        Self { num: num / g, den: den / g }
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn simple_edges(g: &OrientedMultigraph) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = g
        .arcs
        .iter()
        .filter(|(u, v)| u != v)
        .map(|&(u, v)| ((u.min(v)) as usize, (u.max(v)) as usize))
        .collect();
    e.sort_unstable();
    e.dedup();
    e
}

/// A nonempty vertex set of density strictly above `p/q`, if any.
pub fn density_exceeds(g: &OrientedMultigraph, p: u64, q: u64) -> Option<Vec<usize>> {
    assert!(q > 0);
    let edges = simple_edges(g);
    let n = g.n;
    let m = edges.len() as i64;
    if n == 0 || m == 0 {
        return None;
    }
    let (p, q) = (p as i64, q as i64);
    let mut deg = vec![0i64; n];
    for &(u, v) in &edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    let (s, t) = (n, n + 1);
    let mut net = Dinic::new(n + 2);
    for v in 0..n {
        net.add(s, v, q * m);
        net.add(v, t, q * m + 2 * p - q * deg[v]);
    }
    for &(u, v) in &edges {
        net.add(u, v, q);
        net.add(v, u, q);
    }
    let cut = net.max_flow(s, t);
    if cut < q * m * n as i64 {
        let side = net.source_side(s);
        let set: Vec<usize> = (0..n).filter(|&v| side[v]).collect();
        debug_assert!(!set.is_empty());
        Some(set)
    } else {
        None
    }
}

/// `max_S e(S)/|S|` over nonempty `S`; 0/1 for an edgeless graph.
pub fn max_subgraph_density(g: &OrientedMultigraph) -> Density {
    let edges = simple_edges(g);
    if g.n == 0 || edges.is_empty() {
        return Density { num: 0, den: 1 };
    }
    let mut best = Density::new(edges.len() as u64, g.n as u64);
    // Each witness is strictly denser, and densities are drawn from a
    // finite set, so this terminates.
    while let Some(set) = density_exceeds(g, best.num, best.den) {
        let mut inside = vec![false; g.n];
        for &v in &set {
            inside[v] = true;
        }
        let e = edges.iter().filter(|&&(u, v)| inside[u] && inside[v]).count() as u64;
        let d = Density::new(e, set.len() as u64);
        debug_assert!(d.num * best.den > best.num * d.den);
        best = d;
    }
    best
}

/// Every subgraph has average degree strictly below 3. Ties fail.
pub fn max_avg_degree_below_3(g: &OrientedMultigraph) -> bool {
    let d = max_subgraph_density(g);
    2 * d.num < 3 * d.den
}

struct Dinic {
    head: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<i64>,
    next: Vec<usize>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

const NIL: usize = usize::MAX;

impl Dinic {
    fn new(n: usize) -> Self {
        Self { head: vec![NIL; n], to: vec![], cap: vec![], next: vec![], level: vec![0; n], iter: vec![0; n] }
    }

    fn add(&mut self, u: usize, v: usize, c: i64) {
        debug_assert!(c >= 0);
        for (a, b, cc) in [(u, v, c), (v, u, 0)] {
            self.to.push(b);
            self.cap.push(cc);
            self.next.push(self.head[a]);
            self.head[a] = self.to.len() - 1;
        }
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            let mut e = self.head[u];
            while e != NIL {
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    q.push_back(v);
                }
                e = self.next[e];
            }
        }
    }

    fn dfs(&mut self, u: usize, t: usize, f: i64) -> i64 {
        if u == t {
            return f;
        }
        while self.iter[u] != NIL {
            let e = self.iter[u];
            let v = self.to[e];
            if self.cap[e] > 0 && self.level[v] == self.level[u] + 1 {
                let d = self.dfs(v, t, f.min(self.cap[e]));
                if d > 0 {
                    self.cap[e] -= d;
                    self.cap[e ^ 1] += d;
                    return d;
                }
            }
            self.iter[u] = self.next[e];
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.clone_from(&self.head);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
    }

    /// Vertices reachable from `s` in the residual network.
    fn source_side(&mut self, s: usize) -> Vec<bool> {
        self.bfs(s);
        self.level.iter().map(|&l| l >= 0).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_is_dense_and_forest_is_not() {
        let k4 = OrientedMultigraph::from_arcs(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(max_subgraph_density(&k4), Density { num: 3, den: 2 });
        assert!(!max_avg_degree_below_3(&k4));
        let path = OrientedMultigraph::from_arcs(4, [(0, 1), (1, 2), (2, 3)]);
        assert_eq!(max_subgraph_density(&path), Density { num: 3, den: 4 });
        assert!(max_avg_degree_below_3(&path));
    }

    #[test]
    fn dense_core_with_pendant_path() {
        // K4 on 0..3 plus a long path hanging off vertex 3.
        let mut arcs = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        arcs.extend((3..9).map(|i| (i, i + 1)));
        let g = OrientedMultigraph::from_arcs(10, arcs);
        assert_eq!(max_subgraph_density(&g), Density { num: 3, den: 2 });
    }
}
