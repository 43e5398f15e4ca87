//! Oriented multigraphs and their simple digraph view.

use alloc::vec;
use alloc::vec::Vec;

/// Arcs on `0..n`; loops and repeated pairs are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrientedMultigraph {
    pub n: usize,
    pub arcs: Vec<(u32, u32)>,
}

/// Why a multigraph admits no oriented colouring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Obstruction {
    Loop(usize),
    /// Arcs in both directions between the two vertices.
    TwoCycle(usize, usize),
}

impl OrientedMultigraph {
    pub fn new(n: usize) -> Self {
        Self { n, arcs: Vec::new() }
    }

    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let arcs = arcs
            .into_iter()
            .map(|(u, v)| {
                assert!(u < n && v < n, "arc ({u}, {v}) out of range for n = {n}");
                (u as u32, v as u32)
            })
            .collect();
        Self { n, arcs }
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn add_arc(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n);
        self.arcs.push((u as u32, v as u32));
    }

    pub fn has_loop(&self) -> bool {
        self.arcs.iter().any(|&(u, v)| u == v)
    }

    /// Unordered pairs, sorted, with repeats.
    fn sorted_pairs(&self) -> Vec<(u32, u32)> {
        let mut p: Vec<(u32, u32)> = self.arcs.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        p.sort_unstable();
        p
    }

    pub fn has_repeated_pair(&self) -> bool {
        self.sorted_pairs().windows(2).any(|w| w[0] == w[1])
    }

    /// No loops and no unordered pair carrying two arcs.
    pub fn is_simple(&self) -> bool {
        !self.has_loop() && !self.has_repeated_pair()
    }

    /// Total degree of each vertex (a loop counts twice).
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.arcs {
            d[u as usize] += 1;
            d[v as usize] += 1;
        }
        d
    }

    /// Distinct unordered neighbour lists of the underlying graph, sorted.
    pub fn underlying_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.arcs {
            if u != v {
                adj[u as usize].push(v as usize);
                adj[v as usize].push(u as usize);
            }
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        adj
    }

    /// Weakly connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(u, v) in &self.arcs {
            let (a, b) = (find(&mut parent, u as usize), find(&mut parent, v as usize));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut root_index = vec![usize::MAX; self.n];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for x in 0..self.n {
            let r = find(&mut parent, x);
            if root_index[r] == usize::MAX {
                root_index[r] = comps.len();
                comps.push(Vec::new());
            }
            comps[root_index[r]].push(x);
        }
        comps
    }

    /// Subgraph induced on `vertices`, relabelled `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> OrientedMultigraph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let arcs = self
            .arcs
            .iter()
            .filter(|&&(u, v)| index[u as usize] != usize::MAX && index[v as usize] != usize::MAX)
            .map(|&(u, v)| (index[u as usize] as u32, index[v as usize] as u32))
            .collect();
        OrientedMultigraph { n: vertices.len(), arcs }
    }
}

/// Simple oriented graph with sorted out- and in-lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl Digraph {
    /// Collapses repeated same-direction arcs. Loops and opposite arcs on a
    /// pair are obstructions to every oriented colouring.
    pub fn from_multigraph(g: &OrientedMultigraph) -> Result<Self, Obstruction> {
        let mut out = vec![Vec::new(); g.n];
        let mut inn = vec![Vec::new(); g.n];
        for &(u, v) in &g.arcs {
            let (u, v) = (u as usize, v as usize);
            if u == v {
                return Err(Obstruction::Loop(u));
            }
            out[u].push(v);
            inn[v].push(u);
        }
        for l in out.iter_mut().chain(inn.iter_mut()) {
            l.sort_unstable();
            l.dedup();
        }
        for u in 0..g.n {
            for &v in &out[u] {
                if out[v].binary_search(&u).is_ok() {
                    return Err(Obstruction::TwoCycle(u.min(v), u.max(v)));
                }
            }
        }
        Ok(Self { n: g.n, out, inn })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn out(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    pub fn inn(&self, u: usize) -> &[usize] {
        &self.inn[u]
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    pub fn degree(&self, u: usize) -> usize {
        self.out[u].len() + self.inn[u].len()
    }

    pub fn num_arcs(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn neighbours(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[u].iter().chain(&self.inn[u]).copied()
    }

    pub fn to_multigraph(&self) -> OrientedMultigraph {
        OrientedMultigraph::from_arcs(self.n, (0..self.n).flat_map(|u| self.out[u].iter().map(move |&v| (u, v))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplicity_and_obstructions() {
        let g = OrientedMultigraph::from_arcs(3, [(0, 1), (1, 2)]);
        assert!(g.is_simple());
        let h = OrientedMultigraph::from_arcs(3, [(0, 1), (1, 0)]);
        assert!(!h.is_simple());
        assert_eq!(Digraph::from_multigraph(&h), Err(Obstruction::TwoCycle(0, 1)));
        let l = OrientedMultigraph::from_arcs(2, [(1, 1)]);
        assert_eq!(Digraph::from_multigraph(&l), Err(Obstruction::Loop(1)));
        let p = OrientedMultigraph::from_arcs(2, [(0, 1), (0, 1)]);
        assert!(!p.is_simple());
        assert_eq!(Digraph::from_multigraph(&p).unwrap().num_arcs(), 1);
    }

    #[test]
    fn components_order() {
        let g = OrientedMultigraph::from_arcs(5, [(3, 1), (4, 2)]);
        assert_eq!(g.components(), vec![vec![0], vec![1, 3], vec![2, 4]]);
    }
}
