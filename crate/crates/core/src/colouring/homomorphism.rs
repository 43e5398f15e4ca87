// Homomorphism search G -> T with bitmask domains and arc consistency.
//
// Components are solved independently. When T is a circulant (Paley
// tournaments, C3, T5) it is vertex-transitive, so the first branching vertex
// of each component is pinned to 0 without loss.

use alloc::vec;
use alloc::vec::Vec;

use super::OrientedColouring;
use crate::graph::{Digraph, Obstruction, OrientedMultigraph};
use crate::tournament::Tournament;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomOutcome {
    Found(OrientedColouring),
    Infeasible,
    /// The node budget ran out first.
    Aborted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSearch {
    pub outcome: HomOutcome,
    pub nodes_explored: u64,
    pub obstruction: Option<Obstruction>,
}

/// A `T`-colouring of `g`, if one exists. Panics if `T` has more than 64
/// vertices.
pub fn t_colourable(g: &OrientedMultigraph, t: &Tournament) -> Option<OrientedColouring> {
    match t_colourable_with(g, t, None).outcome {
        HomOutcome::Found(c) => Some(c),
        HomOutcome::Infeasible => None,
        HomOutcome::Aborted => unreachable!("no budget"),
    }
}

pub fn t_colourable_with(g: &OrientedMultigraph, t: &Tournament, node_limit: Option<u64>) -> HomSearch {
    assert!(t.order() <= 64, "target order {} exceeds 64", t.order());
    let dg = match Digraph::from_multigraph(g) {
        Ok(d) => d,
        Err(o) => return HomSearch { outcome: HomOutcome::Infeasible, nodes_explored: 0, obstruction: Some(o) },
    };
    let k = t.order();
    if k == 0 {
        let outcome = if g.n == 0 { HomOutcome::Found(OrientedColouring::new(vec![])) } else { HomOutcome::Infeasible };
        return HomSearch { outcome, nodes_explored: 0, obstruction: None };
    }
    let target = Target::new(t);
    let mut solver = Solver { g: &dg, t: &target, nodes: 0, limit: node_limit.unwrap_or(u64::MAX) };
    let mut colours = vec![0usize; g.n];
    for comp in g.components() {
        match solver.component(&comp) {
            Ok(Some(assign)) => {
                for (i, &v) in comp.iter().enumerate() {
                    colours[v] = assign[i];
                }
            }
            Ok(None) => {
                return HomSearch { outcome: HomOutcome::Infeasible, nodes_explored: solver.nodes, obstruction: None }
            }
            Err(()) => {
                return HomSearch { outcome: HomOutcome::Aborted, nodes_explored: solver.nodes, obstruction: None }
            }
        }
    }
    HomSearch {
        outcome: HomOutcome::Found(OrientedColouring::new(colours)),
        nodes_explored: solver.nodes,
        obstruction: None,
    }
}

struct Target {
    full: u64,
    out: Vec<u64>,
    inn: Vec<u64>,
    circulant: bool,
}

impl Target {
    fn new(t: &Tournament) -> Self {
        let k = t.order();
        Self {
            full: if k == 64 { u64::MAX } else { (1u64 << k) - 1 },
            out: (0..k).map(|u| t.out_mask(u)).collect(),
            inn: (0..k).map(|u| t.in_mask(u)).collect(),
            circulant: t.is_circulant(),
        }
    }

    /// Values a head may take given the tail's domain.
    fn succ(&self, mut d: u64) -> u64 {
        let mut s = 0;
        while d != 0 {
            s |= self.out[d.trailing_zeros() as usize];
            d &= d - 1;
        }
        s
    }

    /// Values a tail may take given the head's domain.
    fn pred(&self, mut d: u64) -> u64 {
        let mut s = 0;
        while d != 0 {
            s |= self.inn[d.trailing_zeros() as usize];
            d &= d - 1;
        }
        s
    }
}

struct Solver<'a> {
    g: &'a Digraph,
    t: &'a Target,
    nodes: u64,
    limit: u64,
}

struct Local {
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl Solver<'_> {
    /// `Ok(None)` if infeasible, `Err` if the budget ran out.
    fn component(&mut self, comp: &[usize]) -> Result<Option<Vec<usize>>, ()> {
        let mut index = alloc::collections::BTreeMap::new();
        for (i, &v) in comp.iter().enumerate() {
            index.insert(v, i);
        }
        let local = Local {
            out: comp.iter().map(|&v| self.g.out(v).iter().map(|w| index[w]).collect()).collect(),
            inn: comp.iter().map(|&v| self.g.inn(v).iter().map(|w| index[w]).collect()).collect(),
        };
        let mut dom = vec![self.t.full; comp.len()];
        let all: Vec<usize> = (0..comp.len()).collect();
        if !self.propagate(&local, &mut dom, all) {
            return Ok(None);
        }
        let pin = self.t.circulant;
        if self.search(&local, &mut dom, pin)? {
            Ok(Some(dom.iter().map(|d| d.trailing_zeros() as usize).collect()))
        } else {
            Ok(None)
        }
    }

    fn propagate(&self, l: &Local, dom: &mut [u64], mut queue: Vec<usize>) -> bool {
        let mut queued = vec![false; dom.len()];
        for &x in &queue {
            queued[x] = true;
        }
        while let Some(x) = queue.pop() {
            queued[x] = false;
            let (s, p) = (self.t.succ(dom[x]), self.t.pred(dom[x]));
            for (nbrs, allowed) in [(&l.out[x], s), (&l.inn[x], p)] {
                for &y in nbrs {
                    let nd = dom[y] & allowed;
                    if nd != dom[y] {
                        if nd == 0 {
                            return false;
                        }
                        dom[y] = nd;
                        if !queued[y] {
                            queued[y] = true;
                            queue.push(y);
                        }
                    }
                }
            }
        }
        true
    }

    fn search(&mut self, l: &Local, dom: &mut Vec<u64>, pin: bool) -> Result<bool, ()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(());
        }
        // Minimum remaining values, ties to higher degree, then lower index.
        let mut best: Option<(u32, usize, usize)> = None;
        for (x, d) in dom.iter().enumerate() {
            let c = d.count_ones();
            if c <= 1 {
                continue;
            }
            let deg = l.out[x].len() + l.inn[x].len();
            let better = match best {
                None => true,
                Some((bc, bdeg, _)) => c < bc || (c == bc && deg > bdeg),
            };
            if better {
                best = Some((c, deg, x));
            }
        }
        let Some((_, _, x)) = best else {
            return Ok(true);
        };
        let mut values = if pin && dom[x] == self.t.full { 1 } else { dom[x] };
        while values != 0 {
            let v = values.trailing_zeros() as usize;
            values &= values - 1;
            let saved = dom.clone();
            dom[x] = 1 << v;
            if self.propagate(l, dom, vec![x]) && self.search(l, dom, false)? {
                return Ok(true);
            }
            *dom = saved;
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_triangle_to_c3_not_t3() {
        let g = OrientedMultigraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]);
        let c = t_colourable(&g, &Tournament::c3()).unwrap();
        assert!(c.is_valid_for(&g));
        assert!(t_colourable(&g, &Tournament::t3()).is_none());
    }

    #[test]
    fn two_cycle_is_obstruction() {
        let g = OrientedMultigraph::from_arcs(2, [(0, 1), (1, 0)]);
        let r = t_colourable_with(&g, &Tournament::paley(7).unwrap(), None);
        assert_eq!(r.outcome, HomOutcome::Infeasible);
        assert_eq!(r.obstruction, Some(Obstruction::TwoCycle(0, 1)));
    }

    #[test]
    fn directed_path_of_three_arcs_needs_more_than_t3() {
        let g = OrientedMultigraph::from_arcs(4, [(0, 1), (1, 2), (2, 3)]);
        assert!(t_colourable(&g, &Tournament::t3()).is_none());
        assert!(t_colourable(&g, &Tournament::c3()).is_some());
    }
}
