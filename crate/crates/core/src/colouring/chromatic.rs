// Exact oriented chromatic number by backtracking over colourings while the
// class tournament is discovered on the fly.
//
// Invariants of the search state:
// - labels are introduced in order, so `used` labels are 0..used and every
//   unused label is interchangeable with every other (symmetry breaking);
// - `forced[a * k + b]` counts coloured arcs from class a to class b, and
//   forced[a][b] > 0 implies forced[b][a] == 0.

use alloc::vec;
use alloc::vec::Vec;

use super::OrientedColouring;
use crate::graph::{Digraph, Obstruction, OrientedMultigraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Chi {
    Exact(usize),
    AboveCap,
    /// The node budget ran out before a decision.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiResult {
    pub chi: Chi,
    pub witness: Option<OrientedColouring>,
    pub nodes_explored: u64,
    pub obstruction: Option<Obstruction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChiOptions {
    pub cap: usize,
    pub node_limit: Option<u64>,
    /// Skip every `k` below this (it must be a proven lower bound).
    pub lower_bound: usize,
}

impl ChiOptions {
    pub fn with_cap(cap: usize) -> Self {
        Self { cap, node_limit: None, lower_bound: 1 }
    }
}

pub fn oriented_chromatic_number(g: &OrientedMultigraph, cap: usize) -> ChiResult {
    oriented_chromatic_number_with(g, ChiOptions::with_cap(cap))
}

/// Panics if `opts.cap` exceeds 64.
pub fn oriented_chromatic_number_with(g: &OrientedMultigraph, opts: ChiOptions) -> ChiResult {
    assert!(opts.cap <= 64, "colour cap {} exceeds 64", opts.cap);
    let dg = match Digraph::from_multigraph(g) {
        Ok(d) => d,
        Err(o) => return ChiResult { chi: Chi::AboveCap, witness: None, nodes_explored: 0, obstruction: Some(o) },
    };
    if g.n == 0 {
        return ChiResult { chi: Chi::Exact(0), witness: Some(OrientedColouring::new(vec![])), nodes_explored: 0, obstruction: None };
    }
    let mut nodes = 0u64;
    let budget = opts.node_limit.unwrap_or(u64::MAX);
    for k in opts.lower_bound.max(1)..=opts.cap {
        let mut s = Search::new(&dg, k);
        match s.run(&mut nodes, budget) {
            Some(true) => {
                let colours = s.colour.iter().map(|&c| c as usize).collect();
                return ChiResult {
                    chi: Chi::Exact(k),
                    witness: Some(OrientedColouring::new(colours)),
                    nodes_explored: nodes,
                    obstruction: None,
                };
            }
            Some(false) => {}
            None => return ChiResult { chi: Chi::Unknown, witness: None, nodes_explored: nodes, obstruction: None },
        }
    }
    ChiResult { chi: Chi::AboveCap, witness: None, nodes_explored: nodes, obstruction: None }
}

const NONE: u32 = u32::MAX;

struct Search<'a> {
    g: &'a Digraph,
    k: usize,
    colour: Vec<u32>,
    forced: Vec<u32>,
    used: usize,
    remaining: usize,
}

impl<'a> Search<'a> {
    fn new(g: &'a Digraph, k: usize) -> Self {
        Self { g, k, colour: vec![NONE; g.n()], forced: vec![0; k * k], used: 0, remaining: g.n() }
    }

    /// `Some(found)`, or `None` when the budget is exhausted.
    fn run(&mut self, nodes: &mut u64, budget: u64) -> Option<bool> {
        self.dfs(nodes, budget)
    }

    /// Bitmask of labels `x` may take now (bit `used` stands for a new label).
    fn options(&self, x: usize) -> u64 {
        let top = (self.used + 1).min(self.k);
        let mut mask: u64 = if top == 64 { u64::MAX } else { (1u64 << top) - 1 };
        let k = self.k;
        for &y in self.g.out(x) {
            let cy = self.colour[y];
            if cy != NONE {
                let cy = cy as usize;
                mask &= !(1 << cy);
                // x -> y forbids labels c with an arc cy -> c already forced.
                for c in 0..self.used {
                    if self.forced[cy * k + c] > 0 {
                        mask &= !(1 << c);
                    }
                }
            } else {
                // Directed 2-path x -> y -> z: x and z differ.
                for &z in self.g.out(y) {
                    if self.colour[z] != NONE {
                        mask &= !(1 << self.colour[z]);
                    }
                }
            }
        }
        for &y in self.g.inn(x) {
            let cy = self.colour[y];
            if cy != NONE {
                let cy = cy as usize;
                mask &= !(1 << cy);
                for c in 0..self.used {
                    if self.forced[c * k + cy] > 0 {
                        mask &= !(1 << c);
                    }
                }
            } else {
                for &z in self.g.inn(y) {
                    if self.colour[z] != NONE {
                        mask &= !(1 << self.colour[z]);
                    }
                }
            }
        }
        mask
    }

    fn assign(&mut self, x: usize, c: usize) {
        let k = self.k;
        self.colour[x] = c as u32;
        if c == self.used {
            self.used += 1;
        }
        self.remaining -= 1;
        for &y in self.g.out(x) {
            if self.colour[y] != NONE {
                self.forced[c * k + self.colour[y] as usize] += 1;
            }
        }
        for &y in self.g.inn(x) {
            if self.colour[y] != NONE {
                self.forced[self.colour[y] as usize * k + c] += 1;
            }
        }
    }

    fn unassign(&mut self, x: usize, c: usize, was_new: bool) {
        let k = self.k;
        for &y in self.g.out(x) {
            if self.colour[y] != NONE {
                self.forced[c * k + self.colour[y] as usize] -= 1;
            }
        }
        for &y in self.g.inn(x) {
            if self.colour[y] != NONE {
                self.forced[self.colour[y] as usize * k + c] -= 1;
            }
        }
        self.colour[x] = NONE;
        self.remaining += 1;
        if was_new {
            self.used -= 1;
        }
    }

    fn dfs(&mut self, nodes: &mut u64, budget: u64) -> Option<bool> {
        *nodes += 1;
        if *nodes > budget {
            return None;
        }
        if self.remaining == 0 {
            return Some(true);
        }
        // Fewest options first; ties to most coloured neighbours, then degree.
        let mut best: Option<(u32, usize, usize, usize, u64)> = None;
        for x in 0..self.g.n() {
            if self.colour[x] != NONE {
                continue;
            }
            let opts = self.options(x);
            let cnt = opts.count_ones();
            if cnt == 0 {
                return Some(false);
            }
            let coloured = self.g.neighbours(x).filter(|&y| self.colour[y] != NONE).count();
            let deg = self.g.degree(x);
            let key_better = match best {
                None => true,
                Some((bc, bcol, bdeg, _, _)) => (cnt, usize::MAX - coloured, usize::MAX - deg) < (bc, usize::MAX - bcol, usize::MAX - bdeg),
            };
            if key_better {
                best = Some((cnt, coloured, deg, x, opts));
            }
        }
        let (_, _, _, x, mut opts) = best.expect("an uncoloured vertex remains");
        while opts != 0 {
            let c = opts.trailing_zeros() as usize;
            opts &= opts - 1;
            let was_new = c == self.used;
            self.assign(x, c);
            match self.dfs(nodes, budget) {
                Some(false) => {}
                other => {
                    if other.is_none() {
                        self.unassign(x, c, was_new);
                    }
                    return other;
                }
            }
            self.unassign(x, c, was_new);
        }
        Some(false)
    }
}
