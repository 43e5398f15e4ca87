//! Oriented colourings: validation, homomorphism search, exact oriented
//! chromatic number, fast paths for sparse structures and the window
//! extension used to colour sparse random graphs.
//!
//! An oriented colouring is a proper colouring in which all arcs between two
//! colour classes point the same way; equivalently, a homomorphism to a
//! tournament on the colour set.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::OrientedMultigraph;

mod chromatic;
mod cycles;
mod density;
mod homomorphism;
mod window;

pub use chromatic::{oriented_chromatic_number, oriented_chromatic_number_with, Chi, ChiOptions, ChiResult};
pub use cycles::{
    colour_unicyclic_45, cycle_c3_colourable, cycle_t3_colourable, is_alternating, is_directed_cycle,
    oriented_cycle, two_regular_chi, UnicyclicColouring, UnicyclicTarget,
};
pub use density::{density_exceeds, max_avg_degree_below_3, max_subgraph_density, Density};
pub use homomorphism::{t_colourable, t_colourable_with, HomOutcome, HomSearch};
pub use window::{greedy_partial_colouring, window_extension_colouring, WindowColouring, CORE_COLOURS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum ColouringError {
    #[error("graph is not simple")]
    NotSimple,
    #[error("vertex {vertex} has degree {degree}, expected 2")]
    NotTwoRegular { vertex: usize, degree: usize },
    #[error("component containing vertex {0} has more edges than vertices")]
    NotUnicyclic(usize),
    #[error("target tournament has order {0}; at most 64 supported")]
    TargetTooLarge(usize),
    #[error("cycle admits no colouring by the chosen target")]
    CycleInfeasible,
    #[error("base colouring is invalid on the graph outside S")]
    InvalidBase,
    #[error("core of {size} vertices needs more than 11 colours (average degree below 3: {sparse})")]
    CoreTooDense { size: usize, sparse: bool },
}

/// Colour labels per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrientedColouring {
    pub colours: Vec<usize>,
}

impl OrientedColouring {
    pub fn new(colours: Vec<usize>) -> Self {
        Self { colours }
    }

    /// Number of distinct labels used.
    pub fn num_colours(&self) -> usize {
        let mut c = self.colours.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    }

    pub fn is_valid_for(&self, g: &OrientedMultigraph) -> bool {
        is_valid_oriented_colouring(g, &self.colours)
    }
}

/// Arcs between colour classes, one per ordered class pair, or `None` if the
/// colouring is not an oriented colouring of `g`.
pub fn class_arcs(g: &OrientedMultigraph, colours: &[usize]) -> Option<Vec<(usize, usize)>> {
    if colours.len() != g.n {
        return None;
    }
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(g.arcs.len());
    for &(u, v) in &g.arcs {
        let (a, b) = (colours[u as usize], colours[v as usize]);
        if a == b {
            return None;
        }
        pairs.push((a, b));
    }
    pairs.sort_unstable();
    pairs.dedup();
    let mut undirected: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    undirected.sort_unstable();
    if undirected.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(pairs)
}

/// Proper, and all arcs between any two classes point the same way.
/// Loops make every colouring invalid.
pub fn is_valid_oriented_colouring(g: &OrientedMultigraph, colours: &[usize]) -> bool {
    class_arcs(g, colours).is_some()
}

/// Relabels colours to `0..c` in order of first appearance.
pub fn canonical_labels(colours: &[usize]) -> Vec<usize> {
    let mut map: Vec<(usize, usize)> = vec![];
    colours
        .iter()
        .map(|&c| match map.iter().find(|(k, _)| *k == c) {
            Some(&(_, v)) => v,
            None => {
                let v = map.len();
                map.push((c, v));
                v
            }
        })
        .collect()
}

/// True if every two vertices are adjacent or joined by a directed path of
/// length two, so that every oriented colouring uses distinct colours.
pub fn is_oriented_clique(g: &OrientedMultigraph) -> bool {
    let n = g.n;
    let words = n.div_ceil(64).max(1);
    let mut out = vec![0u64; n * words];
    let mut inn = vec![0u64; n * words];
    for &(u, v) in &g.arcs {
        let (u, v) = (u as usize, v as usize);
        if u == v {
            continue;
        }
        out[u * words + v / 64] |= 1 << (v % 64);
        inn[v * words + u / 64] |= 1 << (u % 64);
    }
    let bit = |rows: &[u64], r: usize, c: usize| rows[r * words + c / 64] >> (c % 64) & 1 == 1;
    let meets = |a: &[u64], b: &[u64]| a.iter().zip(b).any(|(x, y)| x & y != 0);
    for u in 0..n {
        for v in u + 1..n {
            if bit(&out, u, v) || bit(&out, v, u) {
                continue;
            }
            let (ou, iu) = (&out[u * words..(u + 1) * words], &inn[u * words..(u + 1) * words]);
            let (ov, iv) = (&out[v * words..(v + 1) * words], &inn[v * words..(v + 1) * words]);
            if !meets(ou, iv) && !meets(ov, iu) {
                return false;
            }
        }
    }
    true
}
