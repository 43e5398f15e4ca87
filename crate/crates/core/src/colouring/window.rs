// Extending a partial T-colouring across a small uncoloured set S.
//
// S is grown to a closed set U: absorb an adjacent pair outside U whose ends
// both touch U, or a single vertex with an in-neighbour and an out-neighbour
// in U. Once no rule applies, the boundary N is independent and every
// boundary vertex has all its U-arcs pointing one way. N is split into N_I
// (arcs U -> N_I) and N_O (arcs N_O -> U).
//
// Palette: base colour c outside U and N is c; on N_I it is k + c; on N_O it
// is 2k + c; U receives 3k + j for j in 0..11. Arcs between the three
// copies of a base colour never occur, and U only meets N_I (outwards) and
// N_O (inwards), so the class digraph is an orientation.

use alloc::vec;
use alloc::vec::Vec;

use super::chromatic::{oriented_chromatic_number, Chi};
use super::density::max_avg_degree_below_3;
use super::homomorphism::t_colourable;
use super::{ColouringError, OrientedColouring};
use crate::graph::{Digraph, OrientedMultigraph};
use crate::tournament::Tournament;

pub const CORE_COLOURS: usize = 11;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowColouring {
    pub colouring: OrientedColouring,
    /// The closed set U containing S.
    pub core: Vec<usize>,
    pub n_in: Vec<usize>,
    pub n_out: Vec<usize>,
    /// |U| after each absorption step, starting with |S|.
    pub growth: Vec<usize>,
    pub core_sparse: bool,
    pub core_colours: usize,
}

/// Greedy T-colouring in fewest-options-first order; vertices with no
/// consistent colour are left uncoloured and returned as S.
pub fn greedy_partial_colouring(g: &OrientedMultigraph, t: &Tournament) -> Result<(Vec<Option<usize>>, Vec<usize>), ColouringError> {
    let k = t.order();
    if k > 64 {
        return Err(ColouringError::TargetTooLarge(k));
    }
    let dg = Digraph::from_multigraph(g).map_err(|_| ColouringError::NotSimple)?;
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let outm: Vec<u64> = (0..k).map(|c| t.out_mask(c)).collect();
    let inm: Vec<u64> = (0..k).map(|c| t.in_mask(c)).collect();
    let n = g.n;
    let mut colour: Vec<Option<usize>> = vec![None; n];
    let mut done = vec![false; n];
    let mut s = Vec::new();
    let options = |colour: &[Option<usize>], x: usize| {
        let mut m = full;
        for &y in dg.out(x) {
            if let Some(c) = colour[y] {
                m &= inm[c];
            }
        }
        for &y in dg.inn(x) {
            if let Some(c) = colour[y] {
                m &= outm[c];
            }
        }
        m
    };
    for _ in 0..n {
        let x = (0..n)
            .filter(|&x| !done[x])
            .min_by_key(|&x| (options(&colour, x).count_ones(), usize::MAX - dg.degree(x), x))
            .expect("unprocessed vertex");
        done[x] = true;
        let m = options(&colour, x);
        if m == 0 {
            s.push(x);
        } else {
            colour[x] = Some(m.trailing_zeros() as usize);
        }
    }
    s.sort_unstable();
    Ok((colour, s))
}

pub fn window_extension_colouring(
    g: &OrientedMultigraph,
    t: &Tournament,
    s: &[usize],
    base: &[Option<usize>],
) -> Result<WindowColouring, ColouringError> {
    let dg = Digraph::from_multigraph(g).map_err(|_| ColouringError::NotSimple)?;
    let n = g.n;
    let k = t.order();
    let mut in_u = vec![false; n];
    for &v in s {
        in_u[v] = true;
    }
    if base.len() != n {
        return Err(ColouringError::InvalidBase);
    }
    for v in 0..n {
        if !in_u[v] && !matches!(base[v], Some(c) if c < k) {
            return Err(ColouringError::InvalidBase);
        }
    }
    for &(u, v) in &g.arcs {
        let (u, v) = (u as usize, v as usize);
        if !in_u[u] && !in_u[v] && !t.has_arc(base[u].unwrap(), base[v].unwrap()) {
            return Err(ColouringError::InvalidBase);
        }
    }

    let mut growth = vec![s.len()];
    let mut size = s.len();
    let touches = |in_u: &[bool], w: usize| dg.neighbours(w).any(|x| in_u[x]);
    loop {
        let mut changed = false;
        for w in 0..n {
            if in_u[w] {
                continue;
            }
            let from_u = dg.inn(w).iter().any(|&x| in_u[x]);
            let to_u = dg.out(w).iter().any(|&x| in_u[x]);
            if from_u && to_u {
                in_u[w] = true;
                size += 1;
                growth.push(size);
                changed = true;
            }
        }
        for w1 in 0..n {
            if in_u[w1] || !touches(&in_u, w1) {
                continue;
            }
            if let Some(w2) = dg.neighbours(w1).find(|&w2| !in_u[w2] && touches(&in_u, w2)) {
                in_u[w1] = true;
                in_u[w2] = true;
                size += 2;
                growth.push(size);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let core: Vec<usize> = (0..n).filter(|&v| in_u[v]).collect();
    let mut n_in = Vec::new();
    let mut n_out = Vec::new();
    for v in 0..n {
        if in_u[v] {
            continue;
        }
        if dg.inn(v).iter().any(|&x| in_u[x]) {
            n_in.push(v);
        } else if dg.out(v).iter().any(|&x| in_u[x]) {
            n_out.push(v);
        }
    }

    let sub = g.induced(&core);
    let core_sparse = max_avg_degree_below_3(&sub);
    let core_colouring = match t_colourable(&sub, &Tournament::paley(CORE_COLOURS as u64).expect("11 is a Paley order")) {
        Some(c) => c,
        None => match oriented_chromatic_number(&sub, CORE_COLOURS) {
            r if matches!(r.chi, Chi::Exact(_)) => r.witness.expect("exact result carries a witness"),
            _ => return Err(ColouringError::CoreTooDense { size: core.len(), sparse: core_sparse }),
        },
    };

    let mut colours = vec![0usize; n];
    for v in 0..n {
        if !in_u[v] {
            colours[v] = base[v].expect("checked above");
        }
    }
    for &v in &n_in {
        colours[v] += k;
    }
    for &v in &n_out {
        colours[v] += 2 * k;
    }
    for (i, &v) in core.iter().enumerate() {
        colours[v] = 3 * k + core_colouring.colours[i];
    }
    let core_colours = core_colouring.num_colours();
    Ok(WindowColouring { colouring: OrientedColouring::new(colours), core, n_in, n_out, growth, core_sparse, core_colours })
}
