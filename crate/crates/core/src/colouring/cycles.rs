// Fast paths for 2-regular graphs and for graphs whose components carry at
// most one cycle. An orientation sequence lists, for a cycle v_0 ... v_{l-1},
// whether arc i runs v_i -> v_{i+1} (true) or backwards (false).

use alloc::vec;
use alloc::vec::Vec;

use super::homomorphism::t_colourable;
use super::{ColouringError, OrientedColouring};
use crate::graph::{Digraph, OrientedMultigraph};
use crate::tournament::Tournament;

pub fn oriented_cycle(orientation: &[bool]) -> OrientedMultigraph {
    let l = orientation.len();
    OrientedMultigraph::from_arcs(
        l,
        orientation.iter().enumerate().map(|(i, &f)| if f { (i, (i + 1) % l) } else { ((i + 1) % l, i) }),
    )
}

/// Forward minus backward arcs is divisible by 3.
pub fn cycle_c3_colourable(orientation: &[bool]) -> bool {
    let f = orientation.iter().filter(|&&x| x).count() as i64;
    let b = orientation.len() as i64 - f;
    (f - b).rem_euclid(3) == 0
}

/// No three cyclically consecutive arcs point the same way.
pub fn cycle_t3_colourable(orientation: &[bool]) -> bool {
    let l = orientation.len();
    (0..l).all(|i| !(orientation[i] == orientation[(i + 1) % l] && orientation[i] == orientation[(i + 2) % l]))
}

pub fn is_alternating(orientation: &[bool]) -> bool {
    let l = orientation.len();
    l.is_multiple_of(2) && (0..l).all(|i| orientation[i] != orientation[(i + 1) % l])
}

pub fn is_directed_cycle(orientation: &[bool]) -> bool {
    orientation.iter().all(|&x| x) || orientation.iter().all(|&x| !x)
}

/// Orientation sequences of the components of a simple 2-regular graph.
fn cycle_orientations(g: &OrientedMultigraph) -> Result<Vec<Vec<bool>>, ColouringError> {
    if !g.is_simple() {
        return Err(ColouringError::NotSimple);
    }
    let mut incident = vec![Vec::with_capacity(2); g.n];
    for (i, &(u, v)) in g.arcs.iter().enumerate() {
        incident[u as usize].push(i);
        incident[v as usize].push(i);
    }
    if let Some((vertex, l)) = incident.iter().enumerate().find(|(_, l)| l.len() != 2) {
        return Err(ColouringError::NotTwoRegular { vertex, degree: l.len() });
    }
    let mut seen = vec![false; g.n];
    let mut out = Vec::new();
    for start in 0..g.n {
        if seen[start] {
            continue;
        }
        let mut seq = Vec::new();
        let (mut cur, mut via) = (start, incident[start][0]);
        loop {
            seen[cur] = true;
            let (a, b) = g.arcs[via];
            let next = if a as usize == cur { b as usize } else { a as usize };
            seq.push(a as usize == cur);
            let other = if incident[next][0] == via { incident[next][1] } else { incident[next][0] };
            cur = next;
            via = other;
            if cur == start {
                break;
            }
        }
        out.push(seq);
    }
    Ok(out)
}

/// Oriented chromatic number of a simple 2-regular graph.
pub fn two_regular_chi(g: &OrientedMultigraph) -> Result<usize, ColouringError> {
    let cycles = cycle_orientations(g)?;
    if cycles.iter().all(|c| is_alternating(c)) {
        return Ok(2);
    }
    if cycles.iter().all(|c| cycle_c3_colourable(c)) || cycles.iter().all(|c| cycle_t3_colourable(c)) {
        return Ok(3);
    }
    if cycles.iter().any(|c| c.len() == 5 && is_directed_cycle(c)) {
        Ok(5)
    } else {
        Ok(4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum UnicyclicTarget {
    T4,
    T5,
}

impl UnicyclicTarget {
    pub fn tournament(self) -> Tournament {
        match self {
            Self::T4 => Tournament::t4(),
            Self::T5 => Tournament::t5(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnicyclicColouring {
    /// Labels are vertices of the target tournament.
    pub colouring: OrientedColouring,
    pub target: UnicyclicTarget,
    /// Some component is a directed 5-cycle with trees attached.
    pub has_directed_5_cycle: bool,
}

/// Colours a simple graph whose components each have at most one cycle,
/// using T5 if some cycle is a directed 5-cycle and T4 otherwise.
pub fn colour_unicyclic_45(g: &OrientedMultigraph) -> Result<UnicyclicColouring, ColouringError> {
    if !g.is_simple() {
        return Err(ColouringError::NotSimple);
    }
    let dg = Digraph::from_multigraph(g).map_err(|_| ColouringError::NotSimple)?;
    let comps = g.components();
    let mut comp_of = vec![0usize; g.n];
    for (c, vs) in comps.iter().enumerate() {
        for &v in vs {
            comp_of[v] = c;
        }
    }
    let mut edges = vec![0usize; comps.len()];
    for &(u, _) in &g.arcs {
        edges[comp_of[u as usize]] += 1;
    }
    for (c, vs) in comps.iter().enumerate() {
        if edges[c] > vs.len() {
            return Err(ColouringError::NotUnicyclic(vs[0]));
        }
    }
    let cycles = find_cycles(&dg, &comps, &edges);
    let has5 = cycles.iter().flatten().any(|(_, o)| o.len() == 5 && is_directed_cycle(o));
    let target = if has5 { UnicyclicTarget::T5 } else { UnicyclicTarget::T4 };
    let t = target.tournament();
    let colours = extend_from_cycles(&dg, &t, &comps, &cycles)?;
    Ok(UnicyclicColouring { colouring: OrientedColouring::new(colours), target, has_directed_5_cycle: has5 })
}

/// The cycle of each unicyclic component, as (vertices, orientation).
fn find_cycles(g: &Digraph, comps: &[Vec<usize>], edges: &[usize]) -> Vec<Option<(Vec<usize>, Vec<bool>)>> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = stack.pop() {
        if removed[v] {
            continue;
        }
        removed[v] = true;
        for w in g.neighbours(v) {
            if !removed[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    stack.push(w);
                }
            }
        }
    }
    comps
        .iter()
        .zip(edges)
        .map(|(vs, &e)| {
            if e < vs.len() {
                return None;
            }
            let start = *vs.iter().find(|&&v| !removed[v])?;
            let mut cyc = vec![start];
            let mut orient = Vec::new();
            let mut prev = usize::MAX;
            let mut cur = start;
            loop {
                let next = g.neighbours(cur).find(|&w| !removed[w] && w != prev).expect("cycle vertex has two cycle neighbours");
                orient.push(g.has_arc(cur, next));
                if next == start {
                    break;
                }
                cyc.push(next);
                prev = cur;
                cur = next;
            }
            Some((cyc, orient))
        })
        .collect()
}

/// Colours each cycle by homomorphism search, then grows outward through
/// the attached trees: a vertex reached along `v -> w` gets the least
/// out-neighbour of `v`'s colour, along `w -> v` the least in-neighbour.
fn extend_from_cycles(
    g: &Digraph,
    t: &Tournament,
    comps: &[Vec<usize>],
    cycles: &[Option<(Vec<usize>, Vec<bool>)>],
) -> Result<Vec<usize>, ColouringError> {
    const NONE: usize = usize::MAX;
    let mut colour = vec![NONE; g.n()];
    let mut queue = Vec::new();
    for (vs, cyc) in comps.iter().zip(cycles) {
        match cyc {
            Some((cv, orient)) => {
                let c = t_colourable(&oriented_cycle(orient), t).ok_or(ColouringError::CycleInfeasible)?;
                for (i, &v) in cv.iter().enumerate() {
                    colour[v] = c.colours[i];
                    queue.push(v);
                }
            }
            None => {
                colour[vs[0]] = 0;
                queue.push(vs[0]);
            }
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        let cv = colour[v];
        for &w in g.out(v) {
            if colour[w] == NONE {
                colour[w] = t.out_neighbours(cv).next().ok_or(ColouringError::CycleInfeasible)?;
                queue.push(w);
            }
        }
        for &w in g.inn(v) {
            if colour[w] == NONE {
                colour[w] = t.in_neighbours(cv).next().ok_or(ColouringError::CycleInfeasible)?;
                queue.push(w);
            }
        }
    }
    Ok(colour)
}
