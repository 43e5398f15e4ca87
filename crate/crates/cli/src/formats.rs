//! Text and JSON formats for graphs and tournaments.
//!
//! Graph text: a header `graph n m` followed by `m` lines `u v`, one per
//! arc `u -> v`. Tournament text: a header `tournament k` followed by the
//! `k(k-1)/2` arcs in the same form. Blank lines and lines starting with
//! `#` are ignored. Graph JSON: `{"n": 3, "arcs": [[0, 1], [1, 2]]}`.

use std::fmt::Write as _;

use orichrom_core::tournament::TournamentError;
use orichrom_core::{OrientedMultigraph, Tournament};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("expected {expected} arcs, found {found}")]
    ArcCount { expected: usize, found: usize },
    #[error("arc ({u}, {v}) has an endpoint outside 0..{n}")]
    OutOfRange { u: usize, v: usize, n: usize },
    #[error(transparent)]
    Tournament(#[from] TournamentError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("unknown tournament spec {0:?}")]
    UnknownSpec(String),
}

fn content_lines(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize, FormatError> {
    let tok = tok.ok_or_else(|| FormatError::Syntax { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| FormatError::Syntax { line, msg: format!("bad {what} {tok:?}") })
}

/// Header keyword, two counts, then the arc lines.
fn parse_arc_list(s: &str, keyword: &str) -> Result<(usize, Vec<(usize, usize)>), FormatError> {
    let mut lines = content_lines(s);
    let (hl, header) = lines.next().ok_or(FormatError::Syntax { line: 1, msg: "empty input".into() })?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some(keyword) {
        return Err(FormatError::Syntax { line: hl, msg: format!("expected header {keyword:?}") });
    }
    let n = parse_usize(toks.next(), hl, "vertex count")?;
    let m = if keyword == "graph" { Some(parse_usize(toks.next(), hl, "arc count")?) } else { None };
    if toks.next().is_some() {
        return Err(FormatError::Syntax { line: hl, msg: "trailing tokens in header".into() });
    }
    let mut arcs = Vec::new();
    for (ln, l) in lines {
        let mut t = l.split_whitespace();
        let u = parse_usize(t.next(), ln, "tail")?;
        let v = parse_usize(t.next(), ln, "head")?;
        if t.next().is_some() {
            return Err(FormatError::Syntax { line: ln, msg: "expected two vertices".into() });
        }
        if u >= n || v >= n {
            return Err(FormatError::OutOfRange { u, v, n });
        }
        arcs.push((u, v));
    }
    let expected = m.unwrap_or(n * n.saturating_sub(1) / 2);
    if arcs.len() != expected {
        return Err(FormatError::ArcCount { expected, found: arcs.len() });
    }
    Ok((n, arcs))
}

pub fn parse_graph_text(s: &str) -> Result<OrientedMultigraph, FormatError> {
    let (n, arcs) = parse_arc_list(s, "graph")?;
    Ok(OrientedMultigraph::from_arcs(n, arcs))
}

pub fn write_graph_text(g: &OrientedMultigraph) -> String {
    let mut out = format!("graph {} {}\n", g.n, g.num_arcs());
    for &(u, v) in &g.arcs {
        writeln!(out, "{u} {v}").expect("writing to a String");
    }
    out
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    arcs: Vec<[usize; 2]>,
}

pub fn parse_graph_json(s: &str) -> Result<OrientedMultigraph, FormatError> {
    let g: GraphJson = serde_json::from_str(s)?;
    if let Some(&[u, v]) = g.arcs.iter().find(|[u, v]| *u >= g.n || *v >= g.n) {
        return Err(FormatError::OutOfRange { u, v, n: g.n });
    }
    Ok(OrientedMultigraph::from_arcs(g.n, g.arcs.into_iter().map(|[u, v]| (u, v))))
}

pub fn write_graph_json(g: &OrientedMultigraph) -> String {
    let j = GraphJson { n: g.n, arcs: g.arcs.iter().map(|&(u, v)| [u as usize, v as usize]).collect() };
    serde_json::to_string(&j).expect("plain data serializes")
}

/// Dispatches on the first non-blank character: `{` means JSON.
pub fn parse_graph(s: &str) -> Result<OrientedMultigraph, FormatError> {
    if s.trim_start().starts_with('{') {
        parse_graph_json(s)
    } else {
        parse_graph_text(s)
    }
}

pub fn parse_tournament_text(s: &str) -> Result<Tournament, FormatError> {
    let (k, arcs) = parse_arc_list(s, "tournament")?;
    Ok(Tournament::from_arcs(k, &arcs)?)
}

pub fn write_tournament_text(t: &Tournament) -> String {
    let mut out = format!("tournament {}\n", t.order());
    for (u, v) in t.arcs() {
        writeln!(out, "{u} {v}").expect("writing to a String");
    }
    out
}

/// `paley:Q`, `rot:K`, `c3`, `t3`, `t4`, `t5`, or `file:PATH`.
pub fn parse_tournament_spec(spec: &str) -> Result<Tournament, FormatError> {
    let bad = || FormatError::UnknownSpec(spec.to_string());
    match spec {
        "c3" => return Ok(Tournament::c3()),
        "t3" => return Ok(Tournament::t3()),
        "t4" => return Ok(Tournament::t4()),
        "t5" => return Ok(Tournament::t5()),
        _ => {}
    }
    let (kind, arg) = spec.split_once(':').ok_or_else(bad)?;
    match kind {
        "paley" => Ok(Tournament::paley(arg.parse().map_err(|_| bad())?)?),
        "rot" => {
            let k: usize = arg.parse().map_err(|_| bad())?;
            if k.is_multiple_of(2) {
                return Err(bad());
            }
            Ok(Tournament::rotational(k))
        }
        "file" => {
            let text = std::fs::read_to_string(arg).map_err(|e| FormatError::Syntax { line: 0, msg: e.to_string() })?;
            parse_tournament_text(&text)
        }
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let g = OrientedMultigraph::from_arcs(4, [(0, 1), (1, 1), (3, 2), (0, 1)]);
        let s = write_graph_text(&g);
        assert_eq!(s, "graph 4 4\n0 1\n1 1\n3 2\n0 1\n");
        assert_eq!(parse_graph_text(&s).unwrap(), g);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_graph("# header\n\ngraph 2 1\n  1 0  \n").unwrap();
        assert_eq!(g.arcs, vec![(1, 0)]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_graph_text("graph 2 2\n0 1\n"), Err(FormatError::ArcCount { .. })));
        assert!(matches!(parse_graph_text("graph 2 1\n0 2\n"), Err(FormatError::OutOfRange { .. })));
        assert!(matches!(parse_graph_text("digraph 2 1\n0 1\n"), Err(FormatError::Syntax { .. })));
        assert!(matches!(parse_graph_json(r#"{"n": 1, "arcs": [[0, 1]]}"#), Err(FormatError::OutOfRange { .. })));
        assert!(matches!(parse_tournament_spec("paley:5"), Err(FormatError::Tournament(_))));
        assert!(matches!(parse_tournament_spec("petersen"), Err(FormatError::UnknownSpec(_))));
    }

    #[test]
    fn tournament_round_trip() {
        let t = Tournament::paley(7).unwrap();
        assert_eq!(parse_tournament_text(&write_tournament_text(&t)).unwrap(), t);
        assert_eq!(parse_tournament_spec("rot:5").unwrap(), Tournament::t5());
    }
}
