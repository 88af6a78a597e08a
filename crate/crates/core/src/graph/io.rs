//! Text formats.
//!
//! ```text
//! planar-graph v1
//! vertices 3
//! rot 0: 0 4
//! rot 1: 2 1
//! rot 2: 5 3
//! edge 0 0 1 1
//! edge 1 1 2 3/2
//! edge 2 0 2 2
//! req 0 3
//! ```
//!
//! Darts follow the crate convention (`2e` runs `u -> v`, `2e + 1` back).
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use super::{format_rational, parse_rational, EmbeddedMultigraph, MultiSolution, RequirementMap, Weight};
use crate::error::{Error, Result};

const GRAPH_HEADER: &str = "planar-graph v1";
const SOLUTION_HEADER: &str = "solution v1";

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.ok_or_else(|| perr(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| perr(line, format!("bad {what}")))
}

/// Parses a graph file, returning the graph and its requirement map.
pub fn parse_graph(text: &str) -> Result<(EmbeddedMultigraph, RequirementMap)> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, GRAPH_HEADER)) => {}
        Some((l, _)) => return Err(perr(l, format!("expected header `{GRAPH_HEADER}`"))),
        None => return Err(perr(1, "empty input")),
    }
    let n: usize = match lines.next() {
        Some((l, s)) => {
            let mut t = s.split_whitespace();
            if t.next() != Some("vertices") {
                return Err(perr(l, "expected `vertices N`"));
            }
            num(t.next(), l, "vertex count")?
        }
        None => return Err(perr(2, "missing `vertices` line")),
    };
    let mut rotation: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut edges: Vec<Option<(usize, usize, Weight)>> = Vec::new();
    let mut req = RequirementMap::zeros(n);
    for (l, s) in lines {
        let mut t = s.split_whitespace();
        match t.next() {
            Some("rot") => {
                let v: usize = num(t.next().map(|x| x.trim_end_matches(':')), l, "vertex")?;
                if v >= n {
                    return Err(perr(l, "vertex out of range"));
                }
                if rotation[v].is_some() {
                    return Err(perr(l, format!("duplicate rotation for vertex {v}")));
                }
                let mut rot = Vec::new();
                for tok in t {
                    let tok = tok.trim_start_matches(':');
                    if tok.is_empty() {
                        continue;
                    }
                    rot.push(tok.parse().map_err(|_| perr(l, "bad dart id"))?);
                }
                rotation[v] = Some(rot);
            }
            Some("edge") => {
                let id: usize = num(t.next(), l, "edge id")?;
                let u: usize = num(t.next(), l, "endpoint")?;
                let v: usize = num(t.next(), l, "endpoint")?;
                let w = t
                    .next()
                    .and_then(parse_rational)
                    .ok_or_else(|| perr(l, "bad or missing weight"))?;
                if t.next().is_some() {
                    return Err(perr(l, "trailing tokens"));
                }
                if id >= edges.len() {
                    edges.resize(id + 1, None);
                }
                if edges[id].is_some() {
                    return Err(perr(l, format!("duplicate edge id {id}")));
                }
                edges[id] = Some((u, v, w));
            }
            Some("req") => {
                let v: usize = num(t.next(), l, "vertex")?;
                let r: u8 = num(t.next(), l, "requirement")?;
                if v >= n || r > 3 {
                    return Err(perr(l, "requirement out of range"));
                }
                req.set(v, r);
            }
            _ => return Err(perr(l, format!("unrecognised line `{s}`"))),
        }
    }
    let edges = edges
        .into_iter()
        .enumerate()
        .map(|(e, x)| x.ok_or_else(|| perr(0, format!("edge ids are not dense: {e} missing"))))
        .collect::<Result<Vec<_>>>()?;
    let rotation = rotation.into_iter().map(Option::unwrap_or_default).collect();
    let g = EmbeddedMultigraph::build(n, edges, rotation)?;
    Ok((g, req))
}

/// Canonical graph file; `parse_graph(write_graph(g, r)) == (g, r)`.
pub fn write_graph(g: &EmbeddedMultigraph, req: &RequirementMap) -> String {
    let mut out = String::new();
    writeln!(out, "{GRAPH_HEADER}").unwrap();
    writeln!(out, "vertices {}", g.num_vertices()).unwrap();
    for v in 0..g.num_vertices() {
        let rot: Vec<String> = g.rotation(v).iter().map(|d| d.to_string()).collect();
        if rot.is_empty() {
            writeln!(out, "rot {v}:").unwrap();
        } else {
            writeln!(out, "rot {v}: {}", rot.join(" ")).unwrap();
        }
    }
    for e in 0..g.num_edges() {
        let (u, v) = g.endpoints(e);
        writeln!(out, "edge {e} {u} {v} {}", format_rational(&g.weight(e))).unwrap();
    }
    for v in 0..req.len() {
        if req.get(v) > 0 {
            writeln!(out, "req {v} {}", req.get(v)).unwrap();
        }
    }
    out
}

pub fn write_solution(g: &EmbeddedMultigraph, sol: &MultiSolution) -> String {
    let mut out = String::new();
    writeln!(out, "{SOLUTION_HEADER}").unwrap();
    writeln!(out, "weight {}", format_rational(&sol.weight(g))).unwrap();
    for e in sol.support() {
        writeln!(out, "mult {e} {}", sol.mult[e]).unwrap();
    }
    out
}

/// Parses a solution file for a graph with `m` edges. Returns the solution
/// and the weight it declares.
pub fn parse_solution(text: &str, m: usize, k: u8) -> Result<(MultiSolution, Weight)> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, SOLUTION_HEADER)) => {}
        Some((l, _)) => return Err(perr(l, format!("expected header `{SOLUTION_HEADER}`"))),
        None => return Err(perr(1, "empty input")),
    }
    let mut mult = vec![0u8; m];
    let mut weight = None;
    for (l, s) in lines {
        let mut t = s.split_whitespace();
        match t.next() {
            Some("weight") => {
                weight = Some(t.next().and_then(parse_rational).ok_or_else(|| perr(l, "bad weight"))?);
            }
            Some("mult") => {
                let e: usize = num(t.next(), l, "edge id")?;
                let c: u8 = num(t.next(), l, "multiplicity")?;
                if e >= m || c > k {
                    return Err(perr(l, "multiplicity out of range"));
                }
                mult[e] = c;
            }
            _ => return Err(perr(l, format!("unrecognised line `{s}`"))),
        }
    }
    let weight = weight.ok_or_else(|| perr(0, "missing weight line"))?;
    Ok((MultiSolution::new(mult, k)?, weight))
}
