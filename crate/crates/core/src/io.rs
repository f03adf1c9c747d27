//! Graph file formats.
//!
//! Edge list: one edge per line as `u v` or `u v w`, `#` starts a comment.
//! DIMACS-like: `c` comment lines, a `p <name> <n> <m>` header, then edge
//! lines `e u v [w]` (the `e` is optional) with 1-based ids.
//!
//! Edge-list ids may be any non-negative integers; they are remapped to
//! `0..n` in ascending order and the original labels are kept.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Edges,
    Dimacs,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edges" => Ok(Format::Edges),
            "dimacs" => Ok(Format::Dimacs),
            _ => Err(Error::Params(format!("unknown format {s:?}; expected edges or dimacs"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub graph: Graph,
    /// Original label of each dense vertex id.
    pub labels: Vec<u64>,
}

impl ParsedGraph {
    pub fn label(&self, v: usize) -> u64 {
        self.labels[v]
    }

    pub fn vertex_of(&self, label: u64) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_id(tok: &str, line: usize) -> Result<u64> {
    tok.parse::<u64>()
        .map_err(|_| parse_err(line, format!("invalid vertex id {tok:?}")))
}

fn parse_weight(tok: Option<&str>, line: usize) -> Result<f64> {
    let Some(tok) = tok else { return Ok(1.0) };
    let w: f64 = tok.parse().map_err(|_| parse_err(line, format!("invalid weight {tok:?}")))?;
    if !(w.is_finite() && w > 0.0) {
        return Err(parse_err(line, format!("non-positive weight {tok}")));
    }
    Ok(w)
}

struct RawEdge {
    line: usize,
    u: u64,
    v: u64,
    w: f64,
}

fn build(raw: Vec<RawEdge>, labels: Vec<u64>) -> Result<ParsedGraph> {
    let mut g = Graph::empty(labels.len());
    for e in raw {
        if e.u == e.v {
            return Err(parse_err(e.line, format!("self-loop at vertex {}", e.u)));
        }
        let u = labels.binary_search(&e.u).expect("label collected");
        let v = labels.binary_search(&e.v).expect("label collected");
        if g.edge_length(u, v).is_some() {
            return Err(parse_err(e.line, format!("duplicate edge ({}, {})", e.u, e.v)));
        }
        g.add_edge(u, v, e.w).map_err(|err| parse_err(e.line, err.to_string()))?;
    }
    Ok(ParsedGraph { graph: g, labels })
}

pub fn parse_graph(input: &str, format: Format) -> Result<ParsedGraph> {
    match format {
        Format::Edges => parse_edge_list(input),
        Format::Dimacs => parse_dimacs(input),
    }
}

fn parse_edge_list(input: &str) -> Result<ParsedGraph> {
    let mut raw = Vec::new();
    let mut ids = BTreeSet::new();
    for (i, text) in input.lines().enumerate() {
        let line = i + 1;
        let body = text.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if !(2..=3).contains(&toks.len()) {
            return Err(parse_err(line, format!("expected `u v [w]`, got {body:?}")));
        }
        let u = parse_id(toks[0], line)?;
        let v = parse_id(toks[1], line)?;
        let w = parse_weight(toks.get(2).copied(), line)?;
        ids.insert(u);
        ids.insert(v);
        raw.push(RawEdge { line, u, v, w });
    }
    build(raw, ids.into_iter().collect())
}

fn parse_dimacs(input: &str) -> Result<ParsedGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut raw = Vec::new();
    for (i, text) in input.lines().enumerate() {
        let line = i + 1;
        let body = text.trim();
        if body.is_empty() || body.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks[0] == "p" {
            if header.is_some() {
                return Err(parse_err(line, "second problem line"));
            }
            if toks.len() != 4 {
                return Err(parse_err(line, "expected `p <name> <n> <m>`"));
            }
            let n = toks[2].parse().map_err(|_| parse_err(line, "invalid vertex count"))?;
            let m = toks[3].parse().map_err(|_| parse_err(line, "invalid edge count"))?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(parse_err(line, "edge before the problem line"));
        };
        let toks = if toks[0] == "e" || toks[0] == "a" { &toks[1..] } else { &toks[..] };
        if !(2..=3).contains(&toks.len()) {
            return Err(parse_err(line, format!("expected `e u v [w]`, got {body:?}")));
        }
        let u = parse_id(toks[0], line)?;
        let v = parse_id(toks[1], line)?;
        for x in [u, v] {
            if x == 0 || x as usize > n {
                return Err(parse_err(line, format!("vertex {x} outside 1..={n}")));
            }
        }
        let w = parse_weight(toks.get(2).copied(), line)?;
        raw.push(RawEdge {
            line,
            u: u - 1,
            v: v - 1,
            w,
        });
    }
    let (n, m) = header.ok_or_else(|| parse_err(0, "missing problem line"))?;
    if raw.len() != m {
        return Err(parse_err(0, format!("header declares {m} edges, found {}", raw.len())));
    }
    let mut pg = build(raw, (0..n as u64).collect())?;
    pg.labels = (1..=n as u64).collect();
    Ok(pg)
}

/// Canonical text: edges with `u < v` in ascending order, weights omitted
/// for unit graphs, floats in shortest round-trip form.
pub fn serialize_graph(g: &Graph, format: Format) -> String {
    let unit = g.is_unit();
    let mut out = String::new();
    if format == Format::Dimacs {
        let _ = writeln!(out, "p edge {} {}", g.vertex_count(), g.edge_count());
    }
    for (u, v, w) in g.edges() {
        let (a, b) = match format {
            Format::Edges => (u, v),
            Format::Dimacs => (u + 1, v + 1),
        };
        let prefix = if format == Format::Dimacs { "e " } else { "" };
        if unit {
            let _ = writeln!(out, "{prefix}{a} {b}");
        } else {
            let _ = writeln!(out, "{prefix}{a} {b} {w}");
        }
    }
    out
}

/// Edge list of `(u, v, w)` triples under a labelling, canonical order.
pub fn format_edges(edges: &[(usize, usize, f64)], labels: &[u64], unit: bool) -> String {
    let mut rows: Vec<(u64, u64, f64)> = edges
        .iter()
        .map(|&(u, v, w)| {
            let (a, b) = (labels[u], labels[v]);
            (a.min(b), a.max(b), w)
        })
        .collect();
    rows.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    let mut out = String::new();
    for (a, b, w) in rows {
        if unit {
            let _ = writeln!(out, "{a} {b}");
        } else {
            let _ = writeln!(out, "{a} {b} {w}");
        }
    }
    out
}
