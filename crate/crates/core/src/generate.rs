//! Deterministic graph generators.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::graph::Graph;
use crate::rng::stream;

/// Attempts `gnp` makes before giving up on connectivity.
pub const GNP_MAX_RETRIES: u64 = 1000;

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphKind {
    Path,
    Cycle,
    /// `size x size` grid.
    Grid,
    /// `size x size` grid with wraparound; `size >= 3`.
    Torus,
    Complete,
    /// Erdos-Renyi, resampled until connected.
    Gnp { p: f64 },
    /// A uniform random labelled tree plus `extra` random extra edges.
    RandomConnected { extra: usize },
}

impl FromStr for GraphKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "path" => GraphKind::Path,
            "cycle" => GraphKind::Cycle,
            "grid" => GraphKind::Grid,
            "torus" => GraphKind::Torus,
            "complete" => GraphKind::Complete,
            "gnp" => GraphKind::Gnp { p: 0.5 },
            "random_connected" | "random" => GraphKind::RandomConnected { extra: 0 },
            _ => return Err(Error::Params(format!("unknown graph kind {s:?}"))),
        })
    }
}

fn grid_index(k: usize, r: usize, c: usize) -> usize {
    r * k + c
}

pub fn generate(kind: GraphKind, size: usize, seed: u64) -> Result<Graph> {
    let mut e = Vec::new();
    let n = match kind {
        GraphKind::Path => {
            e.extend((1..size).map(|i| (i - 1, i)));
            size
        }
        GraphKind::Cycle => {
            if size < 3 {
                return precondition(format!("a cycle needs at least 3 vertices, got {size}"));
            }
            e.extend((0..size).map(|i| (i, (i + 1) % size)));
            size
        }
        GraphKind::Grid | GraphKind::Torus => {
            let k = size;
            let wrap = kind == GraphKind::Torus;
            if wrap && k < 3 {
                return precondition(format!("a torus needs side >= 3, got {k}"));
            }
            for r in 0..k {
                for c in 0..k {
                    if c + 1 < k || wrap {
                        e.push((grid_index(k, r, c), grid_index(k, r, (c + 1) % k)));
                    }
                    if r + 1 < k || wrap {
                        e.push((grid_index(k, r, c), grid_index(k, (r + 1) % k, c)));
                    }
                }
            }
            k * k
        }
        GraphKind::Complete => {
            for u in 0..size {
                e.extend((u + 1..size).map(|v| (u, v)));
            }
            size
        }
        GraphKind::Gnp { p } => return gnp(size, p, seed),
        GraphKind::RandomConnected { extra } => return random_connected(size, extra, seed),
    };
    Graph::from_unit_edges(n, &e)
}

fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return precondition(format!("edge probability must lie in [0, 1], got {p}"));
    }
    if n == 0 {
        return precondition("gnp needs at least one vertex");
    }
    for attempt in 0..GNP_MAX_RETRIES {
        let mut rng = stream(seed, "gnp", &[attempt]);
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    e.push((u, v));
                }
            }
        }
        let g = Graph::from_unit_edges(n, &e)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Domain(format!(
        "gnp({n}, {p}) stayed disconnected after {GNP_MAX_RETRIES} attempts"
    )))
}

fn random_connected(n: usize, extra: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return precondition("random_connected needs at least one vertex");
    }
    let max_edges = n * (n - 1) / 2;
    if n - 1 + extra > max_edges {
        return precondition(format!("{n} vertices cannot hold {} edges", n - 1 + extra));
    }
    let mut rng = stream(seed, "random-connected", &[]);
    // random attachment order gives a random recursive tree
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut g = Graph::empty(n);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        g.add_edge(order[i], order[j], 1.0)?;
    }
    let mut added = 0;
    while added < extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && g.edge_length(u, v).is_none() {
            g.add_edge(u, v, 1.0)?;
            added += 1;
        }
    }
    Ok(g)
}

/// Same topology with lengths drawn uniformly from `[lo, hi]`.
pub fn with_random_weights(g: &Graph, lo: f64, hi: f64, seed: u64) -> Result<Graph> {
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return precondition(format!("weight range [{lo}, {hi}] must be positive and finite"));
    }
    let mut rng = stream(seed, "weights", &[]);
    let edges: Vec<_> = g
        .edges()
        .into_iter()
        .map(|(u, v, _)| (u, v, if lo == hi { lo } else { rng.gen_range(lo..=hi) }))
        .collect();
    Graph::from_edges(g.vertex_count(), &edges)
}
