use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::graph::{radius, sssp, Graph};
use crate::hierarchy::build_low_stretch_tree;
use crate::rng::derive_seed;
use crate::schedule::Params;
use crate::tree::SpanningTree;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeStretch {
    pub u: usize,
    pub v: usize,
    pub graph_distance: f64,
    pub tree_distance: f64,
    pub stretch: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StretchReport {
    pub root: usize,
    pub edges: Vec<EdgeStretch>,
    pub avg_stretch: f64,
    pub max_stretch: f64,
    /// `max_z d_T(root, z) / rad_root(G)`.
    pub radius_stretch: f64,
    pub tree_edges: Vec<(usize, usize, f64)>,
}

/// `d_G(u, v)` for every edge, in `g.edges()` order.
pub fn edge_graph_distances(g: &Graph) -> Vec<f64> {
    let edges = g.edges();
    if g.is_unit() {
        return vec![1.0; edges.len()];
    }
    let all = g.all_vertices();
    let mut out = vec![0.0; edges.len()];
    let mut i = 0;
    while i < edges.len() {
        let u = edges[i].0;
        let dm = sssp(g, &all, u).expect("u is a vertex");
        while i < edges.len() && edges[i].0 == u {
            out[i] = dm.dist(edges[i].1);
            i += 1;
        }
    }
    out
}

pub fn stretch_report(g: &Graph, t: &SpanningTree) -> Result<StretchReport> {
    let all = g.all_vertices();
    t.validate_against(g, &all)?;
    stretch_report_with(g, t, &edge_graph_distances(g))
}

fn stretch_report_with(g: &Graph, t: &SpanningTree, dg: &[f64]) -> Result<StretchReport> {
    let mut edges = Vec::with_capacity(dg.len());
    let mut sum = 0.0;
    let mut max: f64 = 1.0;
    for ((u, v, _), &d) in g.edges().into_iter().zip(dg) {
        let td = t.distance(u, v)?;
        let s = td / d;
        sum += s;
        max = max.max(s);
        edges.push(EdgeStretch {
            u,
            v,
            graph_distance: d,
            tree_distance: td,
            stretch: s,
        });
    }
    let rad = radius(g, &g.all_vertices(), t.root())?;
    let tree_rad = t.vertices().iter().filter_map(|z| t.root_distance(z)).fold(0.0, f64::max);
    Ok(StretchReport {
        root: t.root(),
        avg_stretch: if edges.is_empty() { 1.0 } else { sum / edges.len() as f64 },
        max_stretch: max,
        radius_stretch: if rad > 0.0 { tree_rad / rad } else { 1.0 },
        edges,
        tree_edges: t.edges(),
    })
}

/// Per-edge stretch of a tree, `g.edges()` order, given precomputed `d_G`.
pub fn edge_stretches(g: &Graph, t: &SpanningTree, dg: &[f64]) -> Result<Vec<f64>> {
    g.edges()
        .into_iter()
        .zip(dg)
        .map(|((u, v, _), &d)| Ok(t.distance(u, v)? / d))
        .collect()
}

/// Compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub edges: Vec<(usize, usize)>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Mean over trials of the tree's average stretch.
    pub avg_stretch: f64,
    pub avg_stretch_stderr: f64,
    pub trials: usize,
    pub seed: u64,
    /// Seed handed to the build of trial `i` is
    /// `derive_seed(seed, "mc-trial", [i])`.
    pub seed_schedule: String,
}

/// Seed used by Monte-Carlo trial `i`.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    derive_seed(seed, "mc-trial", &[trial as u64])
}

const MC_CHUNK: usize = 512;

struct Moments {
    sum: KahanSum,
    sq: KahanSum,
}

impl Moments {
    fn new() -> Self {
        Moments {
            sum: KahanSum::default(),
            sq: KahanSum::default(),
        }
    }

    fn add(&mut self, x: f64) {
        self.sum.add(x);
        self.sq.add(x * x);
    }

    fn mean_stderr(&self, n: usize) -> (f64, f64) {
        let nf = n as f64;
        let mean = self.sum.value() / nf;
        if n < 2 {
            return (mean, 0.0);
        }
        let var = ((self.sq.value() - self.sum.value() * mean) / (nf - 1.0)).max(0.0);
        (mean, (var / nf).sqrt())
    }
}

/// Builds `trials` trees with derived seeds and averages per-edge stretch.
/// Results do not depend on the number of worker threads.
pub fn expected_stretch_mc(g: &Graph, params: &Params, trials: usize, seed: u64) -> Result<McEstimate> {
    if trials == 0 {
        return precondition("Monte-Carlo needs at least one trial");
    }
    params.validate(g.vertex_count())?;
    let dg = edge_graph_distances(g);
    let m = dg.len();
    let mut per_edge: Vec<Moments> = (0..m).map(|_| Moments::new()).collect();
    let mut avg = Moments::new();
    let mut start = 0;
    while start < trials {
        let end = (start + MC_CHUNK).min(trials);
        let chunk: Vec<Result<Vec<f64>>> = (start..end)
            .into_par_iter()
            .map(|i| {
                let p = Params {
                    seed: trial_seed(seed, i),
                    ..params.clone()
                };
                let (t, _) = build_low_stretch_tree(g, None, &p)?;
                edge_stretches(g, &t, &dg)
            })
            .collect();
        for s in chunk {
            let s = s?;
            let mut tree_sum = KahanSum::default();
            for (acc, &x) in per_edge.iter_mut().zip(&s) {
                acc.add(x);
                tree_sum.add(x);
            }
            avg.add(if m == 0 { 1.0 } else { tree_sum.value() / m as f64 });
        }
        start = end;
    }
    let (mean, stderr) = per_edge.iter().map(|mo| mo.mean_stderr(trials)).unzip();
    let (avg_stretch, avg_stretch_stderr) = avg.mean_stderr(trials);
    Ok(McEstimate {
        edges: g.edges().into_iter().map(|(u, v, _)| (u, v)).collect(),
        mean,
        stderr,
        avg_stretch,
        avg_stretch_stderr,
        trials,
        seed,
        seed_schedule: "sha256(seed, \"mc-trial\", trial)".into(),
    })
}
