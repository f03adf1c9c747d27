//! Per-depth separation profile of a single edge.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::graph::{sssp, Graph};
use crate::harness::stretch::{trial_seed, KahanSum};
use crate::hierarchy::{hierarchical_star_partition_observed, PartitionObserver};
use crate::schedule::{epsilon_for, Params};
use crate::star::StarDecomposition;

/// Slack constant of the soft budget.
pub const PROFILE_BUDGET_CONSTANT: f64 = 200.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthRow {
    pub depth: usize,
    pub separation_probability: f64,
    /// `E[1{separated at this depth} * Delta]`.
    pub separated_radius: f64,
    pub running_sum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StretchProfile {
    pub edge: (usize, usize),
    pub edge_distance: f64,
    pub trials: usize,
    pub seed: u64,
    pub eps: f64,
    pub rows: Vec<DepthRow>,
    pub total: f64,
    /// `200 d(u,v) log2 n log2(1/eps) / eps`.
    pub budget: f64,
    pub within_budget: bool,
}

struct Separation {
    u: usize,
    v: usize,
    hit: Option<(usize, f64)>,
}

impl PartitionObserver for Separation {
    fn on_partition(&mut self, depth: usize, _work: &Graph, dec: &StarDecomposition) {
        if self.hit.is_some() || !dec.cluster.contains(self.u) || !dec.cluster.contains(self.v) {
            return;
        }
        let cu = dec.clusters.iter().position(|c| c.contains(self.u));
        let cv = dec.clusters.iter().position(|c| c.contains(self.v));
        if cu != cv {
            self.hit = Some((depth, dec.delta));
        }
    }
}

pub fn decomposition_stretch_profile(
    g: &Graph,
    edge: (usize, usize),
    params: &Params,
    trials: usize,
    seed: u64,
) -> Result<StretchProfile> {
    let (u, v) = edge;
    if u >= g.vertex_count() || g.edge_length(u, v).is_none() {
        return precondition(format!("({u}, {v}) is not an edge"));
    }
    if trials == 0 {
        return precondition("profile needs at least one trial");
    }
    params.validate(g.vertex_count())?;
    let all = g.all_vertices();
    let d_uv = sssp(g, &all, u)?.dist(v);
    let q: Vec<usize> = (1..g.vertex_count()).collect();
    let hits: Vec<Result<Option<(usize, f64)>>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let p = Params {
                seed: trial_seed(seed, i),
                ..params.clone()
            };
            let mut obs = Separation { u, v, hit: None };
            hierarchical_star_partition_observed(g, &all, 0, &q, &p, &mut obs)?;
            Ok(obs.hit)
        })
        .collect();
    let mut counts: Vec<usize> = Vec::new();
    let mut sums: Vec<KahanSum> = Vec::new();
    for h in hits {
        if let Some((depth, delta)) = h? {
            if counts.len() <= depth {
                counts.resize(depth + 1, 0);
                sums.resize(depth + 1, KahanSum::default());
            }
            counts[depth] += 1;
            sums[depth].add(delta);
        }
    }
    let tf = trials as f64;
    let mut running = 0.0;
    let rows: Vec<DepthRow> = counts
        .iter()
        .zip(&sums)
        .enumerate()
        .map(|(depth, (&c, s))| {
            let sep = s.value() / tf;
            running += sep;
            DepthRow {
                depth,
                separation_probability: c as f64 / tf,
                separated_radius: sep,
                running_sum: running,
            }
        })
        .collect();
    let eps = epsilon_for(g.vertex_count(), params);
    let n = g.vertex_count().max(2) as f64;
    let budget = PROFILE_BUDGET_CONSTANT * d_uv * n.log2() * (1.0 / eps).log2().max(1.0) / eps;
    Ok(StretchProfile {
        edge,
        edge_distance: d_uv,
        trials,
        seed,
        eps,
        total: running,
        within_budget: running.is_finite() && running <= budget,
        rows,
        budget,
    })
}
