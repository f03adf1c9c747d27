//! Structural checks of a single star partition.

use serde::{Deserialize, Serialize};

use crate::cone::ConeContext;
use crate::cone_cut::{interval_count, RadiusSample};
use crate::error::Result;
use crate::graph::{ball, radius, sssp, Graph, VertexSet, LENGTH_TOLERANCE};
use crate::hierarchy::{build_low_stretch_tree_observed, PartitionObserver};
use crate::schedule::Params;
use crate::star::StarDecomposition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditCheck {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> Vec<&AuditCheck> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail).collect()
    }

    pub fn status(&self, name: &str) -> Option<CheckStatus> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.status)
    }

    fn push(&mut self, name: &str, result: std::result::Result<String, String>) {
        let (status, detail) = match result {
            Ok(d) => (CheckStatus::Pass, d),
            Err(d) => (CheckStatus::Fail, d),
        };
        self.checks.push(AuditCheck {
            name: name.into(),
            status,
            detail,
        });
    }

    fn skip(&mut self, name: &str, detail: String) {
        self.checks.push(AuditCheck {
            name: name.into(),
            status: CheckStatus::Skipped,
            detail,
        });
    }
}

type Check = std::result::Result<String, String>;

fn leq(a: f64, b: f64, unit: bool) -> bool {
    if unit {
        a <= b
    } else {
        a <= b + LENGTH_TOLERANCE * b.abs().max(1.0)
    }
}

fn owners(dec: &StarDecomposition, universe: usize) -> Vec<Vec<usize>> {
    let mut own = vec![Vec::new(); universe];
    for (j, cl) in dec.clusters.iter().enumerate() {
        for v in cl.iter() {
            if v < universe {
                own[v].push(j);
            }
        }
    }
    own
}

fn check_partition(g: &Graph, dec: &StarDecomposition) -> Check {
    let full = dec.full_cluster();
    let own = owners(dec, g.vertex_count().max(full.universe()));
    for v in full.iter() {
        match own[v].len() {
            1 => {}
            0 => return Err(format!("vertex {v} is in no cluster")),
            _ => return Err(format!("vertex {v} is in clusters {:?}", own[v])),
        }
    }
    for (j, cl) in dec.clusters.iter().enumerate() {
        if let Some(v) = cl.iter().find(|&v| !full.contains(v)) {
            return Err(format!("cluster {j} holds {v} from outside the partitioned set"));
        }
    }
    Ok(format!("{} clusters cover {} vertices", dec.clusters.len(), full.len()))
}

fn check_strong_diameter(g: &Graph, dec: &StarDecomposition) -> Check {
    if dec.centers.len() != dec.clusters.len() {
        return Err("center count differs from cluster count".into());
    }
    for (j, (cl, &c)) in dec.clusters.iter().zip(&dec.centers).enumerate() {
        if !cl.contains(c) {
            return Err(format!("cluster {j} does not contain its center {c}"));
        }
        radius(g, cl, c).map_err(|e| format!("cluster {j}: {e}"))?;
    }
    Ok("every cluster is connected and holds its center".into())
}

fn check_portals(g: &Graph, dec: &StarDecomposition) -> Check {
    if dec.portals.len() != dec.cone_count() {
        return Err("portal count differs from cone count".into());
    }
    for (i, p) in dec.portals.iter().enumerate() {
        let j = i + 1;
        if !dec.clusters[0].contains(p.y) {
            return Err(format!("portal tail {} of cone {j} is outside the central ball", p.y));
        }
        if p.x != dec.centers[j] || !dec.clusters[j].contains(p.x) {
            return Err(format!("portal head {} is not the center of cone {j}", p.x));
        }
        if g.edge_length(p.y, p.x).is_none() {
            return Err(format!("portal ({}, {}) is not an edge", p.y, p.x));
        }
    }
    Ok(format!("{} portal edges", dec.portals.len()))
}

fn check_distances_preserved(g: &Graph, dec: &StarDecomposition) -> Check {
    let full = dec.full_cluster();
    let unit = g.is_unit();
    let reference = sssp(g, &full, dec.x0).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for j in 1..dec.cone_count() {
        let yj = dec.unassigned_after(j);
        if yj.is_empty() {
            continue;
        }
        let amb = dec.clusters[0].union(&yj);
        let dm = sssp(g, &amb, dec.x0).map_err(|e| e.to_string())?;
        for z in yj.iter() {
            let (a, b) = (dm.dist(z), reference.dist(z));
            let same = if unit { a == b } else { (a - b).abs() <= LENGTH_TOLERANCE };
            if !same {
                return Err(format!("after cone {j}: d(x0, {z}) grows from {b} to {a}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} distances preserved"))
}

fn check_radius_budget(g: &Graph, dec: &StarDecomposition) -> Check {
    let unit = g.is_unit();
    let x0_dm = sssp(g, &dec.clusters[0], dec.x0).map_err(|e| e.to_string())?;
    let rad0 = x0_dm.max_distance();
    let bound = (1.0 + dec.eps) * dec.delta;
    let mut worst: f64 = 0.0;
    for (i, p) in dec.portals.iter().enumerate() {
        let j = i + 1;
        let base = if p.reused { x0_dm.dist(p.y) } else { rad0 };
        let len = g.edge_length(p.y, p.x).ok_or("portal is not an edge")?;
        let rj = radius(g, &dec.clusters[j], p.x).map_err(|e| e.to_string())?;
        let total = base + len + rj;
        worst = worst.max(total / dec.delta);
        if !leq(total, bound, unit) {
            return Err(format!("cone {j}: {base} + {len} + {rj} = {total} exceeds (1+eps)Delta = {bound}"));
        }
    }
    Ok(format!("worst ratio {worst:.6} <= 1 + eps = {}", 1.0 + dec.eps))
}

fn cluster_radius_shrink(g: &Graph, dec: &StarDecomposition) -> (bool, String) {
    let limit = (1.0 - 1.0 / (20.0 * dec.c)) * dec.delta;
    for (j, (cl, &c)) in dec.clusters.iter().zip(&dec.centers).enumerate() {
        match radius(g, cl, c) {
            Ok(r) if r < limit + if g.is_unit() { 0.0 } else { LENGTH_TOLERANCE } => {}
            Ok(r) => return (false, format!("cluster {j} radius {r} >= {limit}")),
            Err(e) => return (false, e.to_string()),
        }
    }
    (true, format!("all radii below {limit}"))
}

fn check_chi_sum(dec: &StarDecomposition) -> Check {
    let s: f64 = dec.growth.iter().skip(1).flatten().map(|g| 1.0 / g.chi).sum();
    if s <= 1.0 + 1e-12 {
        Ok(format!("sum of 1/chi over later cones = {s:.6}"))
    } else {
        Err(format!("sum of 1/chi = {s} exceeds 1"))
    }
}

fn check_growth_balls(g: &Graph, dec: &StarDecomposition) -> Check {
    let radius_g = dec.eps * dec.delta / 16.0;
    let mut used = VertexSet::empty(g.vertex_count());
    for j in 2..=dec.cone_count() {
        let gr = dec.growth[j - 1].as_ref().ok_or(format!("cone {j} has no growth record"))?;
        let y_prev = dec.unassigned_after(j - 1);
        let b = ball(g, &y_prev, gr.anchor, radius_g).map_err(|e| e.to_string())?;
        if b.len() != gr.ball_size {
            return Err(format!("cone {j}: growth ball has {} vertices, recorded {}", b.len(), gr.ball_size));
        }
        if !b.is_subset(&dec.clusters[j]) {
            return Err(format!("cone {j}: growth ball escapes the cone"));
        }
        if !b.is_disjoint(&used) {
            return Err(format!("cone {j}: growth ball overlaps an earlier one"));
        }
        used = used.union(&b);
    }
    Ok(format!("{} disjoint growth balls", dec.cone_count().saturating_sub(1)))
}

fn check_queues(dec: &StarDecomposition) -> Check {
    if dec.queues.len() != dec.clusters.len() {
        return Err("queue count differs from cluster count".into());
    }
    for (j, ((q, cl), &c)) in dec.queues.iter().zip(&dec.clusters).zip(&dec.centers).enumerate() {
        let mut seen = VertexSet::empty(cl.universe());
        for &v in q {
            if v == c || !cl.contains(v) || seen.contains(v) {
                return Err(format!("queue {j} is not a permutation of its cluster minus center (at {v})"));
            }
            seen.insert(v);
        }
        if seen.len() + 1 != cl.len() {
            return Err(format!("queue {j} misses {} vertices", cl.len() - 1 - seen.len()));
        }
    }
    Ok("all queues are permutations".into())
}

fn check_highway(g: &Graph, dec: &StarDecomposition) -> Check {
    let Some(&z1) = dec.queue.first() else {
        return Ok("empty queue".into());
    };
    if dec.clusters[0].contains(z1) {
        if dec.queues[0].first() != Some(&z1) {
            return Err(format!("z1 = {z1} lies in the central ball but does not head Q0"));
        }
        return Ok("z1 in the central ball heads Q0".into());
    }
    if dec.cone_count() == 0 || !dec.clusters[1].contains(z1) {
        return Err(format!("z1 = {z1} is outside the central ball and the first cone"));
    }
    let full = dec.full_cluster();
    let y0 = full.difference(&dec.clusters[0]);
    let x1 = dec.centers[1];
    let ctx = ConeContext::new(g, &full, &y0, dec.x0, x1).map_err(|e| e.to_string())?;
    let f = ctx.threshold(z1).map_err(|e| e.to_string())?;
    let zero = if g.is_unit() { f == 0.0 } else { f.abs() <= LENGTH_TOLERANCE };
    if !zero {
        return Err(format!("threshold of z1 in the first cone is {f}, not 0"));
    }
    let y1 = dec.portals[0].y;
    if y1 != dec.x0 && dec.queues[0].first() != Some(&y1) {
        return Err(format!("portal tail {y1} does not head Q0"));
    }
    if z1 != x1 && dec.queues[1].first() != Some(&z1) {
        return Err(format!("z1 = {z1} does not head Q1"));
    }
    Ok("z1 reached along a shortest path through the first portal".into())
}

fn check_fat_triggers(dec: &StarDecomposition) -> Check {
    let mut cones = std::collections::BTreeSet::new();
    let mut k = 0;
    for t in &dec.queue_parts.triggers {
        if !cones.insert(t.cone) {
            return Err(format!("cone {} triggered twice", t.cone));
        }
        if t.count * t.count < t.index {
            return Err(format!("trigger at {} with only {} points", t.index, t.count));
        }
        if t.inserted {
            k += 1;
            if (t.count * t.count) < k {
                return Err(format!("fat portal {k} triggered by {} < sqrt({k}) points", t.count));
            }
        }
    }
    Ok(format!("{} triggers on distinct cones", dec.queue_parts.triggers.len()))
}

fn check_samples(dec: &StarDecomposition) -> Check {
    let (lo, hi) = (dec.delta / (16.0 * dec.c), dec.delta / (8.0 * dec.c));
    if !(lo <= dec.r0 && dec.r0 <= hi) {
        return Err(format!("r0 = {} outside [{lo}, {hi}]", dec.r0));
    }
    for (i, (s, gr)) in dec.samples.iter().zip(&dec.growth).enumerate() {
        let (lo, hi) = match gr {
            None => (dec.eps / 4.0, dec.eps / 2.0),
            Some(gr) => {
                let n = interval_count(gr.chi);
                if s.intervals != n || s.interval < 1 || s.interval > n {
                    return Err(format!("cone {}: interval {}/{} for chi = {}", i + 1, s.interval, s.intervals, gr.chi));
                }
                RadiusSample::subinterval(dec.eps, n, s.interval)
            }
        };
        if !(lo <= s.r && s.r <= hi) {
            return Err(format!("cone {}: r = {} outside [{lo}, {hi}]", i + 1, s.r));
        }
    }
    Ok("all radii inside their sampling intervals".into())
}

/// Runs every structural check on a decomposition of `g` (the working graph
/// it was produced on).
pub fn audit_star_partition(g: &Graph, dec: &StarDecomposition) -> AuditReport {
    let mut rep = AuditReport::default();
    rep.push("partition", check_partition(g, dec));
    rep.push("strong_diameter", check_strong_diameter(g, dec));
    rep.push("portals", check_portals(g, dec));
    rep.push("distances_preserved", check_distances_preserved(g, dec));
    rep.push("radius_budget", check_radius_budget(g, dec));
    let (ok, detail) = cluster_radius_shrink(g, dec);
    if dec.eps <= 1.0 / (80.0 * dec.c) {
        rep.push("cluster_radius_shrink", if ok { Ok(detail) } else { Err(detail) });
    } else {
        rep.skip("cluster_radius_shrink", format!("eps above 1/(80c); informational: {detail}"));
    }
    rep.push("chi_sum", check_chi_sum(dec));
    rep.push("growth_balls", check_growth_balls(g, dec));
    rep.push("queues", check_queues(dec));
    rep.push("highway", check_highway(g, dec));
    rep.push("fat_triggers", check_fat_triggers(dec));
    rep.push("samples", check_samples(dec));
    rep
}

struct FirstLevel {
    report: Option<AuditReport>,
}

impl PartitionObserver for FirstLevel {
    fn on_partition(&mut self, depth: usize, work: &Graph, dec: &StarDecomposition) {
        if depth == 0 {
            self.report = Some(audit_star_partition(work, dec));
        }
    }
}

/// Audits the top-level star partition of the tree build for `(g, root,
/// params)`. `None` when the whole graph is a base case.
pub fn audit_first_level(g: &Graph, root: Option<usize>, params: &Params) -> Result<Option<AuditReport>> {
    let mut obs = FirstLevel { report: None };
    build_low_stretch_tree_observed(g, root, params, &mut obs)?;
    Ok(obs.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::Params;
    use crate::star::{star_partition, star_partition_with_r0};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path(n: usize) -> Graph {
        Graph::from_unit_edges(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn honest_runs_pass() {
        let g = Graph::from_unit_edges(
            9,
            &[(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8), (0, 3), (3, 6), (1, 4), (4, 7), (2, 5), (5, 8)],
        )
        .unwrap();
        let all = g.all_vertices();
        for seed in 0..40 {
            let q: Vec<usize> = (1..9).collect();
            let dec = star_partition(&g, &all, 0, &q, &Params::default(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            let rep = audit_star_partition(&g, &dec);
            assert!(rep.passed(), "{:?}", rep.failures());
        }
    }

    #[test]
    fn double_membership_is_caught() {
        let g = path(5);
        let all = g.all_vertices();
        let mut dec = star_partition_with_r0(&g, &all, 0, &[4, 3, 1, 2], 2.0, &Params::default(), &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        // r0 is prescribed, so only the sample check may object
        let base = audit_star_partition(&g, &dec);
        assert!(base.failures().iter().all(|c| c.name == "samples"), "{:?}", base.failures());
        dec.clusters[1].insert(2);
        let rep = audit_star_partition(&g, &dec);
        assert_eq!(rep.status("partition"), Some(CheckStatus::Fail));
        assert!(!rep.passed());
    }

    #[test]
    fn path_radius_budget_arithmetic() {
        let g = path(5);
        let all = g.all_vertices();
        let dec = star_partition_with_r0(&g, &all, 0, &[4, 3, 1, 2], 2.0, &Params::default(), &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        // rad(X0) = 2, d(y1, x1) = 1, rad(X1) = 1: total 4 = Delta
        let rad0 = radius(&g, &dec.clusters[0], 0).unwrap();
        let rad1 = radius(&g, &dec.clusters[1], 3).unwrap();
        assert_eq!((rad0, rad1, dec.delta), (2.0, 1.0, 4.0));
        assert!(rad0 + 1.0 + rad1 <= (1.0 + dec.eps) * dec.delta);
        let rep = audit_star_partition(&g, &dec);
        assert_eq!(rep.status("radius_budget"), Some(CheckStatus::Pass));
        // r0 = 2 lies outside the sampling interval for c = 2
        assert_eq!(rep.status("samples"), Some(CheckStatus::Fail));
    }
}
