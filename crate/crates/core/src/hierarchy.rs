//! The recursive construction: shortest-path trees for small clusters,
//! star partitions otherwise, joined through portal edges.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::graph::{ensure_spans, spt_edges, sssp, within, Graph, VertexSet};
use crate::rng::stream;
use crate::schedule::Params;
use crate::star::{star_partition, Portal, QueueParts, StarDecomposition};
use crate::tree::SpanningTree;
use crate::weighted::{augment_portals, contract_short_edges, AugmentedGraph, Contraction};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeRecord {
    /// `None` for the first cone, whose radius is uniform.
    pub chi: Option<f64>,
    pub intervals: u32,
    pub interval: u32,
    pub r: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionRecord {
    pub depth: usize,
    pub path: Vec<u64>,
    pub size: usize,
    pub delta: f64,
    pub eps: f64,
    pub r0: f64,
    pub cones: Vec<ConeRecord>,
    /// Supernode count when short edges were contracted.
    pub supernodes: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BuildTrace {
    pub partitions: Vec<PartitionRecord>,
    pub base_cases: usize,
    pub max_depth: usize,
    pub imaginary_points: usize,
}

/// Callbacks fired during a build, for measurements that need more than
/// the trace.
pub trait PartitionObserver {
    /// Called after each star partition, once portals have been subdivided.
    fn on_partition(&mut self, _depth: usize, _work: &Graph, _dec: &StarDecomposition) {}
    fn on_base_case(&mut self, _depth: usize, _cluster: &VertexSet, _center: usize) {}
}

struct NoObserver;
impl PartitionObserver for NoObserver {}

struct Frame {
    cluster: VertexSet,
    center: usize,
    queue: Vec<usize>,
    depth: usize,
    path: Vec<u64>,
}

/// Builds a tree of `g[x_set]` rooted at `x0` with `queue` as the initial order.
pub fn hierarchical_star_partition(
    g: &Graph,
    x_set: &VertexSet,
    x0: usize,
    queue: &[usize],
    params: &Params,
) -> Result<(SpanningTree, BuildTrace)> {
    hierarchical_star_partition_observed(g, x_set, x0, queue, params, &mut NoObserver)
}

pub fn hierarchical_star_partition_observed(
    g: &Graph,
    x_set: &VertexSet,
    x0: usize,
    queue: &[usize],
    params: &Params,
    observer: &mut dyn PartitionObserver,
) -> Result<(SpanningTree, BuildTrace)> {
    let mut ag = AugmentedGraph::new(g.clone());
    let mut trace = BuildTrace::default();
    let edges = build_edges(&mut ag, x_set, x0, queue, params, Vec::new(), &mut trace, observer)?;
    let work_tree = SpanningTree::from_edges(ag.work().vertex_count(), x0, &edges)?;
    trace.imaginary_points = ag.imaginary().len();
    ag.expand_tree(&work_tree)
        .map(|t| (t, trace))
}

#[allow(clippy::too_many_arguments)]
fn build_edges(
    ag: &mut AugmentedGraph,
    x_set: &VertexSet,
    x0: usize,
    queue: &[usize],
    params: &Params,
    prefix: Vec<u64>,
    trace: &mut BuildTrace,
    observer: &mut dyn PartitionObserver,
) -> Result<Vec<(usize, usize, f64)>> {
    let threshold = params.base_threshold();
    let mut edges = Vec::new();
    let mut stack = vec![Frame {
        cluster: x_set.clone(),
        center: x0,
        queue: queue.to_vec(),
        depth: 0,
        path: prefix,
    }];
    while let Some(f) = stack.pop() {
        trace.max_depth = trace.max_depth.max(f.depth);
        let work = ag.work();
        let dm = sssp(work, &f.cluster, f.center)?;
        ensure_spans(&dm, &f.cluster)?;
        let delta = dm.max_distance();
        if within(delta, threshold, work.is_unit()) {
            edges.extend(spt_edges(work, &f.cluster, &dm)?);
            trace.base_cases += 1;
            observer.on_base_case(f.depth, &f.cluster, f.center);
            continue;
        }
        let mut rng = stream(params.seed, "partition", &f.path);
        let contraction = if params.contraction > 0.0 {
            let ct = contract_short_edges(work, &f.cluster, delta, params.contraction);
            (!ct.is_identity()).then_some(ct)
        } else {
            None
        };
        let (mut dec, hat_q0) = match &contraction {
            None => (star_partition(work, &f.cluster, f.center, &f.queue, params, &mut rng)?, Vec::new()),
            Some(ct) if ct.quotient.vertex_count() == 1 => {
                edges.extend(spt_edges(work, &f.cluster, &dm)?);
                trace.base_cases += 1;
                observer.on_base_case(f.depth, &f.cluster, f.center);
                continue;
            }
            Some(ct) => contracted_partition(work, ct, &f, delta, params, &mut rng)?,
        };
        augment_portals(ag, &mut dec)?;
        if let Some(ct) = &contraction {
            dec.queues[0] = contracted_q0(ct, &dec, &hat_q0);
        }
        observer.on_partition(f.depth, ag.work(), &dec);
        trace.partitions.push(PartitionRecord {
            depth: f.depth,
            path: f.path.clone(),
            size: f.cluster.len(),
            delta: dec.delta,
            eps: dec.eps,
            r0: dec.r0,
            cones: dec
                .samples
                .iter()
                .zip(&dec.growth)
                .map(|(s, gr)| ConeRecord {
                    chi: gr.as_ref().map(|g| g.chi),
                    intervals: s.intervals,
                    interval: s.interval,
                    r: s.r,
                })
                .collect(),
            supernodes: contraction.as_ref().map(|ct| ct.members.len()),
        });
        for p in &dec.portals {
            let len = ag
                .work()
                .edge_length(p.y, p.x)
                .ok_or_else(|| Error::Internal(format!("portal ({}, {}) is not an edge", p.y, p.x)))?;
            edges.push((p.y, p.x, len));
        }
        let StarDecomposition {
            clusters,
            centers,
            queues,
            ..
        } = dec;
        // push in reverse so cluster 0 is processed first
        for (j, ((cl, c), q)) in clusters.into_iter().zip(centers).zip(queues).enumerate().rev() {
            let mut path = f.path.clone();
            path.push(j as u64);
            stack.push(Frame {
                cluster: cl,
                center: c,
                queue: q,
                depth: f.depth + 1,
                path,
            });
        }
    }
    Ok(edges)
}

/// Partitions the quotient of a cluster and maps the result back.
fn contracted_partition<R: Rng + ?Sized>(
    work: &Graph,
    ct: &Contraction,
    f: &Frame,
    delta: f64,
    params: &Params,
    rng: &mut R,
) -> Result<(StarDecomposition, Vec<usize>)> {
    let hat_x0 = ct.supernode[f.center];
    let mut seen = vec![false; ct.members.len()];
    seen[hat_x0] = true;
    let mut hat_q = Vec::new();
    for &z in &f.queue {
        let s = ct.supernode[z];
        if !seen[s] {
            seen[s] = true;
            hat_q.push(s);
        }
    }
    let q_all = ct.quotient.all_vertices();
    let hat = star_partition(&ct.quotient, &q_all, hat_x0, &hat_q, params, rng)?;
    let universe = work.vertex_count();
    let expand = |s: &VertexSet| VertexSet::from_vertices(universe, s.iter().flat_map(|h| ct.members[h].iter().copied()));
    let clusters: Vec<VertexSet> = hat.clusters.iter().map(expand).collect();
    let mut centers = vec![f.center];
    let mut portals = Vec::new();
    for p in &hat.portals {
        let (y, x, _) = ct
            .realize_edge(work, p.y, p.x)
            .ok_or_else(|| Error::Internal("quotient portal has no realizing edge".into()))?;
        centers.push(x);
        portals.push(Portal {
            y,
            x,
            original_y: y,
            reused: false,
        });
    }
    let mut queues = vec![Vec::new(); clusters.len()];
    for (j, cl) in clusters.iter().enumerate().skip(1) {
        queues[j] = f.queue.iter().copied().filter(|&z| cl.contains(z) && z != centers[j]).collect();
    }
    let mut dec = StarDecomposition {
        cluster: f.cluster.clone(),
        queue: f.queue.clone(),
        x0: f.center,
        delta,
        eps: hat.eps,
        c: params.c,
        r0: hat.r0,
        clusters,
        centers,
        portals,
        anchors: hat.anchors.iter().map(|&a| ct.members[a][0]).collect(),
        samples: hat.samples,
        growth: hat.growth,
        queues,
        queue_parts: QueueParts::default(),
        added: Vec::new(),
    };
    dec.queues[0] = contracted_q0(ct, &dec, &hat.queues[0]);
    Ok((dec, hat.queues[0].clone()))
}

/// `Q_0` for a contracted partition: supernodes of the central ball in the
/// quotient order, each listing its portal tails first and then its members
/// in input order.
fn contracted_q0(ct: &Contraction, dec: &StarDecomposition, hat_q0: &[usize]) -> Vec<usize> {
    let hat_x0 = ct.supernode[dec.x0];
    let universe = dec.clusters[0].universe();
    let mut emitted = VertexSet::empty(universe);
    emitted.insert(dec.x0);
    let mut out = Vec::new();
    let mut rank = vec![usize::MAX; ct.supernode.len()];
    for (i, &z) in dec.queue.iter().enumerate() {
        rank[z] = i;
    }
    for s in std::iter::once(hat_x0).chain(hat_q0.iter().copied()) {
        for p in &dec.portals {
            if ct.supernode.get(p.original_y) == Some(&s) && !emitted.contains(p.y) {
                emitted.insert(p.y);
                out.push(p.y);
            }
        }
        let mut members = ct.members[s].clone();
        members.sort_by_key(|&v| rank[v]);
        for v in members {
            if !emitted.contains(v) {
                emitted.insert(v);
                out.push(v);
            }
        }
    }
    out
}

fn default_queue(n_members: &[usize], root: usize, shuffle: bool, seed: u64, path: &[u64]) -> Vec<usize> {
    let mut q: Vec<usize> = n_members.iter().copied().filter(|&v| v != root).collect();
    if shuffle {
        q.shuffle(&mut stream(seed, "queue", path));
    }
    q
}

fn pick_root(members: &[usize], root: Option<usize>, params: &Params, path: &[u64]) -> usize {
    match root {
        Some(r) => r,
        None if params.random_root => members[stream(params.seed, "root", path).gen_range(0..members.len())],
        None => members[0],
    }
}

/// A low-stretch spanning tree of a connected graph.
///
/// The root defaults to vertex 0 (or a seeded uniform vertex with
/// `random_root`); the queue is the remaining vertices in ascending order,
/// seed-shuffled with `shuffle`.
pub fn build_low_stretch_tree(g: &Graph, root: Option<usize>, params: &Params) -> Result<(SpanningTree, BuildTrace)> {
    build_low_stretch_tree_observed(g, root, params, &mut NoObserver)
}

/// [`build_low_stretch_tree`] reporting every partition to `observer`.
pub fn build_low_stretch_tree_observed(
    g: &Graph,
    root: Option<usize>,
    params: &Params,
    observer: &mut dyn PartitionObserver,
) -> Result<(SpanningTree, BuildTrace)> {
    let n = g.vertex_count();
    params.validate(n)?;
    if n == 0 {
        return precondition("graph has no vertices");
    }
    if let Some(r) = root {
        if r >= n {
            return precondition(format!("root {r} is not a vertex"));
        }
    }
    let all = g.all_vertices();
    let dm = sssp(g, &all, 0)?;
    ensure_spans(&dm, &all)?;
    let x0 = pick_root(all.members(), root, params, &[]);
    let q = default_queue(all.members(), x0, params.shuffle, params.seed, &[]);
    hierarchical_star_partition_observed(g, &all, x0, &q, params, observer)
}

/// One tree per connected component, in order of smallest vertex. A given
/// root applies to its own component; other components use their default.
pub fn build_low_stretch_forest(
    g: &Graph,
    root: Option<usize>,
    params: &Params,
) -> Result<(Vec<SpanningTree>, BuildTrace)> {
    let n = g.vertex_count();
    params.validate(n)?;
    if let Some(r) = root {
        if r >= n {
            return precondition(format!("root {r} is not a vertex"));
        }
    }
    let mut trees = Vec::new();
    let mut trace = BuildTrace::default();
    for (i, comp) in g.components().iter().enumerate() {
        let path = [i as u64];
        let given = root.filter(|&r| comp.contains(r));
        let x0 = pick_root(comp.members(), given, params, &path);
        let q = default_queue(comp.members(), x0, params.shuffle, params.seed, &path);
        let mut ag = AugmentedGraph::new(g.clone());
        let edges = build_edges(&mut ag, comp, x0, &q, params, path.to_vec(), &mut trace, &mut NoObserver)?;
        let wt = SpanningTree::from_edges(ag.work().vertex_count(), x0, &edges)?;
        trace.imaginary_points += ag.imaginary().len();
        trees.push(ag.expand_tree(&wt)?);
    }
    Ok((trees, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::shortest_path_tree;

    fn path(n: usize) -> Graph {
        Graph::from_unit_edges(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_unit_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn base_case_is_shortest_path_tree() {
        let g = cycle(7);
        let p = Params {
            base_radius: 10.0,
            ..Params::default()
        };
        let (t, trace) = build_low_stretch_tree(&g, None, &p).unwrap();
        assert_eq!(trace.partitions.len(), 0);
        assert_eq!(t, shortest_path_tree(&g, &g.all_vertices(), 0).unwrap());
    }

    #[test]
    fn path_graph_gives_itself() {
        let g = path(5);
        for seed in 0..20 {
            let (t, _) = build_low_stretch_tree(&g, None, &Params::default().with_seed(seed)).unwrap();
            assert_eq!(t.edges(), g.edges());
        }
    }

    #[test]
    fn c4_is_missing_one_edge() {
        let g = cycle(4);
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..200 {
            let p = Params {
                random_root: true,
                shuffle: true,
                ..Params::default().with_seed(seed)
            };
            let (t, _) = build_low_stretch_tree(&g, None, &p).unwrap();
            assert_eq!(t.edge_count(), 3);
            let missing: Vec<_> = g.edges().into_iter().filter(|e| !t.edges().contains(e)).collect();
            assert_eq!(missing.len(), 1);
            seen.insert((missing[0].0, missing[0].1));
        }
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn deterministic_per_seed() {
        let g = cycle(30);
        let p = Params {
            shuffle: true,
            ..Params::default().with_seed(99)
        };
        let a = build_low_stretch_tree(&g, None, &p).unwrap();
        let b = build_low_stretch_tree(&g, None, &p).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn disconnected_needs_forest() {
        let g = Graph::from_unit_edges(5, &[(0, 1), (2, 3), (3, 4)]).unwrap();
        assert!(matches!(
            build_low_stretch_tree(&g, None, &Params::default()),
            Err(Error::Disconnected { .. })
        ));
        let (trees, _) = build_low_stretch_forest(&g, Some(3), &Params::default()).unwrap();
        assert_eq!(trees.len(), 2);
        assert_eq!(trees[0].root(), 0);
        assert_eq!(trees[1].root(), 3);
        assert_eq!(trees[1].edge_count(), 2);
    }

    #[test]
    fn weighted_tree_round_trips() {
        let g = Graph::from_edges(
            6,
            &[(0, 1, 2.5), (1, 2, 0.7), (2, 3, 3.1), (3, 4, 1.2), (4, 5, 2.2), (5, 0, 4.4), (1, 4, 5.5)],
        )
        .unwrap();
        for seed in 0..30 {
            let p = Params {
                base_radius: 0.5,
                ..Params::default().with_seed(seed)
            };
            let (t, _) = build_low_stretch_tree(&g, None, &p).unwrap();
            t.validate_against(&g, &g.all_vertices()).unwrap();
        }
    }

    #[test]
    fn contraction_still_spans() {
        let g = Graph::from_edges(
            6,
            &[(0, 1, 0.01), (1, 2, 3.0), (2, 3, 0.02), (3, 4, 2.0), (4, 5, 0.01), (5, 0, 5.0)],
        )
        .unwrap();
        for seed in 0..20 {
            let p = Params {
                base_radius: 0.5,
                contraction: 1.0,
                ..Params::default().with_seed(seed)
            };
            let (t, trace) = build_low_stretch_tree(&g, None, &p).unwrap();
            t.validate_against(&g, &g.all_vertices()).unwrap();
            assert!(trace.partitions.iter().any(|r| r.supernodes.is_some()));
        }
    }
}
