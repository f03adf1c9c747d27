//! One level of star partition: the central ball, the first (highway) cone,
//! the remaining growth-rate cones, and the output queues.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cone::ConeContext;
use crate::cone_cut::{cut_cone, first_crossing, uniform_in, GrowthRate, RadiusSample};
use crate::error::{precondition, Error, Result};
use crate::graph::{ball_from, ensure_spans, path_to, sssp, Graph, VertexSet};
use crate::schedule::{epsilon_for, Params};

/// One fat-queue trigger: cone `cone` reached `count` of the first `index`
/// queue elements with `count^2 >= index`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FatTrigger {
    /// 1-based position in the input queue.
    pub index: usize,
    pub cone: usize,
    pub count: usize,
    /// False when the portal tail was already in the fat queue.
    pub inserted: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QueueParts {
    pub head: usize,
    pub ball: Vec<usize>,
    pub fat: Vec<usize>,
    pub reg: Vec<usize>,
    pub triggers: Vec<FatTrigger>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Portal {
    /// Tail in the central ball.
    pub y: usize,
    /// Head, the center of the cone.
    pub x: usize,
    /// The tail chosen by the cut, before any edge subdivision.
    pub original_y: usize,
    /// Set when an edge endpoint was already an added point and the
    /// subdivision was skipped.
    pub reused: bool,
}

#[derive(Clone, Debug)]
pub struct StarDecomposition {
    /// The partitioned cluster as given.
    pub cluster: VertexSet,
    pub queue: Vec<usize>,
    pub x0: usize,
    pub delta: f64,
    pub eps: f64,
    pub c: f64,
    pub r0: f64,
    /// `X_0..X_m`.
    pub clusters: Vec<VertexSet>,
    /// `x_0..x_m`.
    pub centers: Vec<usize>,
    /// Portals of cones `1..m`, index `j - 1`.
    pub portals: Vec<Portal>,
    /// Anchor of each cone: the queue-derived target for cone 1, the growth
    /// minimiser afterwards.
    pub anchors: Vec<usize>,
    pub samples: Vec<RadiusSample>,
    /// `None` for the first cone.
    pub growth: Vec<Option<GrowthRate>>,
    /// `Q_0..Q_m`.
    pub queues: Vec<Vec<usize>>,
    pub queue_parts: QueueParts,
    /// Points added to `X_0` by edge subdivision.
    pub added: Vec<usize>,
}

impl StarDecomposition {
    pub fn cone_count(&self) -> usize {
        self.clusters.len() - 1
    }

    /// `Y_j = X \ (X_0 ∪ .. ∪ X_j)` for `j >= 0`, without added points.
    pub fn unassigned_after(&self, j: usize) -> VertexSet {
        let mut out = self.cluster.difference(&self.clusters[0]);
        for k in 1..=j.min(self.cone_count()) {
            out = out.difference(&self.clusters[k]);
        }
        out
    }

    /// The cluster together with any added points.
    pub fn full_cluster(&self) -> VertexSet {
        VertexSet::from_vertices(self.cluster.universe(), self.cluster.iter().chain(self.added.iter().copied()))
    }
}

fn check_queue(x_set: &VertexSet, x0: usize, queue: &[usize]) -> Result<()> {
    if !x_set.contains(x0) {
        return precondition(format!("center {x0} is not in the cluster"));
    }
    let mut seen = VertexSet::empty(x_set.universe());
    for &z in queue {
        if z == x0 || !x_set.contains(z) || seen.contains(z) {
            return precondition(format!("queue is not a permutation of the cluster minus its center (at {z})"));
        }
        seen.insert(z);
    }
    if seen.len() + 1 != x_set.len() {
        return precondition("queue misses some cluster vertices");
    }
    Ok(())
}

/// `X_0 = B_X(x0, r0)` with `r0` uniform in `[Delta/(16c), Delta/(8c)]`.
pub fn cut_central_ball<R: Rng + ?Sized>(
    g: &Graph,
    x_set: &VertexSet,
    x0: usize,
    c: f64,
    rng: &mut R,
) -> Result<(VertexSet, f64)> {
    let dm = sssp(g, x_set, x0)?;
    ensure_spans(&dm, x_set)?;
    let delta = dm.max_distance();
    if delta <= 0.0 {
        return precondition("central ball needs a cluster of positive radius");
    }
    let r0 = uniform_in(delta / (16.0 * c), delta / (8.0 * c), rng);
    Ok((ball_from(&dm, r0, g.vertex_count()), r0))
}

/// The first cone: anchored on the queue so that the head of the queue, when
/// outside the central ball, is reached along a shortest path.
#[derive(Clone, Debug)]
pub struct FirstCone {
    pub members: VertexSet,
    pub anchor: usize,
    pub y: usize,
    pub x: usize,
    pub sample: RadiusSample,
}

#[allow(clippy::too_many_arguments)]
pub fn cut_first_cone<R: Rng + ?Sized>(
    g: &Graph,
    x_set: &VertexSet,
    x0: usize,
    x0_set: &VertexSet,
    y0: &VertexSet,
    queue: &[usize],
    delta: f64,
    eps: f64,
    rng: &mut R,
) -> Result<FirstCone> {
    let anchor = queue
        .iter()
        .copied()
        .find(|&z| y0.contains(z))
        .ok_or_else(|| Error::Precondition("first cone needs a queue element outside the central ball".into()))?;
    let dm = sssp(g, x_set, x0)?;
    let path = path_to(g, x_set, &dm, anchor)?;
    let (y, x) = first_crossing(&path, x0_set, y0)?;
    let r = uniform_in(eps / 4.0, eps / 2.0, rng);
    let ctx = ConeContext::new(g, x_set, y0, x0, x)?;
    Ok(FirstCone {
        members: ctx.ball(r * delta)?,
        anchor,
        y,
        x,
        sample: RadiusSample {
            r,
            interval: 1,
            intervals: 1,
            coins: Vec::new(),
        },
    })
}

pub fn star_partition<R: Rng + ?Sized>(
    g: &Graph,
    x_set: &VertexSet,
    x0: usize,
    queue: &[usize],
    params: &Params,
    rng: &mut R,
) -> Result<StarDecomposition> {
    check_queue(x_set, x0, queue)?;
    let (x0_set, r0) = cut_central_ball(g, x_set, x0, params.c, rng)?;
    finish_partition(g, x_set, x0, queue, x0_set, r0, params, rng)
}

/// Star partition with a prescribed central-ball radius.
pub fn star_partition_with_r0<R: Rng + ?Sized>(
    g: &Graph,
    x_set: &VertexSet,
    x0: usize,
    queue: &[usize],
    r0: f64,
    params: &Params,
    rng: &mut R,
) -> Result<StarDecomposition> {
    check_queue(x_set, x0, queue)?;
    let dm = sssp(g, x_set, x0)?;
    ensure_spans(&dm, x_set)?;
    let x0_set = ball_from(&dm, r0, g.vertex_count());
    if x0_set == *x_set {
        return precondition(format!("central ball of radius {r0} swallows the whole cluster"));
    }
    finish_partition(g, x_set, x0, queue, x0_set, r0, params, rng)
}

#[allow(clippy::too_many_arguments)]
fn finish_partition<R: Rng + ?Sized>(
    g: &Graph,
    x_set: &VertexSet,
    x0: usize,
    queue: &[usize],
    x0_set: VertexSet,
    r0: f64,
    params: &Params,
    rng: &mut R,
) -> Result<StarDecomposition> {
    let delta = crate::graph::radius(g, x_set, x0)?;
    let eps = epsilon_for(x_set.len(), params);
    let mut y = x_set.difference(&x0_set);
    let first = cut_first_cone(g, x_set, x0, &x0_set, &y, queue, delta, eps, rng)?;
    y = y.difference(&first.members);

    let mut dec = StarDecomposition {
        cluster: x_set.clone(),
        queue: queue.to_vec(),
        x0,
        delta,
        eps,
        c: params.c,
        r0,
        clusters: vec![x0_set.clone(), first.members],
        centers: vec![x0, first.x],
        portals: vec![Portal {
            y: first.y,
            x: first.x,
            original_y: first.y,
            reused: false,
        }],
        anchors: vec![first.anchor],
        samples: vec![first.sample],
        growth: vec![None],
        queues: Vec::new(),
        queue_parts: QueueParts::default(),
        added: Vec::new(),
    };

    while !y.is_empty() {
        let cut = cut_cone(g, x_set.len(), x0, &x0_set, &y, delta, eps, rng)?;
        if cut.members.is_empty() || !cut.members.is_subset(&y) {
            return Err(Error::Internal("cone is empty or leaves the unassigned set".into()));
        }
        y = y.difference(&cut.members);
        dec.clusters.push(cut.members);
        dec.centers.push(cut.x);
        dec.portals.push(Portal {
            y: cut.y,
            x: cut.x,
            original_y: cut.y,
            reused: false,
        });
        dec.anchors.push(cut.growth.anchor);
        dec.samples.push(cut.sample);
        dec.growth.push(Some(cut.growth));
    }
    build_queues(&mut dec);
    Ok(dec)
}

/// Fills `Q_0..Q_m` from the clusters, portals and input queue.
pub fn build_queues(dec: &mut StarDecomposition) {
    let universe = dec.clusters.iter().map(VertexSet::universe).max().unwrap_or(0);
    let m = dec.cone_count();
    let mut owner = vec![usize::MAX; universe];
    for (j, cl) in dec.clusters.iter().enumerate() {
        for v in cl.iter() {
            owner[v] = j;
        }
    }
    let x0 = dec.x0;
    let q = &dec.queue;

    let mut queues: Vec<Vec<usize>> = vec![Vec::new(); m + 1];
    for &z in q {
        let j = owner[z];
        if j >= 1 && z != dec.centers[j] {
            queues[j].push(z);
        }
    }

    let ball: Vec<usize> = q.iter().copied().filter(|&z| owner[z] == 0).collect();

    let mut first_index = vec![usize::MAX; m + 1];
    let mut counts = vec![0usize; m + 1];
    let mut triggered = vec![false; m + 1];
    let mut fat = Vec::new();
    let mut triggers = Vec::new();
    for (i0, &z) in q.iter().enumerate() {
        let i = i0 + 1;
        let j = owner[z];
        if j == 0 {
            continue;
        }
        first_index[j] = first_index[j].min(i);
        counts[j] += 1;
        if !triggered[j] && counts[j] * counts[j] >= i {
            triggered[j] = true;
            let tail = dec.portals[j - 1].y;
            let inserted = !fat.contains(&tail);
            if inserted {
                fat.push(tail);
            }
            triggers.push(FatTrigger {
                index: i,
                cone: j,
                count: counts[j],
                inserted,
            });
        }
    }

    let mut order: Vec<usize> = (1..=m).collect();
    order.sort_by_key(|&j| (first_index[j], j));
    let reg: Vec<usize> = order.iter().map(|&j| dec.portals[j - 1].y).collect();

    let head = match q.first() {
        Some(&z1) if owner[z1] == 0 => z1,
        _ => dec.portals.first().map_or(x0, |p| p.y),
    };

    let mut emitted = VertexSet::empty(universe);
    emitted.insert(x0);
    let mut q0 = Vec::new();
    if !emitted.contains(head) {
        emitted.insert(head);
        q0.push(head);
    }
    let parts = [&ball, &fat, &reg];
    let mut pos = [0usize; 3];
    loop {
        let mut progressed = false;
        for (k, part) in parts.iter().enumerate() {
            while pos[k] < part.len() && emitted.contains(part[pos[k]]) {
                pos[k] += 1;
            }
            if pos[k] < part.len() {
                let v = part[pos[k]];
                pos[k] += 1;
                emitted.insert(v);
                q0.push(v);
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }
    queues[0] = q0;

    dec.queues = queues;
    dec.queue_parts = QueueParts {
        head,
        ball,
        fat,
        reg,
        triggers,
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path(n: usize) -> Graph {
        Graph::from_unit_edges(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_unit_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn central_ball_on_long_path() {
        let g = path(33);
        let all = g.all_vertices();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let (x0, r0) = cut_central_ball(&g, &all, 0, 2.0, &mut rng).unwrap();
            assert!((1.0..=2.0).contains(&r0));
            let want: Vec<usize> = (0..=r0.floor() as usize).collect();
            assert_eq!(x0.members(), &want[..]);
        }
        assert!(cut_central_ball(&g, &VertexSet::singleton(33, 4), 4, 2.0, &mut rng).is_err());
    }

    #[test]
    fn first_cone_on_path() {
        let g = path(5);
        let all = g.all_vertices();
        let x0 = VertexSet::from_vertices(5, [0, 1, 2]);
        let y0 = VertexSet::from_vertices(5, [3, 4]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fc = cut_first_cone(&g, &all, 0, &x0, &y0, &[4, 3, 1, 2], 4.0, 0.5, &mut rng).unwrap();
        assert_eq!((fc.y, fc.x, fc.anchor), (2, 3, 4));
        assert_eq!(fc.members.members(), &[3, 4]);
        assert!((0.125..=0.25).contains(&fc.sample.r));
    }

    #[test]
    fn first_cone_falls_back_to_earliest_unassigned() {
        let g = path(5);
        let all = g.all_vertices();
        let x0 = VertexSet::from_vertices(5, [0, 1, 2]);
        let y0 = VertexSet::from_vertices(5, [3, 4]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fc = cut_first_cone(&g, &all, 0, &x0, &y0, &[1, 2, 3, 4], 4.0, 0.5, &mut rng).unwrap();
        assert_eq!((fc.y, fc.x, fc.anchor), (2, 3, 3));
    }

    #[test]
    fn first_cone_on_c6() {
        let g = cycle(6);
        let all = g.all_vertices();
        let x0 = VertexSet::singleton(6, 0);
        let y0 = VertexSet::from_vertices(6, 1..6);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let fc = cut_first_cone(&g, &all, 0, &x0, &y0, &[3, 1, 2, 4, 5], 3.0, 0.5, &mut rng).unwrap();
        assert_eq!((fc.y, fc.x), (0, 1));
        assert!(fc.members.contains(3));
        let ctx = ConeContext::new(&g, &all, &y0, 0, 1).unwrap();
        assert_eq!(ctx.threshold(3).unwrap(), 0.0);
    }

    #[test]
    fn path_example_with_given_ball() {
        let g = path(5);
        let all = g.all_vertices();
        let params = Params::default();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let dec = star_partition_with_r0(&g, &all, 0, &[4, 3, 1, 2], 2.0, &params, &mut rng).unwrap();
        assert_eq!(dec.clusters.len(), 2);
        assert_eq!(dec.clusters[0].members(), &[0, 1, 2]);
        assert_eq!(dec.clusters[1].members(), &[3, 4]);
        assert_eq!(dec.centers, vec![0, 3]);
        assert_eq!((dec.portals[0].y, dec.portals[0].x), (2, 3));
        assert_eq!(dec.queues[1], vec![4]);
        assert_eq!(dec.queues[0], vec![2, 1]);
        let parts = &dec.queue_parts;
        assert_eq!(parts.head, 2);
        assert_eq!(parts.ball, vec![1, 2]);
        assert_eq!(parts.fat, vec![2]);
        assert_eq!(parts.reg, vec![2]);
    }

    #[test]
    fn two_vertex_cluster() {
        let g = path(2);
        let all = g.all_vertices();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let dec = star_partition(&g, &all, 0, &[1], &Params::default(), &mut rng).unwrap();
        assert_eq!(dec.clusters[0].members(), &[0]);
        assert_eq!(dec.clusters[1].members(), &[1]);
        assert_eq!((dec.portals[0].y, dec.portals[0].x), (0, 1));
        assert!(dec.queues[0].is_empty());
        assert!(dec.queues[1].is_empty());
    }

    #[test]
    fn rejects_bad_queues() {
        let g = path(4);
        let all = g.all_vertices();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = Params::default();
        assert!(star_partition(&g, &all, 0, &[1, 2], &p, &mut rng).is_err());
        assert!(star_partition(&g, &all, 0, &[1, 2, 2], &p, &mut rng).is_err());
        assert!(star_partition(&g, &all, 0, &[0, 1, 2, 3], &p, &mut rng).is_err());
    }

    fn grid(k: usize) -> Graph {
        let mut e = Vec::new();
        for r in 0..k {
            for c in 0..k {
                let v = r * k + c;
                if c + 1 < k {
                    e.push((v, v + 1));
                }
                if r + 1 < k {
                    e.push((v, v + k));
                }
            }
        }
        Graph::from_unit_edges(k * k, &e).unwrap()
    }

    #[test]
    fn partition_and_queue_permutations_on_grid() {
        let g = grid(7);
        let all = g.all_vertices();
        for seed in 0..30 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q: Vec<usize> = (1..49).rev().collect();
            let dec = star_partition(&g, &all, 0, &q, &Params::default(), &mut rng).unwrap();
            let mut covered = vec![0; 49];
            for (j, cl) in dec.clusters.iter().enumerate() {
                assert!(cl.contains(dec.centers[j]));
                crate::graph::radius(&g, cl, dec.centers[j]).unwrap();
                for v in cl.iter() {
                    covered[v] += 1;
                }
                let mut qj = dec.queues[j].clone();
                qj.push(dec.centers[j]);
                qj.sort_unstable();
                assert_eq!(qj, cl.members());
            }
            assert!(covered.iter().all(|&c| c == 1));
            for p in &dec.portals {
                assert!(g.edge_length(p.y, p.x).is_some());
                assert!(dec.clusters[0].contains(p.y));
            }
        }
    }

    #[test]
    fn queue_head_position_bound() {
        let g = grid(6);
        let all = g.all_vertices();
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q: Vec<usize> = (1..36).collect();
            let dec = star_partition(&g, &all, 0, &q, &Params::default(), &mut rng).unwrap();
            let parts = &dec.queue_parts;
            for (i, v) in parts.ball.iter().enumerate() {
                let pos = dec.queues[0].iter().position(|w| w == v).unwrap();
                assert!(pos <= 3 * (i + 1) + 1);
            }
        }
    }
}
