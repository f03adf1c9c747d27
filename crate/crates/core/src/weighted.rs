//! Weighted-graph support: subdividing portal edges so the central ball's
//! radius is met exactly, and contracting short edges.

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::graph::{radius, shortest_path_tree, sssp, Graph, VertexSet, LENGTH_TOLERANCE};
use crate::star::{build_queues, StarDecomposition};
use crate::tree::SpanningTree;

/// A point added on a base edge `(tail, head)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImaginaryPoint {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
    pub host_len: f64,
    /// Length of the `tail`–point half.
    pub a: f64,
    /// Length of the point–`head` half.
    pub b: f64,
}

/// A base graph plus the working graph the construction mutates.
#[derive(Clone, Debug)]
pub struct AugmentedGraph {
    base: Graph,
    work: Graph,
    points: Vec<ImaginaryPoint>,
}

impl AugmentedGraph {
    pub fn new(base: Graph) -> Self {
        AugmentedGraph {
            work: base.clone(),
            base,
            points: Vec::new(),
        }
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn work(&self) -> &Graph {
        &self.work
    }

    pub fn imaginary(&self) -> &[ImaginaryPoint] {
        &self.points
    }

    pub fn is_imaginary(&self, v: usize) -> bool {
        v >= self.base.vertex_count()
    }

    /// Subdivides edge `(tail, head)` at distance `target` from the center,
    /// where `tail_distance` is the center's distance to `tail`.
    ///
    /// Returns the new point, or `None` when the split would be degenerate
    /// (a half of length ~0) or the edge already touches an added point.
    pub fn split_portal(&mut self, tail_distance: f64, tail: usize, head: usize, target: f64) -> Result<Option<usize>> {
        let len = self
            .work
            .edge_length(tail, head)
            .ok_or_else(|| Error::Precondition(format!("({tail}, {head}) is not an edge")))?;
        if target < tail_distance - LENGTH_TOLERANCE || target > tail_distance + len + LENGTH_TOLERANCE {
            return precondition(format!(
                "split target {target} outside [{tail_distance}, {}]",
                tail_distance + len
            ));
        }
        if self.is_imaginary(tail) || self.is_imaginary(head) {
            return Ok(None);
        }
        let a = target - tail_distance;
        let b = len - a;
        if a <= LENGTH_TOLERANCE || b <= LENGTH_TOLERANCE {
            return Ok(None);
        }
        self.work.remove_edge(tail, head);
        let id = self.work.add_vertex();
        self.work.add_edge(tail, id, a)?;
        self.work.add_edge(id, head, b)?;
        self.points.push(ImaginaryPoint {
            id,
            tail,
            head,
            host_len: len,
            a,
            b,
        });
        Ok(Some(id))
    }

    /// Maps a tree of the working graph back onto the base graph.
    pub fn expand_tree(&self, t: &SpanningTree) -> Result<SpanningTree> {
        let n = self.base.vertex_count();
        if t.root() >= n {
            return Err(Error::Internal("tree is rooted at an added point".into()));
        }
        let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(t.edge_count());
        let mut halves: Vec<Vec<usize>> = vec![Vec::new(); self.points.len()];
        for (u, v, len) in t.edges() {
            match (u >= n, v >= n) {
                (false, false) => edges.push((u, v, len)),
                (true, true) => return Err(Error::Internal(format!("tree edge ({u}, {v}) joins two added points"))),
                (true, false) => halves[u - n].push(v),
                (false, true) => halves[v - n].push(u),
            }
        }
        for (p, h) in self.points.iter().zip(&halves) {
            match h.len() {
                2 => edges.push((p.tail.min(p.head), p.tail.max(p.head), self.base.edge_length(p.tail, p.head).unwrap_or(p.host_len))),
                // a point hanging off one half is a leaf; dropping it keeps a tree
                1 => {}
                0 if !t.contains(p.id) => {}
                _ => return Err(Error::Internal(format!("added point {} has inconsistent tree degree", p.id))),
            }
        }
        SpanningTree::from_edges(n, t.root(), &edges)
    }
}

/// Subdivides every portal of `dec` at the central ball's radius and rebuilds
/// the queues. Portals touching an added point are kept as they are.
pub fn augment_portals(ag: &mut AugmentedGraph, dec: &mut StarDecomposition) -> Result<()> {
    if dec.portals.is_empty() {
        return Ok(());
    }
    let x0_set = dec.clusters[0].clone();
    let dm = sssp(ag.work(), &x0_set, dec.x0)?;
    let target = dm.max_distance();
    let mut added = Vec::new();
    for p in dec.portals.iter_mut() {
        if ag.is_imaginary(p.y) || ag.is_imaginary(p.x) {
            p.reused = true;
            continue;
        }
        let d = dm.dist(p.y);
        let len = ag.work().edge_length(p.y, p.x).ok_or_else(|| Error::Internal("portal is not an edge".into()))?;
        if target > d + len + LENGTH_TOLERANCE {
            // only reachable with contraction, where the central ball is not a metric ball
            continue;
        }
        if let Some(id) = ag.split_portal(d, p.y, p.x, target)? {
            p.y = id;
            added.push(id);
        }
    }
    if added.is_empty() {
        return Ok(());
    }
    let universe = ag.work().vertex_count();
    dec.clusters[0] = VertexSet::from_vertices(universe, x0_set.iter().chain(added.iter().copied()));
    dec.added.extend(added);
    build_queues(dec);
    Ok(())
}

/// Supernodes of short edges and the quotient graph over them.
#[derive(Clone, Debug)]
pub struct Contraction {
    /// Supernode of every vertex of the cluster; `usize::MAX` outside it.
    pub supernode: Vec<usize>,
    /// Members of each supernode, ascending.
    pub members: Vec<Vec<usize>>,
    pub quotient: Graph,
    pub threshold: f64,
}

/// Contracts every edge inside `x_set` shorter than `c * delta / n`, with `n`
/// the vertex count of `g`.
pub fn contract_short_edges(g: &Graph, x_set: &VertexSet, delta: f64, c: f64) -> Contraction {
    let threshold = c * delta / g.vertex_count() as f64;
    let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for u in x_set.iter() {
        for &(v, len) in g.neighbors(u) {
            if u < v && x_set.contains(v) && len < threshold {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut supernode = vec![usize::MAX; g.vertex_count()];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut index_of_rep = vec![usize::MAX; g.vertex_count()];
    for v in x_set.iter() {
        let r = find(&mut parent, v);
        if index_of_rep[r] == usize::MAX {
            index_of_rep[r] = members.len();
            members.push(Vec::new());
        }
        supernode[v] = index_of_rep[r];
        members[index_of_rep[r]].push(v);
    }
    let k = members.len();
    let mut best: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
    for u in x_set.iter() {
        for &(v, len) in g.neighbors(u) {
            if !x_set.contains(v) {
                continue;
            }
            let (su, sv) = (supernode[u], supernode[v]);
            if su == sv {
                continue;
            }
            let key = (su.min(sv), su.max(sv));
            let e = best.entry(key).or_insert(len);
            if len < *e {
                *e = len;
            }
        }
    }
    let mut quotient = Graph::empty(k);
    for ((a, b), len) in best {
        quotient.add_edge(a, b, len).expect("quotient edges are distinct and positive");
    }
    Contraction {
        supernode,
        members,
        quotient,
        threshold,
    }
}

impl Contraction {
    pub fn is_identity(&self) -> bool {
        self.members.iter().all(|m| m.len() == 1)
    }

    /// The shortest original edge between two supernodes, lowest `(u, v)` on ties.
    pub fn realize_edge(&self, g: &Graph, from: usize, to: usize) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for &u in &self.members[from] {
            for &(v, len) in g.neighbors(u) {
                if v < self.supernode.len() && self.supernode[v] == to {
                    let better = match best {
                        None => true,
                        Some((_, _, bl)) => len < bl,
                    };
                    if better {
                        best = Some((u, v, len));
                    }
                }
            }
        }
        best
    }

    /// Expands a tree of the quotient into a tree of the original cluster:
    /// every quotient edge becomes its shortest realizing edge and every
    /// supernode contributes a shortest-path tree over its contracted edges.
    pub fn expand_tree(&self, g: &Graph, t: &SpanningTree) -> Result<SpanningTree> {
        let mut edges = Vec::new();
        for (a, b, _) in t.edges() {
            let (u, v, len) = self
                .realize_edge(g, a, b)
                .ok_or_else(|| Error::Internal(format!("quotient edge ({a}, {b}) has no realization")))?;
            edges.push((u.min(v), u.max(v), len));
        }
        let mut short = Graph::empty(g.vertex_count());
        for m in &self.members {
            for &u in m {
                for &(v, len) in g.neighbors(u) {
                    if u < v && self.supernode[v] == self.supernode[u] && len < self.threshold {
                        short.add_edge(u, v, len)?;
                    }
                }
            }
        }
        for m in &self.members {
            let set = VertexSet::from_vertices(g.vertex_count(), m.iter().copied());
            edges.extend(shortest_path_tree(&short, &set, m[0])?.edges());
        }
        let root = self.members[t.root()][0];
        SpanningTree::from_edges(g.vertex_count(), root, &edges)
    }

    /// Largest supernode radius measured over the contracted edges.
    pub fn max_internal_radius(&self, g: &Graph) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for m in &self.members {
            let set = VertexSet::from_vertices(g.vertex_count(), m.iter().copied());
            worst = worst.max(radius(g, &set, m[0])?);
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_arithmetic() {
        let g = Graph::from_edges(3, &[(0, 1, 3.0), (1, 2, 5.0)]).unwrap();
        let mut ag = AugmentedGraph::new(g);
        let p = ag.split_portal(3.0, 1, 2, 6.0).unwrap().unwrap();
        assert_eq!(p, 3);
        let rec = &ag.imaginary()[0];
        assert_eq!((rec.a, rec.b), (3.0, 2.0));
        assert_eq!(ag.work().edge_length(1, 3), Some(3.0));
        assert_eq!(ag.work().edge_length(3, 2), Some(2.0));
        assert_eq!(ag.work().edge_length(1, 2), None);
        // no splitting of edges touching the added point
        assert_eq!(ag.split_portal(3.0, 1, 3, 4.0).unwrap(), None);
        assert!(ag.split_portal(0.0, 0, 1, 5.0).is_err());
    }

    #[test]
    fn degenerate_unit_split() {
        let g = Graph::from_unit_edges(2, &[(0, 1)]).unwrap();
        let mut ag = AugmentedGraph::new(g);
        assert_eq!(ag.split_portal(0.0, 0, 1, 0.0).unwrap(), None);
        assert_eq!(ag.split_portal(0.0, 0, 1, 1.0).unwrap(), None);
        assert!(ag.imaginary().is_empty());
    }

    #[test]
    fn expand_round_trip() {
        let g = Graph::from_edges(3, &[(0, 1, 3.0), (1, 2, 5.0)]).unwrap();
        let mut ag = AugmentedGraph::new(g.clone());
        let p = ag.split_portal(3.0, 1, 2, 6.0).unwrap().unwrap();
        let both = SpanningTree::from_edges(4, 0, &[(0, 1, 3.0), (1, p, 3.0), (p, 2, 2.0)]).unwrap();
        let t = ag.expand_tree(&both).unwrap();
        assert_eq!(t.edges(), g.edges());
        t.validate_against(&g, &g.all_vertices()).unwrap();

        let ident = AugmentedGraph::new(g.clone());
        let t0 = SpanningTree::from_edges(3, 0, &g.edges()).unwrap();
        assert_eq!(ident.expand_tree(&t0).unwrap(), t0);
    }

    #[test]
    fn expand_drops_hanging_point() {
        // triangle; split edge (1, 2); the tree reaches 2 through 0
        let g = Graph::from_edges(3, &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 4.0)]).unwrap();
        let mut ag = AugmentedGraph::new(g.clone());
        let p = ag.split_portal(1.0, 1, 2, 2.0).unwrap().unwrap();
        let t = SpanningTree::from_edges(4, 0, &[(0, 1, 1.0), (0, 2, 1.0), (1, p, 1.0)]).unwrap();
        let e = ag.expand_tree(&t).unwrap();
        assert_eq!(e.edges(), vec![(0, 1, 1.0), (0, 2, 1.0)]);
    }

    #[test]
    fn contraction_examples() {
        let g = Graph::from_unit_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let all = g.all_vertices();
        let none = contract_short_edges(&g, &all, 2.0, 1.0);
        assert!(none.is_identity());
        assert_eq!(none.quotient.edge_count(), 2);

        let all_in = contract_short_edges(&g, &all, 1e6, 1.0);
        assert_eq!(all_in.members, vec![vec![0, 1, 2]]);
        assert_eq!(all_in.quotient.vertex_count(), 1);
        let t = SpanningTree::from_edges(1, 0, &[]).unwrap();
        let e = all_in.expand_tree(&g, &t).unwrap();
        assert_eq!(e.vertex_count(), 3);
        assert_eq!(e.edges(), g.edges());
    }

    #[test]
    fn contraction_quotient_uses_shortest_links() {
        // 0-1 short; 1-2 and 0-2 long, 0-2 shorter
        let g = Graph::from_edges(3, &[(0, 1, 0.1), (1, 2, 5.0), (0, 2, 4.0)]).unwrap();
        let ct = contract_short_edges(&g, &g.all_vertices(), 6.0, 0.1);
        assert_eq!(ct.members, vec![vec![0, 1], vec![2]]);
        assert_eq!(ct.quotient.edge_length(0, 1), Some(4.0));
        assert_eq!(ct.realize_edge(&g, 0, 1), Some((0, 2, 4.0)));
        let qt = SpanningTree::from_edges(2, 0, &[(0, 1, 4.0)]).unwrap();
        let e = ct.expand_tree(&g, &qt).unwrap();
        assert_eq!(e.edges(), vec![(0, 1, 0.1), (0, 2, 4.0)]);
        assert!(ct.max_internal_radius(&g).unwrap() <= 0.1 + 1e-12);
    }
}
