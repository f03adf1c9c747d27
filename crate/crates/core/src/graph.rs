//! Undirected graphs with positive edge lengths and the induced-subgraph
//! metric queries the rest of the crate is built on.
//!
//! Every query takes a [`VertexSet`] and works in the subgraph induced by it,
//! so `d_X`, `rad_x(X)` and `B_X(x, r)` are all computed without ever
//! materialising a subgraph.
//!
//! Unit-length graphs are searched with BFS and all distances are small
//! integers held exactly in `f64`; weighted graphs use Dijkstra and every
//! distance comparison allows an absolute slack of [`LENGTH_TOLERANCE`].

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{precondition, Error, Result};
use crate::tree::SpanningTree;

/// Absolute slack used by every distance comparison on weighted graphs.
pub const LENGTH_TOLERANCE: f64 = 1e-9;

/// Compares a distance against a radius threshold.
///
/// With unit lengths the distance is an exact integer, so `d <= floor(r)` is
/// decided exactly; otherwise the comparison is relaxed by [`LENGTH_TOLERANCE`].
#[inline]
pub fn within(d: f64, r: f64, unit: bool) -> bool {
    if unit {
        d <= r.floor()
    } else {
        d <= r + LENGTH_TOLERANCE
    }
}

#[inline]
pub(crate) fn same_length(a: f64, b: f64, unit: bool) -> bool {
    if unit {
        a == b
    } else {
        (a - b).abs() <= LENGTH_TOLERANCE
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<Vec<(usize, f64)>>,
    edge_count: usize,
    non_unit_edges: usize,
}

impl Graph {
    /// An edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
            non_unit_edges: 0,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v, len) in edges {
            g.add_edge(u, v, len)?;
        }
        Ok(g)
    }

    pub fn from_unit_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v, 1.0)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize, len: f64) -> Result<()> {
        let n = self.adj.len();
        if u >= n || v >= n {
            return precondition(format!("edge ({u}, {v}) outside vertex range 0..{n}"));
        }
        if u == v {
            return precondition(format!("self-loop at vertex {u}"));
        }
        if !(len.is_finite() && len > 0.0) {
            return precondition(format!("edge ({u}, {v}) has non-positive length {len}"));
        }
        let pos = match self.adj[u].binary_search_by_key(&v, |&(w, _)| w) {
            Ok(_) => return precondition(format!("duplicate edge ({u}, {v})")),
            Err(pos) => pos,
        };
        self.adj[u].insert(pos, (v, len));
        let pos = self.adj[v].binary_search_by_key(&u, |&(w, _)| w).unwrap_err();
        self.adj[v].insert(pos, (u, len));
        self.edge_count += 1;
        if len != 1.0 {
            self.non_unit_edges += 1;
        }
        Ok(())
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) -> Option<f64> {
        let i = self.adj.get(u)?.binary_search_by_key(&v, |&(w, _)| w).ok()?;
        let (_, len) = self.adj[u].remove(i);
        let j = self.adj[v].binary_search_by_key(&u, |&(w, _)| w).ok()?;
        self.adj[v].remove(j);
        self.edge_count -= 1;
        if len != 1.0 {
            self.non_unit_edges -= 1;
        }
        Some(len)
    }

    pub(crate) fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// True when every edge has length exactly 1.
    pub fn is_unit(&self) -> bool {
        self.non_unit_edges == 0
    }

    /// Neighbours of `v` with the connecting edge length, sorted by neighbour id.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    pub fn edge_length(&self, u: usize, v: usize) -> Option<f64> {
        let row = self.adj.get(u)?;
        row.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| row[i].1)
    }

    /// All edges as `(u, v, len)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, row) in self.adj.iter().enumerate() {
            for &(v, len) in row {
                if u < v {
                    out.push((u, v, len));
                }
            }
        }
        out
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    /// Connected components in ascending order of their smallest vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut members = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &(w, _) in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        members.push(w);
                    }
                }
            }
            out.push(VertexSet::from_vertices(n, members));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() <= 1 || self.components().len() == 1
    }
}

/// A subset of a graph's vertex range, with O(1) membership tests and a
/// sorted member list.
#[derive(Clone, Debug, Default)]
pub struct VertexSet {
    mask: Vec<bool>,
    members: Vec<usize>,
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for VertexSet {}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            mask: vec![false; universe],
            members: Vec::new(),
        }
    }

    pub fn full(universe: usize) -> Self {
        VertexSet {
            mask: vec![true; universe],
            members: (0..universe).collect(),
        }
    }

    pub fn singleton(universe: usize, v: usize) -> Self {
        Self::from_vertices(universe, [v])
    }

    /// Builds a set from arbitrary vertices; duplicates are ignored and the
    /// universe grows if a vertex lies beyond it.
    pub fn from_vertices(universe: usize, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = VertexSet::empty(universe);
        for v in vertices {
            s.mark(v);
        }
        s.members.sort_unstable();
        s
    }

    fn mark(&mut self, v: usize) {
        if v >= self.mask.len() {
            self.mask.resize(v + 1, false);
        }
        if !self.mask[v] {
            self.mask[v] = true;
            self.members.push(v);
        }
    }

    pub fn insert(&mut self, v: usize) {
        if !self.contains(v) {
            self.mark(v);
            self.members.sort_unstable();
        }
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.mask.len() && self.mask[v]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::from_vertices(
            self.universe().max(other.universe()),
            self.iter().chain(other.iter()),
        )
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet::from_vertices(self.universe(), self.iter().filter(|&v| !other.contains(v)))
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.iter().filter(|&v| other.contains(v)).count()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.intersection_len(other) == 0
    }
}

/// Single-source distances inside an induced subgraph.
#[derive(Clone, Debug)]
pub struct DistanceMap {
    source: usize,
    dist: Vec<f64>,
    rank: Vec<u32>,
    order: Vec<usize>,
    unit: bool,
}

impl DistanceMap {
    pub fn source(&self) -> usize {
        self.source
    }

    /// Distance to `v`, or `None` when `v` is unreachable or outside the subset.
    pub fn get(&self, v: usize) -> Option<f64> {
        match self.dist.get(v) {
            Some(&d) if d.is_finite() => Some(d),
            _ => None,
        }
    }

    /// Distance to `v`, `f64::INFINITY` when unreachable.
    #[inline]
    pub fn dist(&self, v: usize) -> f64 {
        self.dist.get(v).copied().unwrap_or(f64::INFINITY)
    }

    pub fn is_reachable(&self, v: usize) -> bool {
        self.get(v).is_some()
    }

    /// Reached vertices in the order the search settled them.
    pub fn settled(&self) -> &[usize] {
        &self.order
    }

    pub fn max_distance(&self) -> f64 {
        self.order.iter().map(|&v| self.dist[v]).fold(0.0, f64::max)
    }

    pub fn is_unit(&self) -> bool {
        self.unit
    }

    /// The canonical parent of `v`: the lowest-id neighbour inside `subset`
    /// that was settled earlier and lies on a shortest path to `v`.
    pub fn canonical_parent(&self, g: &Graph, subset: &VertexSet, v: usize) -> Option<usize> {
        if v == self.source || !self.is_reachable(v) {
            return None;
        }
        let dv = self.dist[v];
        let rv = self.rank[v];
        g.neighbors(v)
            .iter()
            .find(|&&(u, len)| {
                subset.contains(u)
                    && self.rank.get(u).is_some_and(|&ru| ru < rv)
                    && same_length(self.dist[u] + len, dv, self.unit)
            })
            .map(|&(u, _)| u)
    }
}

#[derive(Copy, Clone, PartialEq)]
struct HeapEntry {
    dist: f64,
    vertex: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, vertex)
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact shortest-path distances from `source` in the subgraph induced by `subset`.
pub fn sssp(g: &Graph, subset: &VertexSet, source: usize) -> Result<DistanceMap> {
    if !subset.contains(source) {
        return precondition(format!("source {source} is not in the queried subset"));
    }
    let n = g.vertex_count();
    let unit = g.is_unit();
    let mut dist = vec![f64::INFINITY; n];
    let mut rank = vec![u32::MAX; n];
    let mut order = Vec::with_capacity(subset.len());
    dist[source] = 0.0;
    if unit {
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            rank[v] = order.len() as u32;
            order.push(v);
            let next = dist[v] + 1.0;
            for &(w, _) in g.neighbors(v) {
                if subset.contains(w) && dist[w].is_infinite() {
                    dist[w] = next;
                    queue.push_back(w);
                }
            }
        }
    } else {
        let mut heap = BinaryHeap::from([HeapEntry { dist: 0.0, vertex: source }]);
        while let Some(HeapEntry { dist: d, vertex: v }) = heap.pop() {
            if rank[v] != u32::MAX || d > dist[v] {
                continue;
            }
            rank[v] = order.len() as u32;
            order.push(v);
            for &(w, len) in g.neighbors(v) {
                if !subset.contains(w) || rank[w] != u32::MAX {
                    continue;
                }
                let nd = d + len;
                if nd < dist[w] {
                    dist[w] = nd;
                    heap.push(HeapEntry { dist: nd, vertex: w });
                }
            }
        }
    }
    Ok(DistanceMap {
        source,
        dist,
        rank,
        order,
        unit,
    })
}

/// Fails with [`Error::Disconnected`] unless every vertex of `subset` was reached.
pub(crate) fn ensure_spans(dm: &DistanceMap, subset: &VertexSet) -> Result<()> {
    if dm.settled().len() == subset.len() {
        return Ok(());
    }
    let missing = subset.iter().find(|&v| !dm.is_reachable(v)).unwrap_or(dm.source);
    Err(Error::Disconnected {
        source_vertex: dm.source,
        unreachable: missing,
    })
}

/// `rad_center(subset)`: the largest induced distance from `center`.
pub fn radius(g: &Graph, subset: &VertexSet, center: usize) -> Result<f64> {
    let dm = sssp(g, subset, center)?;
    ensure_spans(&dm, subset)?;
    Ok(dm.max_distance())
}

/// `B_subset(center, r)`: subset vertices within induced distance `r`.
pub fn ball(g: &Graph, subset: &VertexSet, center: usize, r: f64) -> Result<VertexSet> {
    if r.is_nan() || r < 0.0 {
        return precondition(format!("ball radius must be non-negative, got {r}"));
    }
    let dm = sssp(g, subset, center)?;
    Ok(ball_from(&dm, r, g.vertex_count()))
}

pub(crate) fn ball_from(dm: &DistanceMap, r: f64, universe: usize) -> VertexSet {
    VertexSet::from_vertices(
        universe,
        dm.settled()
            .iter()
            .copied()
            .filter(|&v| within(dm.dist(v), r, dm.unit)),
    )
}

/// The canonical shortest path from `u` to `v` inside `subset`.
pub fn shortest_path(g: &Graph, subset: &VertexSet, u: usize, v: usize) -> Result<Vec<usize>> {
    if !subset.contains(v) {
        return precondition(format!("target {v} is not in the queried subset"));
    }
    let dm = sssp(g, subset, u)?;
    path_to(g, subset, &dm, v)
}

/// Walks canonical parents back from `target` to the map's source.
pub(crate) fn path_to(
    g: &Graph,
    subset: &VertexSet,
    dm: &DistanceMap,
    target: usize,
) -> Result<Vec<usize>> {
    if !dm.is_reachable(target) {
        return Err(Error::Disconnected {
            source_vertex: dm.source,
            unreachable: target,
        });
    }
    let mut path = vec![target];
    let mut cur = target;
    while cur != dm.source {
        cur = dm.canonical_parent(g, subset, cur).ok_or_else(|| {
            Error::Internal(format!("no canonical parent for reachable vertex {cur}"))
        })?;
        path.push(cur);
    }
    path.reverse();
    Ok(path)
}

/// Shortest-path tree of `subset` rooted at `root`, using canonical parents.
pub fn shortest_path_tree(g: &Graph, subset: &VertexSet, root: usize) -> Result<SpanningTree> {
    let dm = sssp(g, subset, root)?;
    ensure_spans(&dm, subset)?;
    Ok(SpanningTree::from_edges(g.vertex_count(), root, &spt_edges(g, subset, &dm)?)?)
}

pub(crate) fn spt_edges(
    g: &Graph,
    subset: &VertexSet,
    dm: &DistanceMap,
) -> Result<Vec<(usize, usize, f64)>> {
    let mut edges = Vec::with_capacity(subset.len().saturating_sub(1));
    for &v in dm.settled() {
        if v == dm.source {
            continue;
        }
        let p = dm.canonical_parent(g, subset, v).ok_or_else(|| {
            Error::Internal(format!("no canonical parent for reachable vertex {v}"))
        })?;
        let len = g.edge_length(p, v).expect("parent is a neighbour");
        edges.push((p, v, len));
    }
    Ok(edges)
}

/// Reusable buffers for many small bounded-radius searches in one subset.
pub(crate) struct BallCounter {
    dist: Vec<f64>,
    touched: Vec<usize>,
    queue: VecDeque<usize>,
    heap: BinaryHeap<HeapEntry>,
}

impl BallCounter {
    pub(crate) fn new(universe: usize) -> Self {
        BallCounter {
            dist: vec![f64::INFINITY; universe],
            touched: Vec::new(),
            queue: VecDeque::new(),
            heap: BinaryHeap::new(),
        }
    }

    /// `|B_subset(center, r)|`, exploring only the ball itself.
    pub(crate) fn count(&mut self, g: &Graph, subset: &VertexSet, center: usize, r: f64) -> usize {
        if self.dist.len() < g.vertex_count() {
            self.dist.resize(g.vertex_count(), f64::INFINITY);
        }
        let unit = g.is_unit();
        let mut count = 0;
        self.dist[center] = 0.0;
        self.touched.push(center);
        if unit {
            let limit = r.floor();
            self.queue.push_back(center);
            while let Some(v) = self.queue.pop_front() {
                count += 1;
                let next = self.dist[v] + 1.0;
                if next > limit {
                    continue;
                }
                for &(w, _) in g.neighbors(v) {
                    if subset.contains(w) && self.dist[w].is_infinite() {
                        self.dist[w] = next;
                        self.touched.push(w);
                        self.queue.push_back(w);
                    }
                }
            }
        } else {
            let limit = r + LENGTH_TOLERANCE;
            self.heap.push(HeapEntry { dist: 0.0, vertex: center });
            while let Some(HeapEntry { dist: d, vertex: v }) = self.heap.pop() {
                if d > self.dist[v] {
                    continue;
                }
                count += 1;
                for &(w, len) in g.neighbors(v) {
                    let nd = d + len;
                    if subset.contains(w) && nd <= limit && nd < self.dist[w] {
                        if self.dist[w].is_infinite() {
                            self.touched.push(w);
                        }
                        self.dist[w] = nd;
                        self.heap.push(HeapEntry { dist: nd, vertex: w });
                    }
                }
            }
        }
        for &v in &self.touched {
            self.dist[v] = f64::INFINITY;
        }
        self.touched.clear();
        count
    }
}
