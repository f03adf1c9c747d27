//! Rooted spanning trees and tree distances.

use std::collections::VecDeque;

use crate::error::{precondition, Error, Result};
use crate::graph::{same_length, Graph, VertexSet};

const NO_PARENT: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq)]
pub struct SpanningTree {
    root: usize,
    parent: Vec<usize>,
    parent_len: Vec<f64>,
    depth: Vec<usize>,
    root_dist: Vec<f64>,
    vertices: VertexSet,
}

impl SpanningTree {
    /// Builds the tree spanned by `edges`, rooted at `root`.
    ///
    /// The edges must form a single tree containing `root`; a lone root with
    /// no edges is the one-vertex tree.
    pub fn from_edges(universe: usize, root: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut universe = universe.max(root + 1);
        for &(u, v, _) in edges {
            universe = universe.max(u + 1).max(v + 1);
        }
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); universe];
        for &(u, v, len) in edges {
            if u == v {
                return precondition(format!("tree edge ({u}, {v}) is a self-loop"));
            }
            adj[u].push((v, len));
            adj[v].push((u, len));
        }
        let mut parent = vec![NO_PARENT; universe];
        let mut parent_len = vec![0.0; universe];
        let mut depth = vec![0; universe];
        let mut root_dist = vec![f64::INFINITY; universe];
        root_dist[root] = 0.0;
        let mut seen = vec![false; universe];
        seen[root] = true;
        let mut reached = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, len) in &adj[v] {
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                parent[w] = v;
                parent_len[w] = len;
                depth[w] = depth[v] + 1;
                root_dist[w] = root_dist[v] + len;
                reached.push(w);
                queue.push_back(w);
            }
        }
        if reached.len() != edges.len() + 1 {
            if let Some(stray) = edges.iter().flat_map(|&(u, v, _)| [u, v]).find(|&x| !seen[x]) {
                return Err(Error::Disconnected {
                    source_vertex: root,
                    unreachable: stray,
                });
            }
            return precondition("tree edges contain a cycle or a repeated edge");
        }
        Ok(SpanningTree {
            root,
            parent,
            parent_len,
            depth,
            root_dist,
            vertices: VertexSet::from_vertices(universe, reached),
        })
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(v)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn parent(&self, v: usize) -> Option<(usize, f64)> {
        match self.parent.get(v) {
            Some(&p) if p != NO_PARENT => Some((p, self.parent_len[v])),
            _ => None,
        }
    }

    pub fn depth(&self, v: usize) -> Option<usize> {
        self.contains(v).then(|| self.depth[v])
    }

    /// `d_T(root, v)`.
    pub fn root_distance(&self, v: usize) -> Option<f64> {
        self.contains(v).then(|| self.root_dist[v])
    }

    /// Tree edges as `(u, v, len)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out: Vec<_> = self
            .vertices
            .iter()
            .filter_map(|v| self.parent(v).map(|(p, len)| (p.min(v), p.max(v), len)))
            .collect();
        out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out
    }

    /// Lowest common ancestor of two tree vertices.
    pub fn lca(&self, mut u: usize, mut v: usize) -> Result<usize> {
        for x in [u, v] {
            if !self.contains(x) {
                return precondition(format!("vertex {x} is not in the tree"));
            }
        }
        while self.depth[u] > self.depth[v] {
            u = self.parent[u];
        }
        while self.depth[v] > self.depth[u] {
            v = self.parent[v];
        }
        while u != v {
            u = self.parent[u];
            v = self.parent[v];
        }
        Ok(u)
    }

    /// `d_T(u, v)`: the length of the unique tree path.
    pub fn distance(&self, u: usize, v: usize) -> Result<f64> {
        let a = self.lca(u, v)?;
        Ok(self.path_length(u, a) + self.path_length(v, a))
    }

    // summing edges keeps weighted distances free of cancellation error
    fn path_length(&self, mut v: usize, ancestor: usize) -> f64 {
        let mut total = 0.0;
        while v != ancestor {
            total += self.parent_len[v];
            v = self.parent[v];
        }
        total
    }

    /// Unique tree path from `u` to `v`, both ends included.
    pub fn path(&self, u: usize, v: usize) -> Result<Vec<usize>> {
        let a = self.lca(u, v)?;
        let mut left = vec![u];
        let mut x = u;
        while x != a {
            x = self.parent[x];
            left.push(x);
        }
        let mut right = Vec::new();
        let mut y = v;
        while y != a {
            right.push(y);
            y = self.parent[y];
        }
        left.extend(right.into_iter().rev());
        Ok(left)
    }

    /// The same tree rooted at `root`.
    pub fn rerooted(&self, root: usize) -> Result<Self> {
        if !self.contains(root) {
            return precondition(format!("new root {root} is not in the tree"));
        }
        SpanningTree::from_edges(self.parent.len(), root, &self.edges())
    }

    /// Checks that this is a spanning tree of `g[subset]`: it covers exactly
    /// `subset` and every edge is a graph edge of the same length.
    pub fn validate_against(&self, g: &Graph, subset: &VertexSet) -> Result<()> {
        if self.vertices != *subset {
            return Err(Error::Internal(format!(
                "tree covers {} vertices, expected {}",
                self.vertices.len(),
                subset.len()
            )));
        }
        for (u, v, len) in self.edges() {
            match g.edge_length(u, v) {
                Some(gl) if same_length(gl, len, g.is_unit()) => {}
                Some(gl) => {
                    return Err(Error::Internal(format!(
                        "tree edge ({u}, {v}) has length {len}, graph has {gl}"
                    )))
                }
                None => return Err(Error::Internal(format!("tree edge ({u}, {v}) is not a graph edge"))),
            }
        }
        Ok(())
    }

    /// The tree as a standalone graph on the same vertex range.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::empty(self.parent.len());
        for (u, v, len) in self.edges() {
            g.add_edge(u, v, len).expect("tree edges are valid graph edges");
        }
        g
    }
}

pub fn tree_distance(t: &SpanningTree, u: usize, v: usize) -> Result<f64> {
    t.distance(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sssp;
    use proptest::prelude::*;

    #[test]
    fn path_tree_distances() {
        let t = SpanningTree::from_edges(3, 0, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(tree_distance(&t, 0, 2).unwrap(), 2.0);
        assert_eq!(tree_distance(&t, 1, 1).unwrap(), 0.0);
        assert_eq!(t.path(2, 0).unwrap(), vec![2, 1, 0]);
        assert!(tree_distance(&t, 0, 7).is_err());
    }

    #[test]
    fn single_vertex_tree() {
        let t = SpanningTree::from_edges(5, 3, &[]).unwrap();
        assert_eq!(t.vertex_count(), 1);
        assert_eq!(t.edge_count(), 0);
        assert_eq!(t.distance(3, 3).unwrap(), 0.0);
    }

    #[test]
    fn rejects_cycles_and_forests() {
        let cyc = [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)];
        assert!(SpanningTree::from_edges(3, 0, &cyc).is_err());
        let forest = [(0, 1, 1.0), (2, 3, 1.0)];
        assert!(SpanningTree::from_edges(4, 0, &forest).is_err());
        let dup = [(0, 1, 1.0), (1, 0, 1.0)];
        assert!(SpanningTree::from_edges(2, 0, &dup).is_err());
    }

    #[test]
    fn reroot_preserves_edges() {
        let t = SpanningTree::from_edges(4, 0, &[(0, 1, 2.0), (1, 2, 1.0), (1, 3, 0.5)]).unwrap();
        let r = t.rerooted(3).unwrap();
        assert_eq!(r.root(), 3);
        assert_eq!(r.edges(), t.edges());
        assert_eq!(r.root_distance(0), Some(2.5));
    }

    fn random_tree() -> impl Strategy<Value = Vec<(usize, usize, f64)>> {
        (2usize..64).prop_flat_map(|n| {
            proptest::collection::vec((any::<prop::sample::Index>(), 1u32..10), n - 1).prop_map(
                |choices| {
                    choices
                        .into_iter()
                        .enumerate()
                        .map(|(i, (idx, w))| (idx.index(i + 1), i + 1, w as f64 * 0.5))
                        .collect()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn tree_distance_matches_sssp_on_tree_graph(edges in random_tree()) {
            let n = edges.len() + 1;
            let t = SpanningTree::from_edges(n, 0, &edges).unwrap();
            let g = t.to_graph();
            let all = g.all_vertices();
            for u in (0..n).step_by(3) {
                let dm = sssp(&g, &all, u).unwrap();
                for v in 0..n {
                    prop_assert!((t.distance(u, v).unwrap() - dm.dist(v)).abs() <= 1e-9);
                }
            }
        }
    }
}
