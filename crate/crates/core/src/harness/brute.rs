//! Exhaustive spanning-tree search for tiny graphs.

use crate::error::{precondition, Error, Result};
use crate::graph::Graph;
use crate::harness::stretch::edge_graph_distances;
use crate::tree::SpanningTree;

pub const BRUTE_FORCE_MAX_VERTICES: usize = 8;

struct Search<'a> {
    n: usize,
    edges: &'a [(usize, usize, f64)],
    dg: &'a [f64],
    chosen: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
    count: u64,
}

fn find(p: &[usize], mut v: usize) -> usize {
    while p[v] != v {
        v = p[v];
    }
    v
}

impl Search<'_> {
    fn run(&mut self, next: usize, parent: &mut Vec<usize>) {
        if self.chosen.len() == self.n - 1 {
            self.count += 1;
            let avg = self.avg_stretch();
            if self.best.as_ref().map_or(true, |(b, _)| avg < *b) {
                self.best = Some((avg, self.chosen.clone()));
            }
            return;
        }
        // not enough edges left to finish
        if self.edges.len() - next < self.n - 1 - self.chosen.len() {
            return;
        }
        let (u, v, _) = self.edges[next];
        let (ru, rv) = (find(parent, u), find(parent, v));
        if ru != rv {
            parent[ru] = rv;
            self.chosen.push(next);
            self.run(next + 1, parent);
            self.chosen.pop();
            parent[ru] = ru;
        }
        self.run(next + 1, parent);
    }

    fn avg_stretch(&self) -> f64 {
        let n = self.n;
        let mut adj = vec![Vec::with_capacity(n); n];
        for &i in &self.chosen {
            let (u, v, len) = self.edges[i];
            adj[u].push((v, len));
            adj[v].push((u, len));
        }
        let mut dist = vec![vec![0.0; n]; n];
        let mut stack = Vec::with_capacity(n);
        for s in 0..n {
            let mut seen = [false; BRUTE_FORCE_MAX_VERTICES];
            seen[s] = true;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &(y, len) in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        dist[s][y] = dist[s][x] + len;
                        stack.push(y);
                    }
                }
            }
        }
        let total: f64 = self.edges.iter().zip(self.dg).map(|(&(u, v, _), &d)| dist[u][v] / d).sum();
        total / self.edges.len() as f64
    }
}

/// A spanning tree of minimum average stretch and that average, found by
/// enumerating every spanning tree.
pub fn brute_force_best_tree(g: &Graph) -> Result<(SpanningTree, f64)> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return precondition(format!("exhaustive search is limited to {BRUTE_FORCE_MAX_VERTICES} vertices, got {n}"));
    }
    if n == 0 {
        return precondition("graph has no vertices");
    }
    if !g.is_connected() {
        return Err(Error::Disconnected {
            source_vertex: 0,
            unreachable: g.components()[1].members()[0],
        });
    }
    if n == 1 {
        return Ok((SpanningTree::from_edges(1, 0, &[])?, 1.0));
    }
    let edges = g.edges();
    let dg = edge_graph_distances(g);
    let mut s = Search {
        n,
        edges: &edges,
        dg: &dg,
        chosen: Vec::new(),
        best: None,
        count: 0,
    };
    s.run(0, &mut (0..n).collect());
    let (avg, idx) = s.best.ok_or_else(|| Error::Internal("no spanning tree found".into()))?;
    let tree_edges: Vec<_> = idx.iter().map(|&i| edges[i]).collect();
    Ok((SpanningTree::from_edges(n, 0, &tree_edges)?, avg))
}

/// Number of spanning trees, by the same enumeration.
pub fn count_spanning_trees(g: &Graph) -> Result<u64> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_MAX_VERTICES || n == 0 {
        return precondition("tree counting needs 1..=8 vertices");
    }
    if n == 1 {
        return Ok(1);
    }
    let edges = g.edges();
    let dg = edge_graph_distances(g);
    let mut s = Search {
        n,
        edges: &edges,
        dg: &dg,
        chosen: Vec::new(),
        best: None,
        count: 0,
    };
    s.run(0, &mut (0..n).collect());
    Ok(s.count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::stretch::stretch_report;

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        Graph::from_unit_edges(n, &e).unwrap()
    }

    #[test]
    fn tree_input_is_optimal() {
        let g = Graph::from_unit_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        let (t, avg) = brute_force_best_tree(&g).unwrap();
        assert_eq!(avg, 1.0);
        assert_eq!(t.edges(), g.edges());
    }

    #[test]
    fn triangle() {
        let (_, avg) = brute_force_best_tree(&complete(3)).unwrap();
        assert!((avg - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn k4_by_enumeration() {
        let g = complete(4);
        assert_eq!(count_spanning_trees(&g).unwrap(), 16);
        // independent oracle: every 3-edge subset, keep trees, take the best report
        let edges = g.edges();
        let mut best = f64::INFINITY;
        for mask in 0u32..(1 << edges.len()) {
            if mask.count_ones() != 3 {
                continue;
            }
            let pick: Vec<_> = (0..edges.len()).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
            if let Ok(t) = SpanningTree::from_edges(4, 0, &pick) {
                if t.vertex_count() == 4 {
                    best = best.min(stretch_report(&g, &t).unwrap().avg_stretch);
                }
            }
        }
        let (t, avg) = brute_force_best_tree(&g).unwrap();
        assert!((avg - best).abs() < 1e-12);
        assert!((stretch_report(&g, &t).unwrap().avg_stretch - avg).abs() < 1e-12);
        // the star is optimal on K4: 3 tree edges at 1, 3 others at 2
        assert!((avg - 1.5).abs() < 1e-12);
    }

    #[test]
    fn cayley_counts() {
        for n in 2..=7 {
            assert_eq!(count_spanning_trees(&complete(n)).unwrap(), (n as u64).pow(n as u32 - 2));
        }
    }

    #[test]
    fn refuses_large_graphs() {
        assert!(brute_force_best_tree(&complete(9)).is_err());
    }
}
