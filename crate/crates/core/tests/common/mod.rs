#![allow(dead_code)]

use lstree::generate::{generate, with_random_weights, GraphKind};
use lstree::rng::stream;
use lstree::Graph;
use rand::Rng;

pub struct Named {
    pub name: String,
    pub graph: Graph,
}

fn named(name: impl Into<String>, graph: Graph) -> Named {
    Named {
        name: name.into(),
        graph,
    }
}

/// Lengths `2^U[0, spread]`, so ratios up to `2^spread`.
pub fn log_uniform_weights(g: &Graph, spread: f64, seed: u64) -> Graph {
    let mut rng = stream(seed, "test-weights", &[]);
    let edges: Vec<_> = g
        .edges()
        .into_iter()
        .map(|(u, v, _)| (u, v, 2f64.powf(rng.gen_range(0.0..spread))))
        .collect();
    Graph::from_edges(g.vertex_count(), &edges).unwrap()
}

/// A connected random graph with `2..=max_n` vertices; weighted with
/// probability 1/2.
pub fn random_graph(seed: u64, max_n: usize) -> Graph {
    let mut rng = stream(seed, "test-graph", &[]);
    let n = rng.gen_range(2..=max_n);
    let cap = n * (n - 1) / 2 - (n - 1);
    let extra = rng.gen_range(0..=cap.min(2 * n));
    let g = generate(GraphKind::RandomConnected { extra }, n, seed).unwrap();
    match rng.gen_range(0..4) {
        0 | 1 => g,
        2 => with_random_weights(&g, 0.5, 20.0, seed).unwrap(),
        _ => log_uniform_weights(&g, 10.0, seed),
    }
}

pub fn random_weighted_graph(seed: u64, max_n: usize) -> Graph {
    let mut rng = stream(seed, "test-weighted-graph", &[]);
    let n = rng.gen_range(2..=max_n);
    let cap = n * (n - 1) / 2 - (n - 1);
    let extra = rng.gen_range(0..=cap.min(2 * n));
    let g = generate(GraphKind::RandomConnected { extra }, n, seed).unwrap();
    if rng.gen_bool(0.5) {
        with_random_weights(&g, 0.5, 20.0, seed).unwrap()
    } else {
        log_uniform_weights(&g, 12.0, seed)
    }
}

/// Every generator family at a spread of sizes, unit and weighted.
pub fn generator_suite() -> Vec<Named> {
    let mut out = Vec::new();
    let shapes: Vec<(GraphKind, &str, Vec<usize>)> = vec![
        (GraphKind::Path, "path", vec![1, 2, 5, 17, 64]),
        (GraphKind::Cycle, "cycle", vec![3, 6, 31, 100]),
        (GraphKind::Grid, "grid", vec![2, 3, 8, 12]),
        (GraphKind::Torus, "torus", vec![3, 5, 9]),
        (GraphKind::Complete, "complete", vec![2, 4, 9, 20]),
        (GraphKind::Gnp { p: 0.3 }, "gnp0.3", vec![8, 16, 40]),
        (GraphKind::Gnp { p: 0.1 }, "gnp0.1", vec![60]),
        (GraphKind::RandomConnected { extra: 0 }, "tree", vec![10, 50, 150]),
        (GraphKind::RandomConnected { extra: 30 }, "random+30", vec![20, 80, 200]),
    ];
    for (kind, name, sizes) in shapes {
        for s in sizes {
            for seed in [1u64, 2] {
                let g = match generate(kind, s, seed) {
                    Ok(g) => g,
                    Err(_) => continue,
                };
                if g.edge_count() > 0 {
                    out.push(named(format!("{name}({s}) weighted"), with_random_weights(&g, 1.0, 10.0, seed).unwrap()));
                    out.push(named(format!("{name}({s}) log-weighted"), log_uniform_weights(&g, 12.0, seed)));
                }
                out.push(named(format!("{name}({s}) seed {seed}"), g));
            }
        }
    }
    out
}

/// Same vertex set with two or more components.
pub fn disconnected_suite() -> Vec<Named> {
    let mut out = Vec::new();
    let a = generate(GraphKind::Grid, 4, 0).unwrap();
    let b = generate(GraphKind::Cycle, 7, 0).unwrap();
    let mut edges = a.edges();
    let off = a.vertex_count();
    edges.extend(b.edges().into_iter().map(|(u, v, w)| (u + off, v + off, w)));
    let n = off + b.vertex_count() + 1;
    out.push(named("grid4 + cycle7 + isolated", Graph::from_edges(n, &edges).unwrap()));
    let w: Vec<_> = edges.iter().map(|&(u, v, _)| (u, v, 1.0 + (u * 7 + v) as f64 % 5.0)).collect();
    out.push(named("weighted grid4 + cycle7 + isolated", Graph::from_edges(n, &w).unwrap()));
    out
}

/// Plain Dijkstra over an edge list, independent of the library.
pub fn oracle_distances(n: usize, edges: &[(usize, usize, f64)], s: usize) -> Vec<f64> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let mut adj = vec![Vec::new(); n];
    for &(u, v, w) in edges {
        adj[u].push((v, w));
        adj[v].push((u, w));
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(Reverse((ordered(0.0), s)));
    while let Some(Reverse((d, u))) = heap.pop() {
        let d = f64::from_bits(d);
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            if d + w < dist[v] {
                dist[v] = d + w;
                heap.push(Reverse((ordered(d + w), v)));
            }
        }
    }
    dist
}

// nonnegative floats order like their bit patterns
fn ordered(x: f64) -> u64 {
    x.to_bits()
}

/// Checks that `tree` is a spanning tree of `g` made of graph edges and
/// that it dominates `g` on every edge. Returns a description of the first
/// violation.
pub fn check_spanning_tree(g: &Graph, tree: &[(usize, usize, f64)]) -> Result<(), String> {
    let n = g.vertex_count();
    if tree.len() + 1 != n {
        return Err(format!("{} tree edges for {n} vertices", tree.len()));
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for &(u, v, w) in tree {
        match g.edge_length(u, v) {
            Some(l) if l == w => {}
            other => return Err(format!("tree edge ({u}, {v}, {w}) vs graph {other:?}")),
        }
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            return Err(format!("cycle through ({u}, {v})"));
        }
        parent[a] = b;
    }
    let ge = g.edges();
    let mut by_source: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(u, v, w) in &ge {
        by_source[u].push((v, w));
    }
    for u in 0..n {
        if by_source[u].is_empty() {
            continue;
        }
        let dt = oracle_distances(n, tree, u);
        let dg = oracle_distances(n, &ge, u);
        for &(v, _) in &by_source[u] {
            if dt[v] < dg[v] - 1e-9 * dg[v].max(1.0) {
                return Err(format!("d_T({u}, {v}) = {} < d_G = {}", dt[v], dg[v]));
            }
        }
    }
    Ok(())
}
