use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::Indexed;
use crate::twg::{SpatialActivityGraph, TimeWindow};

/// Descriptive statistics of one window graph. Self-loops are excluded from
/// every field except `self_loops` and `node_count`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub window: TimeWindow,
    pub node_count: usize,
    pub edge_count: usize,
    pub self_loops: usize,
    pub avg_edge_weight: f64,
    pub density: f64,
    pub avg_degree: f64,
    pub avg_clustering_coefficient: f64,
    pub avg_shortest_path: f64,
}

/// Directed density `E / (N (N - 1))`; zero for fewer than two nodes.
pub fn density(nodes: usize, edges: usize) -> f64 {
    if nodes <= 1 {
        0.0
    } else {
        edges as f64 / (nodes as f64 * (nodes as f64 - 1.0))
    }
}

/// Average total degree `2E / N`; zero for an empty graph.
pub fn avg_degree(nodes: usize, edges: usize) -> f64 {
    if nodes == 0 {
        0.0
    } else {
        2.0 * edges as f64 / nodes as f64
    }
}

pub fn graph_stats(g: &SpatialActivityGraph) -> GraphStats {
    let idx = Indexed::new(g);
    let n = idx.nodes.len();
    let counted: Vec<f64> = g
        .edges
        .iter()
        .filter(|e| !e.is_self_loop())
        .map(|e| e.avg_speed)
        .collect();
    let e = counted.len();
    let avg_edge_weight = if e == 0 {
        0.0
    } else {
        counted.iter().sum::<f64>() / e as f64
    };
    let density = density(n, e);
    let avg_degree = avg_degree(n, e);
    GraphStats {
        window: g.window,
        node_count: n,
        edge_count: e,
        self_loops: g.edges.len() - e,
        avg_edge_weight,
        density,
        avg_degree,
        avg_clustering_coefficient: avg_clustering(&idx),
        avg_shortest_path: avg_shortest_path(&idx),
    }
}

/// Mean local clustering over the undirected, unweighted projection.
fn avg_clustering(idx: &Indexed) -> f64 {
    let n = idx.nodes.len();
    if n == 0 {
        return 0.0;
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (u, outs) in idx.out.iter().enumerate() {
        for &(v, _) in outs {
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    let mut total = 0.0;
    for nbrs in &adj {
        let d = nbrs.len();
        if d < 2 {
            continue;
        }
        let nb: Vec<usize> = nbrs.iter().copied().collect();
        let mut links = 0usize;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if adj[a].contains(&b) {
                    links += 1;
                }
            }
        }
        total += 2.0 * links as f64 / (d * (d - 1)) as f64;
    }
    total / n as f64
}

/// Mean hop distance over ordered reachable pairs.
fn avg_shortest_path(idx: &Indexed) -> f64 {
    let n = idx.nodes.len();
    let mut sum = 0u64;
    let mut pairs = 0u64;
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        dist.fill(u32::MAX);
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &idx.out[v] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    sum += dist[w] as u64;
                    pairs += 1;
                    queue.push_back(w);
                }
            }
        }
    }
    if pairs == 0 {
        0.0
    } else {
        sum as f64 / pairs as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twg::AggregatedEdge;

    fn edge(from: u32, to: u32) -> AggregatedEdge {
        AggregatedEdge {
            from_cell: from,
            to_cell: to,
            players: [1].into_iter().collect(),
            avg_speed: 2.0,
            action_count: 1,
        }
    }

    fn graph(edges: &[(u32, u32)]) -> SpatialActivityGraph {
        SpatialActivityGraph::from_edges(
            TimeWindow::new(0.0, 5.0),
            edges.iter().map(|&(a, b)| edge(a, b)).collect(),
            [],
        )
    }

    #[test]
    fn empty_graph_is_all_zero() {
        let s = graph_stats(&SpatialActivityGraph::empty(TimeWindow::new(0.0, 5.0)));
        assert_eq!(s.node_count, 0);
        assert_eq!(s.edge_count, 0);
        assert_eq!(s.density, 0.0);
        assert_eq!(s.avg_degree, 0.0);
        assert_eq!(s.avg_clustering_coefficient, 0.0);
        assert_eq!(s.avg_shortest_path, 0.0);
        assert_eq!(s.avg_edge_weight, 0.0);
    }

    #[test]
    fn directed_triangle() {
        let s = graph_stats(&graph(&[(0, 1), (1, 2), (2, 0)]));
        assert_eq!(s.density, 0.5);
        assert_eq!(s.avg_shortest_path, 1.5);
        assert_eq!(s.avg_clustering_coefficient, 1.0);
        assert_eq!(s.avg_degree, 2.0);
    }

    #[test]
    fn self_loops_counted_separately() {
        let s = graph_stats(&graph(&[(0, 1), (1, 1), (2, 2)]));
        assert_eq!(s.node_count, 3);
        assert_eq!(s.edge_count, 1);
        assert_eq!(s.self_loops, 2);
        assert_eq!(s.density, 1.0 / 6.0);
        assert_eq!(s.avg_shortest_path, 1.0);
    }

    #[test]
    fn density_formula_matches_reported_window() {
        // 118 nodes, 952 directed edges: first 952 ordered pairs
        let mut edges = Vec::new();
        'outer: for a in 0..118u32 {
            for b in 0..118u32 {
                if a != b {
                    edges.push((a, b));
                    if edges.len() == 952 {
                        break 'outer;
                    }
                }
            }
        }
        let mut g = graph(&edges);
        g.nodes.extend(0..118);
        let s = graph_stats(&g);
        assert_eq!(s.node_count, 118);
        assert_eq!(s.edge_count, 952);
        assert!((s.density - 0.0690).abs() < 1e-4, "{}", s.density);
        assert_eq!(format!("{:.2}", s.density), "0.07");
    }

    #[test]
    fn star_has_zero_clustering() {
        let s = graph_stats(&graph(&[(0, 1), (0, 2), (0, 3)]));
        assert_eq!(s.avg_clustering_coefficient, 0.0);
        assert_eq!(s.avg_shortest_path, 1.0);
    }
}
