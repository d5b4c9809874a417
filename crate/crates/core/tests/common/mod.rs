//! Shared fixtures and brute-force oracles for the integration tests.
//!
//! Nothing here calls into the library's analytics; the oracles work from the
//! raw edge lists.

#![allow(dead_code)]

use std::collections::BTreeMap;

use pitchgraph::twg::{AggregatedEdge, SpatialActivityGraph, TimeWindow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const WINDOW: TimeWindow = TimeWindow { start: 0.0, end: 5.0 };

pub fn edge(from: u32, to: u32, speed: f64) -> AggregatedEdge {
    AggregatedEdge {
        from_cell: from,
        to_cell: to,
        players: [1].into_iter().collect(),
        avg_speed: speed,
        action_count: 1,
    }
}

pub fn graph_from(n: u32, edges: &[(u32, u32, f64)]) -> SpatialActivityGraph {
    SpatialActivityGraph::from_edges(WINDOW, edges.iter().map(|&(a, b, s)| edge(a, b, s)).collect(), 0..n)
}

/// Random directed graph on `n` nodes with integer speeds in 1..=4. Self-loops
/// are included now and then.
pub fn random_integer_graph(rng: &mut ChaCha8Rng, n: u32) -> (Vec<(u32, u32, f64)>, SpatialActivityGraph) {
    let p = rng.gen_range(0.2..0.7);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if (a != b && rng.gen_bool(p)) || (a == b && rng.gen_bool(0.1)) {
                edges.push((a, b, rng.gen_range(1..=4) as f64));
            }
        }
    }
    let g = graph_from(n, &edges);
    (edges, g)
}

/// Random directed graph with real speeds in [0.5, 8].
pub fn random_real_graph(rng: &mut ChaCha8Rng, n: u32) -> (Vec<(u32, u32, f64)>, SpatialActivityGraph) {
    let p = rng.gen_range(0.15..0.6);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if (a != b && rng.gen_bool(p)) || (a == b && rng.gen_bool(0.1)) {
                edges.push((a, b, rng.gen_range(0.5..8.0)));
            }
        }
    }
    let g = graph_from(n, &edges);
    (edges, g)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Betweenness by enumerating every simple path between every ordered pair.
///
/// With `weighted`, a path costs the sum of `12 / speed`; speeds must be
/// integers in 1..=4 so costs are exact integers. Otherwise a path costs its
/// hop count. Self-loops are skipped.
pub fn brute_force_betweenness(n: u32, edges: &[(u32, u32, f64)], weighted: bool) -> BTreeMap<u32, f64> {
    let n = n as usize;
    let mut adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
    for &(a, b, s) in edges {
        if a == b {
            continue;
        }
        let cost = if weighted {
            assert!(s.fract() == 0.0 && (1.0..=4.0).contains(&s));
            12 / s as u64
        } else {
            1
        };
        adj[a as usize].push((b as usize, cost));
    }

    let mut score = vec![0.0; n];
    for s in 0..n {
        // per target: best cost, number of shortest paths, and how many of them pass each node
        let mut best: Vec<Option<(u64, u64, Vec<u64>)>> = vec![None; n];
        let mut stack = vec![(s, 0u64, vec![s])];
        while let Some((v, cost, path)) = stack.pop() {
            for &(w, c) in &adj[v] {
                if path.contains(&w) {
                    continue;
                }
                let total = cost + c;
                let interior = &path[1..];
                match &mut best[w] {
                    Some((b, _, _)) if total > *b => {}
                    Some((b, sigma, through)) if total == *b => {
                        *sigma += 1;
                        for &x in interior {
                            through[x] += 1;
                        }
                    }
                    slot => {
                        let mut through = vec![0; n];
                        for &x in interior {
                            through[x] += 1;
                        }
                        *slot = Some((total, 1, through));
                    }
                }
                let mut next = path.clone();
                next.push(w);
                stack.push((w, total, next));
            }
        }
        for (t, entry) in best.iter().enumerate() {
            if t == s {
                continue;
            }
            if let Some((_, sigma, through)) = entry {
                for x in 0..n {
                    score[x] += through[x] as f64 / *sigma as f64;
                }
            }
        }
    }
    (0..n as u32).zip(score).collect()
}

/// Dense symmetrised weight matrix: `A_ij = w(i->j) + w(j->i)`, `A_ii` = self-loop weight.
pub fn dense_symmetric(n: usize, edges: &[(u32, u32, f64)]) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; n]; n];
    for &(i, j, w) in edges {
        let (i, j) = (i as usize, j as usize);
        if i == j {
            a[i][i] += w;
        } else {
            a[i][j] += w;
            a[j][i] += w;
        }
    }
    a
}

/// `M = 1/(2m) * sum_ij [A_ij - k_i k_j / (2m)] delta(c_i, c_j)`, evaluated term by term.
pub fn modularity_direct(a: &[Vec<f64>], community: &[usize]) -> f64 {
    let n = a.len();
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if community[i] == community[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Every set partition of `n` items as restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max + 1 {
            if i == 0 && c > 0 {
                break;
            }
            cur.push(c);
            rec(i + 1, n, cur, if i == 0 { 0 } else { max.max(c) }, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    } else {
        rec(0, n, &mut Vec::new(), 0, &mut out);
    }
    out
}

/// Highest modularity over all partitions.
pub fn exhaustive_max_modularity(a: &[Vec<f64>]) -> f64 {
    all_partitions(a.len())
        .iter()
        .map(|p| modularity_direct(a, p))
        .fold(f64::NEG_INFINITY, f64::max)
}
