//! Brandes betweenness on the directed window graph.
//!
//! Weighted mode walks edges at cost `1 / avg_speed`, so fast transitions are
//! short. Path lengths that agree to a relative 1e-10 count as equal, which
//! keeps shortest-path multiplicities stable when speeds are rescaled.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use super::Indexed;
use crate::error::{Error, Result};
use crate::grid::CellId;
use crate::twg::{SpatialActivityGraph, TimeWindow};

const RELATIVE_TIE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetweennessMode {
    #[default]
    Weighted,
    Unweighted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityScores {
    pub window: TimeWindow,
    pub scores: BTreeMap<CellId, f64>,
    pub normalized: bool,
}

impl CentralityScores {
    /// Highest score and the cells attaining it.
    pub fn maximum(&self) -> Option<(f64, Vec<CellId>)> {
        let best = self.scores.values().copied().fold(f64::NEG_INFINITY, f64::max);
        if !best.is_finite() {
            return None;
        }
        let cells = self
            .scores
            .iter()
            .filter(|(_, &s)| s == best)
            .map(|(&c, _)| c)
            .collect();
        Some((best, cells))
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then on node index
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn ties(a: f64, b: f64) -> bool {
    (a - b).abs() <= RELATIVE_TIE * a.abs().max(b.abs())
}

struct SingleSource {
    order: Vec<usize>,
    pred: Vec<Vec<usize>>,
    sigma: Vec<f64>,
}

fn bfs(idx: &Indexed, s: usize) -> SingleSource {
    let n = idx.nodes.len();
    let mut dist = vec![u32::MAX; n];
    let mut sigma = vec![0.0; n];
    let mut pred = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    dist[s] = 0;
    sigma[s] = 1.0;
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &(w, _) in &idx.out[v] {
            if dist[w] == u32::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
                pred[w].push(v);
            }
        }
    }
    SingleSource { order, pred, sigma }
}

fn dijkstra(idx: &Indexed, s: usize) -> SingleSource {
    let n = idx.nodes.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut settled = vec![false; n];
    let mut sigma = vec![0.0; n];
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    sigma[s] = 1.0;
    heap.push(Entry { dist: 0.0, node: s });
    while let Some(Entry { dist: d, node: v }) = heap.pop() {
        if settled[v] || d > dist[v] {
            continue;
        }
        settled[v] = true;
        order.push(v);
        for &(w, speed) in &idx.out[v] {
            if settled[w] {
                continue;
            }
            let alt = dist[v] + 1.0 / speed;
            if dist[w].is_finite() && ties(alt, dist[w]) {
                sigma[w] += sigma[v];
                pred[w].push(v);
            } else if alt < dist[w] {
                dist[w] = alt;
                sigma[w] = sigma[v];
                pred[w].clear();
                pred[w].push(v);
                heap.push(Entry { dist: alt, node: w });
            }
        }
    }
    SingleSource { order, pred, sigma }
}

/// Betweenness of every node. Self-loops never lie on a shortest path and are
/// ignored; normalisation divides by `(N-1)(N-2)` when `N > 2`.
pub fn betweenness(g: &SpatialActivityGraph, mode: BetweennessMode, normalize: bool) -> Result<CentralityScores> {
    let idx = Indexed::new(g);
    let n = idx.nodes.len();
    if mode == BetweennessMode::Weighted
        && idx
            .out
            .iter()
            .flatten()
            .any(|&(_, speed)| !(speed.is_finite() && speed > 0.0))
    {
        return Err(Error::ZeroSpeedEdge);
    }
    let mut score = vec![0.0; n];
    let mut delta = vec![0.0; n];
    for s in 0..n {
        let ss = match mode {
            BetweennessMode::Weighted => dijkstra(&idx, s),
            BetweennessMode::Unweighted => bfs(&idx, s),
        };
        for &v in &ss.order {
            delta[v] = 0.0;
        }
        for &w in ss.order.iter().rev() {
            let coeff = (1.0 + delta[w]) / ss.sigma[w];
            for &v in &ss.pred[w] {
                delta[v] += ss.sigma[v] * coeff;
            }
            if w != s {
                score[w] += delta[w];
            }
        }
    }
    if normalize && n > 2 {
        let scale = 1.0 / ((n - 1) as f64 * (n - 2) as f64);
        for x in &mut score {
            *x *= scale;
        }
    }
    Ok(CentralityScores {
        window: g.window,
        scores: idx.nodes.iter().copied().zip(score).collect(),
        normalized: normalize,
    })
}
