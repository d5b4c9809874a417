//! Per-window graph analytics: descriptive statistics, betweenness
//! centrality, Louvain communities and per-community speed summaries.

mod betweenness;
mod louvain;
mod speeds;
mod stats;

use std::collections::HashMap;

use crate::grid::CellId;
use crate::twg::SpatialActivityGraph;

pub use betweenness::{betweenness, BetweennessMode, CentralityScores};
pub use louvain::{
    louvain, louvain_traced, modularity, LouvainTrace, Partition, RunTrace, SymmetricWeights, DEFAULT_RESTARTS,
};
pub use speeds::{community_speed_summary, quantile_linear, CommunitySpeedSummary};
pub use stats::{avg_degree, density, graph_stats, GraphStats};

/// Dense node indexing of a graph, with self-loops dropped from adjacency.
pub(crate) struct Indexed {
    pub nodes: Vec<CellId>,
    /// `(target, avg_speed)` per source, in edge order.
    pub out: Vec<Vec<(usize, f64)>>,
}

impl Indexed {
    pub fn new(g: &SpatialActivityGraph) -> Self {
        let nodes: Vec<CellId> = g.nodes.iter().copied().collect();
        let position: HashMap<CellId, usize> = nodes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut out = vec![Vec::new(); nodes.len()];
        for e in g.edges.iter().filter(|e| !e.is_self_loop()) {
            out[position[&e.from_cell]].push((position[&e.to_cell], e.avg_speed));
        }
        Self { nodes, out }
    }
}
