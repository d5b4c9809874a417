use serde::{Deserialize, Serialize};

use super::Partition;
use crate::twg::SpatialActivityGraph;

/// Speed distribution of edges leaving one community. Statistics are `None`
/// when the community has no outgoing edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunitySpeedSummary {
    pub community_id: usize,
    pub edge_count: usize,
    pub min: Option<f64>,
    pub q1: Option<f64>,
    pub mean: Option<f64>,
    pub q3: Option<f64>,
    pub max: Option<f64>,
}

/// Quantile by linear interpolation between order statistics at rank
/// `q * (n - 1)`. `sorted` must be ascending and non-empty.
pub fn quantile_linear(sorted: &[f64], q: f64) -> f64 {
    let rank = q * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    sorted[lo] + (rank - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Summaries per community, ordered by community id. Self-loops count as
/// edges originating in their cell's community.
pub fn community_speed_summary(g: &SpatialActivityGraph, p: &Partition) -> Vec<CommunitySpeedSummary> {
    let mut speeds: Vec<Vec<f64>> = vec![Vec::new(); p.community_count()];
    for e in &g.edges {
        if let Some(&c) = p.assignment.get(&e.from_cell) {
            speeds[c].push(e.avg_speed);
        }
    }
    speeds
        .into_iter()
        .enumerate()
        .map(|(community_id, mut s)| {
            s.sort_by(f64::total_cmp);
            let stat = |f: &dyn Fn(&[f64]) -> f64| if s.is_empty() { None } else { Some(f(&s)) };
            CommunitySpeedSummary {
                community_id,
                edge_count: s.len(),
                min: stat(&|s| s[0]),
                q1: stat(&|s| quantile_linear(s, 0.25)),
                mean: stat(&|s| s.iter().sum::<f64>() / s.len() as f64),
                q3: stat(&|s| quantile_linear(s, 0.75)),
                max: stat(&|s| s[s.len() - 1]),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twg::{AggregatedEdge, TimeWindow};

    fn graph(edges: &[(u32, u32, f64)]) -> SpatialActivityGraph {
        SpatialActivityGraph::from_edges(
            TimeWindow::new(0.0, 5.0),
            edges
                .iter()
                .map(|&(a, b, s)| AggregatedEdge {
                    from_cell: a,
                    to_cell: b,
                    players: [1].into_iter().collect(),
                    avg_speed: s,
                    action_count: 1,
                })
                .collect(),
            [],
        )
    }

    fn partition(pairs: &[(u32, usize)]) -> Partition {
        Partition {
            window: TimeWindow::new(0.0, 5.0),
            assignment: pairs.iter().copied().collect(),
            modularity: 0.0,
        }
    }

    #[test]
    fn three_speeds_interpolated() {
        let g = graph(&[(0, 1, 3.6), (1, 0, 2.4), (0, 0, 4.9)]);
        let s = community_speed_summary(&g, &partition(&[(0, 0), (1, 0)]));
        assert_eq!(s.len(), 1);
        let s = &s[0];
        assert_eq!(s.edge_count, 3);
        assert_eq!(s.min, Some(2.4));
        assert!((s.q1.unwrap() - 3.0).abs() < 1e-12);
        assert!((s.mean.unwrap() - 10.9 / 3.0).abs() < 1e-12);
        assert!((s.q3.unwrap() - 4.25).abs() < 1e-12);
        assert_eq!(s.max, Some(4.9));
    }

    #[test]
    fn single_edge() {
        let g = graph(&[(0, 1, 5.0)]);
        let s = &community_speed_summary(&g, &partition(&[(0, 0), (1, 1)]));
        assert_eq!(s[0].min, Some(5.0));
        assert_eq!(s[0].q1, Some(5.0));
        assert_eq!(s[0].mean, Some(5.0));
        assert_eq!(s[0].q3, Some(5.0));
        assert_eq!(s[0].max, Some(5.0));
        // community 1 only receives
        assert_eq!(s[1].edge_count, 0);
        assert_eq!(s[1].mean, None);
    }

    #[test]
    fn null_stats_serialize_as_null() {
        let g = graph(&[(0, 1, 5.0)]);
        let s = community_speed_summary(&g, &partition(&[(0, 0), (1, 1)]));
        let v = serde_json::to_value(&s[1]).unwrap();
        assert!(v["q1"].is_null());
        assert_eq!(v["edge_count"], 0);
    }
}
