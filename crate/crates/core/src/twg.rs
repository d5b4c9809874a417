//! Rolling time windows and per-window spatial activity graphs.
//!
//! A graph holds the cells touched by actions that start inside the window.
//! Actions sharing an ordered `(start_cell, end_cell)` pair are merged into one
//! directed edge carrying the distinct players and the mean speed.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{CellAnnotatedAction, CellId};

/// Half-open interval `[start, end)` in minutes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start: f64,
    pub end: f64,
}

impl TimeWindow {
    pub fn new(start: f64, end: f64) -> Self {
        Self { start, end }
    }

    /// Whether a time in seconds falls inside the window.
    pub fn contains_seconds(&self, t: f64) -> bool {
        t >= self.start * 60.0 && t < self.end * 60.0
    }
}

/// Windows `[k*step, k*step + width)` for `k = 0..=floor((duration - width) / step)`.
pub fn generate_windows(match_duration: f64, width: f64, step: f64) -> Result<Vec<TimeWindow>> {
    if !(width.is_finite() && width > 0.0 && step.is_finite() && step > 0.0) {
        return Err(Error::InvalidWindows(format!(
            "width {width} and step {step} must be positive"
        )));
    }
    if width > match_duration {
        return Err(Error::InvalidWindows(format!(
            "window width {width} exceeds match duration {match_duration}"
        )));
    }
    let last = ((match_duration - width) / step + 1e-9).floor() as usize;
    Ok((0..=last)
        .map(|k| {
            let start = k as f64 * step;
            TimeWindow::new(start, start + width)
        })
        .collect())
}

/// How merged actions combine their speeds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeedAggregation {
    #[default]
    Mean,
    DurationWeighted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregatedEdge {
    #[serde(rename = "from")]
    pub from_cell: CellId,
    #[serde(rename = "to")]
    pub to_cell: CellId,
    pub players: BTreeSet<u32>,
    pub avg_speed: f64,
    #[serde(rename = "count")]
    pub action_count: usize,
}

impl AggregatedEdge {
    pub fn is_self_loop(&self) -> bool {
        self.from_cell == self.to_cell
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialActivityGraph {
    pub window: TimeWindow,
    pub nodes: BTreeSet<CellId>,
    /// Sorted by `(from, to)`.
    pub edges: Vec<AggregatedEdge>,
}

impl SpatialActivityGraph {
    pub fn empty(window: TimeWindow) -> Self {
        Self {
            window,
            nodes: BTreeSet::new(),
            edges: Vec::new(),
        }
    }

    /// Builds a graph from explicit edges; nodes are the edge endpoints plus `extra_nodes`.
    pub fn from_edges(
        window: TimeWindow,
        edges: Vec<AggregatedEdge>,
        extra_nodes: impl IntoIterator<Item = CellId>,
    ) -> Self {
        let mut nodes: BTreeSet<CellId> = extra_nodes.into_iter().collect();
        for e in &edges {
            nodes.insert(e.from_cell);
            nodes.insert(e.to_cell);
        }
        let mut edges = edges;
        edges.sort_by_key(|e| (e.from_cell, e.to_cell));
        Self { window, nodes, edges }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Canonical JSON: keys sorted, players ascending.
    pub fn to_json(&self) -> Result<String> {
        // serde_json's default map is ordered, so a round trip through Value sorts keys
        Ok(serde_json::to_string_pretty(&serde_json::to_value(self)?)?)
    }
}

#[derive(Default)]
struct EdgeAccumulator {
    players: BTreeSet<u32>,
    speed_sum: f64,
    weighted_sum: f64,
    duration_sum: f64,
    count: usize,
}

/// One graph from the actions whose start time lies in `window`.
pub fn build_graph(annotated: &[CellAnnotatedAction], window: TimeWindow) -> SpatialActivityGraph {
    build_graph_with(annotated, window, SpeedAggregation::Mean)
}

pub fn build_graph_with(
    annotated: &[CellAnnotatedAction],
    window: TimeWindow,
    aggregation: SpeedAggregation,
) -> SpatialActivityGraph {
    let mut acc: BTreeMap<(CellId, CellId), EdgeAccumulator> = BTreeMap::new();
    let mut nodes = BTreeSet::new();
    for a in annotated
        .iter()
        .filter(|a| window.contains_seconds(a.action.start_time))
    {
        nodes.insert(a.start_cell);
        nodes.insert(a.end_cell);
        let e = acc.entry((a.start_cell, a.end_cell)).or_default();
        e.players.insert(a.action.player_id);
        e.speed_sum += a.action.avg_speed;
        e.weighted_sum += a.action.avg_speed * a.action.duration;
        e.duration_sum += a.action.duration;
        e.count += 1;
    }
    let edges = acc
        .into_iter()
        .map(|((from_cell, to_cell), e)| {
            let avg_speed = match aggregation {
                SpeedAggregation::DurationWeighted if e.duration_sum > 0.0 => e.weighted_sum / e.duration_sum,
                _ => e.speed_sum / e.count as f64,
            };
            AggregatedEdge {
                from_cell,
                to_cell,
                players: e.players,
                avg_speed,
                action_count: e.count,
            }
        })
        .collect();
    SpatialActivityGraph { window, nodes, edges }
}

/// The full series, one graph per window in window order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwgSeries {
    pub graphs: Vec<SpatialActivityGraph>,
}

impl TwgSeries {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&serde_json::to_value(&self.graphs)?)?)
    }
}

pub fn build_series(annotated: &[CellAnnotatedAction], windows: &[TimeWindow]) -> TwgSeries {
    build_series_with(annotated, windows, SpeedAggregation::Mean)
}

pub fn build_series_with(
    annotated: &[CellAnnotatedAction],
    windows: &[TimeWindow],
    aggregation: SpeedAggregation,
) -> TwgSeries {
    TwgSeries {
        graphs: windows
            .iter()
            .map(|w| build_graph_with(annotated, *w, aggregation))
            .collect(),
    }
}
