mod common;

use std::collections::BTreeMap;
use std::fs;

use pitchgraph::analytics::BetweennessMode;
use pitchgraph::config::PipelineConfig;
use pitchgraph::grid::{compute_bounding_box, generate_grid, prune_and_annotate, unproject, PlanarPoint};
use pitchgraph::ingest::{validate_and_clean, ActionRecord, GeoCoordinate, RejectionReport};
use pitchgraph::pipeline::{analyze_window, prepare, render_saved, run_records, WindowReport, STATS_HEADER};
use pitchgraph::render::{render_heatmap, HeatmapValues};
use pitchgraph::syngen::{generate, Scenario, ScenarioSpec};
use pitchgraph::twg::TimeWindow;

use common::*;

const ORIGIN: GeoCoordinate = GeoCoordinate { lat: 54.0, lon: -7.0 };

fn stay(player: u32, t: f64, at: PlanarPoint) -> ActionRecord {
    let c = unproject(at, ORIGIN);
    ActionRecord {
        player_id: player,
        start_time: t,
        end_time: t + 2.0,
        start_coord: c,
        end_coord: c,
        avg_speed: 1.0,
        action_label: "Walking".into(),
        duration: 2.0,
    }
}

#[test]
fn pruning_keeps_visited_cells_and_heatmap_colours_them() {
    // 16 x 10 lattice of 10 m cells; a match that stands in 118 of them
    let bbox = compute_bounding_box(&[PlanarPoint::new(0.0, 0.0), PlanarPoint::new(160.0, 100.0)], 0.0).unwrap();
    let full = generate_grid(bbox, 10.0, ORIGIN).unwrap();
    assert_eq!(full.len(), 160);
    let records: Vec<ActionRecord> = full
        .cells
        .iter()
        .filter(|c| c.cell_id % 4 != 3)
        .take(118)
        .enumerate()
        .map(|(i, c)| stay(i as u32 % 15, i as f64 * 3.0, c.centroid_planar))
        .collect();
    let (pruned, annotated) = prune_and_annotate(&records, &full);
    assert_eq!(pruned.len(), 118);
    assert!(annotated.iter().all(|a| a.start_cell == a.end_cell));

    let scores: BTreeMap<u32, f64> = pruned.cells.iter().map(|c| (c.cell_id, c.cell_id as f64)).collect();
    let svg = render_heatmap(&pruned, &HeatmapValues::Scores(&scores), "test");
    let cells: Vec<&str> = svg.lines().filter(|l| l.contains("class=\"cell\"")).collect();
    assert_eq!(cells.len(), 118);
    assert!(cells.iter().all(|l| !l.contains("fill=\"#000000\"")));
}

#[test]
fn overlapping_windows_share_the_overlap() {
    let generated = generate(&ScenarioSpec::for_scenario(Scenario::Uniform, 12)).unwrap();
    let prepared = prepare(&generated.records, &PipelineConfig::default()).unwrap();
    let graphs = &prepared.series.graphs;
    assert_eq!(graphs.len(), 74);
    for pair in graphs.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let overlap = TimeWindow::new(b.window.start, a.window.end);
        let shared: BTreeMap<(u32, u32), usize> = prepared
            .annotated
            .iter()
            .filter(|x| overlap.contains_seconds(x.action.start_time))
            .fold(BTreeMap::new(), |mut m, x| {
                *m.entry((x.start_cell, x.end_cell)).or_default() += 1;
                m
            });
        let count = |g: &pitchgraph::twg::SpatialActivityGraph, key: &(u32, u32)| {
            g.edges
                .iter()
                .find(|e| (e.from_cell, e.to_cell) == *key)
                .map_or(0, |e| e.action_count)
        };
        for (key, n) in &shared {
            assert!(
                count(a, key) >= *n && count(b, key) >= *n,
                "{key:?} in [{}, {})",
                a.window.start,
                b.window.end
            );
        }
    }
}

#[test]
fn zero_speed_window_falls_back_to_unweighted() {
    let g = graph_from(4, &[(0, 1, 0.0), (1, 2, 3.0), (2, 3, 1.0), (3, 3, 0.0)]);
    let report = analyze_window(&g, &PipelineConfig::default()).unwrap();
    assert_eq!(report.betweenness_mode, BetweennessMode::Unweighted);
    // path 0 -> 1 -> 2 -> 3: node 1 relays (0,2) and (0,3), node 2 relays (0,3) and (1,3)
    let scores = report.scores(false);
    assert_eq!(scores[&1], 2.0);
    assert_eq!(scores[&2], 2.0);
    assert_eq!(report.scores(true)[&1], 2.0 / 6.0);

    // a zero-speed self-loop alone does not force the fallback
    let g = graph_from(3, &[(0, 1, 2.0), (1, 2, 3.0), (2, 2, 0.0)]);
    assert_eq!(
        analyze_window(&g, &PipelineConfig::default()).unwrap().betweenness_mode,
        BetweennessMode::Weighted
    );
}

#[test]
fn saved_run_renders_again() {
    let generated = generate(&ScenarioSpec {
        duration: 10.0,
        ..ScenarioSpec::for_scenario(Scenario::Bridge, 3)
    })
    .unwrap();
    let (records, report): (_, RejectionReport) = validate_and_clean(&generated.records);
    let tmp = tempfile::tempdir().unwrap();
    let cfg = PipelineConfig {
        output: tmp.path().to_path_buf(),
        ..PipelineConfig::default()
    };
    let summary = run_records(&records, &report, &cfg).unwrap();
    assert_eq!(summary.windows, 6);
    assert_eq!(summary.rejected, 0);

    let stats = fs::read_to_string(tmp.path().join("stats.csv")).unwrap();
    assert_eq!(stats.lines().next(), Some(STATS_HEADER));
    assert_eq!(stats.lines().count(), 7);

    let first = fs::read_to_string(tmp.path().join("svg/communities_000.svg")).unwrap();
    let files = render_saved(tmp.path(), Some(false)).unwrap();
    assert_eq!(files.len(), 12);
    assert_eq!(
        fs::read_to_string(tmp.path().join("svg/communities_000.svg")).unwrap(),
        first
    );

    let json = fs::read_to_string(tmp.path().join("reports/window_005.json")).unwrap();
    let wr: WindowReport = serde_json::from_str(&json).unwrap();
    assert_eq!(wr.window, TimeWindow::new(5.0, 10.0));
    assert_eq!(wr.stats.node_count, wr.betweenness.len());
    assert_eq!(wr.partition.assignment.len(), wr.betweenness.len());
}

#[test]
fn playing_area_fixes_the_grid() {
    let generated = generate(&ScenarioSpec::for_scenario(Scenario::Uniform, 1)).unwrap();
    let corners = |lat0: f64, lon0: f64, lat1: f64, lon1: f64| {
        let mut cfg = PipelineConfig::default();
        cfg.set("poi", &format!("{lat0},{lon0},{lat1},{lon1}")).unwrap();
        prepare(&generated.records, &cfg).unwrap()
    };
    let a = corners(53.9996, -7.0011, 54.0004, -6.9989);
    let b = corners(53.9996, -7.0011, 54.0004, -6.9989);
    assert_eq!(a.grid, b.grid);
    assert!((a.grid.origin.lat - 54.0).abs() < 1e-9 && (a.grid.origin.lon + 7.0).abs() < 1e-9);
    assert!(a.grid.len() <= 16 * 10 + 20);
}
