//! End-to-end processing: ingest, grid, window graphs, analytics, files.
//!
//! Output directory layout of a full run:
//!
//! ```text
//! out/
//!   meta.json            resolution, origin, window count, betweenness settings
//!   grid.csv             pruned grid
//!   stats.csv            one row of descriptive statistics per window
//!   twg.json             all window graphs
//!   rejections.json      rejected input rows as [{line, reason}]
//!   rejections.log       plain-text rejection and warning log
//!   reports/window_000.json ...
//!   svg/betweenness_000.svg, svg/communities_000.svg ...   (when rendering)
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytics::{
    betweenness, community_speed_summary, graph_stats, louvain, BetweennessMode, CommunitySpeedSummary, GraphStats,
    Partition,
};
use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::grid::{grid_for_records, prune_and_annotate, CellAnnotatedAction, CellId, Grid};
use crate::ingest::{parse_actions, validate_parsed, ActionRecord, GeoCoordinate, RejectionReport};
use crate::render::{render_heatmap, HeatmapValues};
use crate::twg::{build_series_with, generate_windows, SpatialActivityGraph, TimeWindow, TwgSeries};

pub const STATS_HEADER: &str =
    "window_start,window_end,nodes,edges,avg_weight_edges,density,avg_degree,avg_clustering_coeff,avg_shortest_path";

/// Reads and validates an action CSV.
pub fn load_actions(path: &Path) -> Result<(Vec<ActionRecord>, RejectionReport)> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let parsed = parse_actions(std::io::BufReader::new(file))?;
    Ok(validate_parsed(parsed))
}

/// Grid, annotations and window graphs for a cleaned dataset.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub grid: Grid,
    pub annotated: Vec<CellAnnotatedAction>,
    pub windows: Vec<TimeWindow>,
    pub series: TwgSeries,
    pub match_duration: f64,
}

/// Match length in whole minutes covering every action end.
pub fn inferred_duration(records: &[ActionRecord]) -> f64 {
    let last = records.iter().map(|r| r.end_time).fold(0.0, f64::max);
    (last / 60.0).ceil()
}

pub fn prepare(records: &[ActionRecord], config: &PipelineConfig) -> Result<Prepared> {
    config.validate()?;
    let full = grid_for_records(records, config.resolution, config.margin, config.poi)?;
    let (grid, annotated) = prune_and_annotate(records, &full);
    let match_duration = config.match_duration.unwrap_or_else(|| inferred_duration(records));
    let windows = generate_windows(match_duration, config.window_width, config.window_step)?;
    let series = build_series_with(&annotated, &windows, config.speed_aggregation);
    Ok(Prepared {
        grid,
        annotated,
        windows,
        series,
        match_duration,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetweennessEntry {
    pub cell_id: CellId,
    pub score: f64,
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityAssignment {
    pub cell_id: CellId,
    pub community: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub communities: usize,
    pub assignment: Vec<CommunityAssignment>,
    pub modularity: f64,
}

impl From<&Partition> for PartitionReport {
    fn from(p: &Partition) -> Self {
        Self {
            communities: p.community_count(),
            assignment: p
                .assignment
                .iter()
                .map(|(&cell_id, &community)| CommunityAssignment { cell_id, community })
                .collect(),
            modularity: p.modularity,
        }
    }
}

/// Everything computed for one window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub window: TimeWindow,
    pub stats: GraphStats,
    /// Mode actually used; falls back to unweighted when an edge has zero speed.
    pub betweenness_mode: BetweennessMode,
    pub betweenness: Vec<BetweennessEntry>,
    pub partition: PartitionReport,
    pub community_speeds: Vec<CommunitySpeedSummary>,
    pub quartile_method: String,
}

impl WindowReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&serde_json::to_value(self)?)? + "\n")
    }

    pub fn scores(&self, normalized: bool) -> BTreeMap<CellId, f64> {
        self.betweenness
            .iter()
            .map(|b| (b.cell_id, if normalized { b.normalized } else { b.score }))
            .collect()
    }

    pub fn communities(&self) -> BTreeMap<CellId, usize> {
        self.partition
            .assignment
            .iter()
            .map(|a| (a.cell_id, a.community))
            .collect()
    }
}

pub fn analyze_window(g: &SpatialActivityGraph, config: &PipelineConfig) -> Result<WindowReport> {
    let stats = graph_stats(g);
    let mut mode = config.betweenness_mode;
    let raw = match betweenness(g, mode, false) {
        Err(Error::ZeroSpeedEdge) => {
            log::warn!(
                "window [{}, {}): zero-speed edge, using unweighted betweenness",
                g.window.start,
                g.window.end
            );
            mode = BetweennessMode::Unweighted;
            betweenness(g, mode, false)?
        }
        other => other?,
    };
    let norm = betweenness(g, mode, true)?;
    let betweenness = raw
        .scores
        .iter()
        .map(|(&cell_id, &score)| BetweennessEntry {
            cell_id,
            score,
            normalized: norm.scores[&cell_id],
        })
        .collect();
    let partition = louvain(g, config.louvain_seed);
    let community_speeds = community_speed_summary(g, &partition);
    Ok(WindowReport {
        window: g.window,
        stats,
        betweenness_mode: mode,
        betweenness,
        partition: PartitionReport::from(&partition),
        community_speeds,
        quartile_method: "linear interpolation between order statistics at rank q*(n-1)".to_string(),
    })
}

pub fn stats_csv(stats: &[GraphStats]) -> String {
    let mut out = String::from(STATS_HEADER);
    out.push('\n');
    for s in stats {
        out.push_str(&format!(
            "{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
            s.window.start,
            s.window.end,
            s.node_count,
            s.edge_count,
            s.avg_edge_weight,
            s.density,
            s.avg_degree,
            s.avg_clustering_coefficient,
            s.avg_shortest_path
        ));
    }
    out
}

/// Settings needed to re-render saved reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub resolution: f64,
    pub origin: GeoCoordinate,
    pub windows: usize,
    pub match_duration: f64,
    pub betweenness_mode: BetweennessMode,
    pub normalize: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub records: usize,
    pub rejected: usize,
    pub cells: usize,
    pub windows: usize,
    pub files: Vec<PathBuf>,
}

struct Out {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Out {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, rel: &str, contents: &[u8]) -> Result<()> {
        let path = self.dir.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.files.push(path);
        Ok(())
    }
}

fn window_label(i: usize) -> String {
    format!("{i:03}")
}

fn write_common(out: &mut Out, prepared: &Prepared, report: &RejectionReport, config: &PipelineConfig) -> Result<()> {
    let mut grid_csv = Vec::new();
    prepared.grid.write_csv(&mut grid_csv)?;
    out.write("grid.csv", &grid_csv)?;
    out.write("rejections.json", (report.rejected_json()? + "\n").as_bytes())?;
    out.write("rejections.log", report.to_log().as_bytes())?;
    let meta = RunMeta {
        resolution: prepared.grid.resolution,
        origin: prepared.grid.origin,
        windows: prepared.windows.len(),
        match_duration: prepared.match_duration,
        betweenness_mode: config.betweenness_mode,
        normalize: config.normalize,
    };
    out.write(
        "meta.json",
        (serde_json::to_string_pretty(&serde_json::to_value(&meta)?)? + "\n").as_bytes(),
    )
}

fn input_path(config: &PipelineConfig) -> Result<&Path> {
    config
        .input
        .as_deref()
        .ok_or_else(|| Error::Config("no input file given".into()))
}

/// Full run: reports, stats, grid, graphs and (optionally) heatmaps.
pub fn run(config: &PipelineConfig) -> Result<RunSummary> {
    config.validate()?;
    let (records, report) = load_actions(input_path(config)?)?;
    run_records(&records, &report, config)
}

pub fn run_records(records: &[ActionRecord], report: &RejectionReport, config: &PipelineConfig) -> Result<RunSummary> {
    let prepared = prepare(records, config)?;
    let mut out = Out::new(&config.output)?;
    write_common(&mut out, &prepared, report, config)?;
    out.write("twg.json", (prepared.series.to_json()? + "\n").as_bytes())?;

    let mut stats = Vec::with_capacity(prepared.windows.len());
    for (i, g) in prepared.series.graphs.iter().enumerate() {
        let wr = analyze_window(g, config)?;
        out.write(
            &format!("reports/window_{}.json", window_label(i)),
            wr.to_json()?.as_bytes(),
        )?;
        if config.render {
            render_window(&mut out, i, &prepared.grid, &wr, config.normalize)?;
        }
        stats.push(wr.stats);
    }
    out.write("stats.csv", stats_csv(&stats).as_bytes())?;
    log::info!(
        "{} records, {} cells, {} windows -> {}",
        records.len(),
        prepared.grid.len(),
        prepared.windows.len(),
        config.output.display()
    );
    Ok(RunSummary {
        records: records.len(),
        rejected: report.rejected.len(),
        cells: prepared.grid.len(),
        windows: prepared.windows.len(),
        files: out.files,
    })
}

/// Stats-only path: grid, rejections and stats CSV; no centrality or communities.
pub fn run_stats(config: &PipelineConfig) -> Result<RunSummary> {
    config.validate()?;
    let (records, report) = load_actions(input_path(config)?)?;
    let prepared = prepare(&records, config)?;
    let mut out = Out::new(&config.output)?;
    write_common(&mut out, &prepared, &report, config)?;
    let stats: Vec<GraphStats> = prepared.series.graphs.iter().map(graph_stats).collect();
    out.write("stats.csv", stats_csv(&stats).as_bytes())?;
    Ok(RunSummary {
        records: records.len(),
        rejected: report.rejected.len(),
        cells: prepared.grid.len(),
        windows: prepared.windows.len(),
        files: out.files,
    })
}

fn render_window(out: &mut Out, i: usize, grid: &Grid, wr: &WindowReport, normalized: bool) -> Result<()> {
    let w = wr.window;
    let scores = wr.scores(normalized);
    let title = format!(
        "Betweenness centrality{} [{}, {})",
        if normalized { " (normalized)" } else { "" },
        w.start,
        w.end
    );
    let svg = render_heatmap(grid, &HeatmapValues::Scores(&scores), &title);
    out.write(&format!("svg/betweenness_{}.svg", window_label(i)), svg.as_bytes())?;
    let communities = wr.communities();
    let title = format!(
        "Communities [{}, {}), modularity {:.3}",
        w.start, w.end, wr.partition.modularity
    );
    let svg = render_heatmap(grid, &HeatmapValues::Communities(&communities), &title);
    out.write(&format!("svg/communities_{}.svg", window_label(i)), svg.as_bytes())
}

/// Re-renders heatmaps from a finished run's directory.
pub fn render_saved(dir: &Path, normalized: Option<bool>) -> Result<Vec<PathBuf>> {
    let meta_path = dir.join("meta.json");
    let meta: RunMeta = serde_json::from_str(&fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?)?;
    let grid_path = dir.join("grid.csv");
    let grid_file = fs::File::open(&grid_path).map_err(|e| Error::io(&grid_path, e))?;
    let grid = Grid::read_csv(grid_file, meta.resolution, meta.origin)?;
    let normalized = normalized.unwrap_or(meta.normalize);
    let mut out = Out::new(dir)?;
    for i in 0..meta.windows {
        let path = dir.join(format!("reports/window_{}.json", window_label(i)));
        let wr: WindowReport = serde_json::from_str(&fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?)?;
        render_window(&mut out, i, &grid, &wr, normalized)?;
    }
    Ok(out.files)
}
