// Colour the pitch grid by betweenness and by community and write the SVGs.
//
// ```text
// cargo run -p pitchgraph --example render_heatmaps
// ```

use pitchgraph::config::PipelineConfig;
use pitchgraph::pipeline::{analyze_window, prepare};
use pitchgraph::render::{render_heatmap, HeatmapValues};
use pitchgraph::syngen::{generate, Scenario, ScenarioSpec};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = PipelineConfig::default();
    let generated = generate(&ScenarioSpec::for_scenario(Scenario::Bridge, 6))?;
    let prepared = prepare(&generated.records, &cfg)?;
    let report = analyze_window(&prepared.series.graphs[0], &cfg)?;

    let dir = std::env::temp_dir().join("pitchgraph-heatmaps");
    std::fs::create_dir_all(&dir)?;
    let scores = report.scores(true);
    let communities = report.communities();
    let plots = [
        (
            "betweenness.svg",
            render_heatmap(&prepared.grid, &HeatmapValues::Scores(&scores), "betweenness [0, 5)"),
        ),
        (
            "communities.svg",
            render_heatmap(
                &prepared.grid,
                &HeatmapValues::Communities(&communities),
                "communities [0, 5)",
            ),
        ),
    ];
    for (name, svg) in plots {
        let path = dir.join(name);
        std::fs::write(&path, &svg)?;
        let active = svg.matches("class=\"cell\"").count();
        let inactive = svg.matches("class=\"inactive\"").count();
        println!("{}: {active} active cells, {inactive} idle", path.display());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
