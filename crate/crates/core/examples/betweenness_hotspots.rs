// Find the cells that relay the most traffic. In the `bridge` scenario every
// cross-half movement passes one point, and that cell should dominate.
//
// ```text
// cargo run -p pitchgraph --example betweenness_hotspots
// ```

use pitchgraph::analytics::{betweenness, BetweennessMode};
use pitchgraph::config::PipelineConfig;
use pitchgraph::grid::{assign_cell, project_to_local};
use pitchgraph::pipeline::prepare;
use pitchgraph::syngen::{generate, Scenario, ScenarioSpec};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let generated = generate(&ScenarioSpec::for_scenario(Scenario::Bridge, 3))?;
    let prepared = prepare(&generated.records, &PipelineConfig::default())?;
    let bridge_at = generated.truth.bridge_cell.ok_or("no bridge in truth")?;
    let bridge = assign_cell(project_to_local(bridge_at, prepared.grid.origin), &prepared.grid);
    println!(
        "bridge point ({:.6}, {:.6}) lies in cell {bridge}",
        bridge_at.lat, bridge_at.lon
    );

    let mut top_hits = 0;
    for g in prepared.series.graphs.iter().take(10) {
        let weighted = betweenness(g, BetweennessMode::Weighted, true)?;
        let unweighted = betweenness(g, BetweennessMode::Unweighted, true)?;
        let (score, cells) = weighted.maximum().ok_or("empty window")?;
        if cells.contains(&bridge) {
            top_hits += 1;
        }
        println!(
            "[{:>2}, {:>2})  top {:?} at {:.4}; bridge {:.4} weighted, {:.4} by hops",
            g.window.start,
            g.window.end,
            cells,
            score,
            weighted.scores.get(&bridge).copied().unwrap_or(0.0),
            unweighted.scores.get(&bridge).copied().unwrap_or(0.0)
        );
    }
    println!("bridge cell on top in {top_hits} of 10 windows");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
