// Detect communities of cells with Louvain. In the `two_zones` scenario the
// players keep to two halves of the pitch, and the communities follow.
//
// ```text
// cargo run -p pitchgraph --example louvain_communities
// ```

use pitchgraph::analytics::{louvain_traced, DEFAULT_RESTARTS};
use pitchgraph::config::PipelineConfig;
use pitchgraph::pipeline::prepare;
use pitchgraph::syngen::{generate, Scenario, ScenarioSpec};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let generated = generate(&ScenarioSpec::for_scenario(Scenario::TwoZones, 4))?;
    let mid = generated.truth.midline_lon.ok_or("no midline")?;
    let prepared = prepare(&generated.records, &PipelineConfig::default())?;

    for g in prepared.series.graphs.iter().step_by(15) {
        let (partition, trace) = louvain_traced(g, 0, DEFAULT_RESTARTS);
        let best = &trace.runs[trace.best];
        println!(
            "[{:>2}, {:>2})  {} communities, M = {:.4} (sweeps {:?})",
            g.window.start,
            g.window.end,
            partition.community_count(),
            partition.modularity,
            best.sweeps.iter().map(|q| format!("{q:.3}")).collect::<Vec<_>>()
        );
        let mut members = partition.members();
        members.sort_by_key(|m| std::cmp::Reverse(m.len()));
        for m in members.iter().take(2) {
            let west = m
                .iter()
                .filter(|&&c| prepared.grid.cell(c).is_some_and(|c| c.centroid_geo.lon < mid))
                .count();
            println!(
                "    {:>3} cells, {:>3} west of the midline, {:>3} east",
                m.len(),
                west,
                m.len() - west
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
