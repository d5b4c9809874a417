// Summarise movement speeds per community. In the `corridor` scenario one
// band of the pitch carries the fast runs.
//
// ```text
// cargo run -p pitchgraph --example community_speeds
// ```

use pitchgraph::analytics::{community_speed_summary, louvain};
use pitchgraph::config::PipelineConfig;
use pitchgraph::pipeline::prepare;
use pitchgraph::syngen::{generate, Scenario, ScenarioSpec};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let generated = generate(&ScenarioSpec::for_scenario(Scenario::Corridor, 5))?;
    let (lo, hi) = generated.truth.corridor_lat_range.ok_or("no corridor")?;
    let prepared = prepare(&generated.records, &PipelineConfig::default())?;

    let g = &prepared.series.graphs[30];
    let partition = louvain(g, 0);
    println!(
        "window [{}, {}): {} communities",
        g.window.start,
        g.window.end,
        partition.community_count()
    );
    println!(
        "{:>4} {:>5} {:>6} {:>6} {:>6} {:>6} {:>6}  in band",
        "id", "edges", "min", "q1", "mean", "q3", "max"
    );
    let members = partition.members();
    for s in community_speed_summary(g, &partition) {
        let cells = &members[s.community_id];
        let in_band = cells
            .iter()
            .filter(|&&c| {
                prepared
                    .grid
                    .cell(c)
                    .is_some_and(|c| (lo..=hi).contains(&c.centroid_geo.lat))
            })
            .count();
        let f = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.2}"));
        println!(
            "{:>4} {:>5} {:>6} {:>6} {:>6} {:>6} {:>6}  {}/{}",
            s.community_id,
            s.edge_count,
            f(s.min),
            f(s.q1),
            f(s.mean),
            f(s.q3),
            f(s.max),
            in_band,
            cells.len()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
