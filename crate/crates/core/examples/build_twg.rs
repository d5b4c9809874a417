// Slice a match into rolling five-minute windows and aggregate each window's
// actions into a directed graph over pitch cells.
//
// ```text
// cargo run -p pitchgraph --example build_twg
// ```

use pitchgraph::grid::{grid_for_records, prune_and_annotate};
use pitchgraph::syngen::{generate, Scenario, ScenarioSpec};
use pitchgraph::twg::{build_series, generate_windows};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let records = generate(&ScenarioSpec::for_scenario(Scenario::Uniform, 2))?.records;
    let grid = grid_for_records(&records, 10.0, 2.0, None)?;
    let (_, annotated) = prune_and_annotate(&records, &grid);

    let windows = generate_windows(78.0, 5.0, 1.0)?;
    let series = build_series(&annotated, &windows);
    println!(
        "{} windows, last [{}, {})",
        windows.len(),
        windows[73].start,
        windows[73].end
    );
    for g in series.graphs.iter().step_by(12) {
        let actions: usize = g.edges.iter().map(|e| e.action_count).sum();
        println!(
            "[{:>2}, {:>2})  {:>3} cells  {:>4} edges  {:>4} actions",
            g.window.start,
            g.window.end,
            g.node_count(),
            g.edges.len(),
            actions
        );
    }

    let busiest = series.graphs[0]
        .edges
        .iter()
        .max_by_key(|e| e.action_count)
        .ok_or("empty window")?;
    println!(
        "busiest edge in the first window: {} -> {}, {} actions by {} players at {:.2} m/s",
        busiest.from_cell,
        busiest.to_cell,
        busiest.action_count,
        busiest.players.len(),
        busiest.avg_speed
    );
    assert_eq!(series.graphs.len(), 74);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
