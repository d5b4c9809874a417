// The whole pipeline, as `pitchgraph run` does it: clean the actions, build
// the grid and window graphs, analyse every window and write the results.
//
// ```text
// cargo run -p pitchgraph --example full_pipeline
// ```

use pitchgraph::config::PipelineConfig;
use pitchgraph::ingest::validate_and_clean;
use pitchgraph::pipeline::run_records;
use pitchgraph::syngen::{generate, Scenario, ScenarioSpec};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let generated = generate(&ScenarioSpec::for_scenario(Scenario::TwoZones, 9))?;
    let (records, report) = validate_and_clean(&generated.records);

    let mut cfg = PipelineConfig::default();
    cfg.merge_str("# ten-minute windows, two minutes apart\nwindow_width = 10\nwindow_step = 2\nseed = 7\n")?;
    cfg.output = std::env::temp_dir().join("pitchgraph-full-pipeline");
    let summary = run_records(&records, &report, &cfg)?;
    println!(
        "{} actions, {} cells, {} windows -> {} files in {}",
        summary.records,
        summary.cells,
        summary.windows,
        summary.files.len(),
        cfg.output.display()
    );

    let stats = std::fs::read_to_string(cfg.output.join("stats.csv"))?;
    for line in stats.lines().take(4) {
        println!("{line}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
