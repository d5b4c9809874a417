// Generate each synthetic scenario, write it as an action CSV and show its
// ground truth.
//
// ```text
// cargo run -p pitchgraph --example synthetic_match
// ```

use pitchgraph::ingest::{parse_actions, validate_parsed, write_actions};
use pitchgraph::syngen::{generate, Scenario, ScenarioSpec};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    for scenario in [
        Scenario::Uniform,
        Scenario::TwoZones,
        Scenario::Bridge,
        Scenario::Corridor,
    ] {
        let spec = ScenarioSpec::for_scenario(scenario, 42);
        let generated = generate(&spec)?;
        let mut csv = Vec::new();
        write_actions(&mut csv, &generated.records)?;

        // what a consumer of the file sees
        let (records, report) = validate_parsed(parse_actions(csv.as_slice())?);
        let metres: f64 = records.iter().map(|r| r.avg_speed * r.duration).sum();
        println!(
            "{:>9}: {} actions ({} rejected), {:.0} m per player, {} KiB",
            scenario.to_string(),
            records.len(),
            report.rejected.len(),
            metres / spec.players as f64,
            csv.len() / 1024
        );
        let truth = generated.truth.to_json()?;
        let short: String = truth.chars().filter(|c| !c.is_whitespace()).take(110).collect();
        println!("           truth {short}...");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
