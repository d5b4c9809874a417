// Project a synthetic match onto the plane, lay a 10 m lattice over it and
// keep only the cells players actually visit.
//
// ```text
// cargo run -p pitchgraph --example grid_tessellation
// ```

use pitchgraph::grid::{assign_cell, grid_for_records, prune_and_annotate, PlanarPoint};
use pitchgraph::syngen::{generate, Scenario, ScenarioSpec};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let records = generate(&ScenarioSpec::for_scenario(Scenario::Uniform, 1))?.records;

    let full = grid_for_records(&records, 10.0, 2.0, None)?;
    let (active, annotated) = prune_and_annotate(&records, &full);
    println!(
        "lattice {} x {} = {} cells around ({:.5}, {:.5}); {} visited by {} actions",
        full.lattice.cols,
        full.lattice.rows,
        full.len(),
        full.origin.lat,
        full.origin.lon,
        active.len(),
        annotated.len()
    );

    // the origin sits near the middle of the pitch
    let centre = assign_cell(PlanarPoint::new(0.0, 0.0), &full);
    let cell = full.cell(centre).ok_or("no centre cell")?;
    println!(
        "cell {} holds the origin; centroid ({:.1} m, {:.1} m) = ({:.6}, {:.6})",
        centre, cell.centroid_planar.x, cell.centroid_planar.y, cell.centroid_geo.lat, cell.centroid_geo.lon
    );

    let mut csv = Vec::new();
    active.write_csv(&mut csv)?;
    let text = String::from_utf8(csv)?;
    for line in text.lines().take(4) {
        println!("{line}");
    }
    assert!(active.len() <= full.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
