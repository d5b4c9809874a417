// Parse and validate a small action file: the rows of a player's first
// twenty seconds, plus a few broken ones.
//
// ```text
// cargo run -p pitchgraph --example ingest_table_one
// ```

use pitchgraph::ingest::{parse_actions, validate_parsed};

const ACTIONS: &str = "\
player_id,start_time,end_time,start_lat,start_lon,end_lat,end_lon,speed,action,duration
152,0,4,54.123,-7.357,54.224,-7.351,5.36,Running,4
152,3,5,54.224,-7.351,54.011,-7.391,3.97,Jogging,2
152,5,10,54.011,-7.391,54.349,-7.650,4.98,Running,5
152,10,16,54.349,-7.650,54.012,-7.655,3.83,Jogging,6
152,16,20,54.012,-7.655,54.020,-7.657,4.51,Running,4
153,20,18,54.0,-7.0,54.0,-7.0,1.2,Walking,2
153,30,34,54.0,-7.0,54.0,-7.0,fast,Walking,4
153,40,44,54.0,-7.0,54.0,-7.0,1.1,Walking
";

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let parsed = parse_actions(ACTIONS.as_bytes())?;
    let (records, report) = validate_parsed(parsed);

    println!("{:>6} {:>6} {:>6} {:>6}  label", "player", "start", "end", "speed");
    for r in &records {
        println!(
            "{:>6} {:>6} {:>6} {:>6.2}  {}",
            r.player_id, r.start_time, r.end_time, r.avg_speed, r.action_label
        );
    }
    println!();
    print!("{}", report.to_log());
    assert_eq!(records.len(), 5);
    assert_eq!(report.rejected.len(), 3);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
