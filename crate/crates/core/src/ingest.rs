//! Action dataset ingestion.
//!
//! The input is a CSV file with one player action per row:
//!
//! ```text
//! player_id,start_time,end_time,start_lat,start_lon,end_lat,end_lon,speed,action,duration
//! 152,0,4,54.123,-7.357,54.224,-7.351,5.36,Running,4
//! ```
//!
//! Header names are matched case-insensitively after trimming, so column order
//! is free. Malformed rows are skipped and recorded in a [`RejectionReport`];
//! a missing header column is fatal.

use std::collections::HashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column names of the action CSV, in canonical output order.
pub const COLUMNS: [&str; 10] = [
    "player_id",
    "start_time",
    "end_time",
    "start_lat",
    "start_lon",
    "end_lat",
    "end_lon",
    "speed",
    "action",
    "duration",
];

/// Allowed mismatch between `duration` and `end_time - start_time`, in seconds.
pub const DURATION_TOLERANCE_S: f64 = 0.5;

/// Latitude/longitude in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoCoordinate {
    pub lat: f64,
    pub lon: f64,
}

impl GeoCoordinate {
    pub fn new(lat: f64, lon: f64) -> Self {
        Self { lat, lon }
    }

    pub fn is_valid(&self) -> bool {
        self.lat.is_finite()
            && self.lon.is_finite()
            && (-90.0..=90.0).contains(&self.lat)
            && (-180.0..=180.0).contains(&self.lon)
    }
}

/// One movement segment of a player. Times are seconds from match start.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionRecord {
    pub player_id: u32,
    pub start_time: f64,
    pub end_time: f64,
    pub start_coord: GeoCoordinate,
    pub end_coord: GeoCoordinate,
    /// Mean speed over the action, m/s.
    pub avg_speed: f64,
    pub action_label: String,
    pub duration: f64,
}

impl ActionRecord {
    /// First violated invariant, if any.
    pub fn violation(&self) -> Option<&'static str> {
        if !self.start_time.is_finite() || !self.end_time.is_finite() || self.start_time < 0.0 {
            return Some("negative start time");
        }
        if self.end_time < self.start_time {
            return Some("negative interval");
        }
        if !self.avg_speed.is_finite() || self.avg_speed < 0.0 {
            return Some("negative speed");
        }
        if !self.duration.is_finite() || self.duration < 0.0 {
            return Some("negative duration");
        }
        if !self.start_coord.is_valid() {
            return Some("start coordinate out of range");
        }
        if !self.end_coord.is_valid() {
            return Some("end coordinate out of range");
        }
        if (self.duration - (self.end_time - self.start_time)).abs() > DURATION_TOLERANCE_S {
            return Some("duration inconsistent with interval");
        }
        None
    }
}

/// A row that was skipped, with its 1-based source line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectionReport {
    pub accepted_count: usize,
    pub rejected: Vec<Rejection>,
    /// Accepted rows that look suspicious (e.g. overlapping actions of one player).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<Rejection>,
}

impl RejectionReport {
    pub fn total(&self) -> usize {
        self.accepted_count + self.rejected.len()
    }

    /// Plain-text log, one line per rejection or warning.
    pub fn to_log(&self) -> String {
        let mut out = format!(
            "accepted {} rejected {} warnings {}\n",
            self.accepted_count,
            self.rejected.len(),
            self.warnings.len()
        );
        for r in &self.rejected {
            out.push_str(&format!("REJECT line {}: {}\n", r.line, r.reason));
        }
        for w in &self.warnings {
            out.push_str(&format!("WARN line {}: {}\n", w.line, w.reason));
        }
        out
    }

    /// JSON array of `{line, reason}` for rejected rows.
    pub fn rejected_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.rejected)?)
    }
}

/// Parsed rows together with the source line of each record.
#[derive(Debug, Clone, Default)]
pub struct ParsedActions {
    pub records: Vec<ActionRecord>,
    pub lines: Vec<u64>,
    pub report: RejectionReport,
}

fn header_index(headers: &csv::StringRecord) -> Result<[usize; 10]> {
    let lookup: HashMap<String, usize> = headers
        .iter()
        .enumerate()
        .map(|(i, h)| (h.trim().trim_start_matches('\u{feff}').to_ascii_lowercase(), i))
        .collect();
    let mut idx = [0usize; 10];
    for (slot, name) in idx.iter_mut().zip(COLUMNS) {
        *slot = *lookup.get(name).ok_or_else(|| Error::MissingColumn(name.to_string()))?;
    }
    Ok(idx)
}

fn parse_row(row: &csv::StringRecord, idx: &[usize; 10], width: usize) -> std::result::Result<ActionRecord, String> {
    if row.len() != width {
        return Err(format!("expected {} fields, found {}", width, row.len()));
    }
    let field = |k: usize| row.get(idx[k]).unwrap_or("").trim();
    let num = |k: usize| -> std::result::Result<f64, String> {
        let v: f64 = field(k)
            .parse()
            .map_err(|_| format!("unparseable {}", column_label(k)))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("unparseable {}", column_label(k)))
        }
    };
    let player_id = field(0)
        .parse::<u32>()
        .map_err(|_| "unparseable player_id".to_string())?;
    Ok(ActionRecord {
        player_id,
        start_time: num(1)?,
        end_time: num(2)?,
        start_coord: GeoCoordinate::new(num(3)?, num(4)?),
        end_coord: GeoCoordinate::new(num(5)?, num(6)?),
        avg_speed: num(7)?,
        action_label: field(8).to_string(),
        duration: num(9)?,
    })
}

fn column_label(k: usize) -> &'static str {
    // `speed` is stored as `avg_speed`
    if k == 7 {
        "avg_speed"
    } else {
        COLUMNS[k]
    }
}

/// Parses an action CSV. Malformed rows are skipped and reported.
pub fn parse_actions<R: Read>(source: R) -> Result<ParsedActions> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(source);
    let headers = reader.headers()?.clone();
    let idx = header_index(&headers)?;
    let width = headers.len();

    let mut parsed = ParsedActions::default();
    let mut row = csv::StringRecord::new();
    loop {
        match reader.read_record(&mut row) {
            Ok(false) => break,
            Ok(true) => {
                let line = row.position().map_or(0, |p| p.line());
                if row.len() == 1 && row.get(0).is_some_and(|f| f.trim().is_empty()) {
                    continue;
                }
                match parse_row(&row, &idx, width) {
                    Ok(rec) => {
                        parsed.records.push(rec);
                        parsed.lines.push(line);
                    }
                    Err(reason) => parsed.report.rejected.push(Rejection { line, reason }),
                }
            }
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                if matches!(e.kind(), csv::ErrorKind::Io(_)) {
                    return Err(e.into());
                }
                parsed.report.rejected.push(Rejection {
                    line,
                    reason: format!("malformed row: {e}"),
                });
            }
        }
    }
    parsed.report.accepted_count = parsed.records.len();
    Ok(parsed)
}

/// Moves records violating an invariant into the report. Records are numbered
/// by their 1-based position in `records`.
pub fn validate_and_clean(records: &[ActionRecord]) -> (Vec<ActionRecord>, RejectionReport) {
    let lines: Vec<u64> = (1..=records.len() as u64).collect();
    validate_with_lines(records, &lines)
}

/// Validates parser output, keeping its source line numbers and earlier rejections.
pub fn validate_parsed(parsed: ParsedActions) -> (Vec<ActionRecord>, RejectionReport) {
    let (kept, mut report) = validate_with_lines(&parsed.records, &parsed.lines);
    let mut rejected = parsed.report.rejected;
    rejected.extend(report.rejected);
    rejected.sort_by_key(|r| r.line);
    report.rejected = rejected;
    (kept, report)
}

fn validate_with_lines(records: &[ActionRecord], lines: &[u64]) -> (Vec<ActionRecord>, RejectionReport) {
    let mut report = RejectionReport::default();
    let mut kept = Vec::with_capacity(records.len());
    let mut last_end: HashMap<u32, f64> = HashMap::new();
    for (rec, &line) in records.iter().zip(lines) {
        if let Some(reason) = rec.violation() {
            report.rejected.push(Rejection {
                line,
                reason: reason.to_string(),
            });
            continue;
        }
        if let Some(&end) = last_end.get(&rec.player_id) {
            if rec.start_time < end {
                log::warn!(
                    "line {line}: action of player {} overlaps previous action",
                    rec.player_id
                );
                report.warnings.push(Rejection {
                    line,
                    reason: format!("overlaps previous action of player {}", rec.player_id),
                });
            }
        }
        let end = last_end.entry(rec.player_id).or_insert(rec.end_time);
        *end = end.max(rec.end_time);
        kept.push(rec.clone());
    }
    report.accepted_count = kept.len();
    (kept, report)
}

/// Writes records in the canonical column order. Reals use the shortest
/// representation that parses back to the same value.
pub fn write_actions<W: Write>(sink: W, records: &[ActionRecord]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(COLUMNS)?;
    for r in records {
        writer.write_record([
            r.player_id.to_string(),
            r.start_time.to_string(),
            r.end_time.to_string(),
            r.start_coord.lat.to_string(),
            r.start_coord.lon.to_string(),
            r.end_coord.lat.to_string(),
            r.end_coord.lon.to_string(),
            r.avg_speed.to_string(),
            r.action_label.clone(),
            r.duration.to_string(),
        ])?;
    }
    writer.flush().map_err(|e| Error::io("<csv sink>", e))?;
    Ok(())
}
