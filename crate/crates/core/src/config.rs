//! Pipeline configuration.
//!
//! The config file is plain `key = value` lines; `#` starts a comment. Keys
//! match the long CLI flags with `_` in place of `-`:
//!
//! ```text
//! input = match.csv
//! output = out
//! resolution = 10
//! window_width = 5
//! window_step = 1
//! betweenness_mode = weighted
//! normalize = true
//! louvain_seed = 0
//! # south-west and north-east corners
//! poi = 54.0003,-7.0010,54.0011,-6.9990
//! render = true
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytics::BetweennessMode;
use crate::error::{Error, Result};
use crate::ingest::GeoCoordinate;
use crate::twg::SpeedAggregation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub input: Option<PathBuf>,
    pub output: PathBuf,
    /// Cell side, metres.
    pub resolution: f64,
    /// Margin around the data extent when no POI box is set, metres.
    pub margin: f64,
    /// Minutes.
    pub window_width: f64,
    pub window_step: f64,
    /// Minutes; inferred from the last action end when unset.
    pub match_duration: Option<f64>,
    pub betweenness_mode: BetweennessMode,
    /// Which betweenness the heatmaps show; both are always in the reports.
    pub normalize: bool,
    pub louvain_seed: u64,
    /// Corners of the playing area, overriding the data extent.
    pub poi: Option<(GeoCoordinate, GeoCoordinate)>,
    pub render: bool,
    pub speed_aggregation: SpeedAggregation,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            input: None,
            output: PathBuf::from("out"),
            resolution: 10.0,
            margin: 2.0,
            window_width: 5.0,
            window_step: 1.0,
            match_duration: None,
            betweenness_mode: BetweennessMode::Weighted,
            normalize: true,
            louvain_seed: 0,
            poi: None,
            render: true,
            speed_aggregation: SpeedAggregation::Mean,
        }
    }
}

fn parse_num(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Config(format!("{key}: expected a number, got `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected true/false, got `{value}`"))),
    }
}

/// Parses `lat,lon,lat,lon`.
pub fn parse_poi(value: &str) -> Result<(GeoCoordinate, GeoCoordinate)> {
    let parts: Vec<f64> = value
        .split(',')
        .map(|p| parse_num("poi", p.trim()))
        .collect::<Result<_>>()?;
    match parts[..] {
        [a, b, c, d] => {
            let (p, q) = (GeoCoordinate::new(a, b), GeoCoordinate::new(c, d));
            if !p.is_valid() || !q.is_valid() {
                return Err(Error::Config(format!("poi: coordinates out of range in `{value}`")));
            }
            Ok((p, q))
        }
        _ => Err(Error::Config(format!("poi: expected lat,lon,lat,lon, got `{value}`"))),
    }
}

impl PipelineConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "input" => self.input = Some(PathBuf::from(value)),
            "output" => self.output = PathBuf::from(value),
            "resolution" => self.resolution = parse_num(&key, value)?,
            "margin" => self.margin = parse_num(&key, value)?,
            "window_width" => self.window_width = parse_num(&key, value)?,
            "window_step" => self.window_step = parse_num(&key, value)?,
            "match_duration" => self.match_duration = Some(parse_num(&key, value)?),
            "betweenness_mode" => {
                self.betweenness_mode = match value.to_ascii_lowercase().as_str() {
                    "weighted" => BetweennessMode::Weighted,
                    "unweighted" => BetweennessMode::Unweighted,
                    _ => return Err(Error::Config(format!("betweenness_mode: unknown mode `{value}`"))),
                }
            }
            "normalize" => self.normalize = parse_bool(&key, value)?,
            "louvain_seed" | "seed" => {
                self.louvain_seed = value
                    .parse()
                    .map_err(|_| Error::Config(format!("{key}: expected an integer, got `{value}`")))?
            }
            "poi" => self.poi = Some(parse_poi(value)?),
            "render" => self.render = parse_bool(&key, value)?,
            "speed_aggregation" => {
                self.speed_aggregation = match value.to_ascii_lowercase().as_str() {
                    "mean" => SpeedAggregation::Mean,
                    "duration_weighted" => SpeedAggregation::DurationWeighted,
                    _ => return Err(Error::Config(format!("speed_aggregation: unknown value `{value}`"))),
                }
            }
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Applies every setting in `text` on top of `self`.
    pub fn merge_str(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::default();
        cfg.merge_str(&text)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("resolution", self.resolution)?;
        positive("window_width", self.window_width)?;
        positive("window_step", self.window_step)?;
        if let Some(d) = self.match_duration {
            positive("match_duration", d)?;
        }
        if !(0.0..).contains(&self.margin) {
            return Err(Error::Config(format!(
                "margin must be non-negative, got {}",
                self.margin
            )));
        }
        Ok(())
    }

    /// Renders the config back into the file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(p) = &self.input {
            out.push_str(&format!("input = {}\n", p.display()));
        }
        out.push_str(&format!("output = {}\n", self.output.display()));
        out.push_str(&format!("resolution = {}\n", self.resolution));
        out.push_str(&format!("margin = {}\n", self.margin));
        out.push_str(&format!("window_width = {}\n", self.window_width));
        out.push_str(&format!("window_step = {}\n", self.window_step));
        if let Some(d) = self.match_duration {
            out.push_str(&format!("match_duration = {d}\n"));
        }
        let mode = match self.betweenness_mode {
            BetweennessMode::Weighted => "weighted",
            BetweennessMode::Unweighted => "unweighted",
        };
        out.push_str(&format!("betweenness_mode = {mode}\n"));
        out.push_str(&format!("normalize = {}\n", self.normalize));
        out.push_str(&format!("louvain_seed = {}\n", self.louvain_seed));
        if let Some((a, b)) = self.poi {
            out.push_str(&format!("poi = {},{},{},{}\n", a.lat, a.lon, b.lat, b.lon));
        }
        out.push_str(&format!("render = {}\n", self.render));
        let agg = match self.speed_aggregation {
            SpeedAggregation::Mean => "mean",
            SpeedAggregation::DurationWeighted => "duration_weighted",
        };
        out.push_str(&format!("speed_aggregation = {agg}\n"));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_format() {
        let mut c = PipelineConfig::default();
        c.merge_str(
            "# run config\ninput = data/match.csv\nresolution = 8  # metres\nwindow-step = 2\nbetweenness_mode = Unweighted\nnormalize = no\npoi = 54.0,-7.001,54.001,-6.999\n",
        )
        .unwrap();
        assert_eq!(c.input, Some(PathBuf::from("data/match.csv")));
        assert_eq!(c.resolution, 8.0);
        assert_eq!(c.window_step, 2.0);
        assert_eq!(c.betweenness_mode, BetweennessMode::Unweighted);
        assert!(!c.normalize);
        assert_eq!(c.poi.unwrap().1, GeoCoordinate::new(54.001, -6.999));
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = PipelineConfig::default();
        assert!(c.merge_str("resolution = ten").is_err());
        assert!(c.merge_str("colour = red").is_err());
        assert!(c.merge_str("just words").is_err());
        assert!(c.merge_str("poi = 1,2,3").is_err());
        c.window_width = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn text_round_trip() {
        let c = PipelineConfig {
            input: Some("a.csv".into()),
            match_duration: Some(78.0),
            poi: Some((GeoCoordinate::new(54.0, -7.0), GeoCoordinate::new(54.001, -6.998))),
            speed_aggregation: SpeedAggregation::DurationWeighted,
            ..PipelineConfig::default()
        };
        let mut back = PipelineConfig::default();
        back.merge_str(&c.to_text()).unwrap();
        assert_eq!(back, c);
    }
}
