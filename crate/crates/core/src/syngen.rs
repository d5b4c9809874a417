//! Seeded synthetic matches with known ground truth.
//!
//! Players walk the pitch in planar metres as chains of back-to-back actions;
//! positions are converted to lat/lon around a fixed origin so generated data
//! goes through the same projection and grid code as real exports.
//!
//! Scenarios:
//! - `uniform`: every player roams the whole pitch.
//! - `two_zones`: players are confined to two halves separated by a 20 m gap
//!   and cross only at `crossing_rate` per action.
//! - `bridge`: as `two_zones`, but every crossing passes through one point at
//!   the centre of the pitch (in, then out).
//! - `corridor`: half of the actions starting in a band along the long axis
//!   are fast runs along the band.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{unproject, PlanarPoint};
use crate::ingest::{ActionRecord, GeoCoordinate};

/// Projection origin for generated data; the pitch is centred on it.
pub const ORIGIN: GeoCoordinate = GeoCoordinate { lat: 54.0, lon: -7.0 };

/// Upper clip for generated speeds, m/s.
pub const MAX_SPEED: f64 = 9.5;

/// Empty strip between the two halves in zone scenarios, metres.
pub const ZONE_GAP: f64 = 20.0;

/// Half-height of the fast band in the corridor scenario, metres.
pub const CORRIDOR_HALF_WIDTH: f64 = 7.5;

/// Share of actions starting in the corridor band that are fast runs along it;
/// the rest follow the ordinary speed mix and may leave the band.
pub const CORRIDOR_FAST_SHARE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Uniform,
    TwoZones,
    Bridge,
    Corridor,
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uniform" => Ok(Scenario::Uniform),
            "two_zones" | "two-zones" => Ok(Scenario::TwoZones),
            "bridge" => Ok(Scenario::Bridge),
            "corridor" => Ok(Scenario::Corridor),
            other => Err(Error::Scenario(format!("unknown scenario `{other}`"))),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Uniform => "uniform",
            Scenario::TwoZones => "two_zones",
            Scenario::Bridge => "bridge",
            Scenario::Corridor => "corridor",
        })
    }
}

/// Speed distribution of one action label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelSpeed {
    pub label: String,
    pub mean: f64,
    pub stddev: f64,
    /// Relative frequency of the label.
    pub weight: f64,
}

impl LabelSpeed {
    fn new(label: &str, mean: f64, stddev: f64, weight: f64) -> Self {
        Self {
            label: label.to_string(),
            mean,
            stddev,
            weight,
        }
    }
}

/// Per-label speed models. The defaults give a whole-match mean near 1.9 m/s,
/// roughly 9 km per player over 78 minutes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedModel {
    pub labels: Vec<LabelSpeed>,
}

impl Default for SpeedModel {
    fn default() -> Self {
        Self {
            labels: vec![
                LabelSpeed::new("Walking", 1.1, 0.3, 0.60),
                LabelSpeed::new("Jogging", 2.4, 0.4, 0.27),
                LabelSpeed::new("Running", 4.2, 0.6, 0.10),
                LabelSpeed::new("Sprinting", 6.5, 0.8, 0.03),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub scenario: Scenario,
    pub players: u32,
    /// Minutes.
    pub duration: f64,
    /// Pitch length (x) and width (y), metres.
    pub pitch_length: f64,
    pub pitch_width: f64,
    pub seed: u64,
    /// Mean actions per player per minute.
    pub action_rate: f64,
    pub speed_model: SpeedModel,
    /// Probability per action of a cross-half move (zone scenarios only).
    pub crossing_rate: f64,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self {
            scenario: Scenario::Uniform,
            players: 15,
            duration: 78.0,
            pitch_length: 140.0,
            pitch_width: 85.0,
            seed: 0,
            action_rate: 11.6,
            speed_model: SpeedModel::default(),
            crossing_rate: 0.0,
        }
    }
}

impl ScenarioSpec {
    /// Defaults for `scenario`, including its usual crossing rate.
    pub fn for_scenario(scenario: Scenario, seed: u64) -> Self {
        let crossing_rate = match scenario {
            Scenario::TwoZones => 0.001,
            Scenario::Bridge => 0.03,
            _ => 0.0,
        };
        Self {
            scenario,
            seed,
            crossing_rate,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Scenario(msg));
        if self.players < 1 {
            return bad("players must be at least 1".into());
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return bad(format!("duration must be positive, got {}", self.duration));
        }
        for (name, v) in [("length", self.pitch_length), ("width", self.pitch_width)] {
            if !(50.0..=200.0).contains(&v) {
                return bad(format!("pitch {name} {v} outside [50, 200] m"));
            }
        }
        if !(self.action_rate.is_finite() && self.action_rate >= 0.0) {
            return bad(format!("action rate must be non-negative, got {}", self.action_rate));
        }
        if !(0.0..=1.0).contains(&self.crossing_rate) {
            return bad(format!("crossing rate {} outside [0, 1]", self.crossing_rate));
        }
        if self.speed_model.labels.is_empty()
            || self
                .speed_model
                .labels
                .iter()
                .any(|l| !(0.0..).contains(&l.weight) || !(0.0..).contains(&l.stddev) || !l.mean.is_finite())
            || self.speed_model.labels.iter().map(|l| l.weight).sum::<f64>() <= 0.0
        {
            return bad("speed model needs labels with non-negative weights and stddevs".into());
        }
        Ok(())
    }

    fn midline_x(&self) -> f64 {
        self.pitch_length / 2.0
    }

    /// Planar pitch frame to geographic coordinates (pitch centred on [`ORIGIN`]).
    pub fn to_geo(&self, p: PlanarPoint) -> GeoCoordinate {
        let g = unproject(
            PlanarPoint::new(p.x - self.pitch_length / 2.0, p.y - self.pitch_width / 2.0),
            ORIGIN,
        );
        GeoCoordinate::new(round_to(g.lat, 1e7), round_to(g.lon, 1e7))
    }
}

/// Known structure of a generated match, in geographic coordinates.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub scenario: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_communities: Option<usize>,
    /// Longitude of the line separating the two halves.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub midline_lon: Option<f64>,
    /// Number of cross-half actions generated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossings: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bridge_cell: Option<GeoCoordinate>,
    /// Points spaced every 10 m along the centre of the fast band.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corridor_cells: Option<Vec<GeoCoordinate>>,
    /// Latitude range of the fast band.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corridor_lat_range: Option<(f64, f64)>,
}

impl GroundTruth {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&serde_json::to_value(self)?)?)
    }
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub records: Vec<ActionRecord>,
    pub truth: GroundTruth,
}

fn round_to(x: f64, scale: f64) -> f64 {
    (x * scale).round() / scale
}

#[derive(Clone, Copy)]
struct Zone {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Zone {
    fn clamp(&self, p: PlanarPoint) -> PlanarPoint {
        PlanarPoint::new(p.x.clamp(self.x0, self.x1), p.y.clamp(self.y0, self.y1))
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> PlanarPoint {
        PlanarPoint::new(rng.gen_range(self.x0..=self.x1), rng.gen_range(self.y0..=self.y1))
    }
}

struct Generator<'a> {
    spec: &'a ScenarioSpec,
    rng: ChaCha8Rng,
    records: Vec<ActionRecord>,
    crossings: usize,
}

struct PlayerState {
    id: u32,
    pos: PlanarPoint,
    geo: GeoCoordinate,
    /// Tenths of a second.
    clock: u64,
    zone: usize,
}

impl<'a> Generator<'a> {
    fn zones(&self) -> Vec<Zone> {
        let s = self.spec;
        let full = Zone {
            x0: 0.0,
            x1: s.pitch_length,
            y0: 0.0,
            y1: s.pitch_width,
        };
        match s.scenario {
            Scenario::Uniform | Scenario::Corridor => vec![full],
            Scenario::TwoZones | Scenario::Bridge => vec![
                Zone {
                    x1: s.midline_x() - ZONE_GAP / 2.0,
                    ..full
                },
                Zone {
                    x0: s.midline_x() + ZONE_GAP / 2.0,
                    ..full
                },
            ],
        }
    }

    fn pick_label(&mut self, fast: bool) -> usize {
        let model = &self.spec.speed_model;
        if fast {
            // upper half of the model by mean
            let mut idx: Vec<usize> = (0..model.labels.len()).collect();
            idx.sort_by(|&a, &b| model.labels[a].mean.total_cmp(&model.labels[b].mean));
            let upper = &idx[idx.len() / 2..];
            return upper[self.rng.gen_range(0..upper.len())];
        }
        let total: f64 = model.labels.iter().map(|l| l.weight).sum();
        let mut r = self.rng.gen_range(0.0..total);
        for (i, l) in model.labels.iter().enumerate() {
            if r < l.weight {
                return i;
            }
            r -= l.weight;
        }
        model.labels.len() - 1
    }

    fn draw_speed(&mut self, label: usize) -> f64 {
        let l = &self.spec.speed_model.labels[label];
        let speed = match Normal::new(l.mean, l.stddev) {
            Ok(dist) => {
                // truncate by rejection, clip as a fallback
                let mut v = dist.sample(&mut self.rng);
                for _ in 0..16 {
                    if (0.0..=MAX_SPEED).contains(&v) {
                        break;
                    }
                    v = dist.sample(&mut self.rng);
                }
                v
            }
            Err(_) => l.mean,
        };
        round_to(speed.clamp(0.0, MAX_SPEED), 100.0)
    }

    fn draw_duration_tenths(&mut self) -> u64 {
        let mean = 60.0 / self.spec.action_rate;
        let d = mean * self.rng.gen_range(0.5..1.5);
        ((d * 10.0).round() as u64).max(1)
    }

    fn push(&mut self, p: &mut PlayerState, end: PlanarPoint, tenths: u64, label: usize, speed: f64) {
        let end_geo = self.spec.to_geo(end);
        let start_time = p.clock as f64 / 10.0;
        let end_time = (p.clock + tenths) as f64 / 10.0;
        self.records.push(ActionRecord {
            player_id: p.id,
            start_time,
            end_time,
            start_coord: p.geo,
            end_coord: end_geo,
            avg_speed: speed,
            action_label: self.spec.speed_model.labels[label].label.clone(),
            duration: tenths as f64 / 10.0,
        });
        p.clock += tenths;
        p.pos = end;
        p.geo = end_geo;
    }

    fn run(mut self) -> Generated {
        let spec = self.spec;
        let limit = (spec.duration * 600.0).round() as u64;
        let zones = self.zones();
        let bridge = PlanarPoint::new(spec.midline_x(), spec.pitch_width / 2.0);
        let band = (
            spec.pitch_width / 2.0 - CORRIDOR_HALF_WIDTH,
            spec.pitch_width / 2.0 + CORRIDOR_HALF_WIDTH,
        );

        for id in 1..=spec.players {
            let zone = (id as usize - 1) % zones.len();
            let pos = zones[zone].sample(&mut self.rng);
            let mut p = PlayerState {
                id,
                pos,
                geo: spec.to_geo(pos),
                clock: 0,
                zone,
            };
            if spec.action_rate <= 0.0 {
                continue;
            }
            loop {
                let tenths = self.draw_duration_tenths();
                if p.clock + tenths > limit {
                    break;
                }
                let crossing = zones.len() == 2 && self.rng.gen_bool(spec.crossing_rate);
                if crossing {
                    let other = 1 - p.zone;
                    let label = self.pick_label(false);
                    let speed = self.draw_speed(label);
                    match spec.scenario {
                        Scenario::Bridge => {
                            // in to the bridge point, then out into the other half
                            self.push(&mut p, bridge, tenths, label, speed);
                            let out_tenths = self.draw_duration_tenths();
                            if p.clock + out_tenths > limit {
                                break;
                            }
                            let z = zones[other];
                            let dx = self.rng.gen_range(0.0..30.0);
                            let exit = z.clamp(PlanarPoint::new(
                                if other == 0 { z.x1 - dx } else { z.x0 + dx },
                                bridge.y + self.rng.gen_range(-25.0..25.0),
                            ));
                            let speed = self.draw_speed(label);
                            self.push(&mut p, exit, out_tenths, label, speed);
                        }
                        _ => {
                            let z = zones[other];
                            let dx = self.rng.gen_range(0.0..15.0);
                            let target = z.clamp(PlanarPoint::new(
                                if other == 0 { z.x1 - dx } else { z.x0 + dx },
                                p.pos.y + self.rng.gen_range(-10.0..10.0),
                            ));
                            self.push(&mut p, target, tenths, label, speed);
                        }
                    }
                    p.zone = other;
                    self.crossings += 1;
                    continue;
                }

                let in_band = spec.scenario == Scenario::Corridor
                    && (band.0..=band.1).contains(&p.pos.y)
                    && self.rng.gen_bool(CORRIDOR_FAST_SHARE);
                let label = self.pick_label(in_band);
                let speed = self.draw_speed(label);
                let heading = if in_band {
                    let along = if self.rng.gen_bool(0.5) {
                        0.0
                    } else {
                        std::f64::consts::PI
                    };
                    along + self.rng.gen_range(-0.1..0.1)
                } else {
                    self.rng.gen_range(0.0..std::f64::consts::TAU)
                };
                let dist = speed * tenths as f64 / 10.0;
                let mut end = zones[p.zone].clamp(PlanarPoint::new(
                    p.pos.x + dist * heading.cos(),
                    p.pos.y + dist * heading.sin(),
                ));
                if in_band {
                    end.y = end.y.clamp(band.0, band.1);
                }
                self.push(&mut p, end, tenths, label, speed);
            }
        }

        self.records.sort_by(|a, b| {
            a.start_time
                .total_cmp(&b.start_time)
                .then(a.player_id.cmp(&b.player_id))
        });

        let midline_lon = spec.to_geo(PlanarPoint::new(spec.midline_x(), 0.0)).lon;
        let mut truth = GroundTruth {
            scenario: spec.scenario.to_string(),
            ..GroundTruth::default()
        };
        match spec.scenario {
            Scenario::Uniform => {}
            Scenario::TwoZones => {
                truth.expected_communities = Some(2);
                truth.midline_lon = Some(midline_lon);
                truth.crossings = Some(self.crossings);
            }
            Scenario::Bridge => {
                truth.midline_lon = Some(midline_lon);
                truth.crossings = Some(self.crossings);
                truth.bridge_cell = Some(spec.to_geo(bridge));
            }
            Scenario::Corridor => {
                let y = spec.pitch_width / 2.0;
                let steps = (spec.pitch_length / 10.0).floor() as usize;
                truth.corridor_cells = Some(
                    (0..steps)
                        .map(|i| spec.to_geo(PlanarPoint::new(5.0 + 10.0 * i as f64, y)))
                        .collect(),
                );
                truth.corridor_lat_range = Some((
                    spec.to_geo(PlanarPoint::new(0.0, band.0)).lat,
                    spec.to_geo(PlanarPoint::new(0.0, band.1)).lat,
                ));
            }
        }
        Generated {
            records: self.records,
            truth,
        }
    }
}

/// Generates a match. Same spec and seed give identical output.
pub fn generate(spec: &ScenarioSpec) -> Result<Generated> {
    spec.validate()?;
    let generator = Generator {
        spec,
        rng: ChaCha8Rng::seed_from_u64(spec.seed),
        records: Vec::new(),
        crossings: 0,
    };
    Ok(generator.run())
}
