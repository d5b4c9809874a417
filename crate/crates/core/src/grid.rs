//! Square tessellation of the playing area.
//!
//! Coordinates are projected to a local east/north plane (equirectangular,
//! metres), covered by a regular lattice of square cells, and each visited
//! coordinate is snapped to its nearest centroid. Cells that nothing snaps to
//! are pruned.

use std::collections::BTreeSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{ActionRecord, GeoCoordinate};

/// Mean Earth radius used by the local projection, metres.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

pub type CellId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarPoint {
    /// Metres east of the projection origin.
    pub x: f64,
    /// Metres north of the projection origin.
    pub y: f64,
}

impl PlanarPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist2(&self, other: &PlanarPoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

pub fn project_to_local(coord: GeoCoordinate, origin: GeoCoordinate) -> PlanarPoint {
    let rad = std::f64::consts::PI / 180.0;
    PlanarPoint {
        x: EARTH_RADIUS_M * (coord.lon - origin.lon) * rad * (origin.lat * rad).cos(),
        y: EARTH_RADIUS_M * (coord.lat - origin.lat) * rad,
    }
}

/// Inverse of [`project_to_local`].
pub fn unproject(point: PlanarPoint, origin: GeoCoordinate) -> GeoCoordinate {
    let rad = std::f64::consts::PI / 180.0;
    GeoCoordinate {
        lat: origin.lat + point.y / (EARTH_RADIUS_M * rad),
        lon: origin.lon + point.x / (EARTH_RADIUS_M * rad * (origin.lat * rad).cos()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min_corner: PlanarPoint,
    pub max_corner: PlanarPoint,
}

impl BoundingBox {
    pub fn width(&self) -> f64 {
        self.max_corner.x - self.min_corner.x
    }

    pub fn height(&self) -> f64 {
        self.max_corner.y - self.min_corner.y
    }
}

/// Smallest axis-aligned box around `points`, grown by `margin` on every side.
pub fn compute_bounding_box(points: &[PlanarPoint], margin: f64) -> Result<BoundingBox> {
    let first = points.first().ok_or(Error::NoCoordinates)?;
    let (mut lo, mut hi) = (*first, *first);
    for p in &points[1..] {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    Ok(BoundingBox {
        min_corner: PlanarPoint::new(lo.x - margin, lo.y - margin),
        max_corner: PlanarPoint::new(hi.x + margin, hi.y + margin),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub cell_id: CellId,
    pub centroid_planar: PlanarPoint,
    pub centroid_geo: GeoCoordinate,
}

/// Placement of the full lattice a grid was cut from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub min_corner: PlanarPoint,
    pub cols: u32,
    pub rows: u32,
}

impl Lattice {
    pub fn cell_id(&self, col: u32, row: u32) -> CellId {
        row * self.cols + col
    }

    pub fn col_row(&self, id: CellId) -> (u32, u32) {
        (id % self.cols, id / self.cols)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    /// Sorted by `cell_id`.
    pub cells: Vec<Cell>,
    /// Cell side length, metres.
    pub resolution: f64,
    /// Projection origin.
    pub origin: GeoCoordinate,
    pub lattice: Lattice,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// True when no cell of the lattice has been pruned.
    pub fn is_complete(&self) -> bool {
        !self.cells.is_empty() && self.cells.len() as u64 == self.lattice.cols as u64 * self.lattice.rows as u64
    }

    pub fn cell(&self, id: CellId) -> Option<&Cell> {
        self.cells
            .binary_search_by_key(&id, |c| c.cell_id)
            .ok()
            .map(|i| &self.cells[i])
    }

    pub fn project(&self, coord: GeoCoordinate) -> PlanarPoint {
        project_to_local(coord, self.origin)
    }

    /// Restricts the grid to `keep`, preserving ids.
    pub fn retain(&self, keep: &BTreeSet<CellId>) -> Grid {
        Grid {
            cells: self
                .cells
                .iter()
                .filter(|c| keep.contains(&c.cell_id))
                .cloned()
                .collect(),
            ..self.clone()
        }
    }

    /// CSV with header `cell_id,centroid_lat,centroid_lon,centroid_x,centroid_y`.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["cell_id", "centroid_lat", "centroid_lon", "centroid_x", "centroid_y"])?;
        for c in &self.cells {
            w.write_record([
                c.cell_id.to_string(),
                c.centroid_geo.lat.to_string(),
                c.centroid_geo.lon.to_string(),
                c.centroid_planar.x.to_string(),
                c.centroid_planar.y.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<grid csv>", e))?;
        Ok(())
    }

    /// Reads cells back from [`Grid::write_csv`] output.
    pub fn read_csv<R: std::io::Read>(source: R, resolution: f64, origin: GeoCoordinate) -> Result<Grid> {
        let mut r = csv::Reader::from_reader(source);
        let mut cells = Vec::new();
        for row in r.records() {
            let row = row?;
            let num = |i: usize| -> Result<f64> {
                row.get(i)
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| Error::InvalidGrid(format!("bad grid row {:?}", row)))
            };
            let cell_id: CellId = row
                .get(0)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::InvalidGrid(format!("bad grid row {:?}", row)))?;
            cells.push(Cell {
                cell_id,
                centroid_geo: GeoCoordinate::new(num(1)?, num(2)?),
                centroid_planar: PlanarPoint::new(num(3)?, num(4)?),
            });
        }
        cells.sort_by_key(|c| c.cell_id);
        // placement of pruned cells in the original lattice is not recoverable;
        // an empty lattice keeps assignment on the full-scan path
        let min_x = cells.iter().map(|c| c.centroid_planar.x).fold(f64::INFINITY, f64::min);
        let min_y = cells.iter().map(|c| c.centroid_planar.y).fold(f64::INFINITY, f64::min);
        let lattice = Lattice {
            min_corner: PlanarPoint::new(min_x - resolution / 2.0, min_y - resolution / 2.0),
            cols: 0,
            rows: 0,
        };
        Ok(Grid {
            cells,
            resolution,
            origin,
            lattice,
        })
    }
}

/// Lattice count along one axis: `ceil(extent / resolution)`, at least 1.
fn lattice_count(extent: f64, resolution: f64) -> u32 {
    // absorb rounding in exact multiples such as 60.000000000001 / 10
    let n = (extent / resolution - 1e-9).ceil();
    n.max(1.0) as u32
}

/// Covers `bbox` with square cells of side `resolution`, ids row-major from the
/// south-west corner.
pub fn generate_grid(bbox: BoundingBox, resolution: f64, origin: GeoCoordinate) -> Result<Grid> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "resolution must be positive, got {resolution}"
        )));
    }
    let (w, h) = (bbox.width(), bbox.height());
    if !(w > 0.0 && h > 0.0) || !w.is_finite() || !h.is_finite() {
        return Err(Error::InvalidGrid(format!("degenerate bounding box {w} x {h}")));
    }
    let cols = lattice_count(w, resolution);
    let rows = lattice_count(h, resolution);
    let lattice = Lattice {
        min_corner: bbox.min_corner,
        cols,
        rows,
    };
    let mut cells = Vec::with_capacity((cols * rows) as usize);
    for row in 0..rows {
        for col in 0..cols {
            let centroid = PlanarPoint::new(
                bbox.min_corner.x + (col as f64 + 0.5) * resolution,
                bbox.min_corner.y + (row as f64 + 0.5) * resolution,
            );
            cells.push(Cell {
                cell_id: lattice.cell_id(col, row),
                centroid_planar: centroid,
                centroid_geo: unproject(centroid, origin),
            });
        }
    }
    Ok(Grid {
        cells,
        resolution,
        origin,
        lattice,
    })
}

/// Nearest centroid by Euclidean distance; ties go to the lowest id.
///
/// On a complete lattice only the 3x3 neighbourhood of the containing cell is
/// examined; pruned grids are scanned in full.
pub fn assign_cell(point: PlanarPoint, grid: &Grid) -> CellId {
    assert!(!grid.is_empty(), "assign_cell on an empty grid");
    if grid.is_complete() {
        let lat = &grid.lattice;
        let fc = ((point.x - lat.min_corner.x) / grid.resolution).floor();
        let fr = ((point.y - lat.min_corner.y) / grid.resolution).floor();
        let col = fc.clamp(0.0, (lat.cols - 1) as f64) as i64;
        let row = fr.clamp(0.0, (lat.rows - 1) as f64) as i64;
        let mut best: Option<(f64, CellId)> = None;
        for r in (row - 1)..=(row + 1) {
            for c in (col - 1)..=(col + 1) {
                if r < 0 || c < 0 || r >= lat.rows as i64 || c >= lat.cols as i64 {
                    continue;
                }
                let id = lat.cell_id(c as u32, r as u32);
                let d = grid.cells[id as usize].centroid_planar.dist2(&point);
                if best.is_none_or(|(bd, bid)| d < bd || (d == bd && id < bid)) {
                    best = Some((d, id));
                }
            }
        }
        return best.map(|(_, id)| id).unwrap();
    }
    scan_nearest(point, &grid.cells)
}

fn scan_nearest(point: PlanarPoint, cells: &[Cell]) -> CellId {
    let mut best = (f64::INFINITY, CellId::MAX);
    for c in cells {
        let d = c.centroid_planar.dist2(&point);
        if d < best.0 || (d == best.0 && c.cell_id < best.1) {
            best = (d, c.cell_id);
        }
    }
    best.1
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellAnnotatedAction {
    pub action: ActionRecord,
    pub start_cell: CellId,
    pub end_cell: CellId,
}

/// Snaps every action's endpoints to cells and drops cells no endpoint used.
pub fn prune_and_annotate(records: &[ActionRecord], grid: &Grid) -> (Grid, Vec<CellAnnotatedAction>) {
    if grid.is_empty() {
        return (grid.clone(), Vec::new());
    }
    let mut used = BTreeSet::new();
    let annotated: Vec<CellAnnotatedAction> = records
        .iter()
        .map(|a| {
            let start_cell = assign_cell(grid.project(a.start_coord), grid);
            let end_cell = assign_cell(grid.project(a.end_coord), grid);
            used.insert(start_cell);
            used.insert(end_cell);
            CellAnnotatedAction {
                action: a.clone(),
                start_cell,
                end_cell,
            }
        })
        .collect();
    (grid.retain(&used), annotated)
}

/// Mean latitude/longitude over all action endpoints.
pub fn data_centroid(records: &[ActionRecord]) -> Option<GeoCoordinate> {
    if records.is_empty() {
        return None;
    }
    let n = (records.len() * 2) as f64;
    let (lat, lon) = records.iter().fold((0.0, 0.0), |(la, lo), r| {
        (
            la + r.start_coord.lat + r.end_coord.lat,
            lo + r.start_coord.lon + r.end_coord.lon,
        )
    });
    Some(GeoCoordinate::new(lat / n, lon / n))
}

/// Builds the unpruned grid for a dataset: projection around the data centroid
/// (or the centre of `poi`), extent from `poi` when given, otherwise from the
/// data grown by `margin`.
pub fn grid_for_records(
    records: &[ActionRecord],
    resolution: f64,
    margin: f64,
    poi: Option<(GeoCoordinate, GeoCoordinate)>,
) -> Result<Grid> {
    match poi {
        Some((a, b)) => {
            let origin = GeoCoordinate::new((a.lat + b.lat) / 2.0, (a.lon + b.lon) / 2.0);
            let bbox = compute_bounding_box(&[project_to_local(a, origin), project_to_local(b, origin)], 0.0)?;
            generate_grid(bbox, resolution, origin)
        }
        None => {
            let origin = data_centroid(records).ok_or(Error::NoCoordinates)?;
            let points: Vec<PlanarPoint> = records
                .iter()
                .flat_map(|r| {
                    [
                        project_to_local(r.start_coord, origin),
                        project_to_local(r.end_coord, origin),
                    ]
                })
                .collect();
            let bbox = compute_bounding_box(&points, margin)?;
            generate_grid(bbox, resolution, origin)
        }
    }
}
