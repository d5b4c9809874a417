//! SVG heatmaps of per-cell values over the pruned grid.
//!
//! Active cells are coloured squares at their planar position (north up);
//! grid cells without a value in the window are drawn black.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use crate::grid::{CellId, Grid};

const PX_PER_M: f64 = 4.0;
const PAD: f64 = 20.0;
const LEGEND_W: f64 = 170.0;
const TITLE_H: f64 = 24.0;
pub const INACTIVE: &str = "#000000";

/// Viridis anchor colours, low to high.
const VIRIDIS: [(u8, u8, u8); 5] = [
    (0x44, 0x01, 0x54),
    (0x3b, 0x52, 0x8b),
    (0x21, 0x91, 0x8c),
    (0x5e, 0xc9, 0x62),
    (0xfd, 0xe7, 0x25),
];

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

pub enum HeatmapValues<'a> {
    /// Continuous scores such as betweenness.
    Scores(&'a BTreeMap<CellId, f64>),
    /// Community per cell.
    Communities(&'a BTreeMap<CellId, usize>),
}

/// Continuous colour for `t` in [0, 1].
pub fn scale_color(t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let pos = t * (VIRIDIS.len() - 1) as f64;
    let i = (pos.floor() as usize).min(VIRIDIS.len() - 2);
    let f = pos - i as f64;
    let (a, b) = (VIRIDIS[i], VIRIDIS[i + 1]);
    let mix = |x: u8, y: u8| (x as f64 + f * (y as f64 - x as f64)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

/// Categorical colour of community `k`; never black.
pub fn community_color(k: usize) -> String {
    if k < PALETTE.len() {
        return PALETTE[k].to_string();
    }
    // golden-angle hues past the fixed palette
    let hue = (k as f64 * 137.507_764) % 360.0;
    hsl_to_hex(hue, 0.65, 0.55)
}

fn hsl_to_hex(h: f64, s: f64, l: f64) -> String {
    let c = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let hp = h / 60.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    let to = |v: f64| ((v + m) * 255.0).round() as u8;
    format!("#{:02x}{:02x}{:02x}", to(r), to(g), to(b))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_heatmap(grid: &Grid, values: &HeatmapValues<'_>, title: &str) -> String {
    let mut svg = String::new();
    if grid.is_empty() {
        svg.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"240\" height=\"60\" viewBox=\"0 0 240 60\">\n");
        let _ = writeln!(svg, "<title>{}</title>", escape(title));
        svg.push_str(
            "<text x=\"10\" y=\"35\" font-family=\"sans-serif\" font-size=\"14\">no active cells</text>\n</svg>\n",
        );
        return svg;
    }

    let half = grid.resolution / 2.0;
    let min_x = grid
        .cells
        .iter()
        .map(|c| c.centroid_planar.x)
        .fold(f64::INFINITY, f64::min)
        - half;
    let max_x = grid
        .cells
        .iter()
        .map(|c| c.centroid_planar.x)
        .fold(f64::NEG_INFINITY, f64::max)
        + half;
    let min_y = grid
        .cells
        .iter()
        .map(|c| c.centroid_planar.y)
        .fold(f64::INFINITY, f64::min)
        - half;
    let max_y = grid
        .cells
        .iter()
        .map(|c| c.centroid_planar.y)
        .fold(f64::NEG_INFINITY, f64::max)
        + half;
    let map_w = (max_x - min_x) * PX_PER_M;
    let map_h = (max_y - min_y) * PX_PER_M;
    let width = PAD * 2.0 + map_w + LEGEND_W;
    let height = (PAD * 2.0 + TITLE_H + map_h).max(PAD * 2.0 + TITLE_H + 260.0);
    let side = grid.resolution * PX_PER_M;

    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">",
        w = width,
        h = height
    );
    let _ = writeln!(svg, "<title>{}</title>", escape(title));
    let _ = writeln!(
        svg,
        "<text x=\"{PAD}\" y=\"{:.0}\" font-family=\"sans-serif\" font-size=\"14\">{}</text>",
        PAD + 12.0,
        escape(title)
    );

    let max_score = match values {
        HeatmapValues::Scores(s) => s.values().copied().fold(0.0, f64::max),
        HeatmapValues::Communities(_) => 0.0,
    };
    let mut used_communities = BTreeSet::new();
    for cell in &grid.cells {
        let x = PAD + (cell.centroid_planar.x - half - min_x) * PX_PER_M;
        let y = PAD + TITLE_H + (max_y - cell.centroid_planar.y - half) * PX_PER_M;
        let (class, fill) = match values {
            HeatmapValues::Scores(s) => match s.get(&cell.cell_id) {
                Some(&v) => ("cell", scale_color(if max_score > 0.0 { v / max_score } else { 0.0 })),
                None => ("inactive", INACTIVE.to_string()),
            },
            HeatmapValues::Communities(p) => match p.get(&cell.cell_id) {
                Some(&k) => {
                    used_communities.insert(k);
                    ("cell", community_color(k))
                }
                None => ("inactive", INACTIVE.to_string()),
            },
        };
        let _ = writeln!(
            svg,
            "<rect class=\"{class}\" data-cell=\"{}\" x=\"{x:.2}\" y=\"{y:.2}\" width=\"{side:.2}\" height=\"{side:.2}\" fill=\"{fill}\" stroke=\"#ffffff\" stroke-width=\"0.5\"/>",
            cell.cell_id
        );
    }

    let lx = PAD * 1.5 + map_w;
    let ly = PAD + TITLE_H;
    svg.push_str("<g class=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n");
    match values {
        HeatmapValues::Scores(_) => {
            svg.push_str("<defs><linearGradient id=\"scale\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">\n");
            for (i, _) in VIRIDIS.iter().enumerate() {
                let t = i as f64 / (VIRIDIS.len() - 1) as f64;
                let _ = writeln!(svg, "<stop offset=\"{:.2}\" stop-color=\"{}\"/>", t, scale_color(t));
            }
            svg.push_str("</linearGradient></defs>\n");
            let _ = writeln!(
                svg,
                "<rect x=\"{lx:.2}\" y=\"{ly:.2}\" width=\"16\" height=\"200\" fill=\"url(#scale)\"/>"
            );
            let _ = writeln!(
                svg,
                "<text x=\"{:.2}\" y=\"{:.2}\">{:.4}</text>",
                lx + 22.0,
                ly + 10.0,
                max_score
            );
            let _ = writeln!(svg, "<text x=\"{:.2}\" y=\"{:.2}\">0</text>", lx + 22.0, ly + 200.0);
            let _ = writeln!(
                svg,
                "<rect x=\"{lx:.2}\" y=\"{:.2}\" width=\"16\" height=\"16\" fill=\"{INACTIVE}\"/>",
                ly + 214.0
            );
            let _ = writeln!(
                svg,
                "<text x=\"{:.2}\" y=\"{:.2}\">not covered</text>",
                lx + 22.0,
                ly + 226.0
            );
        }
        HeatmapValues::Communities(_) => {
            let mut row = 0.0;
            for &k in &used_communities {
                let _ = writeln!(
                    svg,
                    "<rect x=\"{lx:.2}\" y=\"{:.2}\" width=\"16\" height=\"16\" fill=\"{}\"/>",
                    ly + row,
                    community_color(k)
                );
                let _ = writeln!(
                    svg,
                    "<text x=\"{:.2}\" y=\"{:.2}\">community {k}</text>",
                    lx + 22.0,
                    ly + row + 12.0
                );
                row += 20.0;
            }
            let _ = writeln!(
                svg,
                "<rect x=\"{lx:.2}\" y=\"{:.2}\" width=\"16\" height=\"16\" fill=\"{INACTIVE}\"/>",
                ly + row
            );
            let _ = writeln!(
                svg,
                "<text x=\"{:.2}\" y=\"{:.2}\">not covered</text>",
                lx + 22.0,
                ly + row + 12.0
            );
        }
    }
    svg.push_str("</g>\n</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{generate_grid, BoundingBox, PlanarPoint};
    use crate::ingest::GeoCoordinate;

    fn grid(w: f64, h: f64) -> Grid {
        generate_grid(
            BoundingBox {
                min_corner: PlanarPoint::new(0.0, 0.0),
                max_corner: PlanarPoint::new(w, h),
            },
            10.0,
            GeoCoordinate::new(54.0, -7.0),
        )
        .unwrap()
    }

    fn fills(svg: &str, class: &str) -> Vec<String> {
        svg.lines()
            .filter(|l| l.contains(&format!("class=\"{class}\"")))
            .map(|l| {
                l.split("fill=\"")
                    .nth(1)
                    .unwrap()
                    .split('"')
                    .next()
                    .unwrap()
                    .to_string()
            })
            .collect()
    }

    #[test]
    fn single_cell_max_color() {
        let g = grid(10.0, 10.0);
        let scores: BTreeMap<CellId, f64> = [(0, 1.0)].into_iter().collect();
        let svg = render_heatmap(&g, &HeatmapValues::Scores(&scores), "t");
        assert_eq!(fills(&svg, "cell"), vec!["#fde725".to_string()]);
        assert!(fills(&svg, "inactive").is_empty());
    }

    #[test]
    fn two_communities_two_colors_plus_black() {
        let g = grid(40.0, 10.0);
        let p: BTreeMap<CellId, usize> = [(0, 0), (1, 0), (2, 1)].into_iter().collect();
        let svg = render_heatmap(&g, &HeatmapValues::Communities(&p), "t");
        let mut colors: BTreeSet<String> = fills(&svg, "cell").into_iter().collect();
        assert_eq!(colors.len(), 2);
        colors.extend(fills(&svg, "inactive"));
        assert_eq!(colors.len(), 3);
        assert!(colors.contains(INACTIVE));
    }

    #[test]
    fn empty_grid_notice() {
        let g = grid(10.0, 10.0).retain(&BTreeSet::new());
        let svg = render_heatmap(&g, &HeatmapValues::Scores(&BTreeMap::new()), "t");
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("no active cells"));
    }

    #[test]
    fn palette_is_distinct_and_not_black() {
        let colors: BTreeSet<String> = (0..40).map(community_color).collect();
        assert_eq!(colors.len(), 40);
        assert!(!colors.contains(INACTIVE));
        assert_eq!(scale_color(0.0), "#440154");
        assert_eq!(scale_color(1.0), "#fde725");
    }
}
