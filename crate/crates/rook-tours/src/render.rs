//! Human-readable output: Unicode box drawing, SVG in the style of circuit
//! diagrams (quarter-circle corner arcs, highlighted straights), and a
//! machine JSON document.

use serde_json::json;

use crate::board::Cell;
use crate::circuit::{CellKind, Circuit};
use crate::codec::{glyph_for_mask, unicode_for_glyph};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Svg,
    Json,
}

impl std::str::FromStr for RenderFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ascii" => Ok(RenderFormat::Ascii),
            "svg" => Ok(RenderFormat::Svg),
            "json" => Ok(RenderFormat::Json),
            other => Err(format!(
                "unknown format {other:?} (expected ascii|svg|json)"
            )),
        }
    }
}

#[derive(Copy, Clone, Debug)]
pub struct RenderOptions {
    pub format: RenderFormat,
    /// SVG cell size in pixels; at least 8 for legibility.
    pub cell_px: u32,
    /// Draw straight cells in a distinct stroke class.
    pub highlight_straights: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            format: RenderFormat::Ascii,
            cell_px: 40,
            highlight_straights: true,
        }
    }
}

/// Renders a circuit into a text document in the requested format.
pub fn render(circuit: &Circuit, options: &RenderOptions) -> String {
    match options.format {
        RenderFormat::Ascii => render_ascii(circuit),
        RenderFormat::Svg => render_svg(circuit, options),
        RenderFormat::Json => render_json(circuit),
    }
}

/// The Unicode image of the RCT glyph grid (no header line).
fn render_ascii(circuit: &Circuit) -> String {
    let dims = circuit.dims();
    let mut out = String::with_capacity(dims.cell_count() * 3 + dims.rows);
    for r in 0..dims.rows {
        for c in 0..dims.cols {
            let mask = circuit.edge_mask_at(r * dims.cols + c);
            let glyph = glyph_for_mask(mask).expect("circuit cells have two edges");
            out.push(unicode_for_glyph(glyph));
        }
        out.push('\n');
    }
    out
}

/// One closed path through all cell centers: straight cells contribute a
/// full-cell line segment, turns a quarter-circle arc of half-cell radius.
/// Straight cells are traced again in an overlay path carrying the
/// `straight` class so stylesheets can highlight them.
fn render_svg(circuit: &Circuit, options: &RenderOptions) -> String {
    assert!(options.cell_px >= 8, "cell_px must be at least 8");
    let dims = circuit.dims();
    let s = options.cell_px as f64;
    let width = dims.cols as f64 * s;
    let height = dims.rows as f64 * s;
    let stats = circuit.stats();

    // Midpoint of the shared edge between two adjacent cells.
    let midpoint = |a: Cell, b: Cell| -> (f64, f64) {
        let ax = (a.col as f64 - 0.5) * s;
        let ay = (a.row as f64 - 0.5) * s;
        let bx = (b.col as f64 - 0.5) * s;
        let by = (b.row as f64 - 0.5) * s;
        ((ax + bx) / 2.0, (ay + by) / 2.0)
    };
    let fmt = |v: f64| {
        if (v - v.round()).abs() < 1e-9 {
            format!("{}", v.round() as i64)
        } else {
            format!("{v:.1}")
        }
    };

    let tour = circuit.tour();
    let n = tour.len();
    let mut path = String::new();
    let mut straights = String::new();
    for i in 0..n {
        let prev = tour[(i + n - 1) % n];
        let cell = tour[i];
        let next = tour[(i + 1) % n];
        let (x0, y0) = midpoint(prev, cell);
        let (x1, y1) = midpoint(cell, next);
        if i == 0 {
            path.push_str(&format!("M {} {}", fmt(x0), fmt(y0)));
        }
        match circuit.classify(cell) {
            CellKind::StraightH | CellKind::StraightV => {
                path.push_str(&format!(" L {} {}", fmt(x1), fmt(y1)));
                straights.push_str(&format!(
                    "M {} {} L {} {} ",
                    fmt(x0),
                    fmt(y0),
                    fmt(x1),
                    fmt(y1)
                ));
            }
            CellKind::TurnCcw | CellKind::TurnCw => {
                // Quarter circle between the two edge midpoints; the sweep
                // flag picks whichever side bulges through the cell center.
                let cx = (cell.col as f64 - 0.5) * s;
                let cy = (cell.row as f64 - 0.5) * s;
                let cross = (x1 - x0) * (cy - y0) - (y1 - y0) * (cx - x0);
                let sweep = if cross > 0.0 { 1 } else { 0 };
                path.push_str(&format!(
                    " A {} {} 0 0 {} {} {}",
                    fmt(s / 2.0),
                    fmt(s / 2.0),
                    sweep,
                    fmt(x1),
                    fmt(y1)
                ));
            }
        }
    }
    path.push_str(" Z");

    let mut doc = String::new();
    doc.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\">\n",
        fmt(width),
        fmt(height + 24.0)
    ));
    doc.push_str("<style>.tour{fill:none;stroke:#333;stroke-width:2}.straight{fill:none;stroke:#26c;stroke-width:4}</style>\n");
    for r in 0..=dims.rows {
        let y = fmt(r as f64 * s);
        doc.push_str(&format!(
            "<line x1=\"0\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"#ccc\"/>\n",
            fmt(width)
        ));
    }
    for c in 0..=dims.cols {
        let x = fmt(c as f64 * s);
        doc.push_str(&format!(
            "<line x1=\"{x}\" y1=\"0\" x2=\"{x}\" y2=\"{}\" stroke=\"#ccc\"/>\n",
            fmt(height)
        ));
    }
    if options.highlight_straights && !straights.is_empty() {
        doc.push_str(&format!(
            "<path class=\"straight\" d=\"{}\"/>\n",
            straights.trim_end()
        ));
    }
    doc.push_str(&format!("<path class=\"tour\" d=\"{path}\"/>\n"));
    doc.push_str(&format!(
        "<text x=\"4\" y=\"{}\" font-family=\"monospace\" font-size=\"14\">straights: {}, turns: {}</text>\n",
        fmt(height + 16.0),
        stats.straights_total,
        stats.turns_total,
    ));
    doc.push_str("</svg>\n");
    doc
}

/// Dims, tour sequence, per-cell kinds (in tour order), and the stats.
fn render_json(circuit: &Circuit) -> String {
    let dims = circuit.dims();
    let tour = circuit.tour();
    let kinds: Vec<_> = tour.iter().map(|&cell| circuit.classify(cell)).collect();
    let stats = circuit.stats();
    let doc = json!({
        "dims": { "rows": dims.rows, "cols": dims.cols },
        "tour": tour.iter().map(|c| [c.row, c.col]).collect::<Vec<_>>(),
        "kinds": kinds,
        "stats": stats,
    });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}
