//! The RCT text format: a plain-text serialization of a circuit.
//!
//! Line 1 holds `rows cols` in ASCII decimal separated by one space. Then one
//! line per row with one glyph per cell, and a required trailing newline.
//! Glyphs describe which of a cell's four edges the tour uses:
//!
//! ```text
//! -  left+right      |  up+down
//! F  right+down      7  left+down
//! L  right+up        J  left+up
//! ```
//!
//! The glyph grid is direction-independent, so every circuit has exactly one
//! rendering. A Unicode variant of the same grid is used for display only.

use crate::board::{BoardDims, Cell};
use crate::circuit::{Circuit, EDGE_DOWN, EDGE_LEFT, EDGE_RIGHT, EDGE_UP};

/// Errors from decoding RCT text.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RctError {
    #[error("bad header: {0}")]
    BadHeader(String),
    #[error("unknown glyph at {0}")]
    UnknownGlyph(Cell),
    #[error("edges do not match up at {0}")]
    InconsistentAdjacency(Cell),
    #[error("glyphs describe more than one closed tour")]
    MultipleCycles,
    #[error("glyphs describe an open path")]
    OpenPath,
}

pub(crate) fn glyph_for_mask(mask: u8) -> Option<char> {
    match mask {
        m if m == EDGE_LEFT | EDGE_RIGHT => Some('-'),
        m if m == EDGE_UP | EDGE_DOWN => Some('|'),
        m if m == EDGE_RIGHT | EDGE_DOWN => Some('F'),
        m if m == EDGE_LEFT | EDGE_DOWN => Some('7'),
        m if m == EDGE_RIGHT | EDGE_UP => Some('L'),
        m if m == EDGE_LEFT | EDGE_UP => Some('J'),
        _ => None,
    }
}

pub(crate) fn mask_for_glyph(glyph: char) -> Option<u8> {
    match glyph {
        '-' => Some(EDGE_LEFT | EDGE_RIGHT),
        '|' => Some(EDGE_UP | EDGE_DOWN),
        'F' => Some(EDGE_RIGHT | EDGE_DOWN),
        '7' => Some(EDGE_LEFT | EDGE_DOWN),
        'L' => Some(EDGE_RIGHT | EDGE_UP),
        'J' => Some(EDGE_LEFT | EDGE_UP),
        _ => None,
    }
}

/// Display-only Unicode image of an RCT glyph.
pub(crate) fn unicode_for_glyph(glyph: char) -> char {
    match glyph {
        '-' => '─',
        '|' => '│',
        'F' => '┌',
        '7' => '┐',
        'L' => '└',
        'J' => '┘',
        other => other,
    }
}

/// Serializes a circuit into RCT text. Deterministic: one canonical rendering
/// per circuit.
pub fn serialize_rct(circuit: &Circuit) -> String {
    let dims = circuit.dims();
    let mut out = String::with_capacity(dims.cell_count() + dims.rows + 16);
    out.push_str(&format!("{} {}\n", dims.rows, dims.cols));
    for r in 0..dims.rows {
        for c in 0..dims.cols {
            let mask = circuit.edge_mask_at(r * dims.cols + c);
            out.push(glyph_for_mask(mask).expect("circuit cells have exactly two edges"));
        }
        out.push('\n');
    }
    out
}

/// Parses RCT text back into the unique circuit whose per-cell glyphs match.
pub fn parse_rct(text: &str) -> Result<Circuit, RctError> {
    let mut lines = text.split('\n');
    let header = lines
        .next()
        .ok_or_else(|| RctError::BadHeader("empty input".into()))?;
    let mut parts = header.split(' ');
    let rows: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| RctError::BadHeader(format!("expected `rows cols`, got {header:?}")))?;
    let cols: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| RctError::BadHeader(format!("expected `rows cols`, got {header:?}")))?;
    if parts.next().is_some() || rows == 0 || cols == 0 {
        return Err(RctError::BadHeader(format!(
            "expected `rows cols`, got {header:?}"
        )));
    }
    let dims = BoardDims::new(rows, cols);

    let mut masks = vec![0u8; dims.cell_count()];
    for r in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| RctError::BadHeader(format!("expected {rows} rows of glyphs")))?;
        if line.chars().count() != cols {
            return Err(RctError::BadHeader(format!(
                "row {} has {} glyphs, expected {cols}",
                r + 1,
                line.chars().count()
            )));
        }
        for (c, glyph) in line.chars().enumerate() {
            masks[r * cols + c] =
                mask_for_glyph(glyph).ok_or(RctError::UnknownGlyph(Cell::new(r + 1, c + 1)))?;
        }
    }
    match lines.next() {
        Some("") => {}
        _ => return Err(RctError::BadHeader("missing trailing newline".into())),
    }
    if lines.next().is_some() {
        return Err(RctError::BadHeader(
            "trailing content after glyph grid".into(),
        ));
    }

    // Every edge must be on the board and agreed on by both endpoints. Up and
    // left are checked against the already-scanned neighbour, so a mismatch is
    // reported at the later cell in reading order.
    for r in 0..rows {
        for c in 0..cols {
            let mask = masks[r * cols + c];
            let here = Cell::new(r + 1, c + 1);
            let up_ok = r > 0 && masks[(r - 1) * cols + c] & EDGE_DOWN != 0;
            if (mask & EDGE_UP != 0) != up_ok {
                return Err(RctError::InconsistentAdjacency(here));
            }
            let left_ok = c > 0 && masks[r * cols + c - 1] & EDGE_RIGHT != 0;
            if (mask & EDGE_LEFT != 0) != left_ok {
                return Err(RctError::InconsistentAdjacency(here));
            }
            if mask & EDGE_DOWN != 0 && r + 1 == rows {
                return Err(RctError::InconsistentAdjacency(here));
            }
            if mask & EDGE_RIGHT != 0 && c + 1 == cols {
                return Err(RctError::InconsistentAdjacency(here));
            }
        }
    }

    // Each glyph carries exactly two edges, so the consistent edge set is a
    // disjoint union of cycles; it remains to check there is exactly one.
    let n = dims.cell_count();
    let mut prev = usize::MAX;
    let mut cur = 0usize;
    let mut visited = 1usize;
    loop {
        let mask = masks[cur];
        let mut next = usize::MAX;
        for (bit, step) in [
            (EDGE_UP, cur.wrapping_sub(cols)),
            (EDGE_DOWN, cur + cols),
            (EDGE_LEFT, cur.wrapping_sub(1)),
            (EDGE_RIGHT, cur + 1),
        ] {
            if mask & bit != 0 && step != prev {
                next = step;
                break;
            }
        }
        if next == usize::MAX {
            return Err(RctError::OpenPath);
        }
        if next == 0 {
            break;
        }
        prev = cur;
        cur = next;
        visited += 1;
        if visited > n {
            return Err(RctError::MultipleCycles);
        }
    }
    if visited != n {
        return Err(RctError::MultipleCycles);
    }

    Ok(Circuit::from_edge_masks(dims, &masks))
}
