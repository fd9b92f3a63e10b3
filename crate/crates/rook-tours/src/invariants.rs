//! Checkers for the structural properties every valid circuit satisfies:
//! the interior-point count, the global turn balance, per-line turn parity,
//! boundary crossing alternation, the per-row mod-4 signature, and the
//! corner minimums for turns and straights.
//!
//! Every checker returns evidence rather than a bare boolean, so the same
//! functions serve the test suites, the `check` command, and as ground truth
//! for search pruning. Two deliberately different computations back the
//! interior-point check (scanline parity and the shoelace area), guarding
//! against orientation bugs in either.
//!
//! Vocabulary: *grid points* are cell centers (the vertices of the tour
//! polygon); *corner points* are the vertices of the cell lattice, the
//! (rows+1) x (cols+1) points between cells.

use serde::Serialize;

use crate::board::{BoardDims, Cell};
use crate::circuit::{Circuit, LineCounts};

/// Which side of the board a corner sub-square is anchored at.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Corner {
    Tl,
    Tr,
    Bl,
    Br,
}

pub const CORNERS: [Corner; 4] = [Corner::Tl, Corner::Tr, Corner::Bl, Corner::Br];

/// Axis of a boundary between two adjacent lines of cells.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    RowBoundary,
    ColBoundary,
}

/// Number of lattice corner points strictly inside the closed tour polygon,
/// by scanline crossing parity against the circuit's vertical edges.
pub fn interior_corner_count(circuit: &Circuit) -> usize {
    let dims = circuit.dims();
    let mut total = 0;
    for k in 1..dims.rows {
        // Corner points on the lattice line between rows k and k+1; the one
        // at offset j lies right of column j. A leftward ray from it crosses
        // exactly the tour edges that cross this boundary at columns <= j.
        let mut parity = false;
        for j in 1..dims.cols {
            if circuit.has_edge(Cell::new(k, j), Cell::new(k + 1, j)) {
                parity = !parity;
            }
            if parity {
                total += 1;
            }
        }
    }
    total
}

/// Unsigned shoelace area of the polygon through all cell centers.
pub fn enclosed_area(circuit: &Circuit) -> usize {
    let tour = circuit.tour();
    let mut twice: i64 = 0;
    for i in 0..tour.len() {
        let a = tour[i];
        let b = tour[(i + 1) % tour.len()];
        twice += a.col as i64 * b.row as i64 - b.col as i64 * a.row as i64;
    }
    (twice.abs() / 2) as usize
}

/// Global counter-clockwise and clockwise turn totals. For every circuit in
/// canonical direction the difference is exactly 4: the turns of a simple
/// closed curve sum to one full revolution.
pub fn turn_balance(circuit: &Circuit) -> (usize, usize) {
    let stats = circuit.stats();
    (stats.ccw_total, stats.cw_total)
}

#[derive(Clone, Debug, Serialize)]
pub struct LineParity {
    pub index: usize,
    pub turns: usize,
    pub straights: usize,
    /// Turn counts are even in every row and column.
    pub turns_even: bool,
    /// Straight count parity equals the line length parity.
    pub straights_parity_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LineParityReport {
    pub rows: Vec<LineParity>,
    pub cols: Vec<LineParity>,
    pub pass: bool,
}

fn line_parity(index: usize, counts: &LineCounts, len: usize) -> LineParity {
    LineParity {
        index,
        turns: counts.turns(),
        straights: counts.straights(),
        turns_even: counts.turns() % 2 == 0,
        straights_parity_ok: counts.straights() % 2 == len % 2,
    }
}

/// Turn count per row and per column with the evenness verdicts.
pub fn line_turn_parity(circuit: &Circuit) -> LineParityReport {
    let dims = circuit.dims();
    let stats = circuit.stats();
    let rows: Vec<_> = stats
        .per_row
        .iter()
        .enumerate()
        .map(|(i, counts)| line_parity(i + 1, counts, dims.cols))
        .collect();
    let cols: Vec<_> = stats
        .per_col
        .iter()
        .enumerate()
        .map(|(i, counts)| line_parity(i + 1, counts, dims.rows))
        .collect();
    let pass = rows
        .iter()
        .chain(cols.iter())
        .all(|line| line.turns_even && line.straights_parity_ok);
    LineParityReport { rows, cols, pass }
}

/// The entry/exit pattern across one boundary. Bit 1 is an entry (crossing
/// away from the anchored upper-left corner: downward for row boundaries),
/// bit 0 an exit, read left to right.
#[derive(Clone, Debug, Serialize)]
pub struct CrossingSequence {
    pub boundary: usize,
    pub axis: Axis,
    pub bits: Vec<u8>,
}

impl CrossingSequence {
    pub fn half_length(&self) -> usize {
        self.bits.len() / 2
    }

    /// Whether the sequence is `1 0 1 0 ...`: entries and exits strictly
    /// alternating starting with an entry.
    pub fn is_alternating(&self) -> bool {
        self.bits.len() % 2 == 0
            && self
                .bits
                .iter()
                .enumerate()
                .all(|(i, &b)| b == (1 - i as u8 % 2))
    }
}

/// Crossing directions over the boundary between lines `k` and `k+1`.
/// Column boundaries are read off the transposed, re-canonicalized circuit;
/// the row-boundary statement then applies verbatim.
pub fn crossing_sequence(circuit: &Circuit, k: usize, axis: Axis) -> CrossingSequence {
    match axis {
        Axis::RowBoundary => {
            let dims = circuit.dims();
            assert!(k >= 1 && k < dims.rows, "boundary index out of range");
            let mut bits = Vec::new();
            for c in 1..=dims.cols {
                let above = Cell::new(k, c);
                let below = Cell::new(k + 1, c);
                if circuit.successor(above) == below {
                    bits.push(1);
                } else if circuit.successor(below) == above {
                    bits.push(0);
                }
            }
            CrossingSequence {
                boundary: k,
                axis,
                bits,
            }
        }
        Axis::ColBoundary => {
            let transposed = circuit.transposed();
            let mut seq = crossing_sequence(&transposed, k, Axis::RowBoundary);
            seq.axis = Axis::ColBoundary;
            seq
        }
    }
}

/// Classification quadruple of one row with its mod-4 verdict.
#[derive(Clone, Debug, Serialize)]
pub struct RowSignature {
    pub row: usize,
    pub counts: LineCounts,
    /// (ccw + horizontal - cw - vertical) mod 4.
    pub residue: usize,
    /// cols mod 4.
    pub expected: usize,
    /// cw + vertical is even in every row (the intermediate fact the mod-4
    /// statement rests on).
    pub cw_plus_vertical_even: bool,
    pub pass: bool,
}

/// The mod-4 row signature: in canonical direction, counter-clockwise turns
/// plus horizontal straights minus the other two kinds matches the row
/// length mod 4.
pub fn row_signature(circuit: &Circuit, k: usize) -> RowSignature {
    let dims = circuit.dims();
    assert!(k >= 1 && k <= dims.rows, "row index out of range");
    let counts = circuit.stats().per_row[k - 1];
    signature_from_counts(k, counts, dims.cols)
}

fn signature_from_counts(row: usize, counts: LineCounts, len: usize) -> RowSignature {
    let value =
        counts.ccw as i64 + counts.horizontal as i64 - counts.cw as i64 - counts.vertical as i64;
    let residue = value.rem_euclid(4) as usize;
    let expected = len % 4;
    let cw_plus_vertical_even = (counts.cw + counts.vertical) % 2 == 0;
    RowSignature {
        row,
        counts,
        residue,
        expected,
        cw_plus_vertical_even,
        pass: residue == expected && cw_plus_vertical_even,
    }
}

/// One row of the corner ledgers: objective count in the corner-anchored
/// sub-square against its proved floor.
#[derive(Clone, Debug, Serialize)]
pub struct CornerBoundEntry {
    pub corner: Corner,
    /// Side length of the sub-square.
    pub size: usize,
    pub count: usize,
    pub bound: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CornerLedger {
    /// Every s-by-s board corner holds at least s turns.
    pub turns: Vec<CornerBoundEntry>,
    /// Every 2s-by-2s board corner holds at least s straights.
    pub straights: Vec<CornerBoundEntry>,
    pub pass: bool,
}

/// Builds the full (corner, size, count, bound) table for both corner
/// minimums.
pub fn corner_bounds(circuit: &Circuit) -> CornerLedger {
    let dims = circuit.dims();
    let (rows, cols) = (dims.rows, dims.cols);
    // Prefix sums of turn indicators over the cell grid.
    let mut prefix = vec![vec![0usize; cols + 1]; rows + 1];
    for r in 1..=rows {
        for c in 1..=cols {
            let turn = circuit.classify(Cell::new(r, c)).is_turn() as usize;
            prefix[r][c] = prefix[r - 1][c] + prefix[r][c - 1] - prefix[r - 1][c - 1] + turn;
        }
    }
    let rect_turns = |r0: usize, c0: usize, r1: usize, c1: usize| {
        prefix[r1][c1] + prefix[r0 - 1][c0 - 1] - prefix[r0 - 1][c1] - prefix[r1][c0 - 1]
    };
    let corner_rect = |corner: Corner, side: usize| match corner {
        Corner::Tl => (1, 1, side, side),
        Corner::Tr => (1, cols - side + 1, side, cols),
        Corner::Bl => (rows - side + 1, 1, rows, side),
        Corner::Br => (rows - side + 1, cols - side + 1, rows, cols),
    };

    let mut turns = Vec::new();
    for s in 1..=rows.min(cols) {
        for corner in CORNERS {
            let (r0, c0, r1, c1) = corner_rect(corner, s);
            let count = rect_turns(r0, c0, r1, c1);
            turns.push(CornerBoundEntry {
                corner,
                size: s,
                count,
                bound: s,
                ok: count >= s,
            });
        }
    }
    let mut straights = Vec::new();
    let mut s = 1;
    while 2 * s <= rows.min(cols) {
        // The straight floor rests on a closed ring in the corner being
        // unconnectable to the rest of the circuit. On the 2x2 board the
        // ring *is* the whole circuit, so that one sub-square is exempt.
        if (rows, cols) == (2, 2) {
            s += 1;
            continue;
        }
        for corner in CORNERS {
            let (r0, c0, r1, c1) = corner_rect(corner, 2 * s);
            let cells = 2 * s * 2 * s;
            let count = cells - rect_turns(r0, c0, r1, c1);
            straights.push(CornerBoundEntry {
                corner,
                size: 2 * s,
                count,
                bound: s,
                ok: count >= s,
            });
        }
        s += 1;
    }
    let pass = turns.iter().chain(straights.iter()).all(|e| e.ok);
    CornerLedger {
        turns,
        straights,
        pass,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InteriorPointsCheck {
    pub scanline: usize,
    pub shoelace: usize,
    /// rows*cols/2 - 1.
    pub expected: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TurnBalanceCheck {
    pub ccw: usize,
    pub cw: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossingCheck {
    pub boundary: usize,
    pub crossings: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossingAlternationReport {
    pub row_boundaries: Vec<CrossingCheck>,
    pub col_boundaries: Vec<CrossingCheck>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowSignatureReport {
    pub rows: Vec<RowSignature>,
    pub pass: bool,
}

/// Results of every checker in this module, all of which must pass for any
/// valid circuit.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub dims: BoardDims,
    pub interior_points: InteriorPointsCheck,
    pub turn_balance: TurnBalanceCheck,
    pub line_parity: LineParityReport,
    pub crossing_alternation: CrossingAlternationReport,
    pub row_signatures: RowSignatureReport,
    pub corner_bounds: CornerLedger,
    pub pass: bool,
}

/// Runs every checker. Failures are report entries, not errors; a valid
/// circuit cannot fail (these are theorems), so a failing report signals a
/// bug in whatever produced the circuit or the checkers themselves.
pub fn verify_all(circuit: &Circuit) -> InvariantReport {
    let dims = circuit.dims();
    let stats = circuit.stats();

    let scanline = interior_corner_count(circuit);
    let shoelace = enclosed_area(circuit);
    let expected = dims.cell_count() / 2 - 1;
    let interior_points = InteriorPointsCheck {
        scanline,
        shoelace,
        expected,
        pass: scanline == expected && shoelace == expected,
    };

    let turn_balance = TurnBalanceCheck {
        ccw: stats.ccw_total,
        cw: stats.cw_total,
        pass: stats.ccw_total == stats.cw_total + 4,
    };

    let line_parity = line_turn_parity(circuit);

    let transposed = circuit.transposed();
    let row_boundaries: Vec<_> = (1..dims.rows)
        .map(|k| {
            let seq = crossing_sequence(circuit, k, Axis::RowBoundary);
            CrossingCheck {
                boundary: k,
                crossings: seq.bits.len(),
                ok: seq.is_alternating(),
            }
        })
        .collect();
    let col_boundaries: Vec<_> = (1..dims.cols)
        .map(|k| {
            let seq = crossing_sequence(&transposed, k, Axis::RowBoundary);
            CrossingCheck {
                boundary: k,
                crossings: seq.bits.len(),
                ok: seq.is_alternating(),
            }
        })
        .collect();
    let crossing_pass = row_boundaries
        .iter()
        .chain(col_boundaries.iter())
        .all(|check| check.ok);
    let crossing_alternation = CrossingAlternationReport {
        row_boundaries,
        col_boundaries,
        pass: crossing_pass,
    };

    let rows: Vec<_> = stats
        .per_row
        .iter()
        .enumerate()
        .map(|(i, &counts)| signature_from_counts(i + 1, counts, dims.cols))
        .collect();
    let signatures_pass = rows.iter().all(|sig| sig.pass);
    let row_signatures = RowSignatureReport {
        rows,
        pass: signatures_pass,
    };

    let corner_bounds = corner_bounds(circuit);

    let pass = interior_points.pass
        && turn_balance.pass
        && line_parity.pass
        && crossing_alternation.pass
        && row_signatures.pass
        && corner_bounds.pass;
    InvariantReport {
        dims,
        interior_points,
        turn_balance,
        line_parity,
        crossing_alternation,
        row_signatures,
        corner_bounds,
        pass,
    }
}
