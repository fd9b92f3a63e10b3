//! The circuit data model: a closed rook tour stored as a cyclic successor
//! map over all cells of the board.
//!
//! Circuits are always held in *canonical direction*: the successor of the
//! upper-left cell is the cell below it. Heading down the left edge keeps the
//! interior on the left, so the turn at the upper-left cell is always
//! counter-clockwise under this convention. Two tours that use the same
//! undirected edge set canonicalize to the same `Circuit` and compare equal.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::board::{BoardDims, Cell, Dir};

/// Edge-presence bits for a single cell.
pub(crate) const EDGE_UP: u8 = 1;
pub(crate) const EDGE_DOWN: u8 = 2;
pub(crate) const EDGE_LEFT: u8 = 4;
pub(crate) const EDGE_RIGHT: u8 = 8;

/// How the tour passes through one cell.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellKind {
    /// Quarter turn to the left of the travel direction.
    #[serde(rename = "ccw")]
    TurnCcw,
    /// Quarter turn to the right of the travel direction.
    #[serde(rename = "cw")]
    TurnCw,
    /// Crossed horizontally without turning.
    #[serde(rename = "h")]
    StraightH,
    /// Crossed vertically without turning.
    #[serde(rename = "v")]
    StraightV,
}

impl CellKind {
    pub fn is_turn(self) -> bool {
        matches!(self, CellKind::TurnCcw | CellKind::TurnCw)
    }

    pub fn is_straight(self) -> bool {
        !self.is_turn()
    }

    /// Kind from incoming and outgoing travel directions. Chirality is the
    /// sign of the cross product in a right-handed frame (x = column
    /// rightward, y = row upward): positive means counter-clockwise.
    pub fn from_dirs(incoming: Dir, outgoing: Dir) -> CellKind {
        let (ri, ci) = incoming.delta();
        let (ro, co) = outgoing.delta();
        // y points up while rows grow downward, hence the sign arrangement.
        let cross = ri * co - ci * ro;
        match cross.signum() {
            1 => CellKind::TurnCcw,
            -1 => CellKind::TurnCw,
            _ => {
                if ci != 0 {
                    CellKind::StraightH
                } else {
                    CellKind::StraightV
                }
            }
        }
    }
}

/// Per-line classification counts: counter-clockwise turns, clockwise turns,
/// horizontal straights, vertical straights.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineCounts {
    pub ccw: usize,
    pub cw: usize,
    pub horizontal: usize,
    pub vertical: usize,
}

impl LineCounts {
    pub fn turns(&self) -> usize {
        self.ccw + self.cw
    }

    pub fn straights(&self) -> usize {
        self.horizontal + self.vertical
    }

    pub fn total(&self) -> usize {
        self.turns() + self.straights()
    }

    fn add(&mut self, kind: CellKind) {
        match kind {
            CellKind::TurnCcw => self.ccw += 1,
            CellKind::TurnCw => self.cw += 1,
            CellKind::StraightH => self.horizontal += 1,
            CellKind::StraightV => self.vertical += 1,
        }
    }
}

/// Global and per-line classification totals for a circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStats {
    pub ccw_total: usize,
    pub cw_total: usize,
    pub straights_total: usize,
    pub turns_total: usize,
    pub per_row: Vec<LineCounts>,
    pub per_col: Vec<LineCounts>,
}

/// Errors from assembling a circuit out of a tour sequence.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CircuitError {
    #[error("no circuit exists on a {0} board")]
    Infeasible(BoardDims),
    #[error("tour has {got} cells, the board has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("cell {cell} at index {index} is outside the board")]
    OutOfBounds { index: usize, cell: Cell },
    #[error("cell {cell} at index {index} was already visited")]
    RepeatedCell { index: usize, cell: Cell },
    #[error("step to index {index} is not a rook unit step")]
    NonAdjacentStep { index: usize },
    #[error("last tour cell is not adjacent to the first")]
    NotClosed,
}

/// A closed rook tour visiting every cell exactly once, in canonical
/// direction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    dims: BoardDims,
    succ: Vec<u32>,
    pred: Vec<u32>,
}

/// Builds a validated circuit from a cyclic cell sequence. The traversal is
/// reversed if necessary so the successor of the upper-left cell is the cell
/// below it.
pub fn build_circuit(dims: BoardDims, tour: &[Cell]) -> Result<Circuit, CircuitError> {
    if !dims.feasible() {
        return Err(CircuitError::Infeasible(dims));
    }
    let n = dims.cell_count();
    if tour.len() != n {
        return Err(CircuitError::WrongLength {
            expected: n,
            got: tour.len(),
        });
    }
    let mut seen = vec![false; n];
    for (index, &cell) in tour.iter().enumerate() {
        if !dims.contains(cell) {
            return Err(CircuitError::OutOfBounds { index, cell });
        }
        let idx = dims.index_of(cell);
        if seen[idx] {
            return Err(CircuitError::RepeatedCell { index, cell });
        }
        seen[idx] = true;
        if index > 0 && !tour[index - 1].adjacent(cell) {
            return Err(CircuitError::NonAdjacentStep { index });
        }
    }
    if !tour[n - 1].adjacent(tour[0]) {
        return Err(CircuitError::NotClosed);
    }

    let mut succ = vec![0u32; n];
    let mut pred = vec![0u32; n];
    for i in 0..n {
        let a = dims.index_of(tour[i]);
        let b = dims.index_of(tour[(i + 1) % n]);
        succ[a] = b as u32;
        pred[b] = a as u32;
    }
    Ok(Circuit::from_links(dims, succ, pred))
}

impl Circuit {
    /// Canonicalizes direction. The upper-left cell has exactly two
    /// neighbours, so one of the two orientations always satisfies the
    /// convention.
    pub(crate) fn from_links(dims: BoardDims, succ: Vec<u32>, pred: Vec<u32>) -> Circuit {
        let top_left = dims.index_of(Cell::new(1, 1));
        let below = dims.index_of(Cell::new(2, 1)) as u32;
        if succ[top_left] == below {
            Circuit { dims, succ, pred }
        } else {
            debug_assert_eq!(pred[top_left], below);
            Circuit {
                dims,
                succ: pred,
                pred: succ,
            }
        }
    }

    /// Rebuilds a circuit from undirected edge masks (one mask per cell, as
    /// produced by the search engine or the codec). The caller guarantees a
    /// single cycle; the walk is checked in debug builds.
    pub(crate) fn from_edge_masks(dims: BoardDims, masks: &[u8]) -> Circuit {
        let n = dims.cell_count();
        debug_assert_eq!(masks.len(), n);
        let cols = dims.cols;
        let mut succ = vec![u32::MAX; n];
        let mut pred = vec![u32::MAX; n];
        // Walk from the top-left corner heading down; that corner always
        // carries the down edge, so the walk lands in canonical direction.
        debug_assert_eq!(masks[0] & (EDGE_DOWN | EDGE_RIGHT), EDGE_DOWN | EDGE_RIGHT);
        let mut prev = 0usize;
        let mut cur = cols;
        succ[prev] = cur as u32;
        pred[cur] = prev as u32;
        for _ in 1..n {
            let mask = masks[cur];
            let mut next = usize::MAX;
            for (bit, step) in [
                (EDGE_UP, cur.wrapping_sub(cols)),
                (EDGE_DOWN, cur + cols),
                (EDGE_LEFT, cur.wrapping_sub(1)),
                (EDGE_RIGHT, cur + 1),
            ] {
                if mask & bit != 0 && step != prev && step < n {
                    next = step;
                    break;
                }
            }
            debug_assert_ne!(next, usize::MAX, "cell without a continuation");
            succ[cur] = next as u32;
            pred[next] = cur as u32;
            prev = cur;
            cur = next;
        }
        debug_assert_eq!(cur, 0, "walk must close at the start");
        Circuit { dims, succ, pred }
    }

    pub fn dims(&self) -> BoardDims {
        self.dims
    }

    pub fn successor(&self, cell: Cell) -> Cell {
        self.dims
            .cell_at(self.succ[self.dims.index_of(cell)] as usize)
    }

    pub fn predecessor(&self, cell: Cell) -> Cell {
        self.dims
            .cell_at(self.pred[self.dims.index_of(cell)] as usize)
    }

    /// The full tour starting at the upper-left cell, in canonical direction.
    pub fn tour(&self) -> Vec<Cell> {
        let n = self.dims.cell_count();
        let mut out = Vec::with_capacity(n);
        let mut idx = 0usize;
        for _ in 0..n {
            out.push(self.dims.cell_at(idx));
            idx = self.succ[idx] as usize;
        }
        out
    }

    /// Presence bits of the (up to four) tour edges at a cell.
    pub(crate) fn edge_mask_at(&self, idx: usize) -> u8 {
        let cols = self.dims.cols as isize;
        let mut mask = 0u8;
        for nb in [self.succ[idx] as usize, self.pred[idx] as usize] {
            let delta = nb as isize - idx as isize;
            mask |= match delta {
                d if d == -cols => EDGE_UP,
                d if d == cols => EDGE_DOWN,
                -1 => EDGE_LEFT,
                1 => EDGE_RIGHT,
                _ => unreachable!("non-adjacent successor"),
            };
        }
        mask
    }

    /// Whether the tour uses the edge between two (adjacent) cells.
    pub fn has_edge(&self, a: Cell, b: Cell) -> bool {
        let ia = self.dims.index_of(a) as u32;
        let ib = self.dims.index_of(b) as u32;
        self.succ[ia as usize] == ib || self.pred[ia as usize] == ib
    }

    /// How the tour passes through `cell`.
    pub fn classify(&self, cell: Cell) -> CellKind {
        let idx = self.dims.index_of(cell);
        let prev = self.dims.cell_at(self.pred[idx] as usize);
        let next = self.dims.cell_at(self.succ[idx] as usize);
        let incoming = Dir::between(prev, cell).expect("predecessor is adjacent");
        let outgoing = Dir::between(cell, next).expect("successor is adjacent");
        CellKind::from_dirs(incoming, outgoing)
    }

    /// Exhaustive per-cell classification aggregated globally, per row and
    /// per column.
    pub fn stats(&self) -> CircuitStats {
        let mut per_row = vec![LineCounts::default(); self.dims.rows];
        let mut per_col = vec![LineCounts::default(); self.dims.cols];
        let mut ccw = 0;
        let mut cw = 0;
        let mut straights = 0;
        for r in 1..=self.dims.rows {
            for c in 1..=self.dims.cols {
                let kind = self.classify(Cell::new(r, c));
                per_row[r - 1].add(kind);
                per_col[c - 1].add(kind);
                match kind {
                    CellKind::TurnCcw => ccw += 1,
                    CellKind::TurnCw => cw += 1,
                    _ => straights += 1,
                }
            }
        }
        CircuitStats {
            ccw_total: ccw,
            cw_total: cw,
            straights_total: straights,
            turns_total: ccw + cw,
            per_row,
            per_col,
        }
    }

    /// The same undirected tour on the transposed board (rows and columns
    /// swapped), re-canonicalized. Transposition mirrors the board, so the
    /// traversal direction generally flips.
    pub fn transposed(&self) -> Circuit {
        self.mapped(self.dims.transposed(), |cell| Cell::new(cell.col, cell.row))
    }

    /// The same undirected tour mirrored top-to-bottom, re-canonicalized.
    pub fn flipped_rows(&self) -> Circuit {
        let rows = self.dims.rows;
        self.mapped(self.dims, move |cell| {
            Cell::new(rows + 1 - cell.row, cell.col)
        })
    }

    fn mapped(&self, dims: BoardDims, f: impl Fn(Cell) -> Cell) -> Circuit {
        let n = dims.cell_count();
        let mut succ = vec![0u32; n];
        let mut pred = vec![0u32; n];
        for idx in 0..n {
            let t = dims.index_of(f(self.dims.cell_at(idx)));
            let s = f(self.dims.cell_at(self.succ[idx] as usize));
            let p = f(self.dims.cell_at(self.pred[idx] as usize));
            succ[t] = dims.index_of(s) as u32;
            pred[t] = dims.index_of(p) as u32;
        }
        Circuit::from_links(dims, succ, pred)
    }
}

impl fmt::Debug for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Circuit {}", self.dims)?;
        for r in 0..self.dims.rows {
            for c in 0..self.dims.cols {
                let mask = self.edge_mask_at(r * self.dims.cols + c);
                write!(f, "{}", crate::codec::glyph_for_mask(mask).unwrap_or('?'))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells(spec: &[(usize, usize)]) -> Vec<Cell> {
        spec.iter().map(|&(r, c)| Cell::new(r, c)).collect()
    }

    #[test]
    fn two_by_two_builds_canonically() {
        let dims = BoardDims::new(2, 2);
        let tour = cells(&[(1, 1), (2, 1), (2, 2), (1, 2)]);
        let circuit = build_circuit(dims, &tour).unwrap();
        assert_eq!(circuit.successor(Cell::new(1, 1)), Cell::new(2, 1));
        assert_eq!(circuit.tour(), tour);
    }

    #[test]
    fn reversed_tour_yields_same_circuit() {
        let dims = BoardDims::new(2, 2);
        let fwd = build_circuit(dims, &cells(&[(1, 1), (2, 1), (2, 2), (1, 2)])).unwrap();
        let rev = build_circuit(dims, &cells(&[(1, 1), (1, 2), (2, 2), (2, 1)])).unwrap();
        assert_eq!(fwd, rev);
    }

    #[test]
    fn diagonal_step_is_rejected() {
        let dims = BoardDims::new(2, 2);
        let err = build_circuit(dims, &cells(&[(1, 1), (2, 2), (2, 1), (1, 2)])).unwrap_err();
        assert_eq!(err, CircuitError::NonAdjacentStep { index: 1 });
    }

    #[test]
    fn unclosed_tour_is_rejected() {
        let dims = BoardDims::new(2, 3);
        let err = build_circuit(
            dims,
            &cells(&[(1, 1), (2, 1), (2, 2), (1, 2), (1, 3), (2, 3)]),
        )
        .unwrap_err();
        assert_eq!(err, CircuitError::NotClosed);
    }

    #[test]
    fn repeated_and_out_of_bounds_cells() {
        let dims = BoardDims::new(2, 2);
        let err = build_circuit(dims, &cells(&[(1, 1), (2, 1), (1, 1), (1, 2)])).unwrap_err();
        assert_eq!(
            err,
            CircuitError::RepeatedCell {
                index: 2,
                cell: Cell::new(1, 1)
            }
        );
        let err = build_circuit(dims, &cells(&[(1, 1), (2, 1), (3, 1), (1, 2)])).unwrap_err();
        assert_eq!(
            err,
            CircuitError::OutOfBounds {
                index: 2,
                cell: Cell::new(3, 1)
            }
        );
    }

    #[test]
    fn infeasible_boards_rejected() {
        let dims = BoardDims::new(1, 2);
        let err = build_circuit(dims, &cells(&[(1, 1), (1, 2)])).unwrap_err();
        assert_eq!(err, CircuitError::Infeasible(dims));
    }

    #[test]
    fn upper_left_cell_is_ccw() {
        let dims = BoardDims::new(2, 2);
        let circuit = build_circuit(dims, &cells(&[(1, 1), (2, 1), (2, 2), (1, 2)])).unwrap();
        assert_eq!(circuit.classify(Cell::new(1, 1)), CellKind::TurnCcw);
        // All four cells of the 2x2 circuit turn counter-clockwise.
        let stats = circuit.stats();
        assert_eq!(stats.ccw_total, 4);
        assert_eq!(stats.cw_total, 0);
        assert_eq!(stats.straights_total, 0);
    }

    #[test]
    fn perimeter_stats() {
        let dims = BoardDims::new(2, 3);
        let circuit = build_circuit(
            dims,
            &cells(&[(1, 1), (2, 1), (2, 2), (2, 3), (1, 3), (1, 2)]),
        )
        .unwrap();
        assert_eq!(circuit.classify(Cell::new(1, 2)), CellKind::StraightH);
        let stats = circuit.stats();
        assert_eq!(stats.turns_total, 4);
        assert_eq!(stats.straights_total, 2);
        assert_eq!(
            stats.per_row[0],
            LineCounts {
                ccw: 2,
                cw: 0,
                horizontal: 1,
                vertical: 0
            }
        );
    }

    #[test]
    fn stats_partition_all_cells() {
        let dims = BoardDims::new(2, 3);
        let circuit = build_circuit(
            dims,
            &cells(&[(1, 1), (2, 1), (2, 2), (2, 3), (1, 3), (1, 2)]),
        )
        .unwrap();
        let stats = circuit.stats();
        assert_eq!(
            stats.ccw_total + stats.cw_total + stats.straights_total,
            dims.cell_count()
        );
        for (i, row) in stats.per_row.iter().enumerate() {
            assert_eq!(row.total(), dims.cols, "row {}", i + 1);
        }
        for col in &stats.per_col {
            assert_eq!(col.total(), dims.rows);
        }
    }

    #[test]
    fn transpose_round_trip() {
        let dims = BoardDims::new(2, 3);
        let circuit = build_circuit(
            dims,
            &cells(&[(1, 1), (2, 1), (2, 2), (2, 3), (1, 3), (1, 2)]),
        )
        .unwrap();
        let back = circuit.transposed().transposed();
        assert_eq!(back, circuit);
    }

    #[test]
    fn rebuild_from_tour_is_identity() {
        let dims = BoardDims::new(2, 3);
        let circuit = build_circuit(
            dims,
            &cells(&[(1, 1), (2, 1), (2, 2), (2, 3), (1, 3), (1, 2)]),
        )
        .unwrap();
        let again = build_circuit(dims, &circuit.tour()).unwrap();
        assert_eq!(again, circuit);
    }
}
