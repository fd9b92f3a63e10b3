//! Board geometry: dimensions, cells, directions.
//!
//! Cells are addressed 1-based, row 1 at the top and column 1 at the left,
//! matching the usual way the boards are drawn.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Dimensions of a rectangular board.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoardDims {
    pub rows: usize,
    pub cols: usize,
}

impl BoardDims {
    pub fn new(rows: usize, cols: usize) -> Self {
        BoardDims { rows, cols }
    }

    /// Whether a closed rook tour covering every cell can exist at all:
    /// the cell count must be even and both sides at least 2.
    pub fn feasible(&self) -> bool {
        self.rows >= 2 && self.cols >= 2 && (self.rows * self.cols) % 2 == 0
    }

    pub fn cell_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn transposed(&self) -> Self {
        BoardDims {
            rows: self.cols,
            cols: self.rows,
        }
    }

    pub fn contains(&self, cell: Cell) -> bool {
        (1..=self.rows).contains(&cell.row) && (1..=self.cols).contains(&cell.col)
    }

    /// Row-major index of a cell (0-based internal addressing).
    pub(crate) fn index_of(&self, cell: Cell) -> usize {
        (cell.row - 1) * self.cols + (cell.col - 1)
    }

    pub(crate) fn cell_at(&self, index: usize) -> Cell {
        Cell {
            row: index / self.cols + 1,
            col: index % self.cols + 1,
        }
    }
}

impl fmt::Display for BoardDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

/// A single board square, 1-based, row 1 at the top.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    /// Orthogonal adjacency (one rook unit step apart).
    pub fn adjacent(&self, other: Cell) -> bool {
        self.row.abs_diff(other.row) + self.col.abs_diff(other.col) == 1
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Unit step direction on the board (row axis points down).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Dir {
    Up,
    Down,
    Left,
    Right,
}

impl Dir {
    pub fn delta(self) -> (isize, isize) {
        match self {
            Dir::Up => (-1, 0),
            Dir::Down => (1, 0),
            Dir::Left => (0, -1),
            Dir::Right => (0, 1),
        }
    }

    pub fn between(from: Cell, to: Cell) -> Option<Dir> {
        let dr = to.row as isize - from.row as isize;
        let dc = to.col as isize - from.col as isize;
        match (dr, dc) {
            (-1, 0) => Some(Dir::Up),
            (1, 0) => Some(Dir::Down),
            (0, -1) => Some(Dir::Left),
            (0, 1) => Some(Dir::Right),
            _ => None,
        }
    }

    pub fn opposite(self) -> Dir {
        match self {
            Dir::Up => Dir::Down,
            Dir::Down => Dir::Up,
            Dir::Left => Dir::Right,
            Dir::Right => Dir::Left,
        }
    }
}
