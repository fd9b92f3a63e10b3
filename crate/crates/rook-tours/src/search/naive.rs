//! Reference enumerator: plain backtracking over rook paths with validity
//! checks only.
//!
//! Deliberately independent of the frontier engine so the two can be checked
//! against each other. The walk starts at the upper-left cell and steps down
//! first (both corner edges belong to every circuit, so this fixes the
//! traversal direction and visits each undirected circuit exactly once), then
//! extends the path trying neighbours in Right, Down, Left, Up order.

use crate::board::{BoardDims, Cell};
use crate::circuit::{build_circuit, Circuit};
use crate::search::{SearchError, NEIGHBOR_ORDER};

/// Visits every circuit of the board exactly once and returns the count.
pub fn enumerate_circuits<F>(dims: BoardDims, mut visitor: F) -> Result<u64, SearchError>
where
    F: FnMut(&Circuit),
{
    if !dims.feasible() {
        return Err(SearchError::Infeasible(dims));
    }
    let mut state = Backtracker {
        dims,
        visited: vec![false; dims.cell_count()],
        tour: Vec::with_capacity(dims.cell_count()),
        found: 0,
        visitor: &mut visitor,
    };
    let start = Cell::new(1, 1);
    let second = Cell::new(2, 1);
    state.visited[dims.index_of(start)] = true;
    state.tour.push(start);
    state.visited[dims.index_of(second)] = true;
    state.tour.push(second);
    state.extend(second);
    Ok(state.found)
}

struct Backtracker<'v, F> {
    dims: BoardDims,
    visited: Vec<bool>,
    tour: Vec<Cell>,
    found: u64,
    visitor: &'v mut F,
}

impl<F: FnMut(&Circuit)> Backtracker<'_, F> {
    fn extend(&mut self, at: Cell) {
        if self.tour.len() == self.dims.cell_count() {
            // The start cell has only two neighbours and one is already in
            // the path interior, so a closable walk must end beside it.
            if at == Cell::new(1, 2) {
                let circuit =
                    build_circuit(self.dims, &self.tour).expect("backtracker keeps tours valid");
                self.found += 1;
                (self.visitor)(&circuit);
            }
            return;
        }
        for dir in NEIGHBOR_ORDER {
            let (dr, dc) = dir.delta();
            let row = at.row as isize + dr;
            let col = at.col as isize + dc;
            if row < 1 || col < 1 || row as usize > self.dims.rows || col as usize > self.dims.cols
            {
                continue;
            }
            let next = Cell::new(row as usize, col as usize);
            let idx = self.dims.index_of(next);
            if self.visited[idx] {
                continue;
            }
            self.visited[idx] = true;
            self.tour.push(next);
            self.extend(next);
            self.tour.pop();
            self.visited[idx] = false;
        }
    }
}
