//! Exact toolkit for closed rook tours (Hamiltonian circuits of the grid
//! graph) on rectangular boards.
//!
//! The crate enumerates every circuit of a board, checks the structural
//! invariants every circuit must satisfy, computes exact minimum-turn and
//! minimum-straight circuits by pruned exhaustive search, constructs explicit
//! minimal solutions, and compares closed-form predictions against
//! brute-force ground truth on small boards.

pub mod board;
pub mod circuit;
pub mod codec;
pub mod construct;
pub mod formulas;
pub mod invariants;
pub mod render;
pub mod search;

pub use board::{BoardDims, Cell, Dir};
pub use circuit::{build_circuit, CellKind, Circuit, CircuitError, CircuitStats, LineCounts};
pub use codec::{parse_rct, serialize_rct, RctError};
pub use construct::{
    extend_plus4, min_turn_rect, near_square_min_straights, spiral_even, spiral_odd,
    ConstructError, Recipe,
};
pub use formulas::{
    max_turns, min_straights_formula, min_straights_square_formula, min_turns_formula,
    table_verdict, Prediction, PredictionStatus,
};
pub use invariants::{verify_all, InvariantReport};
pub use render::{render, RenderFormat, RenderOptions};
pub use search::{
    count_circuits, enumerate_circuits, exists_within, minimize, Decision, NodeCounters, Objective,
    SearchError, SearchOptions, SearchReport,
};
