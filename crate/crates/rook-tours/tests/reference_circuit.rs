//! The 4x4 reference circuit (the serpentine comb) exercised end to end:
//! classification, balance, signatures, crossings, interior counts.

use rook_tours::invariants::{
    crossing_sequence, enclosed_area, interior_corner_count, row_signature, turn_balance,
    verify_all, Axis,
};
use rook_tours::{min_turn_rect, BoardDims, Cell, CellKind, Circuit};

fn reference() -> Circuit {
    min_turn_rect(4, 4).unwrap()
}

#[test]
fn eight_turns_eight_straights() {
    let c = reference();
    let stats = c.stats();
    assert_eq!(stats.turns_total, 8);
    assert_eq!(stats.straights_total, 8);
    let turn_cells = (1..=4)
        .flat_map(|r| (1..=4).map(move |col| Cell::new(r, col)))
        .filter(|&cell| c.classify(cell).is_turn())
        .count();
    assert_eq!(turn_cells, 8);
}

#[test]
fn turn_balance_is_six_to_two() {
    assert_eq!(turn_balance(&reference()), (6, 2));
}

#[test]
fn top_row_quadruple_and_signature() {
    let c = reference();
    let stats = c.stats();
    let row1 = stats.per_row[0];
    assert_eq!(
        (row1.ccw, row1.cw, row1.horizontal, row1.vertical),
        (2, 0, 2, 0)
    );
    let sig = row_signature(&c, 1);
    assert_eq!(sig.residue, 0);
    assert_eq!(sig.expected, 0);
    assert!(sig.pass);
}

#[test]
fn first_boundary_crossing_sequence_alternates() {
    let seq = crossing_sequence(&reference(), 1, Axis::RowBoundary);
    assert!(seq.is_alternating());
    assert!(seq.half_length() >= 1);
    assert_eq!(seq.bits, vec![1, 0]);
}

#[test]
fn every_row_and_column_has_even_turns() {
    let report = rook_tours::invariants::line_turn_parity(&reference());
    assert!(report.pass);
    assert!(report.rows.iter().all(|line| line.turns % 2 == 0));
    assert!(report.cols.iter().all(|line| line.turns % 2 == 0));
}

#[test]
fn interior_counts_agree_three_ways() {
    let c = reference();
    assert_eq!(interior_corner_count(&c), 7);
    assert_eq!(enclosed_area(&c), 7);
    assert_eq!(c.dims().cell_count() / 2 - 1, 7);
}

#[test]
fn corner_ledgers_hold() {
    let ledger = rook_tours::invariants::corner_bounds(&reference());
    assert!(ledger.pass);
    // Every 2x2 corner holds at least 2 turns and at least 1 straight.
    assert!(ledger
        .turns
        .iter()
        .filter(|e| e.size == 2)
        .all(|e| e.count >= 2));
    assert!(ledger
        .straights
        .iter()
        .filter(|e| e.size == 2)
        .all(|e| e.count >= 1));
}

#[test]
fn full_suite_passes() {
    assert!(verify_all(&reference()).pass);
}

#[test]
fn classification_chirality_in_the_y_up_frame() {
    let c = reference();
    assert_eq!(c.classify(Cell::new(1, 1)), CellKind::TurnCcw);
    assert_eq!(c.classify(Cell::new(1, 2)), CellKind::StraightH);
    assert_eq!(c.classify(Cell::new(2, 1)), CellKind::StraightV);
    // All four board corners turn counter-clockwise.
    for cell in [Cell::new(1, 4), Cell::new(4, 1), Cell::new(4, 4)] {
        assert_eq!(c.classify(cell), CellKind::TurnCcw);
    }
}

#[test]
fn six_by_six_interiors_are_seventeen() {
    let mut total = 0u32;
    rook_tours::enumerate_circuits(BoardDims::new(6, 6), None, |c| {
        assert_eq!(interior_corner_count(c), 17);
        assert_eq!(enclosed_area(c), 17);
        total += 1;
    })
    .unwrap();
    assert_eq!(total, 1072);
}
