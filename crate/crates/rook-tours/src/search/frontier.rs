//! The scanline frontier engine behind enumeration and exact minimization.
//!
//! Cells are decided in row-major order. The frontier state is the classic
//! broken-profile plug encoding: one slot per column for the vertical edge
//! crossing the current row boundary, plus one slot for the horizontal edge
//! of the cell just decided. Each occupied slot stores the slot of the other
//! end of its partial path, so premature cycle closure and dead ends are
//! detected immediately. Every board corner has degree 2 in the grid graph,
//! so both corner edges are forced automatically by the transitions.
//!
//! A `BoardPlan` can block out cells (searching a ring around an existing
//! circuit), force individual edges, and declare a pair of stub cells that a
//! fixed external path connects; the same engine then searches Hamiltonian
//! paths of the remaining region between the stubs.

use crate::board::{BoardDims, Cell};
use crate::circuit::{CellKind, EDGE_DOWN, EDGE_LEFT, EDGE_RIGHT, EDGE_UP};
use crate::search::{NodeCounters, Objective};

use std::sync::atomic::{AtomicI64, Ordering};
use std::sync::Arc;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) enum CellRole {
    Free,
    Blocked,
    /// A cell whose tour edges are fixed externally except for one vertical
    /// connection into the searched region; see [`BoardPlan::link_stubs`].
    Stub,
}

/// How a stub cell connects into the searched region.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) enum StubDir {
    /// Receives the connection from the cell above, which is forced to take
    /// its down edge.
    Up,
    /// Emits its own down edge toward the cell below.
    Down,
    /// Emits its own right edge toward the cell on its right.
    Right,
}

#[derive(Copy, Clone, Debug)]
struct Stub {
    idx: usize,
    dir: StubDir,
    partner: usize,
}

/// Which cells participate in a search and what edges are forced.
#[derive(Clone)]
pub(crate) struct BoardPlan {
    pub dims: BoardDims,
    role: Vec<CellRole>,
    required: Vec<u8>,
    stubs: Vec<Stub>,
    stub_of: Vec<u16>,
    // Derived by `finalize`.
    avail_right: Vec<bool>,
    avail_down: Vec<bool>,
    free_after: Vec<u32>,
    finalized: bool,
}

const NO_STUB: u16 = u16::MAX;

impl BoardPlan {
    pub fn rect(dims: BoardDims) -> Self {
        let n = dims.cell_count();
        assert!(dims.cols <= 200, "frontier slots are u8-indexed");
        BoardPlan {
            dims,
            role: vec![CellRole::Free; n],
            required: vec![0; n],
            stubs: Vec::new(),
            stub_of: vec![NO_STUB; n],
            avail_right: Vec::new(),
            avail_down: Vec::new(),
            free_after: Vec::new(),
            finalized: false,
        }
    }

    pub fn block(&mut self, cell: Cell) {
        let idx = self.dims.index_of(cell);
        self.role[idx] = CellRole::Blocked;
    }

    /// Declares two stub cells joined by a fixed path outside the plan. Each
    /// stub contributes one vertical connection into the searched region:
    /// upward stubs receive it from the cell above, downward stubs emit
    /// their own down edge. The engine treats the pair as a pre-existing
    /// path between the two connection points.
    pub fn link_stubs(&mut self, a: (Cell, StubDir), b: (Cell, StubDir)) {
        let ia = self.dims.index_of(a.0);
        let ib = self.dims.index_of(b.0);
        let id = self.stubs.len();
        self.stubs.push(Stub {
            idx: ia,
            dir: a.1,
            partner: id + 1,
        });
        self.stubs.push(Stub {
            idx: ib,
            dir: b.1,
            partner: id,
        });
        self.role[ia] = CellRole::Stub;
        self.role[ib] = CellRole::Stub;
        self.stub_of[ia] = id as u16;
        self.stub_of[ib] = (id + 1) as u16;
    }

    /// Forces the edge from `cell` toward the right or downward neighbour.
    pub fn require_edge(&mut self, cell: Cell, toward_right: bool) {
        let idx = self.dims.index_of(cell);
        if toward_right {
            assert!(cell.col < self.dims.cols);
            self.required[idx] |= EDGE_RIGHT;
            self.required[idx + 1] |= EDGE_LEFT;
        } else {
            assert!(cell.row < self.dims.rows);
            self.required[idx] |= EDGE_DOWN;
            self.required[idx + self.dims.cols] |= EDGE_UP;
        }
    }

    pub fn finalize(&mut self) {
        let dims = self.dims;
        let n = dims.cell_count();
        let cols = dims.cols;
        self.avail_right = vec![false; n];
        self.avail_down = vec![false; n];
        for idx in 0..n {
            if self.role[idx] != CellRole::Free {
                continue;
            }
            let (r, c) = (idx / cols, idx % cols);
            self.avail_right[idx] = c + 1 < cols && self.role[idx + 1] == CellRole::Free;
            self.avail_down[idx] = r + 1 < dims.rows && self.role[idx + cols] == CellRole::Free;
        }
        for stub in &self.stubs {
            match stub.dir {
                StubDir::Up => {
                    // The cell above must exist, be searched, and connect
                    // down.
                    let above = stub
                        .idx
                        .checked_sub(cols)
                        .expect("upward stub needs a row above");
                    assert_eq!(self.role[above], CellRole::Free);
                    self.avail_down[above] = true;
                    self.required[above] |= EDGE_DOWN;
                }
                StubDir::Down => {
                    let below = stub.idx + cols;
                    assert!(below < n, "downward stub needs a row below");
                    assert_eq!(self.role[below], CellRole::Free);
                }
                StubDir::Right => {
                    assert!(
                        stub.idx % cols + 1 < cols,
                        "rightward stub needs a column right"
                    );
                    assert_eq!(self.role[stub.idx + 1], CellRole::Free);
                    self.required[stub.idx + 1] |= EDGE_LEFT;
                }
            }
        }
        self.free_after = vec![0; n + 1];
        for idx in (0..n).rev() {
            let here = (self.role[idx] != CellRole::Blocked) as u32;
            self.free_after[idx] = self.free_after[idx + 1] + here;
        }
        self.finalized = true;
    }

    fn is_plain_rect(&self) -> bool {
        self.stubs.is_empty() && self.role.iter().all(|&r| r == CellRole::Free)
    }
}

/// What a single engine run should do.
#[derive(Clone)]
pub(crate) struct RunConfig {
    /// `None` enumerates without cost accounting.
    pub objective: Option<Objective>,
    /// Solutions with cost above this are pruned. Dynamic in minimize mode.
    pub budget: i64,
    /// Keep lowering the budget as better solutions appear.
    pub minimize: bool,
    /// Stop at the first solution within budget.
    pub stop_on_first: bool,
    /// Abort after this many expansions.
    pub node_budget: Option<u64>,
    /// Stop after this many solutions.
    pub limit: Option<u64>,
}

impl RunConfig {
    pub fn enumerate(limit: Option<u64>) -> Self {
        RunConfig {
            objective: None,
            budget: i64::MAX,
            minimize: false,
            stop_on_first: false,
            node_budget: None,
            limit,
        }
    }

    pub fn minimize(objective: Objective, incumbent: Option<usize>) -> Self {
        RunConfig {
            objective: Some(objective),
            budget: incumbent.map_or(i64::MAX, |v| v as i64 - 1),
            minimize: true,
            stop_on_first: false,
            node_budget: None,
            limit: None,
        }
    }

    pub fn first_within(objective: Objective, bound: usize, node_budget: Option<u64>) -> Self {
        RunConfig {
            objective: Some(objective),
            budget: bound as i64,
            minimize: false,
            stop_on_first: true,
            node_budget,
            limit: None,
        }
    }
}

/// Result of one engine run.
pub(crate) struct RunOutcome {
    pub count: u64,
    pub best_cost: Option<usize>,
    /// Edge masks of the best (minimize) or first (stop_on_first) solution.
    pub witness_masks: Option<Vec<u8>>,
    pub counters: NodeCounters,
    pub node_budget_exhausted: bool,
}

type Visitor<'v> = &'v mut dyn FnMut(&[u8], usize);

pub(crate) struct Engine<'p, 'v> {
    plan: &'p BoardPlan,
    cfg: RunConfig,
    cols: usize,
    hslot: usize,
    /// Plug slots: one per column, one for the horizontal plug, then one
    /// virtual slot per stub where tunnelled path ends are parked.
    mate: Vec<u8>,
    plug_count: u32,
    stub_active: Vec<bool>,
    right_edges: Vec<bool>,
    down_edges: Vec<bool>,

    // Cost accounting, active when cfg.objective is set.
    bounded: bool,
    struct_bounds: bool,
    cost: usize,
    row_obj: Vec<u32>,
    col_obj: Vec<u32>,
    row_rem: Vec<u32>,
    col_rem: Vec<u32>,
    row_need: Vec<u32>,
    col_need: Vec<u32>,
    row_need_sum: i64,
    col_need_sum: i64,
    corner_scale: usize,
    corner_smax: usize,
    corner_count: [Vec<u32>; 4],
    corner_rem: [Vec<u32>; 4],

    count: u64,
    best_cost: Option<usize>,
    witness_masks: Option<Vec<u8>>,
    counters: NodeCounters,
    stop: bool,
    exhausted: bool,
    shared_budget: Option<Arc<AtomicI64>>,
    visitor: Option<Visitor<'v>>,

    // Work partitioning: the first `prefix_len` binary branch decisions are
    // dictated by `prefix`, so distinct prefixes explore disjoint subtrees.
    prefix: u64,
    prefix_len: u32,
    choices_done: u32,
}

impl<'p, 'v> Engine<'p, 'v> {
    pub fn new(plan: &'p BoardPlan, cfg: RunConfig) -> Self {
        assert!(plan.finalized, "plan must be finalized");
        let dims = plan.dims;
        let n = dims.cell_count();
        let cols = dims.cols;
        assert!(cols + 1 + plan.stubs.len() <= u8::MAX as usize);
        let bounded = cfg.objective.is_some();
        let struct_bounds = bounded && plan.is_plain_rect();
        let mut engine = Engine {
            plan,
            cfg,
            cols,
            hslot: cols,
            mate: vec![0; cols + 1 + plan.stubs.len()],
            plug_count: 0,
            stub_active: vec![false; plan.stubs.len()],
            right_edges: vec![false; n],
            down_edges: vec![false; n],
            bounded,
            struct_bounds,
            cost: 0,
            row_obj: Vec::new(),
            col_obj: Vec::new(),
            row_rem: Vec::new(),
            col_rem: Vec::new(),
            row_need: Vec::new(),
            col_need: Vec::new(),
            row_need_sum: 0,
            col_need_sum: 0,
            corner_scale: 0,
            corner_smax: 0,
            corner_count: Default::default(),
            corner_rem: Default::default(),
            count: 0,
            best_cost: None,
            witness_masks: None,
            counters: NodeCounters::default(),
            stop: false,
            exhausted: false,
            shared_budget: None,
            visitor: None,
            prefix: 0,
            prefix_len: 0,
            choices_done: 0,
        };
        if engine.struct_bounds {
            engine.init_struct_bounds();
        }
        engine
    }

    pub fn with_visitor(mut self, visitor: Visitor<'v>) -> Self {
        self.visitor = Some(visitor);
        self
    }

    pub fn with_shared_budget(mut self, budget: Arc<AtomicI64>) -> Self {
        self.shared_budget = Some(budget);
        self
    }

    pub fn with_prefix(mut self, prefix: u64, prefix_len: u32) -> Self {
        self.prefix = prefix;
        self.prefix_len = prefix_len;
        self
    }

    fn init_struct_bounds(&mut self) {
        let dims = self.plan.dims;
        let (rows, cols) = (dims.rows, dims.cols);
        let objective = self.cfg.objective.unwrap();
        self.row_obj = vec![0; rows];
        self.col_obj = vec![0; cols];
        self.row_rem = vec![cols as u32; rows];
        self.col_rem = vec![rows as u32; cols];
        self.row_need = vec![0; rows];
        self.col_need = vec![0; cols];
        for r in 0..rows {
            self.row_need[r] = line_need(objective, cols, 0, cols as u32).expect("fresh line");
            self.row_need_sum += self.row_need[r] as i64;
        }
        for c in 0..cols {
            self.col_need[c] = line_need(objective, rows, 0, rows as u32).expect("fresh line");
            self.col_need_sum += self.col_need[c] as i64;
        }
        // Turn bounds live on s-by-s board corners, straight bounds on
        // 2s-by-2s ones; sizes are capped so the four corners stay disjoint.
        self.corner_scale = match objective {
            Objective::Turns => 1,
            Objective::Straights => 2,
        };
        self.corner_smax = rows.min(cols) / (2 * self.corner_scale);
        for k in 0..4 {
            self.corner_count[k] = vec![0; self.corner_smax + 1];
            self.corner_rem[k] = vec![0; self.corner_smax + 1];
            for s in 1..=self.corner_smax {
                let t = (self.corner_scale * s) as u32;
                self.corner_rem[k][s] = t * t;
            }
        }
    }

    pub fn run(mut self) -> RunOutcome {
        self.step(0);
        RunOutcome {
            count: self.count,
            best_cost: self.best_cost,
            witness_masks: self.witness_masks,
            counters: self.counters,
            node_budget_exhausted: self.exhausted,
        }
    }

    fn current_budget(&self) -> i64 {
        match &self.shared_budget {
            Some(shared) => shared.load(Ordering::Relaxed).min(self.cfg.budget),
            None => self.cfg.budget,
        }
    }

    fn step(&mut self, idx: usize) {
        if self.stop || idx == self.plan.role.len() {
            return;
        }
        match self.plan.role[idx] {
            CellRole::Blocked => {
                debug_assert_eq!(self.mate[idx % self.cols], 0);
                self.step(idx + 1);
            }
            CellRole::Stub => self.step_stub(idx),
            CellRole::Free => self.step_free(idx),
        }
    }

    /// A stub cell's path continues through the fixed exterior path to its
    /// partner stub. The first of a pair to be reached parks an end on its
    /// virtual slot; the partner later picks it up, so the pair behaves like
    /// a single pre-existing path segment.
    fn step_stub(&mut self, idx: usize) {
        let sid = self.plan.stub_of[idx] as usize;
        let stub = self.plan.stubs[sid];
        let c = idx % self.cols;
        let v_self = self.hslot + 1 + sid;
        let v_partner = self.hslot + 1 + stub.partner;
        let partner_active = self.stub_active[stub.partner];

        if stub.dir == StubDir::Up {
            let incoming = self.mate[c];
            debug_assert_ne!(incoming, 0, "the cell above is forced to connect");
            if !partner_active {
                self.mate[v_self] = incoming;
                self.mate[incoming as usize - 1] = v_self as u8 + 1;
                self.mate[c] = 0;
                self.stub_active[sid] = true;
                self.step(idx + 1);
                self.stub_active[sid] = false;
                self.mate[c] = incoming;
                self.mate[incoming as usize - 1] = c as u8 + 1;
                self.mate[v_self] = 0;
            } else {
                let a = self.mate[v_partner];
                if a as usize == c + 1 {
                    // The arriving end is the one that entered the tunnel:
                    // joining would close a loop that excludes other cells.
                    self.counters.pruned_connectivity += 1;
                    return;
                }
                let b = incoming;
                self.mate[a as usize - 1] = b;
                self.mate[b as usize - 1] = a;
                self.mate[v_partner] = 0;
                self.mate[c] = 0;
                self.plug_count -= 2;
                self.stub_active[sid] = true;
                self.step(idx + 1);
                self.stub_active[sid] = false;
                self.plug_count += 2;
                self.mate[c] = b;
                self.mate[v_partner] = a;
                self.mate[a as usize - 1] = v_partner as u8 + 1;
                self.mate[b as usize - 1] = c as u8 + 1;
            }
        } else {
            // Down and Right stubs emit a fresh connection; only the slot it
            // lives in differs.
            let slot = match stub.dir {
                StubDir::Down => c,
                _ => self.hslot,
            };
            debug_assert_eq!(self.mate[slot], 0);
            match stub.dir {
                StubDir::Down => self.down_edges[idx] = true,
                _ => self.right_edges[idx] = true,
            }
            if !partner_active {
                self.mate[slot] = v_self as u8 + 1;
                self.mate[v_self] = slot as u8 + 1;
                self.plug_count += 2;
                self.stub_active[sid] = true;
                self.step(idx + 1);
                self.stub_active[sid] = false;
                self.plug_count -= 2;
                self.mate[v_self] = 0;
                self.mate[slot] = 0;
            } else {
                let p = self.mate[v_partner];
                self.mate[slot] = p;
                self.mate[p as usize - 1] = slot as u8 + 1;
                self.mate[v_partner] = 0;
                self.stub_active[sid] = true;
                self.step(idx + 1);
                self.stub_active[sid] = false;
                self.mate[v_partner] = p;
                self.mate[p as usize - 1] = v_partner as u8 + 1;
                self.mate[slot] = 0;
            }
            match stub.dir {
                StubDir::Down => self.down_edges[idx] = false,
                _ => self.right_edges[idx] = false,
            }
        }
    }

    fn step_free(&mut self, idx: usize) {
        let c = idx % self.cols;
        let up = self.mate[c];
        let left = self.mate[self.hslot];
        let req = self.plan.required[idx];
        if (req & EDGE_UP != 0 && up == 0) || (req & EDGE_LEFT != 0 && left == 0) {
            self.counters.pruned_connectivity += 1;
            return;
        }
        let right_ok = self.plan.avail_right[idx];
        let down_ok = self.plan.avail_down[idx];
        let req_r = req & EDGE_RIGHT != 0;
        let req_d = req & EDGE_DOWN != 0;

        match (left != 0, up != 0) {
            (false, false) => {
                // Fresh cell: open a new path using both the right and down
                // edges (the only way to give the cell degree 2 here).
                if right_ok && down_ok {
                    self.mate[c] = self.hslot as u8 + 1;
                    self.mate[self.hslot] = c as u8 + 1;
                    self.plug_count += 2;
                    self.right_edges[idx] = true;
                    self.down_edges[idx] = true;
                    self.descend(idx, CellKind::TurnCcw);
                    self.down_edges[idx] = false;
                    self.right_edges[idx] = false;
                    self.plug_count -= 2;
                    self.mate[self.hslot] = 0;
                    self.mate[c] = 0;
                } else {
                    self.counters.pruned_connectivity += 1;
                }
            }
            (true, false) => {
                // A path end arrives from the left.
                let can_right = right_ok && !req_d;
                let can_down = down_ok && !req_r;
                let (go_right, go_down, split) = self.pick_branches(can_right, can_down);
                if split {
                    self.choices_done += 1;
                }
                if go_right {
                    self.right_edges[idx] = true;
                    self.descend(idx, CellKind::StraightH);
                    self.right_edges[idx] = false;
                }
                if go_down {
                    let partner = self.mate[self.hslot];
                    self.mate[c] = partner;
                    self.mate[partner as usize - 1] = c as u8 + 1;
                    self.mate[self.hslot] = 0;
                    self.down_edges[idx] = true;
                    self.descend(idx, CellKind::TurnCcw);
                    self.down_edges[idx] = false;
                    self.mate[self.hslot] = partner;
                    self.mate[partner as usize - 1] = self.hslot as u8 + 1;
                    self.mate[c] = 0;
                }
                if split {
                    self.choices_done -= 1;
                }
                if !can_right && !can_down {
                    self.counters.pruned_connectivity += 1;
                }
            }
            (false, true) => {
                // A path end arrives from above.
                let can_right = right_ok && !req_d;
                let can_down = down_ok && !req_r;
                let (go_right, go_down, split) = self.pick_branches(can_right, can_down);
                if split {
                    self.choices_done += 1;
                }
                if go_right {
                    let partner = self.mate[c];
                    self.mate[self.hslot] = partner;
                    self.mate[partner as usize - 1] = self.hslot as u8 + 1;
                    self.mate[c] = 0;
                    self.right_edges[idx] = true;
                    self.descend(idx, CellKind::TurnCcw);
                    self.right_edges[idx] = false;
                    self.mate[c] = partner;
                    self.mate[partner as usize - 1] = c as u8 + 1;
                    self.mate[self.hslot] = 0;
                }
                if go_down {
                    self.down_edges[idx] = true;
                    self.descend(idx, CellKind::StraightV);
                    self.down_edges[idx] = false;
                }
                if split {
                    self.choices_done -= 1;
                }
                if !can_right && !can_down {
                    self.counters.pruned_connectivity += 1;
                }
            }
            (true, true) => {
                // Both neighbours connect here; the cell is a turn joining
                // two path ends.
                if req_r || req_d {
                    self.counters.pruned_connectivity += 1;
                    return;
                }
                if self.mate[self.hslot] as usize == c + 1 {
                    // The two ends belong to one path: this closes a cycle,
                    // which is only a solution on the final participating
                    // cell with nothing else open.
                    debug_assert_eq!(self.mate[c] as usize, self.hslot + 1);
                    if self.plug_count == 2 && self.plan.free_after[idx + 1] == 0 {
                        self.counters.expanded += 1;
                        // The closing cell joins the up and left edges, so it
                        // is itself a turn and still counts toward the cost.
                        let is_obj = self.cfg.objective == Some(Objective::Turns);
                        self.cost += is_obj as usize;
                        if self.bounded && (self.cost as i64) > self.current_budget() {
                            self.counters.pruned_bound += 1;
                        } else {
                            self.emit(idx);
                        }
                        self.cost -= is_obj as usize;
                    } else {
                        self.counters.pruned_connectivity += 1;
                    }
                } else {
                    let a = self.mate[self.hslot];
                    let b = self.mate[c];
                    self.mate[a as usize - 1] = b;
                    self.mate[b as usize - 1] = a;
                    self.mate[c] = 0;
                    self.mate[self.hslot] = 0;
                    self.plug_count -= 2;
                    self.descend(idx, CellKind::TurnCcw);
                    self.plug_count += 2;
                    self.mate[self.hslot] = a;
                    self.mate[c] = b;
                    self.mate[a as usize - 1] = self.hslot as u8 + 1;
                    self.mate[b as usize - 1] = c as u8 + 1;
                }
            }
        }
    }

    /// Resolves a two-way branch against the work-partition prefix: while
    /// prefix bits remain, only the dictated branch is taken (bit 0 picks the
    /// rightward branch, matching enumeration order).
    fn pick_branches(&self, can_right: bool, can_down: bool) -> (bool, bool, bool) {
        if can_right && can_down && self.choices_done < self.prefix_len {
            let bit = (self.prefix >> self.choices_done) & 1;
            (bit == 0, bit == 1, true)
        } else {
            (can_right, can_down, false)
        }
    }

    /// Books the decided cell, applies the admissible bounds, and recurses.
    /// The `kind` chirality is a placeholder for turns; only turn-vs-straight
    /// matters for cost accounting.
    fn descend(&mut self, idx: usize, kind: CellKind) {
        self.counters.expanded += 1;
        if let Some(node_budget) = self.cfg.node_budget {
            if self.counters.expanded >= node_budget {
                self.stop = true;
                self.exhausted = true;
                return;
            }
        }
        if !self.bounded {
            self.step(idx + 1);
            return;
        }

        let objective = self.cfg.objective.unwrap();
        let is_obj = match objective {
            Objective::Turns => kind.is_turn(),
            Objective::Straights => kind.is_straight(),
        };
        self.cost += is_obj as usize;
        let budget = self.current_budget();
        if (self.cost as i64) > budget {
            self.counters.pruned_bound += 1;
            self.cost -= is_obj as usize;
            return;
        }
        if !self.struct_bounds {
            self.step(idx + 1);
            self.cost -= is_obj as usize;
            return;
        }

        let dims = self.plan.dims;
        let (r, c) = (idx / self.cols, idx % self.cols);
        let d = is_obj as u32;
        self.row_obj[r] += d;
        self.col_obj[c] += d;
        self.row_rem[r] -= 1;
        self.col_rem[c] -= 1;
        let new_row_need = line_need(objective, dims.cols, self.row_obj[r], self.row_rem[r]);
        let new_col_need = line_need(objective, dims.rows, self.col_obj[c], self.col_rem[c]);
        let old_row_need = self.row_need[r];
        let old_col_need = self.col_need[c];

        let mut prune = None;
        match (new_row_need, new_col_need) {
            (Some(rn), Some(cn)) => {
                self.row_need_sum += rn as i64 - old_row_need as i64;
                self.col_need_sum += cn as i64 - old_col_need as i64;
                self.row_need[r] = rn;
                self.col_need[c] = cn;
                self.update_corners(r, c, d, 1);

                let cost = self.cost as i64;
                if cost + self.row_need_sum > budget || cost + self.col_need_sum > budget {
                    prune = Some(PruneReason::Parity);
                } else {
                    match self.corner_lower_bound() {
                        None => prune = Some(PruneReason::Bound),
                        Some(lb) if cost + lb > budget => prune = Some(PruneReason::Bound),
                        Some(_) => {}
                    }
                }
                if prune.is_none() {
                    self.step(idx + 1);
                }
                self.update_corners(r, c, d, -1);
                self.row_need[r] = old_row_need;
                self.col_need[c] = old_col_need;
                self.row_need_sum -= rn as i64 - old_row_need as i64;
                self.col_need_sum -= cn as i64 - old_col_need as i64;
            }
            _ => prune = Some(PruneReason::Parity),
        }
        match prune {
            Some(PruneReason::Parity) => self.counters.pruned_parity += 1,
            Some(PruneReason::Bound) => self.counters.pruned_bound += 1,
            None => {}
        }
        self.row_rem[r] += 1;
        self.col_rem[c] += 1;
        self.row_obj[r] -= d;
        self.col_obj[c] -= d;
        self.cost -= is_obj as usize;
    }

    fn update_corners(&mut self, r: usize, c: usize, d: u32, sign: i32) {
        if self.corner_smax == 0 {
            return;
        }
        let dims = self.plan.dims;
        let scale = self.corner_scale;
        let anchors = [
            (r, c),
            (r, dims.cols - 1 - c),
            (dims.rows - 1 - r, c),
            (dims.rows - 1 - r, dims.cols - 1 - c),
        ];
        for (k, (ar, ac)) in anchors.into_iter().enumerate() {
            let s0 = ar.max(ac) / scale + 1;
            for s in s0..=self.corner_smax {
                if sign > 0 {
                    self.corner_count[k][s] += d;
                    self.corner_rem[k][s] -= 1;
                } else {
                    self.corner_count[k][s] -= d;
                    self.corner_rem[k][s] += 1;
                }
            }
        }
    }

    /// Admissible lower bound on future objective cells from the corner
    /// ledgers; `None` when some corner can no longer meet its bound.
    fn corner_lower_bound(&self) -> Option<i64> {
        let mut best = 0i64;
        for s in 1..=self.corner_smax {
            let mut total = 0i64;
            for k in 0..4 {
                let have = self.corner_count[k][s];
                let deficit = (s as i64) - have as i64;
                if deficit > 0 {
                    if deficit > self.corner_rem[k][s] as i64 {
                        return None;
                    }
                    total += deficit;
                }
            }
            best = best.max(total);
        }
        Some(best)
    }

    fn emit(&mut self, _last_idx: usize) {
        // A solution reached with unconsumed prefix bits would be reported by
        // every prefix sharing its decisions; only the all-zero remainder
        // owns it.
        if self.choices_done < self.prefix_len && (self.prefix >> self.choices_done) != 0 {
            return;
        }
        self.count += 1;
        if self.cfg.minimize {
            let better = self.best_cost.is_none_or(|b| self.cost < b);
            if better {
                self.best_cost = Some(self.cost);
                self.witness_masks = Some(self.build_masks());
                self.cfg.budget = self.cost as i64 - 1;
                if let Some(shared) = &self.shared_budget {
                    shared.fetch_min(self.cost as i64 - 1, Ordering::Relaxed);
                }
            }
        }
        if let Some(visitor) = self.visitor.as_mut() {
            let masks = masks_from_edges(self.plan.dims, &self.right_edges, &self.down_edges);
            visitor(&masks, self.cost);
        }
        if self.cfg.stop_on_first {
            self.best_cost = Some(self.cost);
            self.witness_masks = Some(self.build_masks());
            self.stop = true;
        }
        if Some(self.count) == self.cfg.limit {
            self.stop = true;
        }
    }

    fn build_masks(&self) -> Vec<u8> {
        masks_from_edges(self.plan.dims, &self.right_edges, &self.down_edges)
    }
}

enum PruneReason {
    Parity,
    Bound,
}

/// Per-cell edge masks from the engine's right/down edge arrays.
pub(crate) fn masks_from_edges(dims: BoardDims, right: &[bool], down: &[bool]) -> Vec<u8> {
    let n = dims.cell_count();
    let cols = dims.cols;
    let mut masks = vec![0u8; n];
    for idx in 0..n {
        if right[idx] {
            masks[idx] |= EDGE_RIGHT;
            masks[idx + 1] |= EDGE_LEFT;
        }
        if down[idx] {
            masks[idx] |= EDGE_DOWN;
            masks[idx + cols] |= EDGE_UP;
        }
    }
    masks
}

/// Fewest objective cells a line can still add: the count must reach the
/// right parity (straights match the line length, turns are always even) and
/// clear the structural floor (an odd line cannot be all straights, so it has
/// at least one straight and at least two turns). `None` when the remaining
/// cells cannot satisfy this.
fn line_need(objective: Objective, len: usize, have: u32, remaining: u32) -> Option<u32> {
    let (target_parity, floor) = match objective {
        Objective::Straights => (len as u32 % 2, if len % 2 == 1 { 1 } else { 0 }),
        Objective::Turns => (0, if len % 2 == 1 { 2 } else { 0 }),
    };
    let mut need = (target_parity + 2 - have % 2) % 2;
    if have + need < floor {
        need += 2;
    }
    if need > remaining {
        None
    } else {
        Some(need)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_need_straights() {
        // Odd line: at least one straight, parity odd.
        assert_eq!(line_need(Objective::Straights, 9, 0, 9), Some(1));
        assert_eq!(line_need(Objective::Straights, 9, 1, 5), Some(0));
        assert_eq!(line_need(Objective::Straights, 9, 2, 5), Some(1));
        assert_eq!(line_need(Objective::Straights, 9, 2, 0), None);
        // Even line: even straight count, no floor.
        assert_eq!(line_need(Objective::Straights, 8, 0, 8), Some(0));
        assert_eq!(line_need(Objective::Straights, 8, 1, 3), Some(1));
        assert_eq!(line_need(Objective::Straights, 8, 1, 0), None);
    }

    #[test]
    fn line_need_turns() {
        assert_eq!(line_need(Objective::Turns, 9, 0, 9), Some(2));
        assert_eq!(line_need(Objective::Turns, 9, 1, 5), Some(1));
        assert_eq!(line_need(Objective::Turns, 9, 2, 5), Some(0));
        assert_eq!(line_need(Objective::Turns, 4, 0, 4), Some(0));
        assert_eq!(line_need(Objective::Turns, 4, 1, 1), Some(1));
        assert_eq!(line_need(Objective::Turns, 4, 3, 0), None);
    }
}
