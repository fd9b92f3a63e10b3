//! Exhaustive enumeration, counting, and exact minimization of turns or
//! straights over all circuits of a board.
//!
//! Two independent enumerators are provided: the scanline frontier engine in
//! [`frontier`] (fast path, used by everything here) and the plain
//! backtracker in [`naive`] (validity checks only, kept as the reference the
//! fast path is validated against).
//!
//! Branching is deterministic: wherever a cell can extend a path either
//! rightward or downward, rightward is explored first. Single-threaded runs
//! therefore emit circuits in a fixed total order, and the reported witness
//! of a minimization is the first optimal circuit in that order.

pub mod naive;

pub(crate) mod frontier;

use std::fmt;
use std::sync::atomic::{AtomicI64, AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::board::BoardDims;
use crate::circuit::Circuit;
use crate::codec::serialize_rct;

use frontier::{BoardPlan, Engine, RunConfig, RunOutcome};

/// The deterministic successor-choice order at every branch point. The
/// frontier engine only ever chooses between extending rightward and
/// downward (the other two directions are implied by already-decided
/// neighbours), so its branch order is this order restricted to those two.
pub const NEIGHBOR_ORDER: [crate::board::Dir; 4] = [
    crate::board::Dir::Right,
    crate::board::Dir::Down,
    crate::board::Dir::Left,
    crate::board::Dir::Up,
];

/// Quantity being minimized by a search.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Turns,
    Straights,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::Turns => f.write_str("turns"),
            Objective::Straights => f.write_str("straights"),
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "turns" => Ok(Objective::Turns),
            "straights" => Ok(Objective::Straights),
            other => Err(format!(
                "unknown objective {other:?} (expected turns|straights)"
            )),
        }
    }
}

/// Expansion and prune counters of one search run.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCounters {
    pub expanded: u64,
    pub pruned_parity: u64,
    pub pruned_bound: u64,
    pub pruned_connectivity: u64,
}

impl NodeCounters {
    fn absorb(&mut self, other: &NodeCounters) {
        self.expanded += other.expanded;
        self.pruned_parity += other.pruned_parity;
        self.pruned_bound += other.pruned_bound;
        self.pruned_connectivity += other.pruned_connectivity;
    }
}

/// Outcome of an exact minimization.
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub dims: BoardDims,
    pub objective: Objective,
    pub optimum: usize,
    pub witness: Circuit,
    pub nodes: NodeCounters,
    pub elapsed: Duration,
}

impl SearchReport {
    /// Fixed-schema JSON document; the witness is embedded in RCT form.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dims": { "rows": self.dims.rows, "cols": self.dims.cols },
            "objective": self.objective.to_string(),
            "optimum": self.optimum,
            "witness_rct": serialize_rct(&self.witness),
            "nodes": {
                "expanded": self.nodes.expanded,
                "pruned_parity": self.nodes.pruned_parity,
                "pruned_bound": self.nodes.pruned_bound,
                "pruned_connectivity": self.nodes.pruned_connectivity,
            },
            "elapsed_s": self.elapsed.as_secs_f64(),
        })
    }
}

/// Answer of the decision-form search [`exists_within`].
#[derive(Clone, Debug)]
pub enum Decision {
    /// A circuit meeting the bound, the first one in enumeration order.
    Witness(Box<Circuit>),
    /// The completed search ruled every circuit out.
    Absent,
    /// The node budget ran out first; never a claim of absence.
    Unknown,
}

/// Tuning knobs shared by the search entry points.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub threads: usize,
    /// Expansion budget for decision searches.
    pub node_budget: u64,
    /// Warm-start incumbent for minimization.
    pub seed: Option<Circuit>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            threads: 1,
            node_budget: 1_000_000_000,
            seed: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("no circuit exists on a {0} board")]
    Infeasible(BoardDims),
}

fn check_feasible(dims: BoardDims) -> Result<(), SearchError> {
    if dims.feasible() {
        Ok(())
    } else {
        Err(SearchError::Infeasible(dims))
    }
}

/// Visits every circuit of the board exactly once, in deterministic order,
/// and returns how many were visited. `limit` caps the visit count.
pub fn enumerate_circuits<F>(
    dims: BoardDims,
    limit: Option<u64>,
    mut visitor: F,
) -> Result<u64, SearchError>
where
    F: FnMut(&Circuit),
{
    check_feasible(dims)?;
    let mut plan = BoardPlan::rect(dims);
    plan.finalize();
    let mut emit = |masks: &[u8], _cost: usize| {
        visitor(&Circuit::from_edge_masks(dims, masks));
    };
    let outcome = Engine::new(&plan, RunConfig::enumerate(limit))
        .with_visitor(&mut emit)
        .run();
    Ok(outcome.count)
}

/// Number of circuits on the board.
pub fn count_circuits(dims: BoardDims) -> Result<u64, SearchError> {
    count_circuits_with(dims, &SearchOptions::default())
}

pub fn count_circuits_with(dims: BoardDims, opts: &SearchOptions) -> Result<u64, SearchError> {
    check_feasible(dims)?;
    let mut plan = BoardPlan::rect(dims);
    plan.finalize();
    let outcome = drive(&plan, RunConfig::enumerate(None), opts.threads, None);
    Ok(outcome.count)
}

/// Exact minimum of the objective over all circuits, with a witness circuit
/// achieving it.
pub fn minimize(dims: BoardDims, objective: Objective) -> Result<SearchReport, SearchError> {
    minimize_with(dims, objective, &SearchOptions::default())
}

pub fn minimize_with(
    dims: BoardDims,
    objective: Objective,
    opts: &SearchOptions,
) -> Result<SearchReport, SearchError> {
    check_feasible(dims)?;
    let started = Instant::now();
    let seed_cost = opts.seed.as_ref().map(|c| objective_value(c, objective));
    let mut plan = BoardPlan::rect(dims);
    plan.finalize();
    let cfg = RunConfig::minimize(objective, seed_cost);
    let outcome = drive(&plan, cfg, opts.threads, None);
    let (optimum, witness) = match (outcome.best_cost, outcome.witness_masks) {
        (Some(cost), Some(masks)) => (cost, Circuit::from_edge_masks(dims, &masks)),
        _ => {
            let seed = opts
                .seed
                .clone()
                .expect("feasible boards always have a circuit");
            (seed_cost.unwrap(), seed)
        }
    };
    Ok(SearchReport {
        dims,
        objective,
        optimum,
        witness,
        nodes: outcome.counters,
        elapsed: started.elapsed(),
    })
}

/// [`minimize`] under a node budget: `None` when the budget ran out before
/// the search completed, so the optimum is not proven.
pub fn minimize_within_budget(
    dims: BoardDims,
    objective: Objective,
    opts: &SearchOptions,
) -> Result<Option<SearchReport>, SearchError> {
    check_feasible(dims)?;
    let started = Instant::now();
    let mut plan = BoardPlan::rect(dims);
    plan.finalize();
    let mut cfg = RunConfig::minimize(objective, None);
    cfg.node_budget = Some(opts.node_budget);
    let outcome = drive(&plan, cfg, opts.threads, None);
    if outcome.node_budget_exhausted {
        return Ok(None);
    }
    let (optimum, witness) = match (outcome.best_cost, outcome.witness_masks) {
        (Some(cost), Some(masks)) => (cost, Circuit::from_edge_masks(dims, &masks)),
        _ => unreachable!("feasible boards always have a circuit"),
    };
    Ok(Some(SearchReport {
        dims,
        objective,
        optimum,
        witness,
        nodes: outcome.counters,
        elapsed: started.elapsed(),
    }))
}

/// Decision form of [`minimize`]: finds some circuit with objective value at
/// most `bound`, proves there is none, or gives up at the node budget.
pub fn exists_within(
    dims: BoardDims,
    objective: Objective,
    bound: usize,
) -> Result<Decision, SearchError> {
    exists_within_with(dims, objective, bound, &SearchOptions::default())
}

pub fn exists_within_with(
    dims: BoardDims,
    objective: Objective,
    bound: usize,
    opts: &SearchOptions,
) -> Result<Decision, SearchError> {
    check_feasible(dims)?;
    let mut plan = BoardPlan::rect(dims);
    plan.finalize();
    let cfg = RunConfig::first_within(objective, bound, Some(opts.node_budget));
    let outcome = drive(&plan, cfg, opts.threads, None);
    Ok(decision_from(dims, outcome))
}

fn decision_from(dims: BoardDims, outcome: RunOutcome) -> Decision {
    if let Some(masks) = outcome.witness_masks {
        Decision::Witness(Box::new(Circuit::from_edge_masks(dims, &masks)))
    } else if outcome.node_budget_exhausted {
        Decision::Unknown
    } else {
        Decision::Absent
    }
}

/// Maximum number of turns over all circuits, found by negating the
/// objective: every cell is a turn or a straight, so maximizing turns is
/// minimizing straights.
pub fn maximize_turns(dims: BoardDims) -> Result<(usize, Circuit), SearchError> {
    let report = minimize(dims, Objective::Straights)?;
    Ok((dims.cell_count() - report.optimum, report.witness))
}

pub(crate) fn objective_value(circuit: &Circuit, objective: Objective) -> usize {
    let stats = circuit.stats();
    match objective {
        Objective::Turns => stats.turns_total,
        Objective::Straights => stats.straights_total,
    }
}

/// Runs the engine, fanning top-level branches out to a worker pool when
/// `threads > 1`. Workers partition the search tree by the first few binary
/// branch decisions and share only an atomic incumbent bound; counts and
/// optimum values are deterministic regardless of worker count, witness
/// identity only in single-threaded mode.
pub(crate) type SolutionVisitor<'v> = &'v mut dyn FnMut(&[u8], usize);

pub(crate) fn drive(
    plan: &BoardPlan,
    cfg: RunConfig,
    threads: usize,
    visitor: Option<SolutionVisitor<'_>>,
) -> RunOutcome {
    if threads <= 1 || visitor.is_some() {
        let engine = Engine::new(plan, cfg);
        return match visitor {
            Some(v) => engine.with_visitor(v).run(),
            None => engine.run(),
        };
    }

    let prefix_bits = ((threads * 8).next_power_of_two().trailing_zeros()).min(12);
    let prefix_count: u64 = 1 << prefix_bits;
    let shared_budget = Arc::new(AtomicI64::new(cfg.budget));
    let next = AtomicUsize::new(0);
    let mut results: Vec<(u64, RunOutcome)> = Vec::new();

    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for _ in 0..threads {
            let cfg = cfg.clone();
            let shared_budget = Arc::clone(&shared_budget);
            let next = &next;
            handles.push(scope.spawn(move || {
                let mut local = Vec::new();
                loop {
                    let p = next.fetch_add(1, Ordering::Relaxed) as u64;
                    if p >= prefix_count {
                        break;
                    }
                    let outcome = Engine::new(plan, cfg.clone())
                        .with_shared_budget(Arc::clone(&shared_budget))
                        .with_prefix(p, prefix_bits)
                        .run();
                    local.push((p, outcome));
                }
                local
            }));
        }
        for handle in handles {
            results.extend(handle.join().expect("search worker panicked"));
        }
    });

    results.sort_by_key(|(p, _)| *p);
    let mut merged = RunOutcome {
        count: 0,
        best_cost: None,
        witness_masks: None,
        counters: NodeCounters::default(),
        node_budget_exhausted: false,
    };
    for (_, outcome) in results {
        merged.count += outcome.count;
        merged.counters.absorb(&outcome.counters);
        merged.node_budget_exhausted |= outcome.node_budget_exhausted;
        if let Some(cost) = outcome.best_cost {
            if merged.best_cost.is_none_or(|b| cost < b) {
                merged.best_cost = Some(cost);
                merged.witness_masks = outcome.witness_masks;
            }
        }
    }
    merged
}
