//! The "1-1" deletion loop.
//!
//! Starting from the full cycle basis, co-solution cycles that can be
//! deleted are scored by Δw, the weight of edges that drop to R=1, and the
//! cheapest is deleted. When the co-solution pool runs dry the R=1 edges of
//! the remaining solution cycles are read off as the tour.

use serde::Serialize;
use thiserror::Error;

use crate::cycle_space::{fundamental_basis_rooted, CycleBasis};
use crate::equation::{enumerate_solutions, SolutionPartition, DEFAULT_SOLUTION_CAP};
use crate::graph::{EdgeSet, Graph, Weight};
use crate::oracle;
use crate::removability::{is_removable, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("cycle {cycle} is not removable ({verdict:?})")]
    NotRemovable { cycle: usize, verdict: Verdict },
    #[error("cycle {cycle} is not in the co-solution pool")]
    NotInPool { cycle: usize },
}

/// One applied (or simulated) deletion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaRecord {
    pub cycle: usize,
    /// The R=1 edge that leaves the union.
    pub removed_edge: usize,
    /// Edges whose R drops from 2 to 1.
    pub newly_boundary: Vec<usize>,
    pub delta_w: Weight,
}

/// Retained basis subset and the quantities derived from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverState<'a> {
    graph: &'a Graph,
    basis: &'a CycleBasis,
    retained: Vec<bool>,
    union_edges: EdgeSet,
    r_values: Vec<u32>,
    partition: SolutionPartition,
    trace: Vec<DeltaRecord>,
}

impl<'a> SolverState<'a> {
    pub fn new(graph: &'a Graph, basis: &'a CycleBasis, partition: SolutionPartition) -> SolverState<'a> {
        let r_values = basis.r_values().to_vec();
        let union_edges = EdgeSet::from_indices(
            graph.edge_count(),
            r_values.iter().enumerate().filter(|&(_, &r)| r > 0).map(|(e, _)| e),
        );
        SolverState {
            graph,
            basis,
            retained: vec![true; basis.len()],
            union_edges,
            r_values,
            partition,
            trace: Vec::new(),
        }
    }

    pub fn graph(&self) -> &'a Graph {
        self.graph
    }

    pub fn basis(&self) -> &'a CycleBasis {
        self.basis
    }

    pub fn is_retained(&self, c: usize) -> bool {
        self.retained.get(c).copied().unwrap_or(false)
    }

    pub fn retained(&self) -> Vec<usize> {
        (0..self.retained.len()).filter(|&c| self.retained[c]).collect()
    }

    pub fn retained_count(&self) -> usize {
        self.retained.iter().filter(|&&r| r).count()
    }

    /// Edges with R ≥ 1.
    pub fn union_edges(&self) -> &EdgeSet {
        &self.union_edges
    }

    pub fn r_values(&self) -> &[u32] {
        &self.r_values
    }

    /// Edges with R = 1.
    pub fn boundary_edges(&self) -> EdgeSet {
        EdgeSet::from_indices(
            self.r_values.len(),
            self.r_values
                .iter()
                .enumerate()
                .filter(|&(_, &r)| r == 1)
                .map(|(e, _)| e),
        )
    }

    pub fn partition(&self) -> &SolutionPartition {
        &self.partition
    }

    /// Co-solution cycles not yet deleted.
    pub fn pool(&self) -> &[usize] {
        &self.partition.general_co_solution_pool
    }

    pub fn trace(&self) -> &[DeltaRecord] {
        &self.trace
    }

    /// A scratch copy with `c` taken out of the retained set.
    pub fn without(&self, c: usize) -> SolverState<'a> {
        let mut next = self.clone();
        next.drop_row(c);
        next
    }

    fn drop_row(&mut self, c: usize) {
        if !self.is_retained(c) {
            return;
        }
        self.retained[c] = false;
        for e in self.basis.cycle(c).edges().iter() {
            self.r_values[e] -= 1;
            if self.r_values[e] == 0 {
                self.union_edges.remove(e);
            }
        }
        self.partition.general_co_solution_pool.retain(|&x| x != c);
    }

    /// Deletes `c` after checking it is a removable co-solution cycle.
    pub fn apply_deletion(&mut self, c: usize) -> Result<DeltaRecord, SolverError> {
        let record = delta_w(self, c)?;
        self.apply_record(record.clone());
        Ok(record)
    }

    fn apply_record(&mut self, record: DeltaRecord) {
        self.drop_row(record.cycle);
        self.trace.push(record);
    }

    pub fn snapshot(&self) -> StateSnapshot {
        StateSnapshot {
            retained: self.retained(),
            union_edges: self.union_edges.iter().collect(),
            r_values: self.r_values.clone(),
            pool: self.pool().to_vec(),
        }
    }
}

/// Owned copy of the mutable part of a [`SolverState`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateSnapshot {
    pub retained: Vec<usize>,
    pub union_edges: Vec<usize>,
    pub r_values: Vec<u32>,
    pub pool: Vec<usize>,
}

fn removal_record(state: &SolverState<'_>, c: usize, removed_edge: usize) -> DeltaRecord {
    let g = state.graph();
    let newly_boundary: Vec<usize> = state
        .basis()
        .cycle(c)
        .edges()
        .iter()
        .filter(|&e| state.r_values()[e] == 2)
        .collect();
    let delta_w = newly_boundary.iter().map(|&e| g.edge(e).w).sum();
    DeltaRecord {
        cycle: c,
        removed_edge,
        newly_boundary,
        delta_w,
    }
}

/// Simulates deleting the removable co-solution cycle `c`.
pub fn delta_w(state: &SolverState<'_>, c: usize) -> Result<DeltaRecord, SolverError> {
    if !state.pool().contains(&c) {
        return Err(SolverError::NotInPool { cycle: c });
    }
    let ctx = is_removable(state, c);
    match (ctx.verdict, ctx.r1_edge) {
        (Verdict::Removable, Some(edge)) => Ok(removal_record(state, c, edge)),
        (verdict, _) => Err(SolverError::NotRemovable { cycle: c, verdict }),
    }
}

/// Index of the candidate with minimal Δw; ties go to the lighter removed
/// edge, then the lower cycle index.
pub fn overlapping_compare(state: &SolverState<'_>, candidates: &[DeltaRecord]) -> usize {
    let g = state.graph();
    candidates
        .iter()
        .min_by_key(|r| (r.delta_w, g.edge(r.removed_edge).w, r.cycle))
        .expect("at least one candidate")
        .cycle
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NotHamiltonianInput,
    NoSolution,
    Stuck,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub candidates_tested: u64,
    pub reduce_calls: u64,
    pub comparisons: u64,
    pub deletions: u64,
    /// Cycle-matrix rows read or combined.
    pub row_ops: u64,
    pub passes: u64,
    /// Largest number of candidates examined in a single pass.
    pub max_pass_candidates: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    /// Started working on the `index`-th solution partition.
    Partition { index: usize, solution: Vec<usize> },
    Deletion(DeltaRecord),
    /// No pool cycle was removable.
    Stuck { pool: Vec<usize> },
    /// The pool emptied but the R=1 edges are not a Hamilton cycle.
    NotATour { boundary_edges: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TourResult {
    pub status: Status,
    pub tour: Option<Vec<usize>>,
    pub weight: Option<Weight>,
    pub trace: Vec<TraceEvent>,
    pub counters: Counters,
    pub solvable: bool,
    pub solutions_tried: usize,
    /// State at the end of the last partition attempted.
    pub final_state: Option<StateSnapshot>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    pub solution_cap: usize,
    /// Root of the BFS tree behind the fundamental basis.
    pub root: usize,
}

impl Default for SolverOptions {
    fn default() -> SolverOptions {
        SolverOptions {
            solution_cap: DEFAULT_SOLUTION_CAP,
            root: 0,
        }
    }
}

pub fn run_one_one(g: &Graph) -> TourResult {
    run_one_one_with(g, SolverOptions::default())
}

pub fn run_one_one_with(g: &Graph, options: SolverOptions) -> TourResult {
    let mut result = TourResult {
        status: Status::NotHamiltonianInput,
        tour: None,
        weight: None,
        trace: Vec::new(),
        counters: Counters::default(),
        solvable: false,
        solutions_tried: 0,
        final_state: None,
    };
    if !oracle::is_hamiltonian(g) {
        return result;
    }
    let basis = fundamental_basis_rooted(g, options.root.min(g.vertex_count() - 1));
    let partitions = enumerate_solutions(&basis, g.vertex_count(), options.solution_cap);
    if partitions.is_empty() {
        result.status = Status::NoSolution;
        return result;
    }
    result.solvable = true;
    result.status = Status::Stuck;
    for (index, partition) in partitions.into_iter().enumerate() {
        result.solutions_tried += 1;
        result.trace.push(TraceEvent::Partition {
            index,
            solution: partition.solution.clone(),
        });
        let mut state = SolverState::new(g, &basis, partition);
        let finished = drive(&mut state, &mut result.counters);
        result
            .trace
            .extend(state.trace().iter().cloned().map(TraceEvent::Deletion));
        result.final_state = Some(state.snapshot());
        if !finished {
            result.trace.push(TraceEvent::Stuck {
                pool: state.pool().to_vec(),
            });
            continue;
        }
        let boundary = state.boundary_edges();
        match g.hamilton_cycle_in(&boundary) {
            Some(tour) => {
                result.status = Status::Ok;
                result.weight = Some(g.weight_of(&boundary));
                result.tour = Some(tour);
                return result;
            }
            None => result.trace.push(TraceEvent::NotATour {
                boundary_edges: boundary.iter().collect(),
            }),
        }
    }
    result
}

// One partition's S1/S2 loop. Returns false when stuck with a non-empty pool.
fn drive(state: &mut SolverState<'_>, counters: &mut Counters) -> bool {
    while !state.pool().is_empty() {
        counters.passes += 1;
        let pool = state.pool().to_vec();
        counters.max_pass_candidates = counters.max_pass_candidates.max(pool.len() as u64);
        let mut records = Vec::new();
        for &c in &pool {
            counters.candidates_tested += 1;
            let ctx = is_removable(state, c);
            counters.reduce_calls += ctx.reduce_calls;
            counters.row_ops += ctx.row_ops;
            if let (Verdict::Removable, Some(edge)) = (ctx.verdict, ctx.r1_edge) {
                counters.row_ops += 1;
                records.push(removal_record(state, c, edge));
            }
        }
        if records.is_empty() {
            return false;
        }
        counters.comparisons += records.len() as u64 - 1;
        let chosen = overlapping_compare(state, &records);
        let record = records
            .into_iter()
            .find(|r| r.cycle == chosen)
            .expect("chosen among records");
        counters.row_ops += 1;
        counters.deletions += 1;
        state.apply_record(record);
    }
    true
}

/// Rebuilds the final state of the last partition in `trace` by re-applying
/// its deletions from scratch.
pub fn replay(g: &Graph, options: SolverOptions, trace: &[TraceEvent]) -> Result<Option<StateSnapshot>, SolverError> {
    let start = trace
        .iter()
        .rposition(|ev| matches!(ev, TraceEvent::Partition { .. }));
    let Some(start) = start else {
        return Ok(None);
    };
    let TraceEvent::Partition { solution, .. } = &trace[start] else {
        unreachable!()
    };
    let basis = fundamental_basis_rooted(g, options.root.min(g.vertex_count() - 1));
    let mut state = SolverState::new(g, &basis, SolutionPartition::new(&basis, solution.clone()));
    for ev in &trace[start + 1..] {
        if let TraceEvent::Deletion(record) = ev {
            let applied = state.apply_deletion(record.cycle)?;
            debug_assert_eq!(&applied, record);
        }
    }
    Ok(Some(state.snapshot()))
}
