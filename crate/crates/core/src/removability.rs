//! Whether a retained basis cycle may be deleted: the candidate test, the
//! degree-2 neighbor count |P|, diagonal cycles and their edge-sharing
//! clusters, and the reduction that decides a cluster's Hamiltonicity.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cycle_space::{classify_with_r, VertexClass};
use crate::graph::{EdgeSet, Graph};
use crate::solver::SolverState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Removable,
    NotCandidate,
    BlockedByP,
    BlockedByCnabla,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RemovabilityContext {
    pub target: usize,
    /// The target's only R=1 edge, when it has exactly one.
    pub r1_edge: Option<usize>,
    /// Degree-4 vertices of the target that become boundary vertices.
    pub k_vertices: Vec<usize>,
    pub diagonals: Vec<usize>,
    pub verdict: Verdict,
    pub reduce_calls: u64,
    pub row_ops: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionTag {
    CycleGraph,
    Acyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum ReductionStep {
    /// Deleted edge `u–v` (vertex ids of the reduced input).
    DeleteEdge { u: usize, v: usize },
    Smooth { vertex: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionOutcome {
    pub tag: ReductionTag,
    pub steps: Vec<ReductionStep>,
}

/// Move selection for [`reduce_cnabla_set_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionOrder {
    /// Lowest edge (then lowest vertex) first.
    Lowest,
    /// Uniformly random among applicable moves of the first applicable rule.
    Shuffled(u64),
}

/// Exactly one edge of `c` has R=1, and dropping it leaves every vertex
/// with at least one edge.
pub fn is_candidate(state: &SolverState<'_>, c: usize) -> bool {
    sole_r1_edge(state, c).is_some()
}

fn sole_r1_edge(state: &SolverState<'_>, c: usize) -> Option<usize> {
    if !state.is_retained(c) {
        return None;
    }
    let r = state.r_values();
    let mut ones = state.basis().cycle(c).edges().iter().filter(|&e| r[e] == 1);
    let edge = ones.next()?;
    if ones.next().is_some() {
        return None;
    }
    let g = state.graph();
    let deg = g.degrees_in(state.union_edges());
    let ends = g.edge(edge);
    (deg[ends.u] > 1 && deg[ends.v] > 1).then_some(edge)
}

/// Number of neighbors of `v` that have degree exactly 2.
pub fn p_value(g: &Graph, v: usize) -> usize {
    g.neighbors(v).iter().filter(|&&(y, _)| g.degree(y) == 2).count()
}

fn p_value_in(g: &Graph, edges: &EdgeSet, deg: &[usize], v: usize) -> usize {
    g.neighbors(v)
        .iter()
        .filter(|&&(y, e)| edges.contains(e) && deg[y] == 2)
        .count()
}

/// Retained cycles edge-disjoint from `c` that meet it in exactly one vertex.
pub fn find_diagonals(state: &SolverState<'_>, c: usize) -> Vec<usize> {
    let g = state.graph();
    let target = state.basis().cycle(c);
    let target_vertices = target.vertices(g);
    state
        .retained()
        .into_iter()
        .filter(|&d| d != c)
        .filter(|&d| {
            let other = state.basis().cycle(d);
            other.edges().is_disjoint(target.edges())
                && other
                    .vertices(g)
                    .iter()
                    .filter(|v| target_vertices.binary_search(v).is_ok())
                    .count()
                    == 1
        })
        .collect()
}

/// The union of `d` and every retained cycle reachable from it through
/// shared edges, as a graph with the original weights.
pub fn build_cnabla_set(state: &SolverState<'_>, d: usize) -> Graph {
    cnabla_cluster(state, d).0
}

fn cnabla_cluster(state: &SolverState<'_>, d: usize) -> (Graph, u64) {
    let basis = state.basis();
    let retained = state.retained();
    let mut in_cluster = vec![false; basis.len()];
    in_cluster[d] = true;
    let mut stack = vec![d];
    let mut union = basis.cycle(d).edges().clone();
    let mut row_ops = 0u64;
    while let Some(x) = stack.pop() {
        for &y in &retained {
            if in_cluster[y] {
                continue;
            }
            row_ops += 1;
            if !basis.cycle(x).edges().is_disjoint(basis.cycle(y).edges()) {
                in_cluster[y] = true;
                union.union_with(basis.cycle(y).edges());
                stack.push(y);
            }
        }
    }
    let (graph, _) = state
        .graph()
        .edge_induced(&union)
        .expect("a cluster of edge-sharing cycles is connected");
    (graph, row_ops)
}

/// Forced-edge deletions and degree-2 smoothing, applied to a fixpoint.
pub fn reduce_cnabla_set(s: &Graph) -> ReductionOutcome {
    reduce_cnabla_set_with(s, ReductionOrder::Lowest)
}

pub fn reduce_cnabla_set_with(s: &Graph, order: ReductionOrder) -> ReductionOutcome {
    let mut work = WorkGraph::from_graph(s);
    let mut rng = match order {
        ReductionOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        ReductionOrder::Lowest => None,
    };
    let mut steps = Vec::new();
    loop {
        if work.is_cycle_graph() {
            return ReductionOutcome {
                tag: ReductionTag::CycleGraph,
                steps,
            };
        }
        // A vertex with fewer than two edges can never lie on a spanning cycle.
        if work.alive().any(|v| work.degree(v) < 2) {
            break;
        }
        let deletions = work.forced_deletions();
        if !deletions.is_empty() {
            let (u, v) = pick(&deletions, rng.as_mut());
            work.remove_edge(u, v);
            steps.push(ReductionStep::DeleteEdge { u, v });
            continue;
        }
        let smoothable = work.smoothable();
        if !smoothable.is_empty() {
            let vertex = pick(&smoothable, rng.as_mut());
            work.smooth(vertex);
            steps.push(ReductionStep::Smooth { vertex });
            continue;
        }
        break;
    }
    ReductionOutcome {
        tag: ReductionTag::Acyclic,
        steps,
    }
}

fn pick<T: Copy>(options: &[T], rng: Option<&mut ChaCha8Rng>) -> T {
    match rng {
        Some(rng) => *options.choose(rng).expect("non-empty"),
        None => options[0],
    }
}

// Mutable simple graph keyed by the input's vertex ids.
struct WorkGraph {
    adj: Vec<BTreeSet<usize>>,
    alive: Vec<bool>,
}

impl WorkGraph {
    fn from_graph(g: &Graph) -> WorkGraph {
        let mut adj = vec![BTreeSet::new(); g.vertex_count()];
        for e in g.edges() {
            adj[e.u].insert(e.v);
            adj[e.v].insert(e.u);
        }
        WorkGraph {
            adj,
            alive: vec![true; g.vertex_count()],
        }
    }

    fn alive(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.adj.len()).filter(|&v| self.alive[v])
    }

    fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    fn is_cycle_graph(&self) -> bool {
        let vertices: Vec<usize> = self.alive().collect();
        if vertices.len() < 3 || vertices.iter().any(|&v| self.degree(v) != 2) {
            return false;
        }
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![vertices[0]];
        seen[vertices[0]] = true;
        let mut reached = 1;
        while let Some(x) = stack.pop() {
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    stack.push(y);
                }
            }
        }
        reached == vertices.len()
    }

    fn p_value(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&y| self.degree(y) == 2).count()
    }

    // Edges from a vertex with exactly two degree-2 neighbors (and degree
    // above 2) to its other neighbors, ascending as (min, max) pairs.
    fn forced_deletions(&self) -> Vec<(usize, usize)> {
        let mut out = BTreeSet::new();
        for v in self.alive() {
            if self.degree(v) > 2 && self.p_value(v) == 2 {
                for &y in &self.adj[v] {
                    if self.degree(y) != 2 {
                        out.insert((v.min(y), v.max(y)));
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    // Degree-2 vertices next to another degree-2 vertex whose two neighbors
    // are not already adjacent.
    fn smoothable(&self) -> Vec<usize> {
        self.alive()
            .filter(|&v| self.degree(v) == 2)
            .filter(|&v| {
                let mut it = self.adj[v].iter();
                let (x, y) = (*it.next().unwrap(), *it.next().unwrap());
                (self.degree(x) == 2 || self.degree(y) == 2) && !self.adj[x].contains(&y)
            })
            .collect()
    }

    fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u].remove(&v);
        self.adj[v].remove(&u);
    }

    fn smooth(&mut self, v: usize) {
        let nbrs: Vec<usize> = self.adj[v].iter().copied().collect();
        let (x, y) = (nbrs[0], nbrs[1]);
        self.remove_edge(v, x);
        self.remove_edge(v, y);
        self.adj[x].insert(y);
        self.adj[y].insert(x);
        self.alive[v] = false;
    }
}

/// Decides whether `c` can be deleted from the retained basis.
pub fn is_removable(state: &SolverState<'_>, c: usize) -> RemovabilityContext {
    let mut ctx = RemovabilityContext {
        target: c,
        r1_edge: None,
        k_vertices: Vec::new(),
        diagonals: Vec::new(),
        verdict: Verdict::NotCandidate,
        reduce_calls: 0,
        row_ops: 1,
    };
    let Some(edge) = sole_r1_edge(state, c) else {
        return ctx;
    };
    ctx.r1_edge = Some(edge);

    let g = state.graph();
    let scratch = state.without(c);
    ctx.row_ops += 1;
    let union = scratch.union_edges();
    let deg = g.degrees_in(union);

    let before = classify_with_r(g, state.r_values());
    let after = classify_with_r(g, scratch.r_values());
    ctx.k_vertices = state
        .basis()
        .cycle(c)
        .vertices(g)
        .into_iter()
        .filter(|&v| {
            deg[v] == 4 && after[v] == VertexClass::Boundary && before[v] != VertexClass::Boundary
        })
        .collect();

    if (0..g.vertex_count()).any(|v| p_value_in(g, union, &deg, v) >= 3) {
        ctx.verdict = Verdict::BlockedByP;
        return ctx;
    }

    ctx.diagonals = find_diagonals(state, c);
    ctx.row_ops += state.retained_count() as u64;
    for &d in &ctx.diagonals {
        let (cluster, ops) = cnabla_cluster(&scratch, d);
        ctx.row_ops += ops;
        ctx.reduce_calls += 1;
        if reduce_cnabla_set(&cluster).tag == ReductionTag::Acyclic {
            ctx.verdict = Verdict::BlockedByCnabla;
            return ctx;
        }
    }
    ctx.verdict = Verdict::Removable;
    ctx
}
