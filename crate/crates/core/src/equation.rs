//! The equation of a graph, `Σ (len(C) − 2) = |V| − 2` over a subset of
//! basis cycles, its solutions, and pairwise cycle combinations.

use serde::Serialize;

use crate::cycle_space::{Cycle, CycleBasis};
use crate::graph::Graph;

/// Default number of solutions kept by [`enumerate_solutions`].
pub const DEFAULT_SOLUTION_CAP: usize = 64;

/// A solution set of basis cycles and its complement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionPartition {
    pub solution: Vec<usize>,
    pub co_solution: Vec<usize>,
    /// Co-solution cycles still available for deletion.
    pub general_co_solution_pool: Vec<usize>,
    /// Co-solution cycles grouped into maximal edge-sharing clusters.
    pub sub_co_solutions: Vec<Vec<usize>>,
}

impl SolutionPartition {
    pub fn new(b: &CycleBasis, mut solution: Vec<usize>) -> SolutionPartition {
        solution.sort_unstable();
        solution.dedup();
        let co_solution: Vec<usize> = (0..b.len()).filter(|i| solution.binary_search(i).is_err()).collect();
        let sub_co_solutions = edge_sharing_groups(b, &co_solution);
        SolutionPartition {
            general_co_solution_pool: co_solution.clone(),
            solution,
            co_solution,
            sub_co_solutions,
        }
    }

    pub fn is_solution_cycle(&self, c: usize) -> bool {
        self.solution.binary_search(&c).is_ok()
    }
}

/// Connected components of `members` under "shares at least one edge".
fn edge_sharing_groups(b: &CycleBasis, members: &[usize]) -> Vec<Vec<usize>> {
    let mut group = vec![usize::MAX; members.len()];
    let mut groups = Vec::new();
    for start in 0..members.len() {
        if group[start] != usize::MAX {
            continue;
        }
        let id = groups.len();
        group[start] = id;
        let mut stack = vec![start];
        let mut list = Vec::new();
        while let Some(i) = stack.pop() {
            list.push(members[i]);
            for j in 0..members.len() {
                if group[j] == usize::MAX
                    && !b.cycle(members[i]).edges().is_disjoint(b.cycle(members[j]).edges())
                {
                    group[j] = id;
                    stack.push(j);
                }
            }
        }
        list.sort_unstable();
        groups.push(list);
    }
    groups
}

/// `Σ (len − 2)` over the chosen cycles.
pub fn equation_lhs(b: &CycleBasis, subset: &[usize]) -> usize {
    subset.iter().map(|&i| b.cycle(i).len() - 2).sum()
}

/// All subsets of basis cycles whose left-hand side equals `n − 2`,
/// smallest subsets first and lexicographic within a size, at most `cap`.
pub fn enumerate_solutions(b: &CycleBasis, n: usize, cap: usize) -> Vec<SolutionPartition> {
    let mut out = Vec::new();
    if n < 2 || cap == 0 {
        return out;
    }
    let target = n - 2;
    let weights: Vec<usize> = b.cycles().iter().map(|c| c.len() - 2).collect();
    let dim = weights.len();
    // Every weight is ≥ 1, so no solution has more than `target` cycles.
    let max_size = dim.min(target);
    for size in 1..=max_size {
        let reach = Reachability::new(&weights, size, target);
        let mut picked = Vec::with_capacity(size);
        collect(&weights, &reach, 0, size, target, &mut picked, &mut |subset| {
            out.push(SolutionPartition::new(b, subset.to_vec()));
            out.len() < cap
        });
        if out.len() >= cap {
            break;
        }
    }
    out
}

// reach[i][k][t]: some k cycles from indices i.. have weights summing to t.
struct Reachability {
    slots: usize,
    target: usize,
    table: Vec<bool>,
}

impl Reachability {
    fn new(weights: &[usize], slots: usize, target: usize) -> Reachability {
        let dim = weights.len();
        let stride_k = target + 1;
        let stride_i = (slots + 1) * stride_k;
        let mut table = vec![false; (dim + 1) * stride_i];
        table[dim * stride_i] = true;
        for i in (0..dim).rev() {
            for k in 0..=slots {
                for t in 0..=target {
                    let skip = table[(i + 1) * stride_i + k * stride_k + t];
                    let take = k > 0
                        && t >= weights[i]
                        && table[(i + 1) * stride_i + (k - 1) * stride_k + t - weights[i]];
                    table[i * stride_i + k * stride_k + t] = skip || take;
                }
            }
        }
        Reachability { slots, target, table }
    }

    fn get(&self, i: usize, k: usize, t: usize) -> bool {
        let stride_k = self.target + 1;
        let stride_i = (self.slots + 1) * stride_k;
        self.table[i * stride_i + k * stride_k + t]
    }
}

// Returns false once the sink asks to stop.
fn collect(
    weights: &[usize],
    reach: &Reachability,
    from: usize,
    slots: usize,
    remaining: usize,
    picked: &mut Vec<usize>,
    sink: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if slots == 0 {
        return remaining != 0 || sink(picked);
    }
    for i in from..weights.len() {
        if weights[i] > remaining || !reach.get(i + 1, slots - 1, remaining - weights[i]) {
            continue;
        }
        picked.push(i);
        let go_on = collect(weights, reach, i + 1, slots - 1, remaining - weights[i], picked, sink);
        picked.pop();
        if !go_on {
            return false;
        }
    }
    true
}

pub fn is_solvable(g: &Graph, b: &CycleBasis) -> bool {
    !enumerate_solutions(b, g.vertex_count(), 1).is_empty()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CombinationTag {
    /// Two shared vertices joined by one shared edge.
    TwoCommonVe,
    /// Two shared vertices, no shared edge.
    TwoCommonV0,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CombinationKind {
    pub tag: CombinationTag,
    pub shared_vertices: usize,
    pub shared_edges: usize,
}

pub fn classify_combination(g: &Graph, a: &Cycle, c: &Cycle) -> CombinationKind {
    let va = a.vertices(g);
    let vc = c.vertices(g);
    let shared_vertices = va.iter().filter(|v| vc.binary_search(v).is_ok()).count();
    let shared_edges = a.edges().intersection_count(c.edges());
    let tag = match (shared_vertices, shared_edges) {
        (2, 1) => CombinationTag::TwoCommonVe,
        (2, 0) => CombinationTag::TwoCommonV0,
        _ => CombinationTag::Other,
    };
    CombinationKind {
        tag,
        shared_vertices,
        shared_edges,
    }
}
