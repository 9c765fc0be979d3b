//! Cycle bases over GF(2): fundamental cycles of a BFS tree, the cycle
//! matrix, per-edge R-values and the boundary/cut/inside classification.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{EdgeSet, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("edge set is not a single simple cycle")]
    NotASimpleCycle,
    #[error("edge set length {found} does not match the graph's {expected} edges")]
    WrongUniverse { expected: usize, found: usize },
    #[error("cycles are linearly dependent over GF(2)")]
    Dependent,
    #[error("expected {expected} cycles for a basis, found {found}")]
    WrongDimension { expected: usize, found: usize },
}

/// A simple cycle, stored as its edge set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    edges: EdgeSet,
    len: usize,
}

impl Cycle {
    /// Validates that `edges` induce one connected 2-regular subgraph with
    /// at least three edges.
    pub fn new(g: &Graph, edges: EdgeSet) -> Result<Cycle, CycleError> {
        if edges.universe() != g.edge_count() {
            return Err(CycleError::WrongUniverse {
                expected: g.edge_count(),
                found: edges.universe(),
            });
        }
        if !is_simple_cycle(g, &edges) {
            return Err(CycleError::NotASimpleCycle);
        }
        let len = edges.count();
        Ok(Cycle { edges, len })
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn vertices(&self, g: &Graph) -> Vec<usize> {
        g.vertices_of(&self.edges)
    }
}

/// True iff `edges` form exactly one simple cycle of length ≥ 3.
pub fn is_simple_cycle(g: &Graph, edges: &EdgeSet) -> bool {
    let count = edges.count();
    if count < 3 {
        return false;
    }
    let deg = g.degrees_in(edges);
    if deg.iter().any(|&d| d != 0 && d != 2) {
        return false;
    }
    let touched = deg.iter().filter(|&&d| d == 2).count();
    if touched != count {
        return false;
    }
    // Walk from the first touched vertex; a single cycle visits all of them.
    let start = deg.iter().position(|&d| d == 2).unwrap();
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    let mut reached = 1;
    while let Some(x) = queue.pop_front() {
        for &(y, e) in g.neighbors(x) {
            if edges.contains(e) && !seen[y] {
                seen[y] = true;
                reached += 1;
                queue.push_back(y);
            }
        }
    }
    reached == touched
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexClass {
    Boundary,
    Cut,
    Inside,
}

/// A cycle basis together with its R-values (`R(e)` = number of basis cycles
/// through `e`). Row `j` of the cycle matrix is `cycles()[j].edges()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleBasis {
    cycles: Vec<Cycle>,
    r_values: Vec<u32>,
}

impl CycleBasis {
    /// Wraps an explicit list of cycles after checking they form a basis of
    /// the cycle space of `g`.
    pub fn from_cycles(g: &Graph, cycles: Vec<Cycle>) -> Result<CycleBasis, CycleError> {
        let expected = g.edge_count() + 1 - g.vertex_count();
        if cycles.len() != expected {
            return Err(CycleError::WrongDimension {
                expected,
                found: cycles.len(),
            });
        }
        for c in &cycles {
            if c.edges.universe() != g.edge_count() {
                return Err(CycleError::WrongUniverse {
                    expected: g.edge_count(),
                    found: c.edges.universe(),
                });
            }
        }
        let rows: Vec<EdgeSet> = cycles.iter().map(|c| c.edges.clone()).collect();
        if gf2_rank(&rows) != cycles.len() {
            return Err(CycleError::Dependent);
        }
        let r_values = r_values_of(g.edge_count(), cycles.iter().map(|c| &c.edges));
        Ok(CycleBasis { cycles, r_values })
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn cycle(&self, i: usize) -> &Cycle {
        &self.cycles[i]
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn r_values(&self) -> &[u32] {
        &self.r_values
    }

    /// The cycle matrix as dense 0/1 rows.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        self.cycles
            .iter()
            .map(|c| {
                (0..self.r_values.len())
                    .map(|e| u8::from(c.edges.contains(e)))
                    .collect()
            })
            .collect()
    }
}

/// Column sums of the given rows.
pub fn r_values_of<'a, I>(edge_count: usize, rows: I) -> Vec<u32>
where
    I: IntoIterator<Item = &'a EdgeSet>,
{
    let mut r = vec![0u32; edge_count];
    for row in rows {
        for e in row.iter() {
            r[e] += 1;
        }
    }
    r
}

/// Fundamental cycles of the BFS tree rooted at vertex 0.
pub fn fundamental_basis(g: &Graph) -> CycleBasis {
    fundamental_basis_rooted(g, 0)
}

/// Fundamental cycles of the BFS tree rooted at `root`, neighbors visited in
/// ascending id order; one cycle per chord, in chord index order.
pub fn fundamental_basis_rooted(g: &Graph, root: usize) -> CycleBasis {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut tree = EdgeSet::empty(m);
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &(y, e) in g.neighbors(x) {
            if depth[y] == usize::MAX {
                depth[y] = depth[x] + 1;
                parent[y] = Some((x, e));
                tree.insert(e);
                queue.push_back(y);
            }
        }
    }
    let mut cycles = Vec::with_capacity(m + 1 - n);
    for chord in (0..m).filter(|&e| !tree.contains(e)) {
        let edge = g.edge(chord);
        let mut edges = EdgeSet::empty(m);
        edges.insert(chord);
        let (mut a, mut b) = (edge.u, edge.v);
        while a != b {
            if depth[a] < depth[b] {
                std::mem::swap(&mut a, &mut b);
            }
            let (p, e) = parent[a].expect("non-root vertex has a parent");
            edges.insert(e);
            a = p;
        }
        cycles.push(Cycle {
            len: edges.count(),
            edges,
        });
    }
    let r_values = r_values_of(m, cycles.iter().map(|c| &c.edges));
    CycleBasis { cycles, r_values }
}

/// Columnwise XOR of edge sets over a universe of `edge_count` edges.
pub fn gf2_sum<'a, I>(edge_count: usize, sets: I) -> EdgeSet
where
    I: IntoIterator<Item = &'a EdgeSet>,
{
    let mut acc = EdgeSet::empty(edge_count);
    for s in sets {
        acc.xor_with(s);
    }
    acc
}

/// Rank of the rows over GF(2).
pub fn gf2_rank(rows: &[EdgeSet]) -> usize {
    let mut pivots: Vec<(usize, EdgeSet)> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        for (pivot, prow) in &pivots {
            if r.contains(*pivot) {
                r.xor_with(prow);
            }
        }
        let first = r.iter().next();
        if let Some(p) = first {
            for (_, prow) in pivots.iter_mut() {
                if prow.contains(p) {
                    prow.xor_with(&r);
                }
            }
            pivots.push((p, r));
        }
    }
    pivots.len()
}

/// Classifies every vertex from the given R-values: cut if all incident
/// edges have R=1, boundary if exactly two do, inside otherwise.
pub fn classify_with_r(g: &Graph, r_values: &[u32]) -> Vec<VertexClass> {
    (0..g.vertex_count())
        .map(|v| {
            let incident = g.neighbors(v);
            let ones = incident.iter().filter(|&&(_, e)| r_values[e] == 1).count();
            if ones == incident.len() && ones > 0 {
                VertexClass::Cut
            } else if ones == 2 {
                VertexClass::Boundary
            } else {
                VertexClass::Inside
            }
        })
        .collect()
}

pub fn classify_vertices(g: &Graph, b: &CycleBasis) -> Vec<VertexClass> {
    classify_with_r(g, &b.r_values)
}

pub fn edges_with_r(b: &CycleBasis, r: u32) -> EdgeSet {
    EdgeSet::from_indices(
        b.r_values.len(),
        b.r_values
            .iter()
            .enumerate()
            .filter(|&(_, &x)| x == r)
            .map(|(e, _)| e),
    )
}
