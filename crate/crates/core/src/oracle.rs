//! Exact ground truth: Hamiltonicity by backtracking, the optimum tour by
//! Held–Karp, and full tour enumeration for cross-checking both.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{EdgeSet, Graph, Weight};

/// Largest graph accepted by [`min_tour_held_karp`].
pub const HELD_KARP_MAX_VERTICES: usize = 24;
/// Largest graph accepted by [`enumerate_tours`].
pub const ENUMERATION_MAX_VERTICES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {n} vertices; this oracle handles at most {max}")]
    TooLarge { n: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleAnswer {
    pub hamiltonian: bool,
    pub optimum_weight: Option<Weight>,
    pub optimum_tour: Option<Vec<usize>>,
    pub tours_enumerated: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TourError {
    #[error("tour visits {found} vertices, graph has {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("vertex {0} is visited twice or is out of range")]
    BadVertex(usize),
    #[error("no edge between {0} and {1}")]
    MissingEdge(usize, usize),
}

/// Checks that `tour` is a Hamilton cycle of `g` and returns its weight.
pub fn validate_tour(g: &Graph, tour: &[usize]) -> Result<Weight, TourError> {
    let n = g.vertex_count();
    if n < 3 || tour.len() != n {
        return Err(TourError::WrongLength {
            expected: n,
            found: tour.len(),
        });
    }
    let mut seen = vec![false; n];
    for &v in tour {
        if v >= n || seen[v] {
            return Err(TourError::BadVertex(v));
        }
        seen[v] = true;
    }
    let mut total = Weight::ZERO;
    for i in 0..n {
        let (a, b) = (tour[i], tour[(i + 1) % n]);
        let e = g.edge_between(a, b).ok_or(TourError::MissingEdge(a, b))?;
        total += g.edge(e).w;
    }
    Ok(total)
}

pub fn is_hamiltonian(g: &Graph) -> bool {
    is_hamiltonian_in(g, &EdgeSet::full(g.edge_count()))
}

/// Hamiltonicity of the spanning subgraph formed by `edges`.
pub fn is_hamiltonian_in(g: &Graph, edges: &EdgeSet) -> bool {
    let n = g.vertex_count();
    if n < 3 {
        return false;
    }
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .filter(|&&(_, e)| edges.contains(e))
                .map(|&(y, _)| y)
                .collect()
        })
        .collect();
    if adj.iter().any(|a| a.len() < 2) {
        return false;
    }
    let mut search = Backtrack {
        adj: &adj,
        on_path: vec![false; n],
        free_degree: adj.iter().map(Vec::len).collect(),
        path_len: 0,
    };
    search.on_path[0] = true;
    search.path_len = 1;
    search.leave(0);
    search.extend(0)
}

struct Backtrack<'a> {
    adj: &'a [Vec<usize>],
    on_path: Vec<bool>,
    // For vertices off the path: neighbors that are still off the path.
    free_degree: Vec<usize>,
    path_len: usize,
}

impl Backtrack<'_> {
    fn leave(&mut self, v: usize) {
        for &y in &self.adj[v] {
            self.free_degree[y] -= 1;
        }
    }

    fn restore(&mut self, v: usize) {
        for &y in &self.adj[v] {
            self.free_degree[y] += 1;
        }
    }

    fn extend(&mut self, end: usize) -> bool {
        let n = self.adj.len();
        if self.path_len == n {
            return self.adj[end].contains(&0);
        }
        // An off-path vertex needs two ways in: free neighbors, or the path
        // end / start adjacency.
        for v in 0..n {
            if self.on_path[v] {
                continue;
            }
            let touches_end = self.adj[v].contains(&end);
            let touches_start = self.adj[v].contains(&0);
            if self.free_degree[v] + usize::from(touches_end) + usize::from(touches_start) < 2 {
                return false;
            }
        }
        for i in 0..self.adj[end].len() {
            let next = self.adj[end][i];
            if self.on_path[next] {
                continue;
            }
            self.on_path[next] = true;
            self.path_len += 1;
            self.leave(next);
            if self.extend(next) {
                return true;
            }
            self.restore(next);
            self.path_len -= 1;
            self.on_path[next] = false;
        }
        false
    }
}

/// Exact minimum Hamilton cycle by dynamic programming over vertex subsets.
/// Only existing edges are used.
pub fn min_tour_held_karp(g: &Graph) -> Result<OracleAnswer, OracleError> {
    let n = g.vertex_count();
    if n > HELD_KARP_MAX_VERTICES {
        return Err(OracleError::TooLarge {
            n,
            max: HELD_KARP_MAX_VERTICES,
        });
    }
    let no_tour = OracleAnswer {
        hamiltonian: false,
        optimum_weight: None,
        optimum_tour: None,
        tours_enumerated: None,
    };
    if n < 3 {
        return Ok(no_tour);
    }
    // Vertices 1..n are bits 0..n-1 of the mask; paths start at vertex 0.
    let k = n - 1;
    let full = (1usize << k) - 1;
    const INF: i64 = i64::MAX;
    let mut cost = vec![INF; (1 << k) * k];
    let at = |mask: usize, j: usize| mask * k + j;
    for &(y, e) in g.neighbors(0) {
        cost[at(1 << (y - 1), y - 1)] = g.edge(e).w.micros();
    }
    for mask in 1..=full {
        for j in 0..k {
            let here = cost[at(mask, j)];
            if here == INF || mask & (1 << j) == 0 {
                continue;
            }
            for &(y, e) in g.neighbors(j + 1) {
                if y == 0 || mask & (1 << (y - 1)) != 0 {
                    continue;
                }
                let next = at(mask | 1 << (y - 1), y - 1);
                let candidate = here + g.edge(e).w.micros();
                if candidate < cost[next] {
                    cost[next] = candidate;
                }
            }
        }
    }
    let mut best: Option<(i64, usize)> = None;
    for &(y, e) in g.neighbors(0) {
        let here = cost[at(full, y - 1)];
        if here == INF {
            continue;
        }
        let total = here + g.edge(e).w.micros();
        if best.is_none_or(|(b, _)| total < b) {
            best = Some((total, y - 1));
        }
    }
    let Some((total, last)) = best else {
        return Ok(no_tour);
    };
    // Walk back through the table.
    let mut tour = vec![0; n];
    let mut mask = full;
    let mut j = last;
    for pos in (1..n).rev() {
        tour[pos] = j + 1;
        let prev_mask = mask & !(1 << j);
        if prev_mask == 0 {
            break;
        }
        let here = cost[at(mask, j)];
        let prev = g
            .neighbors(j + 1)
            .iter()
            .filter(|&&(y, _)| y != 0 && prev_mask & (1 << (y - 1)) != 0)
            .map(|&(y, e)| (cost[at(prev_mask, y - 1)], (y - 1, g.edge(e).w.micros())))
            .find(|&(c, (_, w))| c != INF && c + w == here)
            .map(|(_, (y, _))| y)
            .expect("predecessor exists");
        mask = prev_mask;
        j = prev;
    }
    if tour[1] > tour[n - 1] {
        tour[1..].reverse();
    }
    Ok(OracleAnswer {
        hamiltonian: true,
        optimum_weight: Some(Weight::from_micros(total)),
        optimum_tour: Some(tour),
        tours_enumerated: None,
    })
}

/// Every Hamilton cycle once, up to rotation and reflection, in canonical
/// form (start at 0, second vertex smaller than the last), at most `limit`.
pub fn enumerate_tours(g: &Graph, limit: usize) -> Result<Vec<(Vec<usize>, Weight)>, OracleError> {
    let n = g.vertex_count();
    if n > ENUMERATION_MAX_VERTICES {
        return Err(OracleError::TooLarge {
            n,
            max: ENUMERATION_MAX_VERTICES,
        });
    }
    let mut out = Vec::new();
    if n < 3 || limit == 0 {
        return Ok(out);
    }
    let mut path = vec![0];
    let mut used = vec![false; n];
    used[0] = true;
    enumerate_from(g, &mut path, &mut used, Weight::ZERO, limit, &mut out);
    Ok(out)
}

fn enumerate_from(
    g: &Graph,
    path: &mut Vec<usize>,
    used: &mut [bool],
    weight: Weight,
    limit: usize,
    out: &mut Vec<(Vec<usize>, Weight)>,
) {
    let n = g.vertex_count();
    let end = *path.last().unwrap();
    if path.len() == n {
        if path[1] < path[n - 1] {
            if let Some(e) = g.edge_between(end, 0) {
                out.push((path.clone(), weight + g.edge(e).w));
            }
        }
        return;
    }
    for &(y, e) in g.neighbors(end) {
        if out.len() >= limit {
            return;
        }
        if used[y] {
            continue;
        }
        used[y] = true;
        path.push(y);
        enumerate_from(g, path, used, weight + g.edge(e).w, limit, out);
        path.pop();
        used[y] = false;
    }
}

/// Held–Karp optimum plus, for small graphs, the enumerated tour count.
pub fn solve(g: &Graph) -> Result<OracleAnswer, OracleError> {
    let mut answer = min_tour_held_karp(g)?;
    if g.vertex_count() <= ENUMERATION_MAX_VERTICES {
        answer.tours_enumerated = Some(enumerate_tours(g, usize::MAX)?.len());
    }
    Ok(answer)
}
