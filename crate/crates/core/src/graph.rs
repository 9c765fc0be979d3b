//! Weighted simple graphs, the edge-list text format, and the handful of
//! structural operations the rest of the crate builds on.
//!
//! Vertices are `0..n`. Edges are stored once, as `(u, v)` with `u < v`, in
//! ascending `(u, v)` order; an edge's index in that list is its identity
//! everywhere else (cycle rows, R-values, traces).

use std::collections::VecDeque;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Number of weight units per whole unit. Decimal weights are scaled by this
/// at parse time, so `1.5` is stored as `1_500_000`.
pub const WEIGHT_SCALE: i64 = 1_000_000;

/// Largest accepted absolute weight, in whole units.
pub const MAX_ABS_WEIGHT: i64 = 1_000_000_000;

/// An exact edge weight in micro-units.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(i64);

impl Weight {
    pub const ZERO: Weight = Weight(0);

    /// A whole-unit weight.
    pub const fn from_int(units: i64) -> Weight {
        Weight(units * WEIGHT_SCALE)
    }

    pub const fn from_micros(micros: i64) -> Weight {
        Weight(micros)
    }

    pub const fn micros(self) -> i64 {
        self.0
    }

    pub fn is_integral(self) -> bool {
        self.0 % WEIGHT_SCALE == 0
    }

    pub fn scaled(self, factor: i64) -> Weight {
        Weight(self.0 * factor)
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl AddAssign for Weight {
    fn add_assign(&mut self, rhs: Weight) {
        self.0 += rhs.0;
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        Weight(self.0 - rhs.0)
    }
}

impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::ZERO, Add::add)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let whole = abs / WEIGHT_SCALE as u64;
        let frac = abs % WEIGHT_SCALE as u64;
        if frac == 0 {
            write!(f, "{sign}{whole}")
        } else {
            let digits = format!("{frac:06}");
            write!(f, "{sign}{whole}.{}", digits.trim_end_matches('0'))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("empty weight")]
    Empty,
    #[error("invalid decimal `{0}`")]
    Invalid(String),
    #[error("more than 6 fractional digits in `{0}`")]
    TooPrecise(String),
    #[error("weight `{0}` exceeds the supported magnitude")]
    OutOfRange(String),
}

impl FromStr for Weight {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Weight, WeightError> {
        if s.is_empty() {
            return Err(WeightError::Empty);
        }
        let (negative, body) = match s.as_bytes()[0] {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };
        let (whole, frac) = match body.split_once('.') {
            Some((w, f)) => (w, f),
            None => (body, ""),
        };
        let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
        if (whole.is_empty() && frac.is_empty()) || !all_digits(whole) || !all_digits(frac) {
            return Err(WeightError::Invalid(s.to_string()));
        }
        if frac.len() > 6 {
            return Err(WeightError::TooPrecise(s.to_string()));
        }
        let whole_trimmed = whole.trim_start_matches('0');
        if whole_trimmed.len() > 10 {
            return Err(WeightError::OutOfRange(s.to_string()));
        }
        let whole_val: i64 = if whole_trimmed.is_empty() {
            0
        } else {
            whole_trimmed
                .parse()
                .map_err(|_| WeightError::Invalid(s.to_string()))?
        };
        if whole_val > MAX_ABS_WEIGHT {
            return Err(WeightError::OutOfRange(s.to_string()));
        }
        let mut frac_val: i64 = 0;
        for (i, b) in frac.bytes().enumerate() {
            frac_val += i64::from(b - b'0') * 10_i64.pow(5 - i as u32);
        }
        let micros = whole_val * WEIGHT_SCALE + frac_val;
        if micros > MAX_ABS_WEIGHT * WEIGHT_SCALE {
            return Err(WeightError::OutOfRange(s.to_string()));
        }
        Ok(Weight(if negative { -micros } else { micros }))
    }
}

// Integral weights serialize as JSON integers in whole units; fractional
// ones as the shortest round-tripping float.
impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_integral() {
            serializer.serialize_i64(self.0 / WEIGHT_SCALE)
        } else {
            serializer.serialize_f64(self.0 as f64 / WEIGHT_SCALE as f64)
        }
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Weight, D::Error> {
        let value = serde_json::Number::deserialize(deserializer)?;
        if let Some(units) = value.as_i64() {
            if units.abs() <= MAX_ABS_WEIGHT {
                return Ok(Weight::from_int(units));
            }
        } else if let Some(x) = value.as_f64() {
            let micros = (x * WEIGHT_SCALE as f64).round();
            if micros.abs() <= (MAX_ABS_WEIGHT * WEIGHT_SCALE) as f64 {
                return Ok(Weight::from_micros(micros as i64));
            }
        }
        Err(serde::de::Error::custom(format!("weight {value} out of range")))
    }
}

/// A subset of a graph's edges, indexed by canonical edge index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet(FixedBitSet);

impl EdgeSet {
    pub fn empty(edge_count: usize) -> EdgeSet {
        EdgeSet(FixedBitSet::with_capacity(edge_count))
    }

    pub fn full(edge_count: usize) -> EdgeSet {
        let mut bits = FixedBitSet::with_capacity(edge_count);
        bits.insert_range(..);
        EdgeSet(bits)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(edge_count: usize, indices: I) -> EdgeSet {
        let mut set = EdgeSet::empty(edge_count);
        for e in indices {
            set.insert(e);
        }
        set
    }

    /// Length of the underlying index space, i.e. `|E(G)|`.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn count(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.contains(e)
    }

    pub fn insert(&mut self, e: usize) {
        self.0.insert(e);
    }

    pub fn remove(&mut self, e: usize) {
        self.0.set(e, false);
    }

    pub fn toggle(&mut self, e: usize) {
        self.0.toggle(e);
    }

    pub fn xor_with(&mut self, other: &EdgeSet) {
        debug_assert_eq!(self.universe(), other.universe());
        self.0.symmetric_difference_with(&other.0);
    }

    pub fn union_with(&mut self, other: &EdgeSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersection_count(&self, other: &EdgeSet) -> usize {
        self.0.intersection_count(&other.0)
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: Weight,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: bad weight: {source}")]
    BadWeight { line: usize, source: WeightError },
    #[error("line {line}: self-loop on vertex {v}")]
    SelfLoop { line: usize, v: usize },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("vertex ids must form 0..{n}; {missing} never appears")]
    VertexGap { n: usize, missing: usize },
    #[error("document contains no edges")]
    Empty,
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("graph is not connected")]
    NotConnected,
    #[error("vertex {v} has degree {degree}, not 2")]
    NotDegreeTwo { v: usize, degree: usize },
    #[error("smoothing vertex {v} would create a loop or multi-edge")]
    SmoothingWouldBreakSimplicity { v: usize },
}

impl GraphError {
    /// True for errors that come from the text itself rather than the shape
    /// of an otherwise well-formed graph.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            GraphError::Malformed { .. }
                | GraphError::BadWeight { .. }
                | GraphError::SelfLoop { .. }
                | GraphError::DuplicateEdge { .. }
                | GraphError::VertexGap { .. }
                | GraphError::Empty
        )
    }
}

/// A finite, undirected, simple, connected graph with exact edge weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    // (neighbor, edge index), sorted by neighbor.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Builds a graph from an edge list, canonicalizing edge order.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, Weight)>,
    {
        let mut list = Vec::new();
        for (line, (a, b, w)) in edges.into_iter().enumerate() {
            for x in [a, b] {
                if x >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { v: x, n: vertex_count });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop { line: line + 1, v: a });
            }
            list.push((line + 1, Edge { u: a.min(b), v: a.max(b), w }));
        }
        list.sort_by_key(|(_, e)| (e.u, e.v));
        for pair in list.windows(2) {
            let (first, second) = (&pair[0].1, &pair[1]);
            if first.u == second.1.u && first.v == second.1.v {
                return Err(GraphError::DuplicateEdge {
                    line: second.0.max(pair[0].0),
                    u: first.u,
                    v: first.v,
                });
            }
        }
        let edges: Vec<Edge> = list.into_iter().map(|(_, e)| e).collect();
        let graph = Graph::from_canonical(vertex_count.max(1), edges);
        if !graph.is_connected() {
            return Err(GraphError::NotConnected);
        }
        Ok(graph)
    }

    fn from_canonical(n: usize, edges: Vec<Edge>) -> Graph {
        let mut adjacency = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            adjacency[e.u].push((e.v, i));
            adjacency[e.v].push((e.u, i));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph { n, edges, adjacency }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    /// `(neighbor, edge index)` pairs in ascending neighbor order.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency[a]
            .binary_search_by_key(&b, |&(x, _)| x)
            .ok()
            .map(|i| self.adjacency[a][i].1)
    }

    pub fn total_weight(&self) -> Weight {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn weight_of(&self, edges: &EdgeSet) -> Weight {
        edges.iter().map(|e| self.edges[e].w).sum()
    }

    /// Copy of the graph with every weight multiplied by `factor`.
    pub fn scale_weights(&self, factor: i64) -> Graph {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { w: e.w.scaled(factor), ..*e })
            .collect();
        Graph::from_canonical(self.n, edges)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    queue.push_back(y);
                }
            }
        }
        reached == self.n
    }

    /// Per-vertex degree in the subgraph formed by `edges`.
    pub fn degrees_in(&self, edges: &EdgeSet) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in edges.iter() {
            deg[self.edges[e].u] += 1;
            deg[self.edges[e].v] += 1;
        }
        deg
    }

    /// Vertices touched by at least one edge of `edges`, ascending.
    pub fn vertices_of(&self, edges: &EdgeSet) -> Vec<usize> {
        let deg = self.degrees_in(edges);
        (0..self.n).filter(|&v| deg[v] > 0).collect()
    }

    /// The subgraph formed by `edges`, with its touched vertices renumbered
    /// in ascending order. Returns the graph and, for each new vertex id,
    /// the original id.
    pub fn edge_induced(&self, edges: &EdgeSet) -> Result<(Graph, Vec<usize>), GraphError> {
        let original = self.vertices_of(edges);
        let mut renumber = vec![usize::MAX; self.n];
        for (new, &old) in original.iter().enumerate() {
            renumber[old] = new;
        }
        let list = edges
            .iter()
            .map(|e| {
                let edge = &self.edges[e];
                (renumber[edge.u], renumber[edge.v], edge.w)
            })
            .collect::<Vec<_>>();
        let graph = Graph::new(original.len(), list)?;
        Ok((graph, original))
    }

    /// If `edges` form a single cycle through every vertex, the tour in
    /// canonical form: starting at 0, continuing to the smaller neighbor.
    pub fn hamilton_cycle_in(&self, edges: &EdgeSet) -> Option<Vec<usize>> {
        if self.n < 3 || edges.count() != self.n {
            return None;
        }
        let deg = self.degrees_in(edges);
        if deg.iter().any(|&d| d != 2) {
            return None;
        }
        let next = |from: usize, prev: usize| {
            self.adjacency[from]
                .iter()
                .find(|&&(y, e)| edges.contains(e) && y != prev)
                .map(|&(y, _)| y)
        };
        let mut tour = vec![0];
        let mut prev = usize::MAX;
        let mut cur = 0;
        loop {
            let step = next(cur, prev)?;
            if step == 0 {
                break;
            }
            if tour.len() == self.n {
                return None;
            }
            tour.push(step);
            prev = cur;
            cur = step;
        }
        if tour.len() != self.n {
            return None;
        }
        if tour[1] > tour[self.n - 1] {
            tour[1..].reverse();
        }
        Some(tour)
    }

    /// Renders the graph in the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            out.push_str(&format!("{} {} {}\n", e.u, e.v, e.w));
        }
        out
    }
}

/// Parses the edge-list text format: one `u v w` triple per line, `#`
/// comment lines, blank lines ignored.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut triples = Vec::new();
    let mut max_id = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(GraphError::Malformed {
                line,
                reason: format!("expected `u v w`, found {} fields", fields.len()),
            });
        }
        let vertex = |s: &str| {
            if !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(GraphError::Malformed {
                    line,
                    reason: format!("invalid vertex id `{s}`"),
                });
            }
            // Ids beyond u32 cannot form a gap-free graph that fits in memory.
            s.parse::<u32>()
                .map(|v| v as usize)
                .map_err(|_| GraphError::Malformed {
                    line,
                    reason: format!("vertex id `{s}` out of range"),
                })
        };
        let u = vertex(fields[0])?;
        let v = vertex(fields[1])?;
        let w: Weight = fields[2]
            .parse()
            .map_err(|source| GraphError::BadWeight { line, source })?;
        if u == v {
            return Err(GraphError::SelfLoop { line, v: u });
        }
        max_id = max_id.max(u).max(v);
        triples.push((line, u, v, w));
    }
    if triples.is_empty() {
        return Err(GraphError::Empty);
    }
    let n = max_id + 1;
    if n > triples.len() + 1 {
        // Fewer edges than n - 1 always leaves a gap or a disconnection;
        // report the gap without allocating per-vertex state for huge ids.
        let mut used: Vec<usize> = triples.iter().flat_map(|t| [t.1, t.2]).collect();
        used.sort_unstable();
        used.dedup();
        let missing = used
            .iter()
            .enumerate()
            .find(|&(i, &x)| i != x)
            .map(|(i, _)| i)
            .unwrap_or(used.len());
        if missing < n {
            return Err(GraphError::VertexGap { n, missing });
        }
        return Err(GraphError::NotConnected);
    }
    let mut used = vec![false; n];
    for &(_, u, v, _) in &triples {
        used[u] = true;
        used[v] = true;
    }
    if let Some(missing) = used.iter().position(|&x| !x) {
        return Err(GraphError::VertexGap { n, missing });
    }
    let mut seen = std::collections::HashMap::new();
    for &(line, u, v, _) in &triples {
        if let Some(_first) = seen.insert((u.min(v), u.max(v)), line) {
            return Err(GraphError::DuplicateEdge { line, u: u.min(v), v: u.max(v) });
        }
    }
    Graph::new(n, triples.into_iter().map(|(_, u, v, w)| (u, v, w)))
}

/// Where the edges of a smoothed graph came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothingMap {
    /// Index of the new edge in the smoothed graph.
    pub new_edge: usize,
    /// The two edges of the original graph it replaces.
    pub replaced: (usize, usize),
    /// Original vertex id for each vertex of the smoothed graph.
    pub vertex_origin: Vec<usize>,
}

/// Removes a degree-2 vertex and joins its neighbors by one edge carrying
/// the sum of the two removed weights.
pub fn smooth_out(g: &Graph, v: usize) -> Result<(Graph, SmoothingMap), GraphError> {
    if v >= g.n {
        return Err(GraphError::VertexOutOfRange { v, n: g.n });
    }
    if g.degree(v) != 2 {
        return Err(GraphError::NotDegreeTwo { v, degree: g.degree(v) });
    }
    let [(x, ex), (y, ey)] = [g.adjacency[v][0], g.adjacency[v][1]];
    if g.edge_between(x, y).is_some() {
        return Err(GraphError::SmoothingWouldBreakSimplicity { v });
    }
    let shift = |a: usize| if a > v { a - 1 } else { a };
    let merged = g.edges[ex].w + g.edges[ey].w;
    let mut list: Vec<(usize, usize, Weight)> = g
        .edges
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != ex && i != ey)
        .map(|(_, e)| (shift(e.u), shift(e.v), e.w))
        .collect();
    let (nx, ny) = (shift(x), shift(y));
    list.push((nx, ny, merged));
    let smoothed = Graph::new(g.n - 1, list)?;
    let new_edge = smoothed
        .edge_between(nx, ny)
        .expect("merged edge present");
    let vertex_origin = (0..g.n).filter(|&a| a != v).collect();
    Ok((
        smoothed,
        SmoothingMap {
            new_edge,
            replaced: (ex.min(ey), ex.max(ey)),
            vertex_origin,
        },
    ))
}

/// True iff the graph is connected and 2-regular.
pub fn is_cycle_graph(g: &Graph) -> bool {
    g.n >= 3 && (0..g.n).all(|v| g.degree(v) == 2) && g.is_connected()
}

pub fn degree(g: &Graph, v: usize) -> usize {
    g.degree(v)
}
