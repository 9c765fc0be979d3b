//! Solver-versus-oracle comparison and seeded mining campaigns over random
//! connected graphs.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeSet, Graph, Weight};
use crate::oracle;
use crate::solver::{run_one_one, Status, TourResult, TraceEvent};

/// How Hamiltonicity of the input is decided before the solver runs.
pub const FRONT_GATE: &str = "exhaustive-backtracking";

/// Largest `n` a mining campaign may request.
pub const MINING_MAX_VERTICES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub instance_id: String,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub status: String,
    pub algo_weight: Option<Weight>,
    pub opt_weight: Option<Weight>,
    #[serde(rename = "match")]
    pub matched: Option<bool>,
    pub deletions: u64,
    pub candidates_tested: u64,
    pub reduce_calls: u64,
    pub comparisons: u64,
    pub elapsed_ms: u64,
    pub solvable: bool,
    pub solutions_tried: usize,
    pub row_ops: u64,
    pub max_pass_candidates: u64,
    /// Deletions after which the remaining union had no Hamilton cycle.
    pub union_lost_hamiltonicity: u64,
    pub tour_valid: Option<bool>,
    pub front_gate: String,
}

impl ComparisonReport {
    /// Checks the record's internal consistency.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let (Some(a), Some(o)) = (self.algo_weight, self.opt_weight) {
            if self.matched != Some(a == o) {
                out.push(format!("{}: match flag disagrees with weights", self.instance_id));
            }
            if a < o {
                out.push(format!("{}: solver weight {a} below optimum {o}", self.instance_id));
            }
        } else if self.matched.is_some() {
            out.push(format!("{}: match set without both weights", self.instance_id));
        }
        if self.status == "ok" && self.tour_valid != Some(true) {
            out.push(format!("{}: ok status with an invalid tour", self.instance_id));
        }
        let bound = (self.m + 1).saturating_sub(self.n) as u64;
        if self.max_pass_candidates > bound {
            out.push(format!(
                "{}: {} candidates in one pass exceeds m - n + 1 = {bound}",
                self.instance_id, self.max_pass_candidates
            ));
        }
        out
    }

    pub fn is_counterexample(&self) -> bool {
        self.matched == Some(false) || self.status == "stuck" || self.status == "no_solution"
    }
}

fn status_name(status: Status) -> String {
    serde_json::to_value(status)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

/// Counts deletions in `run` after which the union of retained cycles is no
/// longer Hamiltonian.
fn union_lost_hamiltonicity(g: &Graph, run: &TourResult) -> u64 {
    let basis = crate::cycle_space::fundamental_basis(g);
    let mut union: Option<(Vec<u32>, EdgeSet)> = None;
    let mut violations = 0;
    for ev in &run.trace {
        match ev {
            TraceEvent::Partition { .. } => {
                let r = basis.r_values().to_vec();
                let set = EdgeSet::from_indices(
                    g.edge_count(),
                    (0..g.edge_count()).filter(|&e| r[e] > 0),
                );
                union = Some((r, set));
            }
            TraceEvent::Deletion(d) => {
                if let Some((r, set)) = union.as_mut() {
                    for e in basis.cycle(d.cycle).edges().iter() {
                        r[e] -= 1;
                        if r[e] == 0 {
                            set.remove(e);
                        }
                    }
                    if !oracle::is_hamiltonian_in(g, set) {
                        violations += 1;
                    }
                }
            }
            _ => {}
        }
    }
    violations
}

/// Runs solver and oracle on one graph.
pub fn compare(g: &Graph, instance_id: &str, seed: u64, timing: bool) -> Result<ComparisonReport, oracle::OracleError> {
    let started = Instant::now();
    let run = run_one_one(g);
    let elapsed_ms = if timing { started.elapsed().as_millis() as u64 } else { 0 };
    let answer = oracle::min_tour_held_karp(g)?;
    let tour_valid = run
        .tour
        .as_ref()
        .map(|t| oracle::validate_tour(g, t).ok() == run.weight);
    let algo_weight = run.weight;
    let opt_weight = answer.optimum_weight;
    let matched = match (algo_weight, opt_weight) {
        (Some(a), Some(o)) => Some(a == o),
        _ => None,
    };
    Ok(ComparisonReport {
        instance_id: instance_id.to_string(),
        seed,
        n: g.vertex_count(),
        m: g.edge_count(),
        status: status_name(run.status),
        algo_weight,
        opt_weight,
        matched,
        deletions: run.counters.deletions,
        candidates_tested: run.counters.candidates_tested,
        reduce_calls: run.counters.reduce_calls,
        comparisons: run.counters.comparisons,
        elapsed_ms,
        solvable: run.solvable,
        solutions_tried: run.solutions_tried,
        row_ops: run.counters.row_ops,
        max_pass_candidates: run.counters.max_pass_candidates,
        union_lost_hamiltonicity: union_lost_hamiltonicity(g, &run),
        tour_valid,
        front_gate: FRONT_GATE.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightModel {
    Uniform { lo: i64, hi: i64 },
}

impl Default for WeightModel {
    fn default() -> WeightModel {
        WeightModel::Uniform { lo: 1, hi: 100 }
    }
}

impl fmt::Display for WeightModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightModel::Uniform { lo, hi } => write!(f, "uniform:{lo}:{hi}"),
        }
    }
}

impl FromStr for WeightModel {
    type Err = ConfigError;

    /// `uniform:LO:HI`, integer bounds, inclusive.
    fn from_str(s: &str) -> Result<WeightModel, ConfigError> {
        let bad = || ConfigError::WeightModel(s.to_string());
        let mut parts = s.split(':');
        if parts.next() != Some("uniform") {
            return Err(bad());
        }
        let lo: i64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let hi: i64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if parts.next().is_some()
            || lo > hi
            || lo.abs() > crate::graph::MAX_ABS_WEIGHT
            || hi.abs() > crate::graph::MAX_ABS_WEIGHT
        {
            return Err(bad());
        }
        Ok(WeightModel::Uniform { lo, hi })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("count must be at least 1")]
    Count,
    #[error("need 3 <= n_min <= n_max <= {MINING_MAX_VERTICES}, got {0}..={1}")]
    VertexRange(usize, usize),
    #[error("edge probability must lie in (0, 1], got {0}")]
    EdgeProbability(String),
    #[error("weight model must look like uniform:LO:HI with LO <= HI, got `{0}`")]
    WeightModel(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignConfig {
    pub count: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub edge_probability: f64,
    pub weight_model: WeightModel,
    pub seed: u64,
    /// Not serialized; a report's bytes do not depend on where it is written.
    #[serde(skip)]
    pub report_path: PathBuf,
    /// Measure wall-clock time per instance (makes reports nondeterministic).
    pub timing: bool,
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.count == 0 {
            return Err(ConfigError::Count);
        }
        if self.n_min < 3 || self.n_min > self.n_max || self.n_max > MINING_MAX_VERTICES {
            return Err(ConfigError::VertexRange(self.n_min, self.n_max));
        }
        let p = self.edge_probability;
        if !(p > 0.0 && p <= 1.0) {
            return Err(ConfigError::EdgeProbability(p.to_string()));
        }
        let WeightModel::Uniform { lo, hi } = self.weight_model;
        if lo > hi {
            return Err(ConfigError::WeightModel(self.weight_model.to_string()));
        }
        Ok(())
    }
}

pub fn instance_id(seed: u64, index: usize) -> String {
    format!("s{seed}-i{index:05}")
}

/// The `index`-th graph of a campaign: G(n, p) with rejection until
/// connected, drawn from its own ChaCha stream.
pub fn generate_instance(config: &CampaignConfig, index: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let n = rng.gen_range(config.n_min..=config.n_max);
    loop {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(config.edge_probability) {
                    let w = match config.weight_model {
                        WeightModel::Uniform { lo, hi } => rng.gen_range(lo..=hi),
                    };
                    edges.push((a, b, Weight::from_int(w)));
                }
            }
        }
        if let Ok(g) = Graph::new(n, edges) {
            return g;
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BucketStats {
    pub count: usize,
    pub matches: usize,
    pub mean_deletions: f64,
    pub mean_candidates_tested: f64,
    pub mean_reduce_calls: f64,
    pub mean_comparisons: f64,
    pub mean_row_ops: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignSummary {
    pub kind: String,
    pub config: CampaignConfig,
    pub generated: usize,
    pub hamiltonian: usize,
    pub filtered_non_hamiltonian: usize,
    pub ok: usize,
    pub matches: usize,
    pub mismatches: usize,
    pub match_rate: Option<f64>,
    pub status_histogram: BTreeMap<String, usize>,
    /// Keyed by `"n,m"`.
    pub by_n_m: BTreeMap<String, BucketStats>,
    /// Keyed by `m`, zero-padded so keys sort numerically.
    pub by_m: BTreeMap<String, BucketStats>,
    pub soundness_violations: Vec<String>,
    pub union_lost_hamiltonicity: u64,
    pub counterexamples: Vec<String>,
    pub front_gate: String,
}

fn bucket(reports: &[&ComparisonReport]) -> BucketStats {
    let count = reports.len();
    let mean = |f: &dyn Fn(&ComparisonReport) -> u64| {
        reports.iter().map(|r| f(r) as f64).sum::<f64>() / count as f64
    };
    BucketStats {
        count,
        matches: reports.iter().filter(|r| r.matched == Some(true)).count(),
        mean_deletions: mean(&|r| r.deletions),
        mean_candidates_tested: mean(&|r| r.candidates_tested),
        mean_reduce_calls: mean(&|r| r.reduce_calls),
        mean_comparisons: mean(&|r| r.comparisons),
        mean_row_ops: mean(&|r| r.row_ops),
    }
}

pub fn summarize(config: &CampaignConfig, generated: usize, records: &[ComparisonReport]) -> CampaignSummary {
    let mut status_histogram = BTreeMap::new();
    for r in records {
        *status_histogram.entry(r.status.clone()).or_insert(0) += 1;
    }
    let mut nm: BTreeMap<(usize, usize), Vec<&ComparisonReport>> = BTreeMap::new();
    let mut by_edges: BTreeMap<usize, Vec<&ComparisonReport>> = BTreeMap::new();
    for r in records {
        nm.entry((r.n, r.m)).or_default().push(r);
        by_edges.entry(r.m).or_default().push(r);
    }
    let matches = records.iter().filter(|r| r.matched == Some(true)).count();
    let mismatches = records.iter().filter(|r| r.matched == Some(false)).count();
    CampaignSummary {
        kind: "summary".to_string(),
        config: config.clone(),
        generated,
        hamiltonian: records.len(),
        filtered_non_hamiltonian: generated - records.len(),
        ok: records.iter().filter(|r| r.status == "ok").count(),
        matches,
        mismatches,
        match_rate: (!records.is_empty()).then(|| matches as f64 / records.len() as f64),
        status_histogram,
        by_n_m: nm
            .into_iter()
            .map(|((n, m), rs)| (format!("{n},{m}"), bucket(&rs)))
            .collect(),
        by_m: by_edges
            .into_iter()
            .map(|(m, rs)| (format!("{m:03}"), bucket(&rs)))
            .collect(),
        soundness_violations: records.iter().flat_map(ComparisonReport::violations).collect(),
        union_lost_hamiltonicity: records.iter().map(|r| r.union_lost_hamiltonicity).sum(),
        counterexamples: records
            .iter()
            .filter(|r| r.is_counterexample())
            .map(|r| r.instance_id.clone())
            .collect(),
        front_gate: FRONT_GATE.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignOutcome {
    pub records: Vec<ComparisonReport>,
    /// Graphs behind counterexample records, keyed by instance id.
    pub counterexamples: BTreeMap<String, Graph>,
    pub summary: CampaignSummary,
}

/// Generates, filters and compares every instance of a campaign, in
/// instance order regardless of how the work was scheduled.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignOutcome, ConfigError> {
    config.validate()?;
    let results: Vec<Option<(ComparisonReport, Graph)>> = (0..config.count)
        .into_par_iter()
        .map(|i| {
            let g = generate_instance(config, i);
            if !oracle::is_hamiltonian(&g) {
                return None;
            }
            let report = compare(&g, &instance_id(config.seed, i), config.seed, config.timing)
                .expect("mining sizes are within oracle limits");
            Some((report, g))
        })
        .collect();
    let mut records = Vec::new();
    let mut counterexamples = BTreeMap::new();
    for (report, g) in results.into_iter().flatten() {
        if report.is_counterexample() {
            counterexamples.insert(report.instance_id.clone(), g);
        }
        records.push(report);
    }
    let summary = summarize(config, config.count, &records);
    Ok(CampaignOutcome {
        records,
        counterexamples,
        summary,
    })
}

/// JSON Lines: one record per instance, then the summary.
pub fn render_report(outcome: &CampaignOutcome) -> String {
    let mut out = String::new();
    for r in &outcome.records {
        out.push_str(&serde_json::to_string(r).expect("report serializes"));
        out.push('\n');
    }
    out.push_str(&serde_json::to_string(&outcome.summary).expect("summary serializes"));
    out.push('\n');
    out
}

/// Edge-list dump of a counterexample, with provenance comments.
pub fn render_counterexample(id: &str, g: &Graph, report: Option<&ComparisonReport>) -> String {
    let mut out = format!("# counterexample {id}\n");
    if let Some(r) = report {
        let fmt_w = |w: Option<Weight>| w.map_or("none".to_string(), |w| w.to_string());
        out.push_str(&format!(
            "# status {} algo_weight {} opt_weight {}\n",
            r.status,
            fmt_w(r.algo_weight),
            fmt_w(r.opt_weight)
        ));
    }
    out.push_str(&g.to_edge_list());
    out
}

/// Writes the report to `config.report_path` and each counterexample as
/// `<instance_id>.edges` next to it. Returns the counterexample paths.
pub fn write_campaign(config: &CampaignConfig, outcome: &CampaignOutcome) -> io::Result<Vec<PathBuf>> {
    let dir = config
        .report_path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    let mut file = fs::File::create(&config.report_path)?;
    file.write_all(render_report(outcome).as_bytes())?;
    let mut paths = Vec::new();
    for (id, g) in &outcome.counterexamples {
        let report = outcome.records.iter().find(|r| &r.instance_id == id);
        let path = dir.join(format!("{id}.edges"));
        fs::write(&path, render_counterexample(id, g, report))?;
        paths.push(path);
    }
    Ok(paths)
}
