//! Acceptance criteria. Runs as a plain binary so every criterion prints one
//! result line even when the others pass.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hamtsp::cycle_space::fundamental_basis;
use hamtsp::equation::{enumerate_solutions, equation_lhs};
use hamtsp::graph::is_cycle_graph;
use hamtsp::harness::{self, CampaignConfig, WeightModel};
use hamtsp::oracle::{self, enumerate_tours, min_tour_held_karp};
use hamtsp::removability::{reduce_cnabla_set, ReductionTag};
use hamtsp::solver::{replay, SolverOptions};
use hamtsp::{parse_graph, run_one_one, EdgeSet, Graph, Status, Weight};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn campaign(count: usize, n_min: usize, n_max: usize, p: f64, seed: u64) -> CampaignConfig {
    CampaignConfig {
        count,
        n_min,
        n_max,
        edge_probability: p,
        weight_model: WeightModel::default(),
        seed,
        report_path: PathBuf::from("unused.jsonl"),
        timing: false,
    }
}

fn w(x: i64) -> Weight {
    Weight::from_int(x)
}

const TRIANGLE: &str = "0 1 1\n1 2 2\n0 2 3\n";
// a=0 b=1 c=2 d=3
const THETA: &str = "0 1 5\n0 2 1\n1 2 1\n0 3 1\n1 3 1\n";
// Vertex i here is vertex i+1 in the 1-based naming {12:1,13:2,14:3,23:4,24:5,34:7}.
const K4: &str = "0 1 1\n0 2 2\n0 3 3\n1 2 4\n1 3 5\n2 3 7\n";

fn petersen() -> Graph {
    let mut text = String::new();
    for i in 0..5 {
        text += &format!("{i} {} 1\n{i} {} 1\n{} {} 1\n", (i + 1) % 5, i + 5, i + 5, 5 + (i + 2) % 5);
    }
    parse_graph(&text).unwrap()
}

fn goldens() -> Vec<(&'static str, Graph)> {
    vec![
        ("triangle", parse_graph(TRIANGLE).unwrap()),
        ("theta", parse_graph(THETA).unwrap()),
        ("k4", parse_graph(K4).unwrap()),
        ("petersen", petersen()),
    ]
}

fn enumeration_optimum(g: &Graph) -> Option<Weight> {
    enumerate_tours(g, usize::MAX).unwrap().into_iter().map(|(_, w)| w).min()
}

fn oracle_self_consistency() -> Outcome {
    let started = Instant::now();
    let config = campaign(240, 5, 9, 0.5, 101);
    let mut hamiltonian = 0;
    for i in 0..config.count {
        let g = harness::generate_instance(&config, i);
        let hk = min_tour_held_karp(&g).unwrap().optimum_weight;
        let en = enumeration_optimum(&g);
        ensure(hk == en, || format!("instance {i}: Held-Karp {hk:?} vs enumeration {en:?}"))?;
        hamiltonian += usize::from(hk.is_some());
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} graphs ({hamiltonian} Hamiltonian), exact agreement, {:.2}s",
        config.count,
        elapsed.as_secs_f64()
    ))
}

fn golden_instances() -> Outcome {
    let tri = parse_graph(TRIANGLE).unwrap();
    let theta = parse_graph(THETA).unwrap();
    let k4 = parse_graph(K4).unwrap();
    let pet = petersen();

    // Enumeration first, then the expected values are asserted against both.
    ensure(enumeration_optimum(&tri) == Some(w(6)), || "triangle enumeration".into())?;
    let theta_tours = enumerate_tours(&theta, usize::MAX).unwrap();
    ensure(theta_tours == vec![(vec![0, 2, 1, 3], w(4))], || format!("theta tours {theta_tours:?}"))?;
    let mut k4_weights: Vec<Weight> = enumerate_tours(&k4, usize::MAX).unwrap().into_iter().map(|t| t.1).collect();
    k4_weights.sort();
    ensure(k4_weights == vec![w(14), w(15), w(15)], || format!("k4 tours {k4_weights:?}"))?;
    ensure(enumerate_tours(&pet, usize::MAX).unwrap().is_empty(), || "petersen has a tour".into())?;

    let r = run_one_one(&tri);
    ensure(r.status == Status::Ok && r.weight == Some(w(6)), || format!("triangle solver {:?} {:?}", r.status, r.weight))?;
    ensure(min_tour_held_karp(&tri).unwrap().optimum_weight == Some(w(6)), || "triangle oracle".into())?;

    let r = run_one_one(&theta);
    ensure(
        r.status == Status::Ok && r.weight == Some(w(4)) && r.tour == Some(vec![0, 2, 1, 3]),
        || format!("theta solver {:?} {:?} {:?}", r.status, r.weight, r.tour),
    )?;
    let hk = min_tour_held_karp(&theta).unwrap();
    ensure(hk.optimum_weight == Some(w(4)) && hk.optimum_tour == Some(vec![0, 2, 1, 3]), || "theta oracle".into())?;

    let r = run_one_one(&k4);
    ensure(min_tour_held_karp(&k4).unwrap().optimum_weight == Some(w(14)), || "k4 oracle".into())?;
    ensure(r.status != Status::Ok || r.weight >= Some(w(14)), || format!("k4 solver weight {:?}", r.weight))?;
    let k4_report = harness::compare(&k4, "k4", 0, false).unwrap();
    ensure(k4_report.matched == Some(r.weight == Some(w(14))), || "k4 match flag".into())?;

    let r = run_one_one(&pet);
    ensure(r.status == Status::NotHamiltonianInput, || format!("petersen solver {:?}", r.status))?;
    ensure(!oracle::is_hamiltonian(&pet), || "petersen oracle".into())?;
    ensure(min_tour_held_karp(&pet).unwrap().optimum_weight.is_none(), || "petersen Held-Karp".into())?;

    Ok(format!(
        "triangle 6, theta 4 via a-c-b-d-a, k4 optimum 14 (solver {}), petersen not Hamiltonian",
        k4_report.algo_weight.map_or("none".into(), |w| w.to_string())
    ))
}

fn soundness() -> Outcome {
    let config = campaign(500, 5, 10, 0.5, 2024);
    let outcome = harness::run_campaign(&config).map_err(|e| e.to_string())?;
    let s = &outcome.summary;
    ensure(s.soundness_violations.is_empty(), || format!("{:?}", s.soundness_violations))?;
    let mut ok = 0;
    for r in &outcome.records {
        if r.status == "ok" {
            ok += 1;
            ensure(r.tour_valid == Some(true), || format!("{}: invalid tour", r.instance_id))?;
            ensure(r.algo_weight >= r.opt_weight, || format!("{}: below optimum", r.instance_id))?;
        }
    }
    Ok(format!(
        "{} generated, {} Hamiltonian, {ok} ok, 0 violations",
        s.generated, s.hamiltonian
    ))
}

fn exactness_measurement() -> Outcome {
    let config = campaign(300, 5, 9, 0.5, 7);
    let a = harness::run_campaign(&config).map_err(|e| e.to_string())?;
    let b = harness::run_campaign(&config).map_err(|e| e.to_string())?;
    ensure(harness::render_report(&a) == harness::render_report(&b), || "reports differ".into())?;
    let rate = a.summary.match_rate.ok_or("no Hamiltonian instances")?;
    ensure((0.0..=1.0).contains(&rate), || format!("match rate {rate}"))?;
    ensure(
        a.summary.counterexamples.len() == a.counterexamples.len(),
        || "counterexample list and dumps disagree".into(),
    )?;
    for (id, g) in &a.counterexamples {
        let dumped = harness::render_counterexample(id, g, None);
        let reparsed = parse_graph(&dumped).map_err(|e| format!("{id}: {e}"))?;
        let again = harness::compare(&reparsed, id, config.seed, false).unwrap();
        let original = a.records.iter().find(|r| &r.instance_id == id).unwrap();
        ensure(&again == original, || format!("{id}: replay differs"))?;
    }
    let s = &a.summary;
    Ok(format!(
        "match rate {rate:.4} ({} of {}), statuses {:?}, {} counterexamples replayed",
        s.matches,
        s.hamiltonian,
        s.status_histogram,
        a.counterexamples.len()
    ))
}

fn power_set_solutions(g: &Graph) -> BTreeSet<Vec<usize>> {
    let b = fundamental_basis(g);
    let target = g.vertex_count() - 2;
    (1u32..1 << b.len())
        .map(|mask| (0..b.len()).filter(|&i| mask & (1 << i) != 0).collect::<Vec<_>>())
        .filter(|s| s.iter().map(|&i| b.cycle(i).edges().count() - 2).sum::<usize>() == target)
        .collect()
}

fn equation_properties() -> Outcome {
    let mut corpus: Vec<Graph> = goldens().into_iter().map(|(_, g)| g).collect();
    let config = campaign(300, 4, 10, 0.45, 55);
    corpus.extend((0..config.count).map(|i| harness::generate_instance(&config, i)));
    let mut checked = 0;
    let mut solutions = 0;
    for g in corpus {
        let b = fundamental_basis(&g);
        if b.len() > 12 {
            continue;
        }
        let found: Vec<Vec<usize>> = enumerate_solutions(&b, g.vertex_count(), usize::MAX)
            .into_iter()
            .map(|p| p.solution)
            .collect();
        for s in &found {
            ensure(equation_lhs(&b, s) == g.vertex_count() - 2, || format!("{s:?} violates the equation"))?;
        }
        let set: BTreeSet<Vec<usize>> = found.iter().cloned().collect();
        ensure(set.len() == found.len(), || "duplicate solutions".into())?;
        let naive = power_set_solutions(&g);
        ensure(set == naive, || format!("enumerated {set:?}, power set {naive:?}"))?;
        checked += 1;
        solutions += found.len();
    }
    Ok(format!("{checked} graphs with dimension <= 12, {solutions} solutions, exact set equality"))
}

fn random_sub_union(rng: &mut ChaCha8Rng) -> Option<Graph> {
    let config = campaign(1, 4, 10, rng.gen_range(0.3..0.9), rng.gen());
    let g = harness::generate_instance(&config, 0);
    let b = fundamental_basis(&g);
    if b.is_empty() {
        return None;
    }
    let mut union = EdgeSet::empty(g.edge_count());
    for i in 0..b.len() {
        if rng.gen_bool(0.5) {
            union.union_with(b.cycle(i).edges());
        }
    }
    if union.is_empty() {
        return None;
    }
    g.edge_induced(&union).ok().map(|(h, _)| h)
}

fn random_cycle(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(3..=15);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let edges = (0..n).map(|i| (order[i], order[(i + 1) % n], w(rng.gen_range(1..=100))));
    Graph::new(n, edges).unwrap()
}

fn random_tree(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(2..=15);
    let edges = (1..n).map(|v| (rng.gen_range(0..v), v, w(rng.gen_range(1..=100))));
    Graph::new(n, edges.collect::<Vec<_>>()).unwrap()
}

fn reduction_termination() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut unions = 0;
    let mut tags = [0usize; 2];
    while unions < 1000 {
        let Some(h) = random_sub_union(&mut rng) else {
            continue;
        };
        let out = reduce_cnabla_set(&h);
        ensure(out.steps.len() <= h.edge_count(), || {
            format!("{} steps on {} edges", out.steps.len(), h.edge_count())
        })?;
        tags[usize::from(out.tag == ReductionTag::Acyclic)] += 1;
        unions += 1;
    }
    for _ in 0..200 {
        let c = random_cycle(&mut rng);
        ensure(is_cycle_graph(&c), || "generator produced a non-cycle".into())?;
        let out = reduce_cnabla_set(&c);
        ensure(out.tag == ReductionTag::CycleGraph, || format!("cycle on {} vertices", c.vertex_count()))?;
        let t = random_tree(&mut rng);
        let out = reduce_cnabla_set(&t);
        ensure(out.tag == ReductionTag::Acyclic, || format!("tree on {} vertices", t.vertex_count()))?;
        ensure(out.steps.len() <= t.edge_count(), || "tree step bound".into())?;
    }
    Ok(format!(
        "1000 sub-unions within |E| steps ({} cycle_graph, {} acyclic); 200 cycles, 200 trees classified",
        tags[0], tags[1]
    ))
}

fn determinism_and_replay() -> Outcome {
    let config = campaign(40, 5, 8, 0.6, 31337);
    let a = harness::render_report(&harness::run_campaign(&config).unwrap());
    let b = harness::render_report(&harness::run_campaign(&config).unwrap());
    ensure(a == b, || "campaign reports differ".into())?;
    let mut replayed = 0;
    for (name, g) in goldens() {
        let result = run_one_one(&g);
        let rebuilt = replay(&g, SolverOptions::default(), &result.trace).map_err(|e| format!("{name}: {e:?}"))?;
        ensure(rebuilt == result.final_state, || format!("{name}: replayed state differs"))?;
        replayed += 1;
    }
    Ok(format!("{} identical report bytes; {replayed} golden traces replayed", a.len()))
}

fn complexity_accounting() -> Outcome {
    let config = campaign(200, 5, 10, 0.55, 88);
    let outcome = harness::run_campaign(&config).unwrap();
    for r in &outcome.records {
        let bound = (r.m - r.n + 1) as u64;
        ensure(r.max_pass_candidates <= bound, || {
            format!("{}: {} candidates, bound {bound}", r.instance_id, r.max_pass_candidates)
        })?;
    }
    let buckets = &outcome.summary.by_m;
    ensure(!buckets.is_empty(), || "no |E| buckets".into())?;
    let value = serde_json::to_value(&outcome.summary).unwrap();
    ensure(
        value["by_m"].as_object().unwrap().values().all(|b| b["mean_row_ops"].is_number()),
        || "bucket without mean_row_ops".into(),
    )?;
    let table: Vec<String> = buckets
        .iter()
        .map(|(m, b)| format!("{}:{:.1}", m.trim_start_matches('0'), b.mean_row_ops))
        .collect();
    Ok(format!("candidates within m-n+1; mean row ops by |E| {}", table.join(" ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 8] = [
        ("1 oracle self-consistency", oracle_self_consistency),
        ("2 golden instances", golden_instances),
        ("3 soundness", soundness),
        ("4 exactness measurement", exactness_measurement),
        ("5 equation properties", equation_properties),
        ("6 reduction termination", reduction_termination),
        ("7 determinism and replay", determinism_and_replay),
        ("8 complexity accounting", complexity_accounting),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
