//! Replays the checked-in fuzz seed corpora through the fuzz targets'
//! assertions, so they run without a fuzzing toolchain.

use std::fs;
use std::path::PathBuf;

use hamtsp::harness::WeightModel;
use hamtsp::{oracle, parse_graph, run_one_one, Status, Weight};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "empty corpus for {target}");
    out
}

#[test]
fn parse_graph_corpus_round_trips() {
    let mut accepted = 0;
    for (name, text) in seeds("parse_graph") {
        if let Ok(g) = parse_graph(&text) {
            assert_eq!(parse_graph(&g.to_edge_list()).unwrap(), g, "{name}");
            accepted += 1;
        }
    }
    assert!(accepted > 0);
}

#[test]
fn weight_corpus_round_trips() {
    for (name, text) in seeds("parse_weight") {
        if let Ok(w) = text.parse::<Weight>() {
            assert_eq!(w.to_string().parse::<Weight>(), Ok(w), "{name}");
        }
    }
}

#[test]
fn weight_model_corpus_round_trips() {
    for (name, text) in seeds("parse_weight_model") {
        if let Ok(m) = text.parse::<WeightModel>() {
            assert_eq!(m.to_string().parse::<WeightModel>(), Ok(m), "{name}");
        }
    }
}

#[test]
fn solve_small_corpus_is_sound() {
    for (name, text) in seeds("solve_small") {
        let Ok(g) = parse_graph(&text) else { continue };
        if g.vertex_count() > 9 {
            continue;
        }
        let result = run_one_one(&g);
        let best = oracle::min_tour_held_karp(&g).unwrap().optimum_weight;
        assert_eq!(result.status == Status::NotHamiltonianInput, best.is_none(), "{name}");
        if result.status == Status::Ok {
            let tour = result.tour.unwrap();
            assert_eq!(oracle::validate_tour(&g, &tour).ok(), result.weight, "{name}");
            assert!(result.weight >= best, "{name}");
        }
    }
}
