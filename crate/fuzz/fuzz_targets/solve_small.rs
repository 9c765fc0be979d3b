#![no_main]
use libfuzzer_sys::fuzz_target;

use hamtsp::{oracle, parse_graph, run_one_one, Status};

// Anything the parser accepts with at most 9 vertices goes through the
// solver; an ok result must be a valid tour no lighter than the optimum.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(g) = parse_graph(text) else {
        return;
    };
    if g.vertex_count() > 9 {
        return;
    }
    let result = run_one_one(&g);
    let best = oracle::min_tour_held_karp(&g).unwrap().optimum_weight;
    assert_eq!(result.status == Status::NotHamiltonianInput, best.is_none());
    if result.status == Status::Ok {
        let tour = result.tour.unwrap();
        assert_eq!(oracle::validate_tour(&g, &tour).ok(), result.weight);
        assert!(result.weight >= best);
    }
});
