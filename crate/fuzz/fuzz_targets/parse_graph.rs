#![no_main]
use libfuzzer_sys::fuzz_target;

use hamtsp::parse_graph;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_graph(text) {
        let again = parse_graph(&g.to_edge_list()).expect("serialized graph parses");
        assert_eq!(g, again);
    }
});
