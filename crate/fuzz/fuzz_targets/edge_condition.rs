#![no_main]

use libfuzzer_sys::fuzz_target;
use poisson_sor::experiment::parse_edge_condition;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(edge) = parse_edge_condition(text) {
        let again = parse_edge_condition(&edge.to_string()).expect("displayed edge must parse");
        assert_eq!(edge, again);
    }
});
