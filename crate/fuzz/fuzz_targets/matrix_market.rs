#![no_main]

use libfuzzer_sys::fuzz_target;
use slinkage_cli::formats::parse_matrix_market;

fuzz_target!(|data: &[u8]| {
    if let Ok(g) = parse_matrix_market(data) {
        assert!(g.edges.edges.iter().all(|e| e.src != e.dst && e.weight.is_finite() && e.weight != 0.0));
    }
});
