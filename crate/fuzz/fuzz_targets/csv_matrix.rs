#![no_main]

use libfuzzer_sys::fuzz_target;
use slinkage_cli::formats::parse_csv_matrix;

fuzz_target!(|data: &[u8]| {
    if let Ok(m) = parse_csv_matrix(data) {
        assert_eq!(m.as_slice().len(), m.n_rows() * m.n_cols());
        assert!(m.as_slice().iter().all(|v| v.is_finite()));
    }
});
