#![no_main]

use libfuzzer_sys::fuzz_target;
use slinkage_cli::formats::{decode_binary_matrix, encode_binary_matrix};

fuzz_target!(|data: &[u8]| {
    if let Ok(m) = decode_binary_matrix(data) {
        // accepted inputs re-encode to the same bytes
        let values: Vec<f32> = m.as_slice().iter().map(|&v| v as f32).collect();
        assert_eq!(encode_binary_matrix(m.n_rows() as u32, m.n_cols() as u32, &values), data);
    }
});
