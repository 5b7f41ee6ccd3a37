#![no_main]

use libfuzzer_sys::fuzz_target;
use t36::io::{matrix_to_json, parse_matrix_json};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok((m, mode)) = parse_matrix_json(s) {
            let again = matrix_to_json(&m, &mode);
            assert_eq!(parse_matrix_json(&again).unwrap(), (m, mode));
        }
    }
});
