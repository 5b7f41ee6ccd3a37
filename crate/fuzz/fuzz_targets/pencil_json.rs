#![no_main]

use libfuzzer_sys::fuzz_target;
use t36::io::parse_pencil_json;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse_pencil_json(s);
    }
});
