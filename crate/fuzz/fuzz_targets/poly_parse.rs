#![no_main]

use libfuzzer_sys::fuzz_target;
use t36::poly::Poly;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(p) = s.parse::<Poly>() {
            // printing must give something that parses back to the same value
            let back: Poly = p.to_string().parse().expect("printed poly reparses");
            assert_eq!(back, p);
        }
    }
});
