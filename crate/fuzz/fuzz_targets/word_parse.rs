#![no_main]

use libfuzzer_sys::fuzz_target;
use t36::words::Word;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(w) = s.parse::<Word>() {
            assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
            let _ = w.letters_string();
        }
    }
});
