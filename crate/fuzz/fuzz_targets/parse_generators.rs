#![no_main]

use libfuzzer_sys::fuzz_target;
use mck_core::format::{emit_generators, parse_generators};

// Keeps p^n small so each input stays cheap.
const CAP: usize = 64;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(set) = parse_generators(text, CAP) else {
        return;
    };
    let back = parse_generators(&emit_generators(&set), CAP).expect("emitted generators parse");
    assert_eq!(back, set);
});
