#![no_main]

use libfuzzer_sys::fuzz_target;
use mck_core::format::{emit_algebra, parse_algebra};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(alg) = parse_algebra(text) else {
        return;
    };
    let back = parse_algebra(&emit_algebra(&alg)).expect("emitted algebra parses");
    assert!(back.structure_constants().eq(alg.structure_constants()));
});
