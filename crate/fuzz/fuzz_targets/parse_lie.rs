#![no_main]

use libfuzzer_sys::fuzz_target;
use mck_core::format::{emit_lie, parse_lie};
use mck_core::lie::lie_check;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(lie) = parse_lie(text) else {
        return;
    };
    assert!(lie_check(&lie).is_empty());
    let back = parse_lie(&emit_lie(&lie)).expect("emitted Lie algebra parses");
    assert_eq!(back, lie);
});
