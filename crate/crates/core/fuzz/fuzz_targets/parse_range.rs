#![no_main]

use libfuzzer_sys::fuzz_target;
use properfrac::parse::parse_range;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Err(e) = parse_range(s) {
        assert!(e.pos <= s.len());
    }
});
