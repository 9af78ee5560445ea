#![no_main]

use libfuzzer_sys::fuzz_target;
use properfrac::numerators::NumeratorSpec;
use properfrac::parse::parse_numerators;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    match parse_numerators(s) {
        Ok(NumeratorSpec::List(v)) => assert!(!v.is_empty()),
        Ok(_) => {}
        Err(e) => assert!(e.pos <= s.len()),
    }
});
