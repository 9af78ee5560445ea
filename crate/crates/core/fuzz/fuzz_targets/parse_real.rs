#![no_main]

use libfuzzer_sys::fuzz_target;
use properfrac::parse::parse_real;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    match parse_real(s) {
        Ok(v) => {
            // printed values parse back to themselves
            if v.is_exact() {
                let again = parse_real(&v.to_string()).expect("display output must parse");
                assert_eq!(again, v);
            }
        }
        Err(e) => assert!(e.pos <= s.len()),
    }
});
