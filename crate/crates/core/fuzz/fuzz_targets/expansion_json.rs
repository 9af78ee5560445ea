#![no_main]

use libfuzzer_sys::fuzz_target;
use properfrac::PcfExpansion;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(e) = PcfExpansion::from_json(s) {
        let text = e.to_json();
        let back = PcfExpansion::from_json(&text).expect("own output must decode");
        assert_eq!(back.quotients, e.quotients);
        assert_eq!(back.to_json(), text);
    }
});
