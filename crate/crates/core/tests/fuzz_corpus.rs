//! Replays the checked-in fuzz corpus through the same checks the fuzz
//! targets make, so the seeds stay meaningful without cargo-fuzz.

use std::fs;
use std::path::PathBuf;

use properfrac::numerators::NumeratorSpec;
use properfrac::parse::{parse_numerators, parse_range, parse_real};
use properfrac::PcfExpansion;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn parse_real_seeds() {
    let mut parsed = 0;
    for (name, s) in seeds("parse_real") {
        match parse_real(&s) {
            Ok(v) => {
                if v.is_exact() {
                    assert_eq!(parse_real(&v.to_string()).unwrap(), v, "{name}");
                }
                parsed += 1;
            }
            Err(e) => assert!(e.pos <= s.len(), "{name}"),
        }
    }
    assert!(parsed > 0);
}

#[test]
fn parse_numerators_seeds() {
    for (name, s) in seeds("parse_numerators") {
        match parse_numerators(&s) {
            Ok(NumeratorSpec::List(v)) => assert!(!v.is_empty(), "{name}"),
            Ok(_) => {}
            Err(e) => assert!(e.pos <= s.len(), "{name}"),
        }
    }
}

#[test]
fn parse_range_seeds() {
    for (name, s) in seeds("parse_range") {
        if let Err(e) = parse_range(&s) {
            assert!(e.pos <= s.len(), "{name}");
        }
    }
}

#[test]
fn expansion_json_seeds() {
    let mut decoded = 0;
    for (name, s) in seeds("expansion_json") {
        if let Ok(e) = PcfExpansion::from_json(&s) {
            let text = e.to_json();
            let back = PcfExpansion::from_json(&text).unwrap();
            assert_eq!(back.quotients, e.quotients, "{name}");
            assert_eq!(back.to_json(), text, "{name}");
            decoded += 1;
        }
    }
    assert!(decoded > 0);
}
