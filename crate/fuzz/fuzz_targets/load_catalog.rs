#![no_main]

use authn_catalog::catalog::{lint, load, parse, save, LintLevel};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(doc) = parse(data) {
        let _ = lint(&doc, LintLevel::Strict);
        let bytes = save(&doc);
        let again = parse(&bytes).expect("saved document parses");
        assert_eq!(save(&again), bytes);
    }
    let _ = load(data);
});
