#![no_main]

use authn_catalog::schemes::{authenticator_scheme, technique_scheme};
use authn_catalog::{classification_name, parse_classification_name};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for scheme in [technique_scheme(), authenticator_scheme()] {
        if let Ok(assignment) = parse_classification_name(text, &scheme) {
            let name = classification_name(&assignment, &scheme).expect("parsed names rename");
            assert_eq!(name.as_str(), text);
        }
    }
});
