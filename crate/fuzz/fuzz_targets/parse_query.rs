#![no_main]

use authn_catalog::query::{Query, Target};
use authn_catalog::schemes::{authenticator_scheme, technique_scheme};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for (target, scheme) in [
        (Target::Techniques, technique_scheme()),
        (Target::Authenticators, authenticator_scheme()),
    ] {
        match Query::parse(text, target, &scheme) {
            Ok(q) => {
                if let Some(expr) = q.expr {
                    let shown = expr.to_string();
                    Query::parse(&shown, target, &scheme).expect("displayed query reparses");
                }
            }
            Err(e) => {
                assert!(e.position <= text.len());
                let _ = e.caret_diagnostic(text);
            }
        }
    }
});
