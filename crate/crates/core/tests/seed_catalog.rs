use std::collections::BTreeMap;

use authn_catalog::catalog::{self, LintLevel};
use authn_catalog::query::{self, Target};
use authn_catalog::schemes::{check_consistency, facets, ClassificationStatus};
use authn_catalog::seed::{self, seed_document, CONTEXT_AWARE_TOUCH_ID, MULTI_SAMPLE_ID, PIN_ID, TOUCH_ID};
use authn_catalog::{classification_name, readable_name, Rule};

const SHIPPED: &str = include_str!("../../../data/catalog.json");

#[test]
fn shipped_file_is_the_canonical_seed() {
    let bytes = catalog::save(&seed_document());
    assert_eq!(
        String::from_utf8(bytes).unwrap(),
        SHIPPED,
        "data/catalog.json is stale; regenerate with `cargo run -p authn-catalog --example write_seed`"
    );
}

#[test]
fn seed_loads_with_no_strict_warnings() {
    let loaded = catalog::load(SHIPPED.as_bytes()).unwrap();
    assert_eq!(loaded.document.authenticators.len(), 34);
    assert_eq!(loaded.document.techniques.len(), 33);
    assert!(loaded.warnings.is_empty(), "{:#?}", loaded.warnings);
    let strict = catalog::lint(&loaded.document, LintLevel::Strict);
    assert!(strict.is_clean());
    assert_eq!(strict.waived.len(), 1);
    assert_eq!(strict.waived[0].entry_id, MULTI_SAMPLE_ID);
}

// Independent oracle: run the raw cross-facet rules over every seed technique.
#[test]
fn raw_consistency_over_seed() {
    let doc = seed_document();
    let mut findings = Vec::new();
    for t in &doc.techniques {
        for v in check_consistency(t, &doc).unwrap() {
            findings.push((t.id.clone(), v.rule));
        }
    }
    assert_eq!(findings, [(MULTI_SAMPLE_ID.to_owned(), Rule::C2)]);
}

#[test]
fn ids_are_slugs_of_names() {
    let doc = seed_document();
    for a in &doc.authenticators {
        assert_eq!(a.id, seed::slugify(&a.name));
    }
    for t in &doc.techniques {
        assert_eq!(t.id, seed::slugify(&t.name));
    }
}

#[test]
fn status_markers() {
    let doc = seed_document();
    let complete: Vec<&str> = doc
        .authenticators
        .iter()
        .filter(|a| a.classification_status == ClassificationStatus::Complete)
        .map(|a| a.id.as_str())
        .chain(
            doc.techniques
                .iter()
                .filter(|t| t.classification_status == ClassificationStatus::Complete)
                .map(|t| t.id.as_str()),
        )
        .collect();
    assert_eq!(complete, [PIN_ID, TOUCH_ID, CONTEXT_AWARE_TOUCH_ID]);
}

#[test]
fn catalog_grouping() {
    let doc = seed_document();
    let groups = query::technique_groups(&doc);
    let expected: BTreeMap<String, usize> = [
        ("single|inherence-based.behavioral", 5),
        ("single|inherence-based.physiological", 8),
        ("single|possession-based.digital", 4),
        ("single|possession-based.physical", 5),
        ("single|knowledge-based.associative", 2),
        ("single|knowledge-based.free-recall", 3),
        ("multi.parallel", 5),
        ("multi.sequential.ordered", 1),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_owned(), v))
    .collect();
    assert_eq!(groups, expected);
    assert_eq!(groups.values().sum::<usize>(), 33);
}

#[test]
fn group_counts() {
    let doc = seed_document();
    let emp = query::group_count(&doc, Target::Techniques, facets::EMPLOYMENT, 3).unwrap();
    assert_eq!(
        emp.into_iter().collect::<Vec<_>>(),
        [
            ("multi.parallel".to_owned(), 5),
            ("multi.sequential.ordered".to_owned(), 1),
            ("single".to_owned(), 27),
        ]
    );
    let factors = query::group_count(&doc, Target::Authenticators, "authentication-factor", 1).unwrap();
    assert_eq!(factors.values().sum::<usize>(), 34);
    assert_eq!(factors["inherence-based"], 21);
    assert_eq!(factors["possession-based"], 9);
    assert_eq!(factors["knowledge-based"], 4);

    let ctx = query::group_count(&doc, Target::Techniques, facets::CONTEXTUALITY, 1).unwrap();
    assert_eq!(ctx[query::UNASSIGNED], 32);
    assert_eq!(ctx["state-based"], 1);

    assert!(query::group_count(&doc, Target::Techniques, "nope", 1).is_err());
}

#[test]
fn seeded_queries() {
    let doc = seed_document();
    let ids = |q: &str| -> Vec<String> {
        query::evaluate_str(&doc, Target::Techniques, q)
            .unwrap()
            .iter()
            .map(|e| e.id().to_owned())
            .collect()
    };
    assert_eq!(
        ids("factor=multi-factor"),
        [
            CONTEXT_AWARE_TOUCH_ID,
            MULTI_SAMPLE_ID,
            "neuromuscular-password-authentication",
        ]
    );
    // 5 behavioral + 8 physiological + 3 inherence-based parallel
    assert_eq!(ids("factor=inherence-based").len(), 16);
    // 33 - 5 parallel - 1 sequential
    assert_eq!(ids("!employment=multi").len(), 27);
    assert_eq!(ids("employment=multi.parallel").len(), 5);
    assert_eq!(ids("contextuality=state-based"), [CONTEXT_AWARE_TOUCH_ID]);
    assert_eq!(ids("subject-interaction=passive"), [CONTEXT_AWARE_TOUCH_ID]);
    assert!(ids("contextuality=temporal").is_empty());
}

#[test]
fn names_of_reference_entries() {
    let doc = seed_document();
    let touch = doc.authenticator(TOUCH_ID).unwrap();
    assert_eq!(
        classification_name(&touch.assignment, &doc.schemes.authenticator).unwrap().as_str(),
        "inherence-based.behavioral"
    );
    let pw = doc.technique("text-password-authentication").unwrap();
    assert_eq!(
        classification_name(&pw.assignment, &doc.schemes.technique).unwrap().as_str(),
        "single|knowledge-based"
    );
    let cat = doc.technique(CONTEXT_AWARE_TOUCH_ID).unwrap();
    assert_eq!(
        readable_name(&cat.assignment, &doc.schemes.technique, true).unwrap(),
        "sequential ordered multi-factor"
    );
    let employed: Vec<&str> = cat
        .ordered_employments()
        .iter()
        .map(|e| e.authenticator_id.as_str())
        .collect();
    assert_eq!(employed, [PIN_ID, TOUCH_ID]);
    let back: Vec<&str> = doc.employing_techniques(PIN_ID).iter().map(|t| t.id.as_str()).collect();
    assert_eq!(back, [CONTEXT_AWARE_TOUCH_ID, "pin-authentication"]);
}
