//! Random catalogs and an independent set-based query evaluator.
#![allow(dead_code)]

use std::collections::BTreeSet;

use authn_catalog::schemes::{
    authenticator_scheme, technique_scheme, AuthenticatorEntry, ClassificationStatus, Employment, Reference,
    TechniqueEntry,
};
use authn_catalog::{CatalogDocument, FacetAssignment, Scheme, ValuePath};
use rand::seq::SliceRandom;
use rand::Rng;

fn random_assignment<R: Rng>(rng: &mut R, scheme: &Scheme) -> FacetAssignment {
    let mut assignment = FacetAssignment::new();
    for facet in &scheme.facets {
        if !facet.fundamental && rng.gen_bool(0.25) {
            continue;
        }
        let paths = facet.paths();
        let n = if facet.is_multi_dimensional() { rng.gen_range(1..=3) } else { 1 };
        let chosen: BTreeSet<ValuePath> = paths.choose_multiple(rng, n).cloned().collect();
        assignment.set(&facet.name, chosen);
    }
    assignment
}

/// A catalog of at most `max_entries` entries drawn over the built-in schemes.
/// Entries are structurally well-formed but not necessarily consistent.
pub fn random_catalog<R: Rng>(rng: &mut R, max_entries: usize) -> CatalogDocument {
    let total = rng.gen_range(2..=max_entries.max(2));
    let n_auth = rng.gen_range(1..total);
    let n_tech = total - n_auth;
    let auth_scheme = authenticator_scheme();
    let tech_scheme = technique_scheme();

    let authenticators: Vec<AuthenticatorEntry> = (0..n_auth)
        .map(|i| AuthenticatorEntry {
            id: format!("a{i}"),
            name: format!("Authenticator {i}"),
            description: String::new(),
            classification_status: ClassificationStatus::Partial,
            assignment: random_assignment(rng, &auth_scheme),
            reasons: Default::default(),
            reference: Reference::default(),
            reviews: Vec::new(),
        })
        .collect();
    let techniques: Vec<TechniqueEntry> = (0..n_tech)
        .map(|i| {
            let k = rng.gen_range(1..=n_auth.min(3));
            let employments = authenticators
                .choose_multiple(rng, k)
                .enumerate()
                .map(|(p, a)| Employment::new(&a.id, p as u32 + 1))
                .collect();
            TechniqueEntry {
                id: format!("t{i}"),
                name: format!("Technique {i}"),
                description: String::new(),
                classification_status: ClassificationStatus::Partial,
                assignment: random_assignment(rng, &tech_scheme),
                employments,
                reasons: Default::default(),
                waivers: Vec::new(),
                reference: Reference::default(),
                reviews: Vec::new(),
            }
        })
        .collect();
    CatalogDocument::new(authenticators, techniques)
}

/// Query AST kept apart from the library's own `Expr`.
#[derive(Debug, Clone)]
pub enum Q {
    Atom { facet: String, path: String, all: bool },
    And(Box<Q>, Box<Q>),
    Or(Box<Q>, Box<Q>),
    Not(Box<Q>),
}

/// Facet identifiers a query may use, with the canonical facet each denotes.
pub fn facet_names(authenticators: bool) -> Vec<(&'static str, &'static str)> {
    if authenticators {
        vec![
            ("authentication-factor", "authentication-factor"),
            ("factor", "authentication-factor"),
            ("interaction", "interaction"),
            ("subject", "subject"),
            ("output", "output"),
        ]
    } else {
        vec![
            ("authenticator-employment", "authenticator-employment"),
            ("employment", "authenticator-employment"),
            ("factor", "factor"),
            ("contextuality", "contextuality"),
            ("session-trust", "session-trust-contribution"),
            ("subject-interaction", "subject-interaction"),
            ("interaction", "subject-interaction"),
            ("directionality", "directionality"),
            ("locality", "locality"),
            ("privacy", "privacy-preservation"),
            ("revocability", "revocability"),
            ("uniqueness", "uniqueness"),
        ]
    }
}

pub fn random_query<R: Rng>(rng: &mut R, scheme: &Scheme, authenticators: bool, depth: u32) -> Q {
    if depth == 0 || rng.gen_bool(0.35) {
        let names = facet_names(authenticators);
        let (alias, canonical) = *names.choose(rng).expect("facets");
        let facet = scheme.facet(canonical).expect("canonical facet");
        let path = facet.paths().choose(rng).expect("paths").dotted();
        return Q::Atom {
            facet: alias.to_owned(),
            path,
            all: rng.gen_bool(0.3),
        };
    }
    let kind = rng.gen_range(0..3);
    let mut sub = || Box::new(random_query(rng, scheme, authenticators, depth - 1));
    match kind {
        0 => Q::And(sub(), sub()),
        1 => Q::Or(sub(), sub()),
        _ => Q::Not(sub()),
    }
}

pub fn render<R: Rng>(rng: &mut R, q: &Q) -> String {
    let pad = |rng: &mut R| if rng.gen_bool(0.5) { " " } else { "" };
    match q {
        Q::Atom { facet, path, all } => {
            let op = if *all { "==" } else { "=" };
            if rng.gen_bool(0.2) {
                format!("({facet}{op}{path})")
            } else {
                format!("{facet}{op}{path}")
            }
        }
        Q::And(a, b) => {
            let (a, b) = (render(rng, a), render(rng, b));
            format!("({a}{}&{}{b})", pad(rng), pad(rng))
        }
        Q::Or(a, b) => {
            let (a, b) = (render(rng, a), render(rng, b));
            format!("({a}{},{}{b})", pad(rng), pad(rng))
        }
        Q::Not(a) => format!("!{}({})", pad(rng), render(rng, a)),
    }
}

fn under(prefix: &str, value: &str) -> bool {
    value == prefix || value.starts_with(&format!("{prefix}."))
}

/// Brute-force evaluation by set algebra over entry ids.
pub fn oracle(doc: &CatalogDocument, authenticators: bool, q: &Q) -> BTreeSet<String> {
    let entries: Vec<(String, &FacetAssignment)> = if authenticators {
        doc.authenticators.iter().map(|a| (a.id.clone(), &a.assignment)).collect()
    } else {
        doc.techniques.iter().map(|t| (t.id.clone(), &t.assignment)).collect()
    };
    let universe: BTreeSet<String> = entries.iter().map(|(id, _)| id.clone()).collect();
    match q {
        Q::Atom { facet, path, all } => {
            let canonical = facet_names(authenticators)
                .into_iter()
                .find(|(alias, _)| alias == facet)
                .map(|(_, c)| c)
                .expect("known alias");
            entries
                .iter()
                .filter(|(_, assignment)| {
                    let values: Vec<String> = assignment
                        .get(canonical)
                        .map(|s| s.iter().map(|p| p.dotted()).collect())
                        .unwrap_or_default();
                    if *all {
                        !values.is_empty() && values.iter().all(|v| under(path, v))
                    } else {
                        values.iter().any(|v| under(path, v))
                    }
                })
                .map(|(id, _)| id.clone())
                .collect()
        }
        Q::And(a, b) => &oracle(doc, authenticators, a) & &oracle(doc, authenticators, b),
        Q::Or(a, b) => &oracle(doc, authenticators, a) | &oracle(doc, authenticators, b),
        Q::Not(a) => &universe - &oracle(doc, authenticators, a),
    }
}
