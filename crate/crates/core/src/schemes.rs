//! The two concrete classification schemes, the catalog entry types and the
//! cross-facet consistency rules that tie a technique to the authenticators it
//! employs.

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::facet_model::{
    Dimensionality, Facet, FacetAssignment, FacetValueNode, Scheme, SchemeError, Token, ValuePath,
};
use crate::report::{self, Rule, Violation};

/// Facet identifiers of both schemes.
pub mod facets {
    pub const AUTHENTICATION_FACTOR: &str = "authentication-factor";
    pub const INTERACTION: &str = "interaction";
    pub const SUBJECT: &str = "subject";
    pub const OUTPUT: &str = "output";

    pub const EMPLOYMENT: &str = "authenticator-employment";
    pub const FACTOR: &str = "factor";
    pub const CONTEXTUALITY: &str = "contextuality";
    pub const SESSION_TRUST: &str = "session-trust-contribution";
    pub const SUBJECT_INTERACTION: &str = "subject-interaction";
    pub const DIRECTIONALITY: &str = "directionality";
    pub const LOCALITY: &str = "locality";
    pub const PRIVACY: &str = "privacy-preservation";
    pub const REVOCABILITY: &str = "revocability";
    pub const UNIQUENESS: &str = "uniqueness";
}

pub const AUTHENTICATOR_SCHEME: &str = "authenticator";
pub const TECHNIQUE_SCHEME: &str = "technique";

pub const KNOWLEDGE_BASED: &str = "knowledge-based";
pub const MULTI_FACTOR: &str = "multi-factor";
pub const SINGLE: &str = "single";
pub const MULTI: &str = "multi";
pub const SEQUENTIAL: &str = "sequential";
pub const ACTIVE: &str = "active";

fn leaf(token: &str) -> FacetValueNode {
    FacetValueNode::leaf(token).expect("static facet value")
}

fn node(token: &str, children: Vec<FacetValueNode>) -> FacetValueNode {
    FacetValueNode::new(token, children).expect("static facet value")
}

fn leaves(tokens: &[&str]) -> Vec<FacetValueNode> {
    tokens.iter().map(|t| leaf(t)).collect()
}

fn facet(name: &str, label: &str, dim: Dimensionality, roots: Vec<FacetValueNode>) -> Facet {
    Facet::new(name, label, dim, roots).expect("static facet")
}

fn build(name: &str, facets: Vec<Facet>) -> Scheme {
    Scheme::new(name, facets)
        .map_err(|e: SchemeError| e.to_string())
        .expect("static scheme")
}

/// The Authenticator scheme: one fundamental facet, two multi-dimensional
/// facets and one one-dimensional facet.
pub fn authenticator_scheme() -> Scheme {
    use Dimensionality::*;
    build(
        AUTHENTICATOR_SCHEME,
        vec![
            facet(
                facets::AUTHENTICATION_FACTOR,
                "Authentication Factor",
                OneDimensional,
                vec![
                    node("inherence-based", leaves(&["behavioral", "physiological"])),
                    node(KNOWLEDGE_BASED, leaves(&["free-recall", "associative"])),
                    node("possession-based", leaves(&["digital", "physical"])),
                ],
            )
            .fundamental()
            .with_aliases(&["factor"]),
            facet(
                facets::INTERACTION,
                "Interaction",
                MultiDimensional,
                leaves(&["active", "passive"]),
            ),
            facet(
                facets::SUBJECT,
                "Subject",
                MultiDimensional,
                leaves(&["human", "machine"]),
            ),
            facet(
                facets::OUTPUT,
                "Output",
                OneDimensional,
                leaves(&["static", "dynamic"]),
            ),
        ],
    )
}

/// The AuthN Technique scheme: two fundamental facets, four multi-dimensional
/// facets and five one-dimensional facets.
pub fn technique_scheme() -> Scheme {
    use Dimensionality::*;
    build(
        TECHNIQUE_SCHEME,
        vec![
            facet(
                facets::EMPLOYMENT,
                "Authenticator Employment",
                OneDimensional,
                vec![
                    leaf(SINGLE),
                    node(
                        MULTI,
                        vec![
                            leaf("parallel"),
                            node(SEQUENTIAL, leaves(&["ordered", "unordered"])),
                        ],
                    ),
                ],
            )
            .fundamental()
            .with_aliases(&["employment"]),
            facet(
                facets::FACTOR,
                "Factor",
                OneDimensional,
                leaves(&[KNOWLEDGE_BASED, "possession-based", "inherence-based", MULTI_FACTOR]),
            )
            .fundamental(),
            facet(
                facets::CONTEXTUALITY,
                "Contextuality",
                MultiDimensional,
                leaves(&["spatial", "temporal", "state-based"]),
            )
            .optional(),
            facet(
                facets::SESSION_TRUST,
                "Session Trust Contribution",
                MultiDimensional,
                leaves(&["establish", "maintain"]),
            )
            .with_aliases(&["session-trust"]),
            facet(
                facets::SUBJECT,
                "Subject",
                MultiDimensional,
                leaves(&["human", "machine"]),
            ),
            facet(
                facets::SUBJECT_INTERACTION,
                "Subject Interaction",
                MultiDimensional,
                leaves(&["active", "passive"]),
            )
            .with_aliases(&["interaction"]),
            facet(
                facets::DIRECTIONALITY,
                "Directionality",
                OneDimensional,
                leaves(&["unidirectional", "bidirectional"]),
            ),
            facet(
                facets::LOCALITY,
                "Locality",
                OneDimensional,
                leaves(&["local", "remote"]),
            ),
            facet(
                facets::PRIVACY,
                "Privacy Preservation",
                OneDimensional,
                leaves(&["onymous", "pseudonymous", "anonymous"]),
            )
            .with_aliases(&["privacy"]),
            facet(
                facets::REVOCABILITY,
                "Revocability",
                OneDimensional,
                leaves(&["revocable", "non-revocable"]),
            ),
            facet(
                facets::UNIQUENESS,
                "Uniqueness",
                OneDimensional,
                leaves(&["unique", "non-unique"]),
            ),
        ],
    )
}

/// Citation for the source that introduces an entry.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reference {
    pub citation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub venue: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<u16>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
}

/// How much of an entry has been classified. `Partial` entries carry the
/// fundamental facets only; missing common facets are not reported for them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassificationStatus {
    Partial,
    #[default]
    Complete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Checklist {
    Ontological,
    Uniqueness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accepted,
    Rejected,
    Modified,
}

/// Outcome of a manual checklist review. Only the outcome is stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviewRecord {
    pub checklist: Checklist,
    pub verdict: Verdict,
    #[serde(default)]
    pub notes: String,
    pub date: NaiveDate,
}

/// An acknowledged, documented exception to one consistency rule on one entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Waiver {
    pub rule: Rule,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthenticatorEntry {
    pub id: String,
    pub name: String,
    pub description: String,
    pub classification_status: ClassificationStatus,
    pub assignment: FacetAssignment,
    /// Per-facet rationale, keyed by facet name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub reasons: BTreeMap<String, String>,
    pub reference: Reference,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reviews: Vec<ReviewRecord>,
}

impl AuthenticatorEntry {
    pub fn factor(&self) -> Option<&ValuePath> {
        self.assignment.single(facets::AUTHENTICATION_FACTOR)
    }
}

/// The aggregation link between a technique and one authenticator it uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Employment {
    pub authenticator_id: String,
    /// 1-based.
    pub position: u32,
    /// Interaction modes in which the technique uses the authenticator. Falls
    /// back to the authenticator's own Interaction values when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interaction_used: Option<BTreeSet<Token>>,
}

impl Employment {
    pub fn new(authenticator_id: &str, position: u32) -> Self {
        Self {
            authenticator_id: authenticator_id.to_owned(),
            position,
            interaction_used: None,
        }
    }

    pub fn used_as(mut self, modes: &[&str]) -> Self {
        self.interaction_used = Some(
            modes
                .iter()
                .map(|m| Token::new(*m).expect("literal interaction mode"))
                .collect(),
        );
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TechniqueEntry {
    pub id: String,
    pub name: String,
    pub description: String,
    pub classification_status: ClassificationStatus,
    pub assignment: FacetAssignment,
    pub employments: Vec<Employment>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub reasons: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub waivers: Vec<Waiver>,
    pub reference: Reference,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reviews: Vec<ReviewRecord>,
}

impl TechniqueEntry {
    pub fn waives(&self, rule: Rule) -> bool {
        self.waivers.iter().any(|w| w.rule == rule)
    }

    /// Employments in ascending position order.
    pub fn ordered_employments(&self) -> Vec<&Employment> {
        let mut out: Vec<&Employment> = self.employments.iter().collect();
        out.sort_by_key(|e| e.position);
        out
    }
}

/// Resolves authenticator ids for the consistency rules.
pub trait AuthenticatorLookup {
    fn authenticator(&self, id: &str) -> Option<&AuthenticatorEntry>;
}

impl AuthenticatorLookup for [AuthenticatorEntry] {
    fn authenticator(&self, id: &str) -> Option<&AuthenticatorEntry> {
        self.iter().find(|a| a.id == id)
    }
}

impl AuthenticatorLookup for Vec<AuthenticatorEntry> {
    fn authenticator(&self, id: &str) -> Option<&AuthenticatorEntry> {
        self.as_slice().authenticator(id)
    }
}

impl AuthenticatorLookup for BTreeMap<String, AuthenticatorEntry> {
    fn authenticator(&self, id: &str) -> Option<&AuthenticatorEntry> {
        self.get(id)
    }
}

impl AuthenticatorLookup for std::collections::HashMap<String, AuthenticatorEntry> {
    fn authenticator(&self, id: &str) -> Option<&AuthenticatorEntry> {
        self.get(id)
    }
}

impl<L: AuthenticatorLookup + ?Sized> AuthenticatorLookup for &L {
    fn authenticator(&self, id: &str) -> Option<&AuthenticatorEntry> {
        (**self).authenticator(id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConsistencyError {
    #[error("employment references unknown authenticator `{0}`")]
    UnresolvedAuthenticator(String),
    #[error("technique employs no authenticators")]
    NoEmployments,
    #[error("authenticator `{0}` has no single Authentication Factor")]
    MissingAuthenticationFactor(String),
}

fn resolve_all<'a, L: AuthenticatorLookup + ?Sized>(
    employments: &[Employment],
    lookup: &'a L,
) -> Result<Vec<&'a AuthenticatorEntry>, ConsistencyError> {
    employments
        .iter()
        .map(|e| {
            lookup
                .authenticator(&e.authenticator_id)
                .ok_or_else(|| ConsistencyError::UnresolvedAuthenticator(e.authenticator_id.clone()))
        })
        .collect()
}

/// The technique Factor implied by the employed authenticators: the shared
/// factor root, or `multi-factor` when two or more roots occur.
pub fn derive_factor<L: AuthenticatorLookup + ?Sized>(
    employments: &[Employment],
    lookup: &L,
) -> Result<ValuePath, ConsistencyError> {
    if employments.is_empty() {
        return Err(ConsistencyError::NoEmployments);
    }
    let mut roots = BTreeSet::new();
    for auth in resolve_all(employments, lookup)? {
        let factor = auth
            .factor()
            .ok_or_else(|| ConsistencyError::MissingAuthenticationFactor(auth.id.clone()))?;
        roots.insert(factor.root().clone());
    }
    let value = if roots.len() >= 2 {
        Token::new(MULTI_FACTOR).expect("static token")
    } else {
        roots.into_iter().next().expect("at least one employment")
    };
    Ok(ValuePath::new(vec![value]).expect("non-empty"))
}

fn tokens(set: &BTreeSet<ValuePath>) -> BTreeSet<&str> {
    set.iter().map(|p| p.leaf().as_str()).collect()
}

fn fmt_set<'a>(set: impl IntoIterator<Item = &'a str>) -> String {
    let items: Vec<&str> = set.into_iter().collect();
    format!("{{{}}}", items.join(", "))
}

/// Authenticator-level part of rule C3.
fn knowledge_is_active(auth: &AuthenticatorEntry) -> bool {
    let knowledge = auth
        .factor()
        .is_some_and(|f| f.root().as_str() == KNOWLEDGE_BASED);
    match auth.assignment.get(facets::INTERACTION) {
        Some(set) if knowledge => tokens(set) == BTreeSet::from([ACTIVE]),
        _ => true,
    }
}

/// Rules that concern a single authenticator regardless of use (currently C3).
pub fn check_authenticator(auth: &AuthenticatorEntry) -> Vec<Violation> {
    if knowledge_is_active(auth) {
        Vec::new()
    } else {
        vec![Violation::new(
            Rule::C3,
            facets::INTERACTION,
            "knowledge-based authenticator must have Interaction = {active}",
        )]
    }
}

/// Evaluates the cross-facet rules C1..C6 for a technique.
///
/// Checks that depend on data an entry does not carry (e.g. the common facets
/// of a partially classified authenticator) are skipped, as are checks of C4
/// whose inputs already violate C3.
pub fn check_consistency<L: AuthenticatorLookup + ?Sized>(
    technique: &TechniqueEntry,
    lookup: &L,
) -> Result<Vec<Violation>, ConsistencyError> {
    let auths = resolve_all(&technique.employments, lookup)?;
    let count = auths.len();
    let assignment = &technique.assignment;
    let mut report = Vec::new();

    let employment = assignment.single(facets::EMPLOYMENT);

    // C1
    if let Some(path) = employment {
        let ok = match path.root().as_str() {
            SINGLE => count == 1,
            MULTI => count >= 2,
            _ => true,
        };
        if !ok {
            report.push(Violation::new(
                Rule::C1,
                facets::EMPLOYMENT,
                format!("`{path}` does not match {count} employed authenticator(s)"),
            ));
        }
    }

    // C2
    if let Some(assigned) = assignment.single(facets::FACTOR) {
        match derive_factor(&technique.employments, lookup) {
            Ok(derived) if &derived != assigned => report.push(Violation::new(
                Rule::C2,
                facets::FACTOR,
                format!("Factor is `{assigned}` but the employed authenticators imply `{derived}`"),
            )),
            Ok(_) | Err(ConsistencyError::NoEmployments) => {}
            Err(ConsistencyError::MissingAuthenticationFactor(_)) => {}
            Err(e) => return Err(e),
        }
    }

    // C3
    let mut c3_failed = false;
    for auth in &auths {
        if !knowledge_is_active(auth) {
            c3_failed = true;
            report.push(Violation::new(
                Rule::C3,
                facets::SUBJECT_INTERACTION,
                format!(
                    "employed knowledge-based authenticator `{}` is not active-only",
                    auth.id
                ),
            ));
        }
    }

    // C4
    if let (Some(assigned), false) = (assignment.get(facets::SUBJECT_INTERACTION), c3_failed) {
        let mut union: BTreeSet<&str> = BTreeSet::new();
        let mut determinate = true;
        for (emp, auth) in technique.employments.iter().zip(&auths) {
            let offered = auth.assignment.get(facets::INTERACTION).map(tokens);
            match (&emp.interaction_used, offered) {
                (Some(used), _) if used.is_empty() => report.push(Violation::new(
                    Rule::C4,
                    facets::SUBJECT_INTERACTION,
                    format!("employment of `{}` has an empty interaction_used", auth.id),
                )),
                (Some(used), offered) => {
                    let used: BTreeSet<&str> = used.iter().map(Token::as_str).collect();
                    if let Some(offered) = offered.filter(|o| !used.is_subset(o)) {
                        report.push(Violation::new(
                            Rule::C4,
                            facets::SUBJECT_INTERACTION,
                            format!(
                                "employment of `{}` uses {} but the authenticator offers {}",
                                auth.id,
                                fmt_set(used.iter().copied()),
                                fmt_set(offered)
                            ),
                        ));
                    }
                    union.extend(used);
                }
                (None, Some(offered)) => union.extend(offered),
                (None, None) => determinate = false,
            }
        }
        let assigned = tokens(assigned);
        if determinate && assigned != union {
            report.push(Violation::new(
                Rule::C4,
                facets::SUBJECT_INTERACTION,
                format!(
                    "Subject Interaction is {} but the employments use {}",
                    fmt_set(assigned),
                    fmt_set(union)
                ),
            ));
        }
    }

    // C5
    if let Some(assigned) = assignment.get(facets::SUBJECT) {
        let subject_sets: Option<Vec<BTreeSet<&str>>> = auths
            .iter()
            .map(|a| a.assignment.get(facets::SUBJECT).map(tokens))
            .collect();
        if let Some(sets) = subject_sets.filter(|s| !s.is_empty()) {
            let common = sets
                .iter()
                .skip(1)
                .fold(sets[0].clone(), |acc, s| acc.intersection(s).copied().collect());
            let assigned = tokens(assigned);
            if !assigned.is_subset(&common) {
                report.push(Violation::new(
                    Rule::C5,
                    facets::SUBJECT,
                    format!(
                        "Subject {} exceeds what every employed authenticator supports {}",
                        fmt_set(assigned),
                        fmt_set(common)
                    ),
                ));
            }
        }
    }

    // C6
    let mut positions: Vec<u32> = technique.employments.iter().map(|e| e.position).collect();
    positions.sort_unstable();
    if positions.iter().copied().ne(1..=count as u32) {
        report.push(Violation::new(
            Rule::C6,
            facets::EMPLOYMENT,
            format!("employment positions {positions:?} are not 1..{count} without gaps"),
        ));
    }
    if employment.is_some_and(|p| p.contains(SEQUENTIAL)) && count < 2 {
        report.push(Violation::new(
            Rule::C6,
            facets::EMPLOYMENT,
            "sequential employment needs at least two ordered authenticators",
        ));
    }

    Ok(report::normalize(report))
}
