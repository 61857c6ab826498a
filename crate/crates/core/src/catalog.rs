//! The persistent catalog document: JSON loading and canonical saving,
//! referential integrity and lint levels.
//!
//! Documents are immutable snapshots. The `with_*` methods return a modified
//! copy and leave the original untouched.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::facet_model::{is_token, resolve_path, validate_assignment, FacetAssignment, Scheme};
use crate::report::{Rule, Violation};
use crate::schemes::{
    authenticator_scheme, check_authenticator, check_consistency, technique_scheme,
    AuthenticatorEntry, AuthenticatorLookup, ClassificationStatus, TechniqueEntry,
};

pub const FORMAT_VERSION: &str = "1.0.0";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogSchemes {
    pub authenticator: Scheme,
    pub technique: Scheme,
}

impl Default for CatalogSchemes {
    fn default() -> Self {
        Self {
            authenticator: authenticator_scheme(),
            technique: technique_scheme(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogDocument {
    pub format_version: String,
    pub schemes: CatalogSchemes,
    pub authenticators: Vec<AuthenticatorEntry>,
    pub techniques: Vec<TechniqueEntry>,
}

impl Default for CatalogDocument {
    fn default() -> Self {
        Self::new(Vec::new(), Vec::new())
    }
}

impl CatalogDocument {
    pub fn new(authenticators: Vec<AuthenticatorEntry>, techniques: Vec<TechniqueEntry>) -> Self {
        let mut doc = Self {
            format_version: FORMAT_VERSION.to_owned(),
            schemes: CatalogSchemes::default(),
            authenticators,
            techniques,
        };
        doc.canonicalize();
        doc
    }

    fn canonicalize(&mut self) {
        self.authenticators.sort_by(|a, b| a.id.cmp(&b.id));
        self.techniques.sort_by(|a, b| a.id.cmp(&b.id));
        for t in &mut self.techniques {
            t.employments
                .sort_by(|a, b| (a.position, &a.authenticator_id).cmp(&(b.position, &b.authenticator_id)));
        }
    }

    pub fn authenticator(&self, id: &str) -> Option<&AuthenticatorEntry> {
        self.authenticators.iter().find(|a| a.id == id)
    }

    pub fn technique(&self, id: &str) -> Option<&TechniqueEntry> {
        self.techniques.iter().find(|t| t.id == id)
    }

    /// Techniques that employ the given authenticator, sorted by id.
    pub fn employing_techniques(&self, authenticator_id: &str) -> Vec<&TechniqueEntry> {
        self.techniques
            .iter()
            .filter(|t| t.employments.iter().any(|e| e.authenticator_id == authenticator_id))
            .collect()
    }

    /// Copy with the authenticator of the same id replaced (or added).
    pub fn with_authenticator(&self, entry: AuthenticatorEntry) -> Self {
        let mut next = self.clone();
        next.authenticators.retain(|a| a.id != entry.id);
        next.authenticators.push(entry);
        next.canonicalize();
        next
    }

    /// Copy with the technique of the same id replaced (or added).
    pub fn with_technique(&self, entry: TechniqueEntry) -> Self {
        let mut next = self.clone();
        next.techniques.retain(|t| t.id != entry.id);
        next.techniques.push(entry);
        next.canonicalize();
        next
    }

    pub fn without_technique(&self, id: &str) -> Self {
        let mut next = self.clone();
        next.techniques.retain(|t| t.id != id);
        next
    }
}

impl AuthenticatorLookup for CatalogDocument {
    fn authenticator(&self, id: &str) -> Option<&AuthenticatorEntry> {
        CatalogDocument::authenticator(self, id)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LintLevel {
    /// Structural validity plus C1, C2 and C6.
    #[default]
    Lenient,
    /// Everything in `Lenient` plus C3..C5 and leaf-level fundamental paths.
    Strict,
}

impl LintLevel {
    pub fn includes(self, rule: Rule) -> bool {
        match rule {
            Rule::C3 | Rule::C4 | Rule::C5 | Rule::NonLeafFundamental => self == LintLevel::Strict,
            _ => true,
        }
    }
}

impl FromStr for LintLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lenient" => Ok(LintLevel::Lenient),
            "strict" => Ok(LintLevel::Strict),
            other => Err(format!("unknown lint level `{other}` (expected lenient or strict)")),
        }
    }
}

impl fmt::Display for LintLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LintLevel::Lenient => "lenient",
            LintLevel::Strict => "strict",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Authenticator,
    Technique,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LintItem {
    pub entry_id: String,
    pub kind: EntryKind,
    #[serde(flatten)]
    pub violation: Violation,
}

impl LintItem {
    /// `entry-id<TAB>rule<TAB>message`
    pub fn to_line(&self) -> String {
        let message = if self.violation.facet.is_empty() {
            self.violation.message.clone()
        } else {
            format!("{}: {}", self.violation.facet, self.violation.message)
        };
        format!("{}\t{}\t{}", self.entry_id, self.violation.rule, message)
    }

    fn sort_key(&self) -> (&str, &str, EntryKind, &str, &str) {
        (
            &self.entry_id,
            self.violation.rule.as_str(),
            self.kind,
            &self.violation.facet,
            &self.violation.message,
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LintReport {
    pub violations: Vec<LintItem>,
    /// Findings suppressed by an entry's documented waivers.
    pub waived: Vec<LintItem>,
}

impl LintReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn rules(&self) -> Vec<Rule> {
        self.violations.iter().map(|i| i.violation.rule).collect()
    }
}

/// Structural findings for one assignment, honoring the partial-status rule.
fn structural(
    scheme: &Scheme,
    assignment: &FacetAssignment,
    status: ClassificationStatus,
    level: LintLevel,
) -> Vec<Violation> {
    let mut out: Vec<Violation> = validate_assignment(scheme, assignment)
        .into_iter()
        .filter(|v| {
            !(status == ClassificationStatus::Partial
                && v.rule == Rule::MissingFacet
                && scheme.facet(&v.facet).is_some_and(|f| !f.fundamental))
        })
        .collect();
    if level == LintLevel::Strict {
        for facet in scheme.fundamental_facets() {
            for path in assignment.get(&facet.name).into_iter().flatten() {
                if resolve_path(facet, path.steps()).is_ok_and(|n| !n.is_leaf()) {
                    out.push(Violation::new(
                        Rule::NonLeafFundamental,
                        facet.name.clone(),
                        format!("`{path}` is not a leaf value"),
                    ));
                }
            }
        }
    }
    out
}

/// Aggregates all findings at `level`, ordered by entry id then rule id.
pub fn lint(document: &CatalogDocument, level: LintLevel) -> LintReport {
    let mut items = Vec::new();
    let mut waived = Vec::new();
    let schemes = &document.schemes;

    for auth in &document.authenticators {
        let mut found = structural(
            &schemes.authenticator,
            &auth.assignment,
            auth.classification_status,
            level,
        );
        found.extend(check_authenticator(auth));
        items.extend(
            found
                .into_iter()
                .filter(|v| level.includes(v.rule))
                .map(|violation| LintItem {
                    entry_id: auth.id.clone(),
                    kind: EntryKind::Authenticator,
                    violation,
                }),
        );
    }

    for tech in &document.techniques {
        let mut found = structural(
            &schemes.technique,
            &tech.assignment,
            tech.classification_status,
            level,
        );
        match check_consistency(tech, document) {
            Ok(v) => found.extend(v),
            Err(e) => found.push(Violation::rule_only(Rule::UnresolvedAuthenticator, e.to_string())),
        }
        for violation in found.into_iter().filter(|v| level.includes(v.rule)) {
            let item = LintItem {
                entry_id: tech.id.clone(),
                kind: EntryKind::Technique,
                violation,
            };
            if tech.waives(item.violation.rule) {
                waived.push(item);
            } else {
                items.push(item);
            }
        }
    }

    items.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    waived.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    LintReport {
        violations: items,
        waived,
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("malformed catalog: {0}")]
    Parse(String),
    #[error("catalog integrity: {}", .0.join("; "))]
    Integrity(Vec<String>),
    #[error("catalog schema: {detail}")]
    Schema {
        detail: String,
        violations: Vec<LintItem>,
    },
}

/// A lenient-valid document plus the findings only stricter linting reports.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub document: CatalogDocument,
    pub warnings: Vec<LintItem>,
}

fn check_integrity(doc: &CatalogDocument) -> Result<(), LoadError> {
    let mut problems = Vec::new();
    for (kind, ids) in [
        ("authenticator", doc.authenticators.iter().map(|a| &a.id).collect::<Vec<_>>()),
        ("technique", doc.techniques.iter().map(|t| &t.id).collect()),
    ] {
        let mut seen = HashSet::new();
        for id in ids {
            if !is_token(id) {
                problems.push(format!("{kind} id `{id}` is not a lowercase slug"));
            }
            if !seen.insert(id) {
                problems.push(format!("duplicate {kind} id `{id}`"));
            }
        }
    }
    for t in &doc.techniques {
        if t.employments.is_empty() {
            problems.push(format!("technique `{}` employs no authenticators", t.id));
        }
        for e in &t.employments {
            if doc.authenticator(&e.authenticator_id).is_none() {
                problems.push(format!(
                    "technique `{}` references unknown authenticator `{}`",
                    t.id, e.authenticator_id
                ));
            }
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(LoadError::Integrity(problems))
    }
}

/// Parses a document and checks format version, embedded schemes and
/// referential integrity, without linting entries.
pub fn parse(bytes: &[u8]) -> Result<CatalogDocument, LoadError> {
    let mut doc: CatalogDocument =
        serde_json::from_slice(bytes).map_err(|e| LoadError::Parse(e.to_string()))?;
    let major = doc.format_version.split('.').next().unwrap_or_default();
    let well_formed = doc.format_version.split('.').count() == 3
        && doc.format_version.split('.').all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()));
    if !well_formed {
        return Err(LoadError::Parse(format!(
            "format_version `{}` is not a semantic version",
            doc.format_version
        )));
    }
    if major != FORMAT_VERSION.split('.').next().unwrap_or_default() {
        return Err(LoadError::Schema {
            detail: format!("unsupported format_version `{}`", doc.format_version),
            violations: Vec::new(),
        });
    }
    if doc.schemes != CatalogSchemes::default() {
        return Err(LoadError::Schema {
            detail: "embedded schemes differ from the built-in classification schemes".to_owned(),
            violations: Vec::new(),
        });
    }
    check_integrity(&doc)?;
    doc.canonicalize();
    Ok(doc)
}

/// Loads a document that must be valid at the lenient level. Findings that
/// only the strict level reports are returned as warnings.
pub fn load(bytes: &[u8]) -> Result<Loaded, LoadError> {
    let document = parse(bytes)?;
    let lenient = lint(&document, LintLevel::Lenient);
    if !lenient.is_clean() {
        return Err(LoadError::Schema {
            detail: format!("{} violation(s) at lenient level", lenient.violations.len()),
            violations: lenient.violations,
        });
    }
    let warnings = lint(&document, LintLevel::Strict).violations;
    Ok(Loaded { document, warnings })
}

/// Canonical serialization: documented key order, two-space indentation,
/// entries sorted by id, trailing newline.
pub fn save(document: &CatalogDocument) -> Vec<u8> {
    let mut doc = document.clone();
    doc.canonicalize();
    let mut out = serde_json::to_vec_pretty(&doc).expect("catalog serializes");
    out.push(b'\n');
    out
}
