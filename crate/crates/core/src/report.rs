//! Violation reports shared by the metamodel checks, the cross-facet rules and
//! the catalog linter.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of the rule a [`Violation`] was raised by.
///
/// The first group comes from structural assignment validation, `C1`..`C6`
/// are the cross-facet consistency rules for techniques.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    MissingFacet,
    UnknownFacet,
    CardinalityViolation,
    UnknownPath,
    PrefixOverlap,
    /// Strict lint only: a fundamental facet assigned an internal node.
    NonLeafFundamental,
    /// Employment cardinality.
    C1,
    /// Factor aggregation.
    C2,
    /// Knowledge-based authenticators are active only.
    C3,
    /// Subject Interaction equals the union of as-used interactions.
    C4,
    /// Subject compatibility.
    C5,
    /// Sequencing and employment positions.
    C6,
    /// An employment names an authenticator that does not exist.
    UnresolvedAuthenticator,
}

impl Rule {
    pub const ALL: [Rule; 13] = [
        Rule::MissingFacet,
        Rule::UnknownFacet,
        Rule::CardinalityViolation,
        Rule::UnknownPath,
        Rule::PrefixOverlap,
        Rule::NonLeafFundamental,
        Rule::C1,
        Rule::C2,
        Rule::C3,
        Rule::C4,
        Rule::C5,
        Rule::C6,
        Rule::UnresolvedAuthenticator,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Rule::MissingFacet => "MissingFacet",
            Rule::UnknownFacet => "UnknownFacet",
            Rule::CardinalityViolation => "CardinalityViolation",
            Rule::UnknownPath => "UnknownPath",
            Rule::PrefixOverlap => "PrefixOverlap",
            Rule::NonLeafFundamental => "NonLeafFundamental",
            Rule::C1 => "C1",
            Rule::C2 => "C2",
            Rule::C3 => "C3",
            Rule::C4 => "C4",
            Rule::C5 => "C5",
            Rule::C6 => "C6",
            Rule::UnresolvedAuthenticator => "UnresolvedAuthenticator",
        }
    }

    /// Whether the rule is one of the cross-facet consistency rules.
    pub fn is_cross_facet(self) -> bool {
        matches!(
            self,
            Rule::C1 | Rule::C2 | Rule::C3 | Rule::C4 | Rule::C5 | Rule::C6
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .iter()
            .copied()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// A single finding. `facet` is empty for findings not tied to one facet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub facet: String,
    pub message: String,
}

impl Violation {
    pub fn new(rule: Rule, facet: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            rule,
            facet: facet.into(),
            message: message.into(),
        }
    }

    pub fn rule_only(rule: Rule, message: impl Into<String>) -> Self {
        Self::new(rule, "", message)
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.facet.is_empty() {
            write!(f, "{}: {}", self.rule, self.message)
        } else {
            write!(f, "{} [{}]: {}", self.rule, self.facet, self.message)
        }
    }
}

/// Sorts and de-duplicates a report so its order never depends on input order.
pub(crate) fn normalize(mut report: Vec<Violation>) -> Vec<Violation> {
    report.sort();
    report.dedup();
    report
}
