//! Scheme-agnostic metamodel for faceted classification.
//!
//! A [`Scheme`] is an ordered list of [`Facet`]s. Every facet owns a forest of
//! [`FacetValueNode`]s; classified entries pick [`ValuePath`]s from root to some
//! node. A [`FacetAssignment`] is checked against a scheme with
//! [`validate_assignment`], which never fails and instead returns a report.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::{self, Rule, Violation};

/// A facet value identifier. Matches `[a-z0-9-]+`, so it never contains the
/// naming delimiters `.` and `|`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Token(String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid token `{0}`: expected one or more of [a-z0-9-]")]
pub struct InvalidToken(pub String);

impl Token {
    pub fn new(text: impl Into<String>) -> Result<Self, InvalidToken> {
        let text = text.into();
        if is_token(&text) {
            Ok(Token(text))
        } else {
            Err(InvalidToken(text))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_token(text: &str) -> bool {
    !text.is_empty()
        && text
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-')
}

impl TryFrom<String> for Token {
    type Error = InvalidToken;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Token::new(value)
    }
}

impl From<Token> for String {
    fn from(token: Token) -> Self {
        token.0
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One value in a facet's value hierarchy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetValueNode {
    pub token: Token,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<FacetValueNode>,
}

impl FacetValueNode {
    pub fn new(token: &str, children: Vec<FacetValueNode>) -> Result<Self, SchemeError> {
        let node = FacetValueNode {
            token: Token::new(token).map_err(SchemeError::Token)?,
            children,
        };
        check_unique_siblings(&node.children, token)?;
        Ok(node)
    }

    pub fn leaf(token: &str) -> Result<Self, SchemeError> {
        Self::new(token, Vec::new())
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn child(&self, token: &str) -> Option<&FacetValueNode> {
        self.children.iter().find(|c| c.token.as_str() == token)
    }
}

fn check_unique_siblings(nodes: &[FacetValueNode], parent: &str) -> Result<(), SchemeError> {
    let mut seen = HashSet::new();
    for node in nodes {
        if !seen.insert(node.token.as_str()) {
            return Err(SchemeError::DuplicateValue {
                parent: parent.to_owned(),
                token: node.token.to_string(),
            });
        }
        check_unique_siblings(&node.children, node.token.as_str())?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dimensionality {
    /// Mutually exclusive values: exactly one path per entry.
    OneDimensional,
    /// One or more paths per entry.
    MultiDimensional,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    /// Identifier used in assignments and queries.
    pub name: String,
    /// Display label.
    pub label: String,
    /// Alternative identifiers accepted by the query language.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<String>,
    pub dimensionality: Dimensionality,
    pub fundamental: bool,
    pub optional: bool,
    #[serde(rename = "values")]
    pub roots: Vec<FacetValueNode>,
}

impl Facet {
    pub fn new(
        name: &str,
        label: &str,
        dimensionality: Dimensionality,
        roots: Vec<FacetValueNode>,
    ) -> Result<Self, SchemeError> {
        let facet = Facet {
            name: name.to_owned(),
            label: label.to_owned(),
            aliases: Vec::new(),
            dimensionality,
            fundamental: false,
            optional: false,
            roots,
        };
        facet.check()?;
        Ok(facet)
    }

    pub fn fundamental(mut self) -> Self {
        self.fundamental = true;
        self
    }

    pub fn optional(mut self) -> Self {
        self.optional = true;
        self
    }

    pub fn with_aliases(mut self, aliases: &[&str]) -> Self {
        self.aliases = aliases.iter().map(|a| (*a).to_owned()).collect();
        self
    }

    pub fn is_multi_dimensional(&self) -> bool {
        self.dimensionality == Dimensionality::MultiDimensional
    }

    pub fn answers_to(&self, name: &str) -> bool {
        self.name == name || self.aliases.iter().any(|a| a == name)
    }

    fn check(&self) -> Result<(), SchemeError> {
        if !is_token(&self.name) {
            return Err(SchemeError::FacetName(self.name.clone()));
        }
        if self.roots.is_empty() {
            return Err(SchemeError::NoRoots(self.name.clone()));
        }
        check_unique_siblings(&self.roots, &self.name)
    }

    /// Walks `steps` from a matching root.
    pub fn resolve<S: AsRef<str>>(&self, steps: &[S]) -> Result<&FacetValueNode, ResolveError> {
        resolve_path(self, steps)
    }

    /// Every node chain of the value forest, in depth-first pre-order.
    pub fn paths(&self) -> Vec<ValuePath> {
        fn walk(node: &FacetValueNode, prefix: &mut Vec<Token>, out: &mut Vec<ValuePath>) {
            prefix.push(node.token.clone());
            out.push(ValuePath(prefix.clone()));
            for child in &node.children {
                walk(child, prefix, out);
            }
            prefix.pop();
        }
        let mut out = Vec::new();
        for root in &self.roots {
            walk(root, &mut Vec::new(), &mut out);
        }
        out
    }
}

/// A named, ordered collection of facets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SchemeRepr")]
pub struct Scheme {
    pub name: String,
    pub facets: Vec<Facet>,
}

#[derive(Deserialize)]
struct SchemeRepr {
    name: String,
    facets: Vec<Facet>,
}

impl TryFrom<SchemeRepr> for Scheme {
    type Error = SchemeError;

    fn try_from(repr: SchemeRepr) -> Result<Self, Self::Error> {
        Scheme::new(&repr.name, repr.facets)
    }
}

impl Scheme {
    pub fn new(name: &str, facets: Vec<Facet>) -> Result<Self, SchemeError> {
        let mut names = HashSet::new();
        for facet in &facets {
            facet.check()?;
            for id in std::iter::once(&facet.name).chain(&facet.aliases) {
                if !names.insert(id.as_str()) {
                    return Err(SchemeError::DuplicateFacet(id.clone()));
                }
            }
        }
        if !facets.iter().any(|f| f.fundamental) {
            return Err(SchemeError::NoFundamentalFacet(name.to_owned()));
        }
        Ok(Scheme {
            name: name.to_owned(),
            facets,
        })
    }

    pub fn facet(&self, name: &str) -> Option<&Facet> {
        self.facets.iter().find(|f| f.name == name)
    }

    /// Looks a facet up by its name or one of its aliases.
    pub fn lookup(&self, name_or_alias: &str) -> Option<&Facet> {
        self.facets.iter().find(|f| f.answers_to(name_or_alias))
    }

    pub fn fundamental_facets(&self) -> impl Iterator<Item = &Facet> {
        self.facets.iter().filter(|f| f.fundamental)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error(transparent)]
    Token(InvalidToken),
    #[error("invalid facet name `{0}`")]
    FacetName(String),
    #[error("facet `{0}` has no values")]
    NoRoots(String),
    #[error("duplicate value `{token}` under `{parent}`")]
    DuplicateValue { parent: String, token: String },
    #[error("duplicate facet identifier `{0}`")]
    DuplicateFacet(String),
    #[error("scheme `{0}` has no fundamental facet")]
    NoFundamentalFacet(String),
}

/// A non-empty token sequence from a root toward a descendant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Token>", into = "Vec<Token>")]
pub struct ValuePath(Vec<Token>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("empty value path")]
    Empty,
    #[error(transparent)]
    Token(#[from] InvalidToken),
}

impl ValuePath {
    pub fn new(steps: Vec<Token>) -> Result<Self, PathError> {
        if steps.is_empty() {
            Err(PathError::Empty)
        } else {
            Ok(ValuePath(steps))
        }
    }

    pub fn from_strs<S: AsRef<str>>(steps: &[S]) -> Result<Self, PathError> {
        let tokens = steps
            .iter()
            .map(|s| Token::new(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(tokens)
    }

    /// Parses `a.b.c`.
    pub fn parse_dotted(text: &str) -> Result<Self, PathError> {
        Self::from_strs(&text.split('.').collect::<Vec<_>>())
    }

    pub fn steps(&self) -> &[Token] {
        &self.0
    }

    pub fn root(&self) -> &Token {
        &self.0[0]
    }

    pub fn leaf(&self) -> &Token {
        &self.0[self.0.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// True if `self` equals `other` or is an ancestor of it.
    pub fn is_prefix_of(&self, other: &ValuePath) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_strict_prefix_of(&self, other: &ValuePath) -> bool {
        self.len() < other.len() && self.is_prefix_of(other)
    }

    pub fn truncated(&self, depth: usize) -> ValuePath {
        ValuePath(self.0[..depth.clamp(1, self.0.len())].to_vec())
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.iter().any(|t| t.as_str() == token)
    }

    pub fn dotted(&self) -> String {
        self.to_string()
    }
}

impl TryFrom<Vec<Token>> for ValuePath {
    type Error = PathError;

    fn try_from(value: Vec<Token>) -> Result<Self, Self::Error> {
        ValuePath::new(value)
    }
}

impl From<ValuePath> for Vec<Token> {
    fn from(path: ValuePath) -> Self {
        path.0
    }
}

impl fmt::Display for ValuePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(t.as_str())?;
        }
        Ok(())
    }
}

/// An entry's chosen value paths, keyed by facet name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FacetAssignment {
    entries: BTreeMap<String, BTreeSet<ValuePath>>,
}

impl FacetAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder form taking dotted paths; panics on malformed tokens, so it is
    /// meant for literals.
    pub fn with(mut self, facet: &str, dotted: &[&str]) -> Self {
        let paths = dotted
            .iter()
            .map(|d| ValuePath::parse_dotted(d).expect("literal value path"))
            .collect();
        self.entries.insert(facet.to_owned(), paths);
        self
    }

    pub fn set(&mut self, facet: &str, paths: BTreeSet<ValuePath>) {
        self.entries.insert(facet.to_owned(), paths);
    }

    pub fn insert(&mut self, facet: &str, path: ValuePath) {
        self.entries.entry(facet.to_owned()).or_default().insert(path);
    }

    pub fn remove(&mut self, facet: &str) -> Option<BTreeSet<ValuePath>> {
        self.entries.remove(facet)
    }

    pub fn get(&self, facet: &str) -> Option<&BTreeSet<ValuePath>> {
        self.entries.get(facet)
    }

    /// The single path of a facet, if exactly one is assigned.
    pub fn single(&self, facet: &str) -> Option<&ValuePath> {
        match self.entries.get(facet) {
            Some(set) if set.len() == 1 => set.iter().next(),
            _ => None,
        }
    }

    /// Top-level tokens assigned to a facet.
    pub fn roots(&self, facet: &str) -> Option<BTreeSet<&str>> {
        self.get(facet)
            .map(|set| set.iter().map(|p| p.root().as_str()).collect())
    }

    pub fn contains_facet(&self, facet: &str) -> bool {
        self.entries.contains_key(facet)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &BTreeSet<ValuePath>)> {
        self.entries.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl FromIterator<(String, ValuePath)> for FacetAssignment {
    fn from_iter<I: IntoIterator<Item = (String, ValuePath)>>(iter: I) -> Self {
        let mut assignment = FacetAssignment::new();
        for (facet, path) in iter {
            assignment.insert(&facet, path);
        }
        assignment
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("empty value path")]
    EmptyPath,
    #[error("unknown value `{0}`")]
    UnknownRoot(String),
    #[error("unknown value `{token}` under `{parent}`")]
    UnknownChild { parent: String, token: String },
}

impl ResolveError {
    /// The token that failed to resolve.
    pub fn token(&self) -> Option<&str> {
        match self {
            ResolveError::EmptyPath => None,
            ResolveError::UnknownRoot(t) => Some(t),
            ResolveError::UnknownChild { token, .. } => Some(token),
        }
    }
}

/// Walks `steps` through the facet's value forest and returns the node reached.
pub fn resolve_path<'f, S: AsRef<str>>(
    facet: &'f Facet,
    steps: &[S],
) -> Result<&'f FacetValueNode, ResolveError> {
    let (first, rest) = steps.split_first().ok_or(ResolveError::EmptyPath)?;
    let first = first.as_ref();
    let mut node = facet
        .roots
        .iter()
        .find(|r| r.token.as_str() == first)
        .ok_or_else(|| ResolveError::UnknownRoot(first.to_owned()))?;
    for step in rest {
        let step = step.as_ref();
        node = node.child(step).ok_or_else(|| ResolveError::UnknownChild {
            parent: node.token.to_string(),
            token: step.to_owned(),
        })?;
    }
    Ok(node)
}

/// Checks an assignment against every structural invariant of the scheme.
///
/// The returned report is sorted; an empty report means the assignment is valid.
pub fn validate_assignment(scheme: &Scheme, assignment: &FacetAssignment) -> Vec<Violation> {
    let mut report = Vec::new();

    for (name, _) in assignment.iter() {
        if scheme.facet(name).is_none() {
            report.push(Violation::new(
                Rule::UnknownFacet,
                name.clone(),
                format!("facet `{name}` is not part of scheme `{}`", scheme.name),
            ));
        }
    }

    for facet in &scheme.facets {
        let Some(paths) = assignment.get(&facet.name) else {
            if !facet.optional {
                report.push(Violation::new(
                    Rule::MissingFacet,
                    facet.name.clone(),
                    format!("required facet `{}` is not assigned", facet.name),
                ));
            }
            continue;
        };

        match (facet.dimensionality, paths.len()) {
            (_, 0) => report.push(Violation::new(
                Rule::CardinalityViolation,
                facet.name.clone(),
                "facet is present with no values",
            )),
            (Dimensionality::OneDimensional, n) if n > 1 => report.push(Violation::new(
                Rule::CardinalityViolation,
                facet.name.clone(),
                format!("one-dimensional facet has {n} values, expected exactly one"),
            )),
            _ => {}
        }

        for path in paths {
            if let Err(err) = resolve_path(facet, path.steps()) {
                report.push(Violation::new(
                    Rule::UnknownPath,
                    facet.name.clone(),
                    format!("`{path}`: {err}"),
                ));
            }
        }

        for a in paths {
            for b in paths {
                if a.is_strict_prefix_of(b) {
                    report.push(Violation::new(
                        Rule::PrefixOverlap,
                        facet.name.clone(),
                        format!("`{a}` is an ancestor of `{b}`; assign the deepest value only"),
                    ));
                }
            }
        }
    }

    report::normalize(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_scheme() -> Scheme {
        let tree = Facet::new(
            "tree",
            "Tree",
            Dimensionality::OneDimensional,
            vec![
                FacetValueNode::new(
                    "a",
                    vec![FacetValueNode::leaf("b").unwrap(), FacetValueNode::leaf("c").unwrap()],
                )
                .unwrap(),
                FacetValueNode::leaf("d").unwrap(),
            ],
        )
        .unwrap()
        .fundamental();
        let multi = Facet::new(
            "multi",
            "Multi",
            Dimensionality::MultiDimensional,
            vec![FacetValueNode::leaf("x").unwrap(), FacetValueNode::leaf("y").unwrap()],
        )
        .unwrap();
        let opt = Facet::new(
            "opt",
            "Opt",
            Dimensionality::MultiDimensional,
            vec![FacetValueNode::leaf("z").unwrap()],
        )
        .unwrap()
        .optional();
        Scheme::new("toy", vec![tree, multi, opt]).unwrap()
    }

    fn rules(report: &[Violation]) -> Vec<Rule> {
        report.iter().map(|v| v.rule).collect()
    }

    #[test]
    fn token_charset() {
        assert!(Token::new("free-recall").is_ok());
        assert!(Token::new("a1").is_ok());
        for bad in ["", "a.b", "a|b", "A", "a b", "ä"] {
            assert!(Token::new(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn duplicate_siblings_rejected() {
        let err = FacetValueNode::new(
            "p",
            vec![FacetValueNode::leaf("q").unwrap(), FacetValueNode::leaf("q").unwrap()],
        )
        .unwrap_err();
        assert!(matches!(err, SchemeError::DuplicateValue { .. }));
        let err = Facet::new(
            "f",
            "F",
            Dimensionality::OneDimensional,
            vec![FacetValueNode::leaf("q").unwrap(), FacetValueNode::leaf("q").unwrap()],
        )
        .unwrap_err();
        assert!(matches!(err, SchemeError::DuplicateValue { .. }));
    }

    #[test]
    fn facet_needs_a_root_and_scheme_needs_a_fundamental() {
        assert_eq!(
            Facet::new("f", "F", Dimensionality::OneDimensional, vec![]).unwrap_err(),
            SchemeError::NoRoots("f".into())
        );
        let f = Facet::new(
            "f",
            "F",
            Dimensionality::OneDimensional,
            vec![FacetValueNode::leaf("a").unwrap()],
        )
        .unwrap();
        assert!(matches!(
            Scheme::new("s", vec![f.clone()]),
            Err(SchemeError::NoFundamentalFacet(_))
        ));
        assert!(matches!(
            Scheme::new("s", vec![f.clone().fundamental(), f]),
            Err(SchemeError::DuplicateFacet(_))
        ));
    }

    #[test]
    fn resolve_errors_name_the_failing_token() {
        let s = toy_scheme();
        let tree = s.facet("tree").unwrap();
        assert_eq!(resolve_path(tree, &["a", "c"]).unwrap().token.as_str(), "c");
        assert_eq!(resolve_path(tree, &["d"]).unwrap().token.as_str(), "d");
        assert_eq!(
            resolve_path(tree, &["q"]).unwrap_err(),
            ResolveError::UnknownRoot("q".into())
        );
        let err = resolve_path(tree, &["a", "c", "e"]).unwrap_err();
        assert_eq!(err.token(), Some("e"));
        assert_eq!(
            resolve_path::<&str>(tree, &[]).unwrap_err(),
            ResolveError::EmptyPath
        );
    }

    #[test]
    fn valid_assignment_has_empty_report() {
        let s = toy_scheme();
        let a = FacetAssignment::new()
            .with("tree", &["a.b"])
            .with("multi", &["x", "y"]);
        assert!(validate_assignment(&s, &a).is_empty());
    }

    #[test]
    fn each_violation_kind() {
        let s = toy_scheme();
        let base = FacetAssignment::new().with("tree", &["a.b"]).with("multi", &["x"]);

        let mut a = base.clone();
        a.remove("multi");
        assert_eq!(rules(&validate_assignment(&s, &a)), [Rule::MissingFacet]);

        let a = base.clone().with("nope", &["x"]);
        assert_eq!(rules(&validate_assignment(&s, &a)), [Rule::UnknownFacet]);

        let a = base.clone().with("tree", &["a.b", "d"]);
        assert_eq!(rules(&validate_assignment(&s, &a)), [Rule::CardinalityViolation]);

        let mut a = base.clone();
        a.set("multi", BTreeSet::new());
        assert_eq!(rules(&validate_assignment(&s, &a)), [Rule::CardinalityViolation]);

        let a = base.clone().with("tree", &["a.q"]);
        assert_eq!(rules(&validate_assignment(&s, &a)), [Rule::UnknownPath]);

        let a = base.clone().with("tree", &["a.b"]).with("opt", &["z"]);
        assert!(validate_assignment(&s, &a).is_empty());

        let multi_overlap = Facet::new(
            "m",
            "M",
            Dimensionality::MultiDimensional,
            vec![FacetValueNode::new("p", vec![FacetValueNode::leaf("q").unwrap()]).unwrap()],
        )
        .unwrap()
        .fundamental();
        let s2 = Scheme::new("s2", vec![multi_overlap]).unwrap();
        let a = FacetAssignment::new().with("m", &["p", "p.q"]);
        assert_eq!(rules(&validate_assignment(&s2, &a)), [Rule::PrefixOverlap]);
    }

    #[test]
    fn internal_nodes_are_structurally_valid() {
        let s = toy_scheme();
        let a = FacetAssignment::new().with("tree", &["a"]).with("multi", &["x"]);
        assert!(validate_assignment(&s, &a).is_empty());
    }

    #[test]
    fn value_path_helpers() {
        let p = ValuePath::parse_dotted("multi.sequential.ordered").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.to_string(), "multi.sequential.ordered");
        assert_eq!(p.truncated(2).to_string(), "multi.sequential");
        assert_eq!(p.truncated(9), p);
        let q = ValuePath::parse_dotted("multi").unwrap();
        assert!(q.is_strict_prefix_of(&p));
        assert!(p.is_prefix_of(&p));
        assert!(!p.is_strict_prefix_of(&p));
        assert!(ValuePath::parse_dotted("multi..x").is_err());
        assert!(serde_json::from_str::<ValuePath>("[]").is_err());
    }

    #[test]
    fn paths_are_depth_first() {
        let s = toy_scheme();
        let paths: Vec<String> = s.facet("tree").unwrap().paths().iter().map(|p| p.to_string()).collect();
        assert_eq!(paths, ["a", "a.b", "a.c", "d"]);
    }
}
