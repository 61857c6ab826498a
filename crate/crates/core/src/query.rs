//! Faceted filtering and aggregation over a catalog document.
//!
//! Predicates match hierarchically: a predicate path matches every assigned
//! path it is a prefix of, so `factor=inherence-based` also selects
//! `inherence-based.behavioral`.
//!
//! Textual syntax:
//!
//! ```text
//! or    := and ( ',' and )*
//! and   := unary ( '&' unary )*
//! unary := '!' unary | '(' or ')' | term
//! term  := facet '=' path        any assigned value lies under path
//!        | facet '==' path       every assigned value lies under path
//! path  := token ( '.' token )*
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{CatalogDocument, EntryKind};
use crate::facet_model::{resolve_path, FacetAssignment, Scheme, ValuePath};
use crate::schemes::{facets, AuthenticatorEntry, TechniqueEntry, SINGLE};

pub const UNASSIGNED: &str = "(unassigned)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Authenticators,
    Techniques,
}

impl Target {
    pub fn scheme(self, document: &CatalogDocument) -> &Scheme {
        match self {
            Target::Authenticators => &document.schemes.authenticator,
            Target::Techniques => &document.schemes.technique,
        }
    }

    pub fn entries(self, document: &CatalogDocument) -> Vec<EntryRef<'_>> {
        match self {
            Target::Authenticators => document.authenticators.iter().map(EntryRef::Authenticator).collect(),
            Target::Techniques => document.techniques.iter().map(EntryRef::Technique).collect(),
        }
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "authenticators" => Ok(Target::Authenticators),
            "techniques" => Ok(Target::Techniques),
            other => Err(format!("unknown target `{other}`")),
        }
    }
}

/// Borrowed view on either kind of catalog entry.
#[derive(Debug, Clone, Copy)]
pub enum EntryRef<'a> {
    Authenticator(&'a AuthenticatorEntry),
    Technique(&'a TechniqueEntry),
}

impl<'a> EntryRef<'a> {
    pub fn id(&self) -> &'a str {
        match self {
            EntryRef::Authenticator(a) => &a.id,
            EntryRef::Technique(t) => &t.id,
        }
    }

    pub fn name(&self) -> &'a str {
        match self {
            EntryRef::Authenticator(a) => &a.name,
            EntryRef::Technique(t) => &t.name,
        }
    }

    pub fn assignment(&self) -> &'a FacetAssignment {
        match self {
            EntryRef::Authenticator(a) => &a.assignment,
            EntryRef::Technique(t) => &t.assignment,
        }
    }

    pub fn kind(&self) -> EntryKind {
        match self {
            EntryRef::Authenticator(_) => EntryKind::Authenticator,
            EntryRef::Technique(_) => EntryKind::Technique,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Any,
    All,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetPredicate {
    /// Canonical facet name.
    pub facet: String,
    pub path: ValuePath,
    pub mode: Mode,
}

impl FacetPredicate {
    /// Resolves `facet` (name or alias) and `path` against the scheme. The
    /// mode of a one-dimensional facet is normalized to `Any`.
    pub fn new(scheme: &Scheme, facet: &str, path: ValuePath, mode: Mode) -> Result<Self, QueryError> {
        let def = scheme.lookup(facet).ok_or_else(|| QueryError {
            kind: QueryErrorKind::UnknownFacet,
            position: 0,
            message: format!("unknown facet `{facet}` for {} entries", scheme.name),
        })?;
        resolve_path(def, path.steps()).map_err(|e| QueryError {
            kind: QueryErrorKind::UnknownPath,
            position: 0,
            message: format!("`{path}` in facet `{}`: {e}", def.name),
        })?;
        Ok(Self {
            facet: def.name.clone(),
            path,
            mode: if def.is_multi_dimensional() { mode } else { Mode::Any },
        })
    }
}

impl fmt::Display for FacetPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.mode {
            Mode::Any => "=",
            Mode::All => "==",
        };
        write!(f, "{}{}{}", self.facet, op, self.path)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Predicate(FacetPredicate),
    /// Two or more operands.
    And(Vec<Expr>),
    /// Two or more operands.
    Or(Vec<Expr>),
    Not(Box<Expr>),
}

impl Expr {
    pub fn and(operands: Vec<Expr>) -> Expr {
        Self::nary(operands, Expr::And)
    }

    pub fn or(operands: Vec<Expr>) -> Expr {
        Self::nary(operands, Expr::Or)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(operand: Expr) -> Expr {
        Expr::Not(Box::new(operand))
    }

    fn nary(mut operands: Vec<Expr>, wrap: fn(Vec<Expr>) -> Expr) -> Expr {
        assert!(!operands.is_empty(), "combinator needs operands");
        if operands.len() == 1 {
            operands.pop().expect("one operand")
        } else {
            wrap(operands)
        }
    }

    pub fn eval(&self, assignment: &FacetAssignment) -> bool {
        match self {
            Expr::Predicate(p) => matches(assignment, p),
            Expr::And(xs) => xs.iter().all(|x| x.eval(assignment)),
            Expr::Or(xs) => xs.iter().any(|x| x.eval(assignment)),
            Expr::Not(x) => !x.eval(assignment),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(f: &mut fmt::Formatter<'_>, xs: &[Expr], sep: &str) -> fmt::Result {
            f.write_str("(")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")
        }
        match self {
            Expr::Predicate(p) => write!(f, "{p}"),
            Expr::And(xs) => join(f, xs, " & "),
            Expr::Or(xs) => join(f, xs, ", "),
            Expr::Not(x) => write!(f, "!{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub target: Target,
    /// `None` selects every entry of the target.
    pub expr: Option<Expr>,
}

impl Query {
    pub fn all(target: Target) -> Self {
        Self { target, expr: None }
    }

    pub fn new(target: Target, expr: Expr) -> Self {
        Self {
            target,
            expr: Some(expr),
        }
    }

    /// Parses the textual syntax. Blank input selects everything.
    pub fn parse(text: &str, target: Target, scheme: &Scheme) -> Result<Self, QueryError> {
        if text.trim().is_empty() {
            return Ok(Self::all(target));
        }
        let mut parser = Parser {
            text,
            pos: 0,
            scheme,
        };
        let expr = parser.or()?;
        parser.skip_ws();
        if parser.pos < text.len() {
            return Err(parser.error(QueryErrorKind::Syntax, "unexpected input"));
        }
        Ok(Self::new(target, expr))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "PascalCase")]
pub enum QueryErrorKind {
    Syntax,
    UnknownFacet,
    UnknownPath,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} (at {position})")]
pub struct QueryError {
    pub kind: QueryErrorKind,
    /// Byte offset into the query text.
    pub position: usize,
    pub message: String,
}

impl QueryError {
    /// The query followed by a caret line pointing at the error position.
    pub fn caret_diagnostic(&self, text: &str) -> String {
        let column = text
            .get(..self.position.min(text.len()))
            .map_or(self.position, |prefix| prefix.chars().count());
        format!(
            "error: {}\n  {}\n  {}^",
            self.message,
            text,
            " ".repeat(column)
        )
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    scheme: &'a Scheme,
}

fn is_word_byte(b: u8) -> bool {
    b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-' || b == b'.'
}

impl<'a> Parser<'a> {
    fn error(&self, kind: QueryErrorKind, message: impl Into<String>) -> QueryError {
        QueryError {
            kind,
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text.as_bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> Result<Expr, QueryError> {
        let mut operands = vec![self.and()?];
        while self.eat(b',') {
            operands.push(self.and()?);
        }
        Ok(Expr::or(operands))
    }

    fn and(&mut self) -> Result<Expr, QueryError> {
        let mut operands = vec![self.unary()?];
        while self.eat(b'&') {
            operands.push(self.unary()?);
        }
        Ok(Expr::and(operands))
    }

    fn unary(&mut self) -> Result<Expr, QueryError> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(Expr::not(self.unary()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.or()?;
                if !self.eat(b')') {
                    return Err(self.error(QueryErrorKind::Syntax, "expected `)`"));
                }
                Ok(inner)
            }
            _ => self.term(),
        }
    }

    fn word(&mut self, what: &str) -> Result<(usize, &'a str), QueryError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && is_word_byte(self.text.as_bytes()[self.pos]) {
            self.pos += 1;
        }
        if self.pos == start {
            let found = match self.text[start..].chars().next() {
                Some(c) => format!("`{c}`"),
                None => "end of query".to_owned(),
            };
            return Err(self.error(QueryErrorKind::Syntax, format!("expected {what}, found {found}")));
        }
        let text: &'a str = self.text;
        Ok((start, &text[start..self.pos]))
    }

    fn term(&mut self) -> Result<Expr, QueryError> {
        let (facet_pos, facet) = self.word("a facet name")?;
        if facet.contains('.') {
            return Err(QueryError {
                kind: QueryErrorKind::Syntax,
                position: facet_pos,
                message: format!("`{facet}` is not a facet name"),
            });
        }
        if !self.eat(b'=') {
            return Err(self.error(QueryErrorKind::Syntax, "expected `=`"));
        }
        let mode = if self.text.as_bytes().get(self.pos) == Some(&b'=') {
            self.pos += 1;
            Mode::All
        } else {
            Mode::Any
        };
        let (path_pos, path_text) = self.word("a value path")?;
        let path = ValuePath::parse_dotted(path_text).map_err(|e| QueryError {
            kind: QueryErrorKind::Syntax,
            position: path_pos,
            message: format!("malformed value path `{path_text}`: {e}"),
        })?;
        let facet = facet.to_owned();
        FacetPredicate::new(self.scheme, &facet, path, mode)
            .map(Expr::Predicate)
            .map_err(|mut e| {
                e.position = match e.kind {
                    QueryErrorKind::UnknownFacet => facet_pos,
                    _ => path_pos,
                };
                e
            })
    }
}

/// Prefix match of one predicate against an entry's assignment. An absent
/// facet matches nothing.
pub fn matches(assignment: &FacetAssignment, predicate: &FacetPredicate) -> bool {
    let Some(paths) = assignment.get(&predicate.facet) else {
        return false;
    };
    match predicate.mode {
        Mode::Any => paths.iter().any(|p| predicate.path.is_prefix_of(p)),
        Mode::All => !paths.is_empty() && paths.iter().all(|p| predicate.path.is_prefix_of(p)),
    }
}

/// Like [`matches`], but first checks that the predicate's facet belongs to
/// the entry's scheme.
pub fn matches_entry(
    document: &CatalogDocument,
    entry: EntryRef<'_>,
    predicate: &FacetPredicate,
) -> Result<bool, QueryError> {
    let target = match entry.kind() {
        EntryKind::Authenticator => Target::Authenticators,
        EntryKind::Technique => Target::Techniques,
    };
    if target.scheme(document).facet(&predicate.facet).is_none() {
        return Err(QueryError {
            kind: QueryErrorKind::UnknownFacet,
            position: 0,
            message: format!("unknown facet `{}`", predicate.facet),
        });
    }
    Ok(matches(entry.assignment(), predicate))
}

/// Entries of the query's target satisfying its expression, sorted by id.
pub fn evaluate<'d>(document: &'d CatalogDocument, query: &Query) -> Vec<EntryRef<'d>> {
    let mut out: Vec<EntryRef<'d>> = query
        .target
        .entries(document)
        .into_iter()
        .filter(|e| query.expr.as_ref().is_none_or(|x| x.eval(e.assignment())))
        .collect();
    out.sort_by(|a, b| a.id().cmp(b.id()));
    out
}

/// Parses and evaluates a textual query.
pub fn evaluate_str<'d>(
    document: &'d CatalogDocument,
    target: Target,
    text: &str,
) -> Result<Vec<EntryRef<'d>>, QueryError> {
    let query = Query::parse(text, target, target.scheme(document))?;
    Ok(evaluate(document, &query))
}

/// Counts entries per assigned path truncated to `depth`. An entry with
/// several values under distinct prefixes is counted once under each.
pub fn group_count(
    document: &CatalogDocument,
    target: Target,
    facet: &str,
    depth: usize,
) -> Result<BTreeMap<String, usize>, QueryError> {
    let def = target.scheme(document).lookup(facet).ok_or_else(|| QueryError {
        kind: QueryErrorKind::UnknownFacet,
        position: 0,
        message: format!("unknown facet `{facet}`"),
    })?;
    let depth = depth.max(1);
    let mut counts = BTreeMap::new();
    for entry in target.entries(document) {
        match entry.assignment().get(&def.name).filter(|s| !s.is_empty()) {
            None => *counts.entry(UNASSIGNED.to_owned()).or_insert(0) += 1,
            Some(paths) => {
                let keys: std::collections::BTreeSet<String> =
                    paths.iter().map(|p| p.truncated(depth).dotted()).collect();
                for key in keys {
                    *counts.entry(key).or_insert(0) += 1;
                }
            }
        }
    }
    Ok(counts)
}

/// Techniques grouped for catalog listings: single
/// employments by `single|<authentication factor path of the authenticator>`,
/// multiple employments by their Authenticator Employment path.
pub fn technique_groups(document: &CatalogDocument) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for t in &document.techniques {
        let key = match t.assignment.single(facets::EMPLOYMENT) {
            Some(p) if p.root().as_str() == SINGLE => {
                let factor = t
                    .employments
                    .first()
                    .and_then(|e| document.authenticator(&e.authenticator_id))
                    .and_then(AuthenticatorEntry::factor)
                    .map_or_else(|| UNASSIGNED.to_owned(), ValuePath::dotted);
                format!("{SINGLE}|{factor}")
            }
            Some(p) => p.dotted(),
            None => UNASSIGNED.to_owned(),
        };
        *counts.entry(key).or_insert(0) += 1;
    }
    counts
}
