//! Classification names, readable names and parsing names back into
//! fundamental assignments.
//!
//! ```text
//! name    := segment ( '|' segment )*
//! segment := token ( '.' token )*
//! ```
//!
//! Segments follow the scheme's fundamental facets in scheme order. Tokens never
//! contain either delimiter, so the mapping is injective.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::facet_model::{is_token, resolve_path, FacetAssignment, Scheme, ValuePath};
use crate::schemes::{facets, MULTI, MULTI_FACTOR};

pub const VALUE_DELIMITER: char = '.';
pub const FACET_DELIMITER: char = '|';

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassificationName(String);

impl ClassificationName {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// URL slug: `|` becomes `--`, `.` becomes `-`, followed by `--` and the id.
    pub fn slug(&self, entry_id: &str) -> String {
        let mapped = self.0.replace(FACET_DELIMITER, "--").replace(VALUE_DELIMITER, "-");
        format!("{mapped}--{entry_id}")
    }
}

impl fmt::Display for ClassificationName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for ClassificationName {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NamingError {
    #[error("fundamental facet `{0}` is not assigned")]
    MissingFundamentalAssignment(String),
    #[error("fundamental facet `{0}` has more than one value")]
    AmbiguousFundamentalAssignment(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseNameError {
    #[error("malformed classification name at byte {position}: {message}")]
    GrammarError { position: usize, message: String },
    #[error("expected {expected} segment(s), found {found}")]
    SegmentCountMismatch { expected: usize, found: usize },
    #[error("`{path}` is not a value of facet `{facet}`: {reason}")]
    UnknownPath {
        facet: String,
        path: String,
        reason: String,
    },
}

fn fundamental_paths<'a>(
    assignment: &'a FacetAssignment,
    scheme: &Scheme,
) -> Result<Vec<&'a ValuePath>, NamingError> {
    scheme
        .fundamental_facets()
        .map(|facet| match assignment.get(&facet.name) {
            None => Err(NamingError::MissingFundamentalAssignment(facet.name.clone())),
            Some(set) if set.is_empty() => {
                Err(NamingError::MissingFundamentalAssignment(facet.name.clone()))
            }
            Some(set) if set.len() > 1 => {
                Err(NamingError::AmbiguousFundamentalAssignment(facet.name.clone()))
            }
            Some(set) => Ok(set.iter().next().expect("one path")),
        })
        .collect()
}

/// Joins the fundamental facets' paths: `.` within a facet, `|` across facets.
pub fn classification_name(
    assignment: &FacetAssignment,
    scheme: &Scheme,
) -> Result<ClassificationName, NamingError> {
    let segments: Vec<String> = fundamental_paths(assignment, scheme)?
        .into_iter()
        .map(ValuePath::dotted)
        .collect();
    Ok(ClassificationName(
        segments.join(&FACET_DELIMITER.to_string()),
    ))
}

fn delimiters_to_spaces(text: &str) -> String {
    text.replace([VALUE_DELIMITER, FACET_DELIMITER], " ")
}

/// The classification name with delimiters replaced by single spaces. With
/// `omit_multi`, a leading `multi` of the Authenticator Employment segment is
/// dropped when the Factor is `multi-factor`.
pub fn readable_name(
    assignment: &FacetAssignment,
    scheme: &Scheme,
    omit_multi: bool,
) -> Result<String, NamingError> {
    let name = classification_name(assignment, scheme)?;
    if !omit_multi {
        return Ok(delimiters_to_spaces(name.as_str()));
    }
    let is_multi_factor = assignment
        .single(facets::FACTOR)
        .is_some_and(|p| p.dotted() == MULTI_FACTOR)
        && scheme.facet(facets::FACTOR).is_some_and(|f| f.fundamental);
    let segments = fundamental_paths(assignment, scheme)?;
    let words: Vec<&str> = scheme
        .fundamental_facets()
        .zip(segments)
        .flat_map(|(facet, path)| {
            let steps = path.steps();
            let skip = usize::from(
                is_multi_factor
                    && facet.name == facets::EMPLOYMENT
                    && steps.len() > 1
                    && steps[0].as_str() == MULTI,
            );
            steps[skip..].iter().map(|t| t.as_str())
        })
        .collect();
    Ok(words.join(" "))
}

/// Parses a classification name into the fundamental facets it encodes.
pub fn parse_classification_name(
    text: &str,
    scheme: &Scheme,
) -> Result<FacetAssignment, ParseNameError> {
    let mut segments = Vec::new();
    let mut offset = 0;
    for segment in text.split(FACET_DELIMITER) {
        let mut steps = Vec::new();
        let mut token_offset = offset;
        for token in segment.split(VALUE_DELIMITER) {
            if !is_token(token) {
                let bad = token
                    .char_indices()
                    .find(|(_, c)| !(c.is_ascii_lowercase() || c.is_ascii_digit() || *c == '-'))
                    .map_or(0, |(i, _)| i);
                return Err(ParseNameError::GrammarError {
                    position: token_offset + bad,
                    message: if token.is_empty() {
                        "empty value".to_owned()
                    } else {
                        format!("invalid character in `{token}`")
                    },
                });
            }
            steps.push(token);
            token_offset += token.len() + 1;
        }
        segments.push(steps);
        offset += segment.len() + 1;
    }

    let fundamentals: Vec<_> = scheme.fundamental_facets().collect();
    if segments.len() != fundamentals.len() {
        return Err(ParseNameError::SegmentCountMismatch {
            expected: fundamentals.len(),
            found: segments.len(),
        });
    }

    let mut assignment = FacetAssignment::new();
    for (facet, steps) in fundamentals.into_iter().zip(segments) {
        let path = steps.join(".");
        resolve_path(facet, &steps).map_err(|e| ParseNameError::UnknownPath {
            facet: facet.name.clone(),
            path: path.clone(),
            reason: e.to_string(),
        })?;
        let path = ValuePath::from_strs(&steps).expect("tokens checked above");
        assignment.insert(&facet.name, path);
    }
    Ok(assignment)
}
