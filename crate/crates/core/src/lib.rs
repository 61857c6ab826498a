//! Faceted classification of authenticators and authentication techniques.
//!
//! The crate provides:
//!
//! - a scheme-agnostic facet metamodel with assignment validation ([`facet_model`]),
//! - the Authenticator and AuthN Technique schemes, the entry types and the
//!   cross-facet consistency rules C1..C6 ([`schemes`]),
//! - classification and readable names with parse-back ([`naming`]),
//! - the JSON catalog format with canonical saving and lint levels ([`catalog`]),
//!   plus the shipped catalog ([`seed`]),
//! - faceted queries and group counts ([`query`]).
//!
//! ```
//! use authn_catalog::{naming, seed};
//!
//! let doc = seed::seed_document();
//! let technique = doc.technique(seed::CONTEXT_AWARE_TOUCH_ID).unwrap();
//! let name = naming::classification_name(&technique.assignment, &doc.schemes.technique).unwrap();
//! assert_eq!(name.as_str(), "multi.sequential.ordered|multi-factor");
//! ```

pub mod catalog;
pub mod facet_model;
pub mod naming;
pub mod query;
pub mod report;
pub mod schemes;
pub mod seed;

pub use catalog::{lint, load, save, CatalogDocument, LintLevel, LintReport, LoadError, Loaded};
pub use facet_model::{
    resolve_path, validate_assignment, Dimensionality, Facet, FacetAssignment, FacetValueNode,
    Scheme, Token, ValuePath,
};
pub use naming::{classification_name, parse_classification_name, readable_name, ClassificationName};
pub use query::{evaluate, group_count, matches, Expr, FacetPredicate, Mode, Query, Target};
pub use report::{Rule, Violation};
pub use schemes::{
    authenticator_scheme, check_consistency, derive_factor, technique_scheme, AuthenticatorEntry,
    Employment, TechniqueEntry,
};
