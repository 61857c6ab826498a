//! Read-only JSON API over an immutable catalog snapshot.
//!
//! Handlers clone the current `Arc<Snapshot>` once per request, so a reload
//! never affects requests already in flight.

use std::sync::{Arc, RwLock};

use authn_catalog::catalog::CatalogDocument;
use authn_catalog::query::{self, EntryRef, Target};
use authn_catalog::schemes::Employment;
use authn_catalog::{AuthenticatorEntry, TechniqueEntry};
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use crate::bundle::{catalog_stats, names_index, CatalogStats, EntryNames, NamesIndex};

/// A loaded document with everything derived from it precomputed.
#[derive(Debug)]
pub struct Snapshot {
    pub document: CatalogDocument,
    pub names: NamesIndex,
    pub stats: CatalogStats,
}

impl Snapshot {
    pub fn new(document: CatalogDocument) -> Result<Self, authn_catalog::naming::NamingError> {
        Ok(Self {
            names: names_index(&document)?,
            stats: catalog_stats(&document),
            document,
        })
    }

    fn names(&self, target: Target, id: &str) -> Option<&EntryNames> {
        match target {
            Target::Authenticators => self.names.authenticators.get(id),
            Target::Techniques => self.names.techniques.get(id),
        }
    }
}

/// Shared handle to the current snapshot.
#[derive(Debug, Clone)]
pub struct AppState {
    current: Arc<RwLock<Arc<Snapshot>>>,
}

impl AppState {
    pub fn new(snapshot: Snapshot) -> Self {
        Self {
            current: Arc::new(RwLock::new(Arc::new(snapshot))),
        }
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.current.read().expect("snapshot lock").clone()
    }

    /// Atomically publishes a new snapshot.
    pub fn replace(&self, snapshot: Snapshot) {
        *self.current.write().expect("snapshot lock") = Arc::new(snapshot);
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/techniques", get(list_techniques))
        .route("/api/techniques/{id}", get(get_technique))
        .route("/api/authenticators", get(list_authenticators))
        .route("/api/authenticators/{id}", get(get_authenticator))
        .route("/api/schemes", get(schemes))
        .route("/api/stats", get(stats))
        .with_state(state)
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    position: Option<usize>,
}

fn ok<T: Serialize>(body: T) -> Response {
    (
        [(header::CACHE_CONTROL, "public, max-age=60")],
        Json(body),
    )
        .into_response()
}

fn fail(status: StatusCode, error: String, position: Option<usize>) -> Response {
    (status, Json(ErrorBody { error, position })).into_response()
}

#[derive(Debug, Default, Deserialize)]
pub struct ListParams {
    #[serde(default)]
    q: String,
    limit: Option<usize>,
    #[serde(default)]
    offset: usize,
}

#[derive(Debug, Serialize)]
pub struct Summary<'a> {
    pub id: &'a str,
    pub name: &'a str,
    #[serde(flatten)]
    pub names: Option<&'a EntryNames>,
}

#[derive(Debug, Serialize)]
struct ListBody<'a> {
    total: usize,
    offset: usize,
    items: Vec<Summary<'a>>,
}

fn list(snapshot: &Snapshot, target: Target, params: ListParams) -> Response {
    match query::evaluate_str(&snapshot.document, target, &params.q) {
        Err(e) => fail(StatusCode::BAD_REQUEST, e.message, Some(e.position)),
        Ok(entries) => {
            let total = entries.len();
            let items = entries
                .into_iter()
                .skip(params.offset)
                .take(params.limit.unwrap_or(usize::MAX))
                .map(|e: EntryRef<'_>| Summary {
                    id: e.id(),
                    name: e.name(),
                    names: snapshot.names(target, e.id()),
                })
                .collect();
            ok(ListBody {
                total,
                offset: params.offset,
                items,
            })
        }
    }
}

async fn list_techniques(State(state): State<AppState>, Query(params): Query<ListParams>) -> Response {
    list(&state.snapshot(), Target::Techniques, params)
}

async fn list_authenticators(
    State(state): State<AppState>,
    Query(params): Query<ListParams>,
) -> Response {
    list(&state.snapshot(), Target::Authenticators, params)
}

#[derive(Debug, Serialize)]
struct EmployedAuthenticator<'a> {
    position: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    interaction_used: Option<&'a std::collections::BTreeSet<authn_catalog::Token>>,
    names: Option<&'a EntryNames>,
    authenticator: &'a AuthenticatorEntry,
}

#[derive(Debug, Serialize)]
struct TechniqueBody<'a> {
    #[serde(flatten)]
    entry: &'a TechniqueEntry,
    names: Option<&'a EntryNames>,
    authenticators: Vec<EmployedAuthenticator<'a>>,
}

async fn get_technique(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    let snapshot = state.snapshot();
    let doc = &snapshot.document;
    let Some(entry) = doc.technique(&id) else {
        return fail(StatusCode::NOT_FOUND, format!("unknown technique `{id}`"), None);
    };
    let authenticators = entry
        .ordered_employments()
        .into_iter()
        .filter_map(|e: &Employment| {
            doc.authenticator(&e.authenticator_id).map(|a| EmployedAuthenticator {
                position: e.position,
                interaction_used: e.interaction_used.as_ref(),
                names: snapshot.names(Target::Authenticators, &a.id),
                authenticator: a,
            })
        })
        .collect();
    ok(TechniqueBody {
        entry,
        names: snapshot.names(Target::Techniques, &id),
        authenticators,
    })
}

#[derive(Debug, Serialize)]
struct AuthenticatorBody<'a> {
    #[serde(flatten)]
    entry: &'a AuthenticatorEntry,
    names: Option<&'a EntryNames>,
    employed_by: Vec<Summary<'a>>,
}

async fn get_authenticator(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    let snapshot = state.snapshot();
    let doc = &snapshot.document;
    let Some(entry) = doc.authenticator(&id) else {
        return fail(StatusCode::NOT_FOUND, format!("unknown authenticator `{id}`"), None);
    };
    let employed_by = doc
        .employing_techniques(&id)
        .into_iter()
        .map(|t| Summary {
            id: &t.id,
            name: &t.name,
            names: snapshot.names(Target::Techniques, &t.id),
        })
        .collect();
    ok(AuthenticatorBody {
        entry,
        names: snapshot.names(Target::Authenticators, &id),
        employed_by,
    })
}

async fn schemes(State(state): State<AppState>) -> Response {
    ok(&state.snapshot().document.schemes)
}

async fn stats(State(state): State<AppState>) -> Response {
    ok(&state.snapshot().stats)
}
