use authn_catalog::query::Target;
use authn_catalog::seed::seed_document;
use axum::body::Body;
use axum::http::{Request, StatusCode};
use catalog_cli::api::{router, AppState, Snapshot};
use catalog_cli::commands::query_ids;
use http_body_util::BodyExt;
use proptest::prelude::*;
use serde_json::Value;
use tower::ServiceExt;

fn state() -> AppState {
    AppState::new(Snapshot::new(seed_document()).unwrap())
}

fn encode(q: &str) -> String {
    q.bytes()
        .map(|b| match b {
            b'a'..=b'z' | b'A'..=b'Z' | b'0'..=b'9' | b'-' | b'.' | b'_' => (b as char).to_string(),
            _ => format!("%{b:02X}"),
        })
        .collect()
}

async fn get(state: &AppState, uri: &str) -> (StatusCode, Option<String>, Value) {
    let res = router(state.clone())
        .oneshot(Request::get(uri).body(Body::empty()).unwrap())
        .await
        .unwrap();
    let status = res.status();
    let cache = res
        .headers()
        .get("cache-control")
        .map(|v| v.to_str().unwrap().to_owned());
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, cache, serde_json::from_slice(&bytes).unwrap())
}

fn ids(body: &Value) -> Vec<String> {
    body["items"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["id"].as_str().unwrap().to_owned())
        .collect()
}

#[tokio::test]
async fn technique_detail_embeds_authenticators() {
    let s = state();
    let (status, cache, body) = get(&s, "/api/techniques/context-aware-touch-authentication").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(cache.as_deref(), Some("public, max-age=60"));
    assert_eq!(body["names"]["classification_name"], "multi.sequential.ordered|multi-factor");
    let auths = body["authenticators"].as_array().unwrap();
    assert_eq!(auths.len(), 2);
    assert_eq!(auths[0]["position"], 1);
    assert_eq!(auths[0]["authenticator"]["id"], "pin");
    assert_eq!(auths[1]["authenticator"]["id"], "touch-interaction-behavior");
    assert_eq!(auths[1]["interaction_used"], serde_json::json!(["passive"]));
}

#[tokio::test]
async fn authenticator_detail_links_back() {
    let s = state();
    let (status, _, body) = get(&s, "/api/authenticators/pin").await;
    assert_eq!(status, StatusCode::OK);
    let back: Vec<&str> = body["employed_by"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["id"].as_str().unwrap())
        .collect();
    assert_eq!(back, ["context-aware-touch-authentication", "pin-authentication"]);
}

#[tokio::test]
async fn lists_and_filters() {
    let s = state();
    let (_, _, all) = get(&s, "/api/techniques").await;
    assert_eq!(all["total"], 33);
    assert_eq!(all["items"].as_array().unwrap().len(), 33);

    let (_, _, page) = get(&s, "/api/techniques?limit=5&offset=30").await;
    assert_eq!(page["total"], 33);
    assert_eq!(ids(&page), ids(&all)[30..]);

    let (status, _, body) = get(&s, &format!("/api/techniques?q={}", encode("factor=multi-factor"))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["total"], 3);

    let (_, _, body) = get(&s, &format!("/api/authenticators?q={}", encode("factor=knowledge-based"))).await;
    assert_eq!(body["total"], 4);
}

#[tokio::test]
async fn stats_and_schemes() {
    let s = state();
    let (_, _, stats) = get(&s, "/api/stats").await;
    assert_eq!(stats["techniques"]["total"], 33);
    assert_eq!(stats["authenticators"]["total"], 34);
    let (_, _, schemes) = get(&s, "/api/schemes").await;
    assert_eq!(schemes["technique"]["facets"].as_array().unwrap().len(), 11);
    assert_eq!(schemes["authenticator"]["facets"].as_array().unwrap().len(), 4);
}

#[tokio::test]
async fn errors() {
    let s = state();
    let (status, cache, body) = get(&s, "/api/techniques/nope").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(cache, None);
    assert!(body["error"].is_string());

    let (status, _, body) = get(&s, "/api/authenticators/nope").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert!(body["error"].is_string());

    let (status, _, body) = get(&s, &format!("/api/techniques?q={}", encode("factor=bogus"))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["position"], 7);

    let (status, _, body) = get(&s, &format!("/api/techniques?q={}", encode("(factor=single"))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body["position"].is_u64());
}

#[tokio::test]
async fn reload_swaps_snapshot() {
    let s = state();
    let doc = seed_document().without_technique("pin-authentication");
    s.replace(Snapshot::new(doc).unwrap());
    let (_, _, all) = get(&s, "/api/techniques").await;
    assert_eq!(all["total"], 32);
}

fn atom() -> impl Strategy<Value = String> {
    prop::sample::select(vec![
        "factor=multi-factor",
        "factor=inherence-based",
        "factor=knowledge-based",
        "employment=single",
        "employment=multi",
        "employment=multi.parallel",
        "employment==multi.sequential",
        "subject-interaction=passive",
        "interaction=active",
        "contextuality=state-based",
        "privacy=pseudonymous",
        "factor=bogus",
        "nonsense=x",
    ])
    .prop_map(str::to_owned)
}

fn query_text() -> impl Strategy<Value = String> {
    atom().prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} & {b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a},{b}")),
            inner.clone().prop_map(|a| format!("!({a})")),
            inner.prop_map(|a| format!("({a}")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // The CLI and the HTTP API must select the same entries or both reject.
    #[test]
    fn cli_and_api_agree(q in query_text()) {
        let s = state();
        let rt = tokio::runtime::Builder::new_current_thread().enable_all().build().unwrap();
        let (status, _, body) = rt.block_on(get(&s, &format!("/api/techniques?q={}", encode(&q))));
        match query_ids(&seed_document(), Target::Techniques, &q) {
            Ok(expected) => {
                prop_assert_eq!(status, StatusCode::OK);
                prop_assert_eq!(ids(&body), expected);
            }
            Err(e) => {
                prop_assert_eq!(status, StatusCode::BAD_REQUEST);
                prop_assert_eq!(body["position"].as_u64(), Some(e.position as u64));
            }
        }
    }
}
