use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use adrcode::fixtures;
use adrcode_service::negation::NegationScanner;
use adrcode_service::session::{resolve_final_codes, ReviewSession};
use adrcode_service::{build_state, router, AppState, ServiceConfig, Store};
use axum::body::{to_bytes, Body};
use axum::http::{Request, StatusCode};
use axum::Router;
use serde_json::{json, Value};
use tower::ServiceExt;

const D1: &str = "Shock anafilattico (ipotensione + rash cutaneo) 1 h dopo assunzione x os del farmaco";

fn memory_state() -> AppState {
    AppState {
        bundle: Some(Arc::new(fixtures::italian_bundle())),
        encoder: Default::default(),
        negations: Arc::new(NegationScanner::new(["non", "senza"])),
        store: Arc::new(Store::in_memory()),
    }
}

fn app() -> Router {
    router(memory_state())
}

fn disk_config(dir: &Path) -> ServiceConfig {
    let dict = dir.join("dict.csv");
    if !dict.exists() {
        std::fs::write(&dict, fixtures::ITALIAN_FIXTURE_CSV).unwrap();
    }
    ServiceConfig {
        dictionary: Some(dict),
        data_dir: Some(dir.join("data")),
        ..ServiceConfig::default()
    }
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<&str>) -> (StatusCode, Vec<u8>) {
    let mut req = Request::builder().method(method).uri(uri);
    if body.is_some() {
        req = req.header("content-type", "application/json");
    }
    let req = req
        .body(body.map_or(Body::empty(), |b| Body::from(b.to_string())))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    (status, to_bytes(resp.into_body(), usize::MAX).await.unwrap().to_vec())
}

async fn call_json(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let text = body.map(|b| b.to_string());
    let (status, bytes) = call(app, method, uri, text.as_deref()).await;
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

fn selected_texts(v: &Value) -> Vec<String> {
    v["selected"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["llt_text"].as_str().unwrap().to_lowercase())
        .collect()
}

fn displayed_codes(session: &Value) -> Vec<String> {
    session["proposal"]["selected"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["llt_code"].as_str().unwrap().to_string())
        .collect()
}

fn final_codes(session: &Value) -> Vec<String> {
    session["final_set"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["llt_code"].as_str().unwrap().to_string())
        .collect()
}

#[tokio::test]
async fn encode_empty_text() {
    let (status, v) = call_json(&app(), "POST", "/encode", Some(json!({"text": ""}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["selected"], json!([]));
    assert_eq!(v["tokens"], json!([]));
}

#[tokio::test]
async fn encode_d1() {
    let (status, v) = call_json(&app(), "POST", "/encode", Some(json!({ "text": D1 }))).await;
    assert_eq!(status, StatusCode::OK);
    let texts = selected_texts(&v);
    assert!(texts.contains(&"shock anafilattico".to_string()));
    assert!(texts.contains(&"ipotensione".to_string()));
    assert!(texts.len() <= 6);
    assert!(v["dictionary_version"].as_str().unwrap().starts_with("sha256:"));
    // spans re-slice the description
    let chars: Vec<char> = D1.chars().collect();
    for t in v["tokens"].as_array().unwrap() {
        let (s, e) = (
            t["start"].as_u64().unwrap() as usize,
            t["end"].as_u64().unwrap() as usize,
        );
        let slice: String = chars[s..e].iter().collect();
        assert_eq!(slice.to_lowercase(), t["surface"].as_str().unwrap());
    }
    let shock = v["tokens"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["surface"] == "shock")
        .unwrap();
    assert_eq!(shock["covered"], json!(true));
}

#[tokio::test]
async fn encode_is_idempotent() {
    let a = app();
    let body = json!({ "text": "cefalea e febbre, non vomito" }).to_string();
    let (_, first) = call(&a, "POST", "/encode", Some(&body)).await;
    let (_, second) = call(&a, "POST", "/encode", Some(&body)).await;
    assert_eq!(first, second);
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["negations"], json!([{"word": "non", "start": 18, "end": 21}]));
}

#[tokio::test]
async fn encode_rejects_bad_requests() {
    let a = app();
    assert_eq!(
        call(&a, "POST", "/encode", Some("not json")).await.0,
        StatusCode::BAD_REQUEST
    );
    assert_eq!(
        call(&a, "POST", "/encode", Some("{\"txt\": \"x\"}")).await.0,
        StatusCode::BAD_REQUEST
    );
    assert_eq!(
        call(&a, "POST", "/encode", Some("{\"text\": 3}")).await.0,
        StatusCode::BAD_REQUEST
    );
    assert_eq!(call(&a, "POST", "/encode", None).await.0, StatusCode::BAD_REQUEST);
    let long = "a".repeat(10_001);
    let (status, _) = call_json(&a, "POST", "/encode", Some(json!({ "text": long }))).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
    // the cap counts characters, not bytes
    let accented = "è".repeat(10_000);
    let (status, _) = call_json(&a, "POST", "/encode", Some(json!({ "text": accented }))).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test]
async fn no_dictionary_is_503() {
    let state = AppState {
        bundle: None,
        ..memory_state()
    };
    let a = router(state);
    let (status, _) = call_json(&a, "POST", "/encode", Some(json!({"text": "febbre"}))).await;
    assert_eq!(status, StatusCode::SERVICE_UNAVAILABLE);
    let (status, _) = call_json(&a, "POST", "/sessions", Some(json!({"text": "febbre"}))).await;
    assert_eq!(status, StatusCode::SERVICE_UNAVAILABLE);
    assert_eq!(
        call(&a, "GET", "/terms?q=feb", None).await.0,
        StatusCode::SERVICE_UNAVAILABLE
    );
    let (status, v) = call_json(&a, "GET", "/health", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["status"], "no_dictionary");
}

#[tokio::test]
async fn term_search() {
    let a = app();
    let (status, v) = call_json(&a, "GET", "/terms?q=shock", None).await;
    assert_eq!(status, StatusCode::OK);
    let texts: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|h| h["llt_text"].as_str().unwrap())
        .collect();
    assert_eq!(texts, ["Shock", "Shock anafilattico"]);
    assert_eq!(call_json(&a, "GET", "/terms?q=zzzz", None).await.1, json!([]));
    let (_, v) = call_json(&a, "GET", "/terms?q=d&limit=3", None).await;
    assert_eq!(v.as_array().unwrap().len(), 3);
    for bad in [
        "/terms?q=shock&limit=0",
        "/terms?q=shock&limit=51",
        "/terms?q=%20%20",
        "/terms",
        "/terms?q=a&limit=x",
    ] {
        assert_eq!(call(&a, "GET", bad, None).await.0, StatusCode::BAD_REQUEST, "{bad}");
    }
    assert_eq!(call(&a, "GET", "/terms?q=d&limit=50", None).await.0, StatusCode::OK);
}

async fn open_session(a: &Router, text: &str) -> Value {
    let (status, v) = call_json(a, "POST", "/sessions", Some(json!({ "text": text }))).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(v["status"], "open");
    v
}

async fn decide(a: &Router, id: &str, body: Value) -> (StatusCode, Value) {
    call_json(a, "POST", &format!("/sessions/{id}/decisions"), Some(body)).await
}

#[tokio::test]
async fn accept_all_keeps_proposal() {
    let a = app();
    let s = open_session(&a, D1).await;
    let id = s["session_id"].as_str().unwrap();
    let codes = displayed_codes(&s);
    for c in &codes {
        let (status, _) = decide(&a, id, json!({"target_llt_code": c, "action": "accept"})).await;
        assert_eq!(status, StatusCode::OK);
    }
    let (status, v) = call_json(&a, "POST", &format!("/sessions/{id}/validate"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["status"], "validated");
    assert_eq!(final_codes(&v), codes);
}

#[tokio::test]
async fn replace_then_validate() {
    let a = app();
    let s = open_session(&a, D1).await;
    let id = s["session_id"].as_str().unwrap();
    let codes = displayed_codes(&s);
    let (x, rest) = codes.split_first().unwrap();
    let (status, _) = decide(
        &a,
        id,
        json!({"target_llt_code": x, "action": "replace", "replacement_llt_code": "9100030"}),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    for c in rest {
        decide(&a, id, json!({"target_llt_code": c, "action": "accept"})).await;
    }
    let (_, v) = call_json(&a, "POST", &format!("/sessions/{id}/validate"), None).await;
    let f = final_codes(&v);
    assert!(f.contains(&"9100030".to_string()));
    assert!(!f.contains(x));
}

#[tokio::test]
async fn validate_lists_undecided() {
    let a = app();
    let s = open_session(&a, D1).await;
    let id = s["session_id"].as_str().unwrap();
    let codes = displayed_codes(&s);
    assert!(codes.len() >= 2);
    decide(&a, id, json!({"target_llt_code": codes[0], "action": "reject"})).await;
    let (status, v) = call_json(&a, "POST", &format!("/sessions/{id}/validate"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(v["undecided"], json!(codes[1..]));
    // still open
    let (_, v) = call_json(&a, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(v["status"], "open");
}

#[tokio::test]
async fn decision_errors() {
    let a = app();
    let (status, _) = decide(&a, "nope", json!({"target_llt_code": "x", "action": "accept"})).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(call(&a, "GET", "/sessions/nope", None).await.0, StatusCode::NOT_FOUND);
    assert_eq!(
        call(&a, "POST", "/sessions/nope/validate", None).await.0,
        StatusCode::NOT_FOUND
    );

    let s = open_session(&a, "febbre").await;
    let id = s["session_id"].as_str().unwrap();
    let target = displayed_codes(&s)[0].clone();
    let cases = [
        json!({"target_llt_code": target, "action": "replace", "replacement_llt_code": "0000000"}),
        json!({"target_llt_code": target, "action": "replace"}),
        json!({"target_llt_code": target, "action": "accept", "replacement_llt_code": "9100030"}),
        json!({"target_llt_code": "9100030", "action": "accept"}),
    ];
    for body in cases {
        assert_eq!(
            decide(&a, id, body.clone()).await.0,
            StatusCode::UNPROCESSABLE_ENTITY,
            "{body}"
        );
    }
    assert_eq!(
        decide(&a, id, json!({"target_llt_code": target, "action": "maybe"}))
            .await
            .0,
        StatusCode::BAD_REQUEST
    );

    decide(&a, id, json!({"target_llt_code": target, "action": "accept"})).await;
    assert_eq!(
        call(&a, "POST", &format!("/sessions/{id}/validate"), None).await.0,
        StatusCode::OK
    );
    assert_eq!(
        decide(&a, id, json!({"target_llt_code": target, "action": "reject"}))
            .await
            .0,
        StatusCode::CONFLICT
    );
    assert_eq!(
        call(&a, "POST", &format!("/sessions/{id}/validate"), None).await.0,
        StatusCode::CONFLICT
    );
}

#[tokio::test]
async fn later_decisions_supersede_and_are_kept() {
    let a = app();
    let s = open_session(&a, "febbre").await;
    let id = s["session_id"].as_str().unwrap();
    let t = displayed_codes(&s)[0].clone();
    decide(&a, id, json!({"target_llt_code": t, "action": "reject"})).await;
    decide(&a, id, json!({"target_llt_code": t, "action": "accept"})).await;
    let (_, v) = call_json(&a, "POST", &format!("/sessions/{id}/validate"), None).await;
    assert_eq!(v["decisions"].as_array().unwrap().len(), 2);
    assert_eq!(final_codes(&v), [t]);
}

#[tokio::test]
async fn review_round_trip_survives_restart() {
    let dir = tempfile::tempdir().unwrap();
    let config = disk_config(dir.path());
    let a = router(build_state(&config).unwrap());

    let s = open_session(&a, D1).await;
    let id = s["session_id"].as_str().unwrap().to_string();
    let codes = displayed_codes(&s);
    assert!(codes.len() >= 3);

    // reject the first, replace the second with a searched term, accept the rest
    decide(&a, &id, json!({"target_llt_code": codes[0], "action": "reject"})).await;
    let (_, hits) = call_json(&a, "GET", "/terms?q=shock&limit=5", None).await;
    let replacement = hits[0]["llt_code"].as_str().unwrap().to_string();
    assert_eq!(hits[0]["llt_text"], "Shock");
    let (status, _) = decide(
        &a,
        &id,
        json!({"target_llt_code": codes[1], "action": "replace", "replacement_llt_code": replacement}),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    for c in &codes[2..] {
        decide(&a, &id, json!({"target_llt_code": c, "action": "accept"})).await;
    }
    let (status, v) = call_json(&a, "POST", &format!("/sessions/{id}/validate"), None).await;
    assert_eq!(status, StatusCode::OK);
    let mut expected = vec![replacement.clone()];
    expected.extend(codes[2..].iter().cloned());
    assert_eq!(final_codes(&v), expected);

    let (_, before) = call(&a, "GET", &format!("/sessions/{id}"), None).await;
    drop(a);

    let b = router(build_state(&config).unwrap());
    let (status, after) = call(&b, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(before, after);

    // the final set is recomputable from the logged decisions alone
    let session: ReviewSession = serde_json::from_slice(&after).unwrap();
    let recomputed: Vec<String> = resolve_final_codes(session.displayed_codes(), &session.decisions)
        .unwrap()
        .into_iter()
        .map(|(c, _)| c)
        .collect();
    assert_eq!(recomputed, expected);
}

#[tokio::test]
async fn torn_log_tail_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let config = disk_config(dir.path());
    let a = router(build_state(&config).unwrap());
    let s = open_session(&a, "cefalea e febbre").await;
    let id = s["session_id"].as_str().unwrap().to_string();
    let codes = displayed_codes(&s);
    decide(&a, &id, json!({"target_llt_code": codes[0], "action": "accept"})).await;
    let (_, acked) = call(&a, "GET", &format!("/sessions/{id}"), None).await;
    drop(a);

    // a crash in the middle of the next append
    let log = config
        .data_dir
        .as_ref()
        .unwrap()
        .join("sessions")
        .join(format!("{id}.jsonl"));
    let mut f = std::fs::OpenOptions::new().append(true).open(&log).unwrap();
    f.write_all(b"{\"event\":\"decision\",\"decision\":{\"target_ll")
        .unwrap();
    drop(f);
    let index = config.data_dir.as_ref().unwrap().join("index.jsonl");
    std::fs::OpenOptions::new()
        .append(true)
        .open(&index)
        .unwrap()
        .write_all(b"{\"session_id\":\"abc")
        .unwrap();

    let b = router(build_state(&config).unwrap());
    let (_, replayed) = call(&b, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(acked, replayed);

    // appends continue on a clean line boundary
    let (status, _) = decide(&b, &id, json!({"target_llt_code": codes[1], "action": "reject"})).await;
    assert_eq!(status, StatusCode::OK);
    let (_, v2) = call(&b, "GET", &format!("/sessions/{id}"), None).await;
    drop(b);
    let c = router(build_state(&config).unwrap());
    assert_eq!(call(&c, "GET", &format!("/sessions/{id}"), None).await.1, v2);
    let (_, new) = call_json(&c, "POST", "/sessions", Some(json!({"text": "nausea"}))).await;
    let new_id = new["session_id"].as_str().unwrap();
    drop(c);
    let d = router(build_state(&config).unwrap());
    assert_eq!(
        call(&d, "GET", &format!("/sessions/{new_id}"), None).await.0,
        StatusCode::OK
    );
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_decisions_are_all_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let config = disk_config(dir.path());
    let a = router(build_state(&config).unwrap());
    let s = open_session(&a, D1).await;
    let id = s["session_id"].as_str().unwrap().to_string();
    let codes = displayed_codes(&s);

    let mut tasks = Vec::new();
    for k in 0..40 {
        let (a, id, c) = (a.clone(), id.clone(), codes[k % codes.len()].clone());
        let action = if k % 2 == 0 { "accept" } else { "reject" };
        tasks.push(tokio::spawn(async move {
            decide(&a, &id, json!({"target_llt_code": c, "action": action})).await.0
        }));
    }
    for t in tasks {
        assert_eq!(t.await.unwrap(), StatusCode::OK);
    }
    let (_, live) = call(&a, "GET", &format!("/sessions/{id}"), None).await;
    let v: Value = serde_json::from_slice(&live).unwrap();
    assert_eq!(v["decisions"].as_array().unwrap().len(), 40);
    drop(a);
    let b = router(build_state(&config).unwrap());
    assert_eq!(call(&b, "GET", &format!("/sessions/{id}"), None).await.1, live);
}

#[test]
fn env_overrides_reach_state() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = disk_config(dir.path());
    config
        .apply_env([("ADRCODE_DISPLAY_CAP", "2"), ("ADRCODE_C5_MAX", "100")])
        .unwrap();
    let state = build_state(&config).unwrap();
    assert_eq!(state.encoder.display_cap, 2);
    assert_eq!(state.encoder.thresholds.c5_max, 100);
}

#[test]
fn bad_dictionary_path_fails_to_build() {
    let config = ServiceConfig {
        dictionary: Some("/nonexistent/dict.csv".into()),
        data_dir: None,
        ..ServiceConfig::default()
    };
    assert!(build_state(&config).is_err());
}
