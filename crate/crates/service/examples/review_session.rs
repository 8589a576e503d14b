// A full review round over HTTP, served in-process: propose, decide,
// look up a replacement, validate.
//
// cargo run -p adrcode-service --example review_session

use std::error::Error;
use std::sync::Arc;

use adrcode::fixtures;
use adrcode_service::negation::NegationScanner;
use adrcode_service::{router, AppState, ServiceConfig, Store};
use axum::body::{to_bytes, Body};
use axum::http::{Method, Request};
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(
    app: &axum::Router,
    method: Method,
    uri: &str,
    body: Option<Value>,
) -> Result<(u16, Value), Box<dyn Error>> {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or(Body::empty(), |b| Body::from(b.to_string())))?;
    let resp = app.clone().oneshot(req).await?;
    let status = resp.status().as_u16();
    let bytes = to_bytes(resp.into_body(), usize::MAX).await?;
    Ok((status, serde_json::from_slice(&bytes)?))
}

async fn review() -> Result<(), Box<dyn Error>> {
    let config = ServiceConfig::default();
    let app = router(AppState {
        bundle: Some(Arc::new(fixtures::italian_bundle())),
        encoder: config.encoder_config(),
        negations: Arc::new(NegationScanner::new(&config.negation_words)),
        store: Arc::new(Store::in_memory()),
    });

    let text = "Reazione locale estesa, non febbre; cefalea per due giorni";
    let (status, session) = call(&app, Method::POST, "/sessions", Some(json!({ "text": text }))).await?;
    assert_eq!(status, 201);
    let id = session["session_id"].as_str().ok_or("no id")?.to_string();
    println!("session {id}");
    for s in session["proposal"]["selected"].as_array().ok_or("no proposal")? {
        println!("  proposed {} {}", s["llt_code"], s["llt_text"]);
    }
    for n in session["proposal"]["negations"].as_array().ok_or("no negations")? {
        println!("  negation {} at {}..{}", n["word"], n["start"], n["end"]);
    }

    // the reviewer wants the preferred wording for headache
    let (_, hits) = call(&app, Method::GET, "/terms?q=mal%20di%20t", None).await?;
    let replacement = hits[0]["llt_code"].as_str().ok_or("no hit")?.to_string();
    println!("  search 'mal di t' -> {} {}", replacement, hits[0]["llt_text"]);

    let decisions_uri = format!("/sessions/{id}/decisions");
    for s in session["proposal"]["selected"].as_array().ok_or("no proposal")? {
        let code = s["llt_code"].as_str().ok_or("no code")?;
        let body = match s["llt_text"].as_str() {
            Some("Febbre") => json!({ "target_llt_code": code, "action": "reject" }),
            Some("Cefalea") => {
                json!({ "target_llt_code": code, "action": "replace", "replacement_llt_code": replacement })
            }
            _ => json!({ "target_llt_code": code, "action": "accept" }),
        };
        let (status, _) = call(&app, Method::POST, &decisions_uri, Some(body)).await?;
        assert_eq!(status, 200);
    }

    let (status, done) = call(&app, Method::POST, &format!("/sessions/{id}/validate"), None).await?;
    assert_eq!(status, 200);
    let final_set = done["final_set"].as_array().ok_or("no final set")?;
    for t in final_set {
        println!("  final {} {} ({})", t["llt_code"], t["llt_text"], t["origin"]);
    }
    let texts: Vec<&str> = final_set.iter().filter_map(|t| t["llt_text"].as_str()).collect();
    assert_eq!(texts, ["Mal di testa", "Reazione locale"]);

    let (status, _) = call(&app, Method::POST, &format!("/sessions/{id}/validate"), None).await?;
    assert_eq!(status, 409);
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    tokio::runtime::Runtime::new()?.block_on(review())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
