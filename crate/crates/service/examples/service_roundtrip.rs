//! Drives the HTTP API in-process: presets, a job, polling, results.
//!
//! ```bash
//! cargo run --release -p brewswarm-service --example service_roundtrip
//! ```
//!
//! To talk to a real socket instead, start `brewswarm serve` and point any
//! HTTP client at the same paths.

use std::time::Duration;

use axum::body::Body;
use axum::http::{Method, Request};
use axum::Router;
use brewswarm_service::{router, AppState, ServiceConfig};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> Value {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    serde_json::from_slice(&bytes).unwrap_or(Value::Null)
}

#[tokio::main]
async fn main() {
    let dir = std::env::temp_dir().join("brewswarm-service-example");
    let app = router(AppState::new(ServiceConfig {
        results_dir: dir.clone(),
        workers: 2,
    }));

    let presets = call(&app, Method::GET, "/api/targets/presets", None).await;
    let kozel = presets[1].clone();
    println!("target: {kozel}");

    let job = call(
        &app,
        Method::POST,
        "/api/optimize",
        Some(json!({ "target": kozel, "algorithm": "dfo", "options": { "trials": 5, "seed": 3 } })),
    )
    .await;
    let uri = format!("/api/jobs/{}", job["id"].as_str().unwrap());

    loop {
        let snap = call(&app, Method::GET, &uri, None).await;
        let status = snap["status"].as_str().unwrap_or("?").to_string();
        if let Some(p) = snap["progress"].as_object() {
            println!(
                "{status:<8} fes {:>7} best {:.5}",
                p["fes_used"],
                p["best_error"].as_f64().unwrap()
            );
        }
        if status == "done" || status == "failed" {
            let r = &snap["results"];
            println!(
                "{} solutions, clusters {}",
                r["solutions"].as_array().map_or(0, Vec::len),
                r["cluster_report"]["k"]
            );
            println!("result directory {}", r["result_dir"]);
            break;
        }
        tokio::time::sleep(Duration::from_millis(200)).await;
    }
}
