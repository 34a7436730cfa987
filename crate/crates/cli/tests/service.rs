use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use ptacl_cli::service::router;
use ptacl_cli::store::PolicyStore;
use serde_json::{json, Value};
use tower::ServiceExt;

const CHINESE_WALL: &str =
    "{ (confidential = true) ? ((employer = A) ? allow) and_cup ((employer = B) ? deny) } and_cup allow";

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req.header("content-type", "application/json").body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

async fn with_chinese_wall() -> Router {
    let app = router(Arc::new(PolicyStore::new()));
    let (status, body) = call(&app, "POST", "/v1/policies", Some(json!({"id": "cw", "source": CHINESE_WALL}))).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(body["id"], "cw");
    app
}

#[tokio::test]
async fn healthz() {
    let app = router(Arc::new(PolicyStore::new()));
    let resp = app.oneshot(Request::get("/healthz").body(Body::empty()).unwrap()).await.unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
}

#[tokio::test]
async fn evaluate_r2_denies() {
    let app = with_chinese_wall().await;
    let request = json!([["employer", "A"], ["employer", "B"], ["confidential", "true"]]);
    let (status, body) = call(&app, "POST", "/v1/policies/cw/evaluate", Some(json!({"request": request}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["resolved"], "deny");
    assert!(body.get("trace").is_none());

    // an absent attribute leaves both branches open
    let (_, body) = call(&app, "POST", "/v1/policies/cw/evaluate", Some(json!({"request": [], "trace": true}))).await;
    assert_eq!(body["decisions"], json!(["1_P", "0_P"]));
    assert_eq!(body["resolved"], "deny");
    assert!(body["trace"].is_object());
}

#[tokio::test]
async fn fetch_returns_source() {
    let app = with_chinese_wall().await;
    let (status, body) = call(&app, "GET", "/v1/policies/cw", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["source"], CHINESE_WALL);
    let (status, _) = call(&app, "GET", "/v1/policies/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn unknown_id_is_404() {
    let app = router(Arc::new(PolicyStore::new()));
    let (status, body) = call(&app, "POST", "/v1/policies/nope/evaluate", Some(json!({"request": []}))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert!(body["error"].as_str().unwrap().contains("nope"));
}

#[tokio::test]
async fn duplicate_is_409() {
    let app = with_chinese_wall().await;
    let (status, _) = call(&app, "POST", "/v1/policies", Some(json!({"id": "cw", "source": "allow"}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn bad_input_is_400() {
    let app = router(Arc::new(PolicyStore::new()));
    let (status, body) = call(&app, "POST", "/v1/policies", Some(json!({"id": "p", "source": "{(a < 1) ? allow}"}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body["span"].is_object(), "{body}");

    let (status, _) = call(&app, "POST", "/v1/policies", Some(json!({"id": "a/b", "source": "allow"}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (status, _) = call(&app, "POST", "/v1/policies", Some(json!({"source": "allow"}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let app = with_chinese_wall().await;
    let (status, _) = call(&app, "POST", "/v1/policies/cw/evaluate", Some(json!({"request": [["a"]]}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn analyze_reports_guarantee_and_witnesses() {
    let app = router(Arc::new(PolicyStore::new()));
    call(&app, "POST", "/v1/policies", Some(json!({"id": "ph", "source": "allow and_cup {(n = v) ? deny}"}))).await;
    let body = json!({"request": [["n", "v"], ["n", "v'"]]});
    let (status, report) = call(&app, "POST", "/v1/policies/ph/analyze", Some(body)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(report["guarantee"], "none");
    assert_eq!(report["witnesses"].as_array().unwrap().len(), 1);

    let body = json!({"mode": "all-or-nothing", "request": [["n", "v"], ["n", "v'"]]});
    let (_, report) = call(&app, "POST", "/v1/policies/ph/analyze", Some(body)).await;
    assert_eq!(report["witnesses"].as_array().unwrap().len(), 0);
}

#[tokio::test]
async fn analyze_over_budget_is_422() {
    let app = router(Arc::new(PolicyStore::new()));
    call(&app, "POST", "/v1/policies", Some(json!({"id": "ph", "source": "allow and_cup {(n = v) ? deny}"}))).await;
    let request: Vec<Value> = (0..13).map(|i| json!(["n", format!("v{i}")])).collect();
    let (status, _) = call(&app, "POST", "/v1/policies/ph/analyze", Some(json!({"limit": 12, "request": request}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}
