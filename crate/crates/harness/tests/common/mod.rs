#![allow(dead_code)]

use std::sync::Arc;

use axum::body::Body;
use axum::http::{HeaderMap, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

use seqpred_harness::server::{router, ServerOptions};
use seqpred_harness::session::{SessionStore, StoreOptions};

pub struct Reply {
    pub status: StatusCode,
    pub headers: HeaderMap,
    pub text: String,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.text).unwrap_or_else(|e| panic!("{e}: {}", self.text))
    }
}

pub fn app() -> Router {
    app_with(StoreOptions::default(), &ServerOptions::default())
}

pub fn app_with(store: StoreOptions, options: &ServerOptions) -> Router {
    router(Arc::new(SessionStore::new(store)), options).unwrap()
}

pub async fn send(app: &Router, method: &str, uri: &str, body: Option<&str>) -> Reply {
    let mut req = Request::builder().method(method).uri(uri);
    if body.is_some() {
        req = req.header("content-type", "application/json");
    }
    let req = req
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let headers = resp.headers().clone();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    Reply {
        status,
        headers,
        text: String::from_utf8(bytes.to_vec()).unwrap(),
    }
}

pub async fn create(app: &Router, body: &str) -> String {
    let r = send(app, "POST", "/api/sessions", Some(body)).await;
    assert_eq!(r.status, StatusCode::CREATED, "{}", r.text);
    r.json()["id"].as_str().unwrap().to_string()
}

pub async fn commit(app: &Router, id: &str) -> Reply {
    send(app, "POST", &format!("/api/sessions/{id}/commit"), None).await
}

pub async fn reveal(app: &Router, id: &str, outcome: i64) -> Reply {
    let body = format!(r#"{{"outcome": {outcome}}}"#);
    send(
        app,
        "POST",
        &format!("/api/sessions/{id}/reveal"),
        Some(&body),
    )
    .await
}
