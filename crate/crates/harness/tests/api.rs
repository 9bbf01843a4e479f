mod common;

use axum::http::StatusCode;
use common::{app, app_with, commit, create, reveal, send};
use seqpred_harness::server::ServerOptions;
use seqpred_harness::session::StoreOptions;

const IMBALANCE_3: &str = r#"{"phi": {"kind": "imbalance", "n": 3}, "seed": 5}"#;

#[tokio::test]
async fn create_and_show() {
    let app = app();
    let r = send(&app, "POST", "/api/sessions", Some(IMBALANCE_3)).await;
    assert_eq!(r.status, StatusCode::CREATED);
    let v = r.json();
    assert_eq!(v["horizon"], 3);
    assert_eq!(v["round"], 1);
    assert_eq!(v["rounds_left"], 3);
    assert_eq!(v["committed"], false);
    let id = v["id"].as_str().unwrap();
    let shown = send(&app, "GET", &format!("/api/sessions/{id}"), None).await;
    assert_eq!(shown.status, StatusCode::OK);
    assert_eq!(shown.json()["id"], id);
}

#[tokio::test]
async fn commit_status_codes() {
    let app = app();
    assert_eq!(commit(&app, "missing").await.status, StatusCode::NOT_FOUND);
    let id = create(&app, IMBALANCE_3).await;

    let first = commit(&app, &id).await;
    assert_eq!(first.status, StatusCode::OK);
    assert_eq!(first.json()["round"], 1);
    assert_eq!(commit(&app, &id).await.status, StatusCode::CONFLICT);

    assert_eq!(reveal(&app, &id, 1).await.status, StatusCode::OK);
    for y in [-1, 1] {
        assert_eq!(commit(&app, &id).await.status, StatusCode::OK);
        assert_eq!(reveal(&app, &id, y).await.status, StatusCode::OK);
    }
    assert_eq!(commit(&app, &id).await.status, StatusCode::GONE);
}

#[tokio::test]
async fn commit_is_idempotent_with_a_token() {
    let app = app();
    let id = create(&app, IMBALANCE_3).await;
    let uri = format!("/api/sessions/{id}/commit");
    let a = send(&app, "POST", &uri, Some(r#"{"token": "t-1"}"#)).await;
    let b = send(&app, "POST", &uri, Some(r#"{"token": "t-1"}"#)).await;
    assert_eq!(a.status, StatusCode::OK);
    assert_eq!(a.text, b.text);
    assert_eq!(a.json()["token"], "t-1");
    let c = send(&app, "POST", &uri, Some(r#"{"token": "t-2"}"#)).await;
    assert_eq!(c.status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn reveal_status_codes() {
    let app = app();
    assert_eq!(
        reveal(&app, "missing", 1).await.status,
        StatusCode::NOT_FOUND
    );
    let id = create(&app, IMBALANCE_3).await;
    assert_eq!(reveal(&app, &id, 1).await.status, StatusCode::CONFLICT);
    commit(&app, &id).await;
    assert_eq!(
        reveal(&app, &id, 0).await.status,
        StatusCode::UNPROCESSABLE_ENTITY
    );
    assert_eq!(
        reveal(&app, &id, 300).await.status,
        StatusCode::UNPROCESSABLE_ENTITY
    );
    let uri = format!("/api/sessions/{id}/reveal");
    let r = send(&app, "POST", &uri, Some(r#"{"outcome": "up"}"#)).await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY);
    let r = send(&app, "POST", &uri, Some("{not json")).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert!(r.json()["error"].is_string());

    let ok = reveal(&app, &id, 1).await;
    assert_eq!(ok.status, StatusCode::OK);
    let v = ok.json();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "machine_correct",
            "machine_win_rate",
            "outcome",
            "prediction",
            "round",
            "rounds_left"
        ]
    );
    assert_eq!(v["round"], 1);
    assert_eq!(v["rounds_left"], 2);
    assert_eq!(v["machine_correct"], v["prediction"] == v["outcome"]);
}

#[tokio::test]
async fn singleton_session_reads_the_player() {
    let app = app();
    let body =
        r#"{"phi": {"kind": "finite_set", "source": {"members": [[1, 1, -1, 1]]}}, "horizon": 4}"#;
    let id = create(&app, body).await;
    for (t, y) in [1, 1, -1, 1].into_iter().enumerate() {
        assert_eq!(commit(&app, &id).await.status, StatusCode::OK);
        let v = reveal(&app, &id, y).await.json();
        assert_eq!(v["prediction"], y);
        assert_eq!(v["machine_correct"], true);
        assert_eq!(v["machine_win_rate"], 1.0);
        assert_eq!(v["rounds_left"], 3 - t);
    }
    let view = send(&app, "GET", &format!("/api/sessions/{id}"), None)
        .await
        .json();
    assert_eq!(view["finished"], true);
    assert_eq!(view["summary"]["mistakes"], 0);
    assert_eq!(reveal(&app, &id, 1).await.status, StatusCode::GONE);
}

#[tokio::test]
async fn invalid_creations() {
    let app = app();
    for body in [
        r#"{"phi": {"kind": "imbalance", "n": 3}, "horizon": 5}"#,
        r#"{"phi": {"kind": "nonsense"}}"#,
        r#"{"phi": {"kind": "graph_relaxed", "graph": {"file": "g.edges"}, "kappa": 1}}"#,
    ] {
        let r = send(&app, "POST", "/api/sessions", Some(body)).await;
        assert_eq!(
            r.status,
            StatusCode::UNPROCESSABLE_ENTITY,
            "{body}: {}",
            r.text
        );
    }
    let r = send(&app, "POST", "/api/sessions", Some("[")).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn transcript_endpoint_serves_jsonl() {
    let app = app();
    let id = create(&app, IMBALANCE_3).await;
    for y in [1, 1, -1] {
        commit(&app, &id).await;
        reveal(&app, &id, y).await;
    }
    let r = send(&app, "GET", &format!("/api/sessions/{id}/transcript"), None).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.headers["content-type"], "application/x-ndjson");
    assert_eq!(r.text.lines().count(), 4);
}

#[tokio::test]
async fn cors_and_static_files() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<p>mind reader</p>").unwrap();
    let options = ServerOptions {
        cors_origin: Some("http://localhost:5173".into()),
        static_dir: Some(dir.path().to_path_buf()),
    };
    let app = app_with(StoreOptions::default(), &options);
    let r = send(&app, "GET", "/index.html", None).await;
    assert_eq!(r.status, StatusCode::OK);
    assert!(r.text.contains("mind reader"));

    let req = axum::http::Request::builder()
        .method("POST")
        .uri("/api/sessions")
        .header("origin", "http://localhost:5173")
        .header("content-type", "application/json")
        .body(axum::body::Body::from(IMBALANCE_3))
        .unwrap();
    let resp = tower::ServiceExt::oneshot(app.clone(), req).await.unwrap();
    assert_eq!(
        resp.headers()["access-control-allow-origin"],
        "http://localhost:5173"
    );

    let plain = common::app();
    let r = send(&plain, "GET", "/index.html", None).await;
    assert_eq!(r.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn persisted_log_matches_the_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let store = StoreOptions {
        persist_dir: Some(dir.path().to_path_buf()),
        ..StoreOptions::default()
    };
    let app = app_with(store, &ServerOptions::default());
    let id = create(&app, r#"{"phi": {"kind": "imbalance", "n": 5}, "seed": 9}"#).await;
    for y in [1, -1, -1, 1, 1] {
        commit(&app, &id).await;
        reveal(&app, &id, y).await;
    }
    let served = send(&app, "GET", &format!("/api/sessions/{id}/transcript"), None)
        .await
        .text;
    let logged = std::fs::read_to_string(dir.path().join(format!("{id}.jsonl"))).unwrap();
    assert_eq!(served, logged);
}
