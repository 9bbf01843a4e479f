//! JSON-over-HTTP front end for [`SessionStore`].
//!
//! | method | path                              | success            |
//! |--------|-----------------------------------|--------------------|
//! | POST   | `/api/sessions`                   | 201 session view   |
//! | GET    | `/api/sessions/{id}`              | 200 session view   |
//! | POST   | `/api/sessions/{id}/commit`       | 200 commit ack     |
//! | POST   | `/api/sessions/{id}/reveal`       | 200 round result   |
//! | GET    | `/api/sessions/{id}/transcript`   | 200 JSONL          |
//!
//! Errors carry `{"error": message}` with the status codes of
//! [`SessionError::status`], plus 400 for malformed JSON.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::services::ServeDir;

use crate::session::{CreateSession, SessionError, SessionStore};

#[derive(Clone, Debug, Default)]
pub struct ServerOptions {
    /// Origin allowed by CORS; `*` allows any origin.
    pub cors_origin: Option<String>,
    /// Directory of static files served outside `/api`.
    pub static_dir: Option<PathBuf>,
}

pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            message: message.into(),
        }
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        Self {
            status: StatusCode::from_u16(e.status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR),
            message: e.to_string(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

/// Parses a JSON body, separating syntax errors (400) from schema errors (422).
fn parse_body<T: for<'de> Deserialize<'de>>(body: &[u8]) -> ApiResult<T> {
    let value: Value = serde_json::from_slice(body)
        .map_err(|e| ApiError::bad_request(format!("malformed JSON: {e}")))?;
    serde_json::from_value(value).map_err(|e| SessionError::InvalidRequest(e.to_string()).into())
}

async fn blocking<T: Send + 'static>(
    op: impl FnOnce() -> Result<T, SessionError> + Send + 'static,
) -> ApiResult<T> {
    tokio::task::spawn_blocking(op)
        .await
        .map_err(|e| ApiError::from(SessionError::Internal(e.to_string())))?
        .map_err(ApiError::from)
}

async fn create(
    State(store): State<Arc<SessionStore>>,
    body: Bytes,
) -> ApiResult<impl IntoResponse> {
    let request: CreateSession = parse_body(&body)?;
    let view = blocking(move || store.create(request)).await?;
    Ok((StatusCode::CREATED, Json(view)))
}

async fn show(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> ApiResult<impl IntoResponse> {
    Ok(Json(store.get(&id)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CommitRequest {
    #[serde(default)]
    token: Option<String>,
}

async fn commit(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<impl IntoResponse> {
    let request = if body.iter().all(u8::is_ascii_whitespace) {
        CommitRequest { token: None }
    } else {
        parse_body(&body)?
    };
    Ok(Json(
        blocking(move || store.commit(&id, request.token)).await?,
    ))
}

async fn reveal(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<impl IntoResponse> {
    let value: Value = parse_body(&body)?;
    let outcome = value.get("outcome").and_then(Value::as_i64);
    let result = blocking(move || match outcome {
        Some(y) => store.reveal(&id, y),
        None => store.get(&id).and_then(|v| {
            if v.finished {
                Err(SessionError::Exhausted)
            } else if !v.committed {
                Err(SessionError::NoPendingCommit)
            } else {
                Err(SessionError::InvalidOutcome(
                    "`outcome` must be an integer".into(),
                ))
            }
        }),
    })
    .await?;
    Ok(Json(result))
}

async fn transcript(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> ApiResult<impl IntoResponse> {
    let t = store.transcript(&id)?;
    Ok((
        [(header::CONTENT_TYPE, "application/x-ndjson")],
        t.to_jsonl(),
    ))
}

fn cors(origin: &str) -> Result<CorsLayer, String> {
    let allow = if origin == "*" {
        AllowOrigin::any()
    } else {
        AllowOrigin::exact(
            HeaderValue::from_str(origin).map_err(|e| format!("invalid CORS origin: {e}"))?,
        )
    };
    Ok(CorsLayer::new()
        .allow_origin(allow)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]))
}

pub fn router(store: Arc<SessionStore>, options: &ServerOptions) -> Result<Router, String> {
    let mut app = Router::new()
        .route("/api/sessions", post(create))
        .route("/api/sessions/{id}", get(show))
        .route("/api/sessions/{id}/commit", post(commit))
        .route("/api/sessions/{id}/reveal", post(reveal))
        .route("/api/sessions/{id}/transcript", get(transcript))
        .with_state(store);
    if let Some(dir) = &options.static_dir {
        app = app.fallback_service(ServeDir::new(dir));
    }
    if let Some(origin) = &options.cors_origin {
        app = app.layer(cors(origin)?);
    }
    Ok(app)
}

/// Serves the API on `addr` until Ctrl-C, purging idle sessions once a minute.
pub async fn serve(
    addr: SocketAddr,
    store: Arc<SessionStore>,
    options: &ServerOptions,
) -> std::io::Result<()> {
    let app = router(store.clone(), options).map_err(std::io::Error::other)?;
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    let purger = tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            let removed = store.purge_expired();
            if removed > 0 {
                log::info!("expired {removed} idle sessions");
            }
        }
    });
    let result = axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await;
    purger.abort();
    result
}
