//! HTTP front end: every request evaluates its script in a fresh session.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::extract::rejection::JsonRejection;
use axum::extract::{DefaultBodyLimit, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use mathpar::cancel::CancelToken;
use mathpar::lang::{parse_script, LangError, Outcome, Session};
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, CorsLayer};

pub const MAX_SCRIPT_BYTES: usize = 64 * 1024;
pub const DEFAULT_TIMEOUT_MS: u64 = 10_000;
pub const DEFAULT_MAX_TIMEOUT_MS: u64 = 60_000;

/// Extra time granted to the worker to notice cancellation on its own
/// before the handler gives up on it.
const GRACE: Duration = Duration::from_millis(50);

#[derive(Debug, Clone)]
pub struct Config {
    pub max_timeout_ms: u64,
    /// `None` allows any origin.
    pub cors_origin: Option<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_timeout_ms: DEFAULT_MAX_TIMEOUT_MS,
            cors_origin: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Latex,
    #[default]
    Both,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalRequest {
    pub script: String,
    #[serde(default)]
    pub format: Format,
    pub timeout_ms: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StatementResult {
    pub statement: String,
    pub ok: bool,
    pub output: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub latex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EvalResponse {
    pub results: Vec<StatementResult>,
    pub elapsed_ms: u64,
}

impl StatementResult {
    fn from_outcome(o: &Outcome, format: Format) -> StatementResult {
        let (output, latex) = match format {
            Format::Text => (o.output.clone(), None),
            Format::Latex => (o.latex.clone(), None),
            Format::Both => (o.output.clone(), Some(o.latex.clone())),
        };
        StatementResult {
            statement: o.statement.clone(),
            ok: o.ok(),
            output,
            latex,
            error: o.error.as_ref().map(|e| e.to_string()),
        }
    }

    fn timed_out(statement: String) -> StatementResult {
        StatementResult {
            statement,
            ok: false,
            output: String::new(),
            latex: None,
            error: Some(LangError::Timeout.to_string()),
        }
    }
}

fn reject(status: StatusCode, msg: impl Into<String>) -> Response {
    (status, Json(serde_json::json!({ "error": msg.into() }))).into_response()
}

pub fn app(config: Config) -> Router {
    let origin = match &config.cors_origin {
        Some(o) => match HeaderValue::from_str(o) {
            Ok(v) => AllowOrigin::exact(v),
            Err(_) => AllowOrigin::any(),
        },
        None => AllowOrigin::any(),
    };
    let cors = CorsLayer::new()
        .allow_origin(origin)
        .allow_methods([axum::http::Method::GET, axum::http::Method::POST])
        .allow_headers([axum::http::header::CONTENT_TYPE]);
    Router::new()
        .route("/api/v1/eval", post(eval))
        .route("/api/v1/health", get(health))
        // JSON escaping can inflate a script, so the body limit is looser
        // than the script limit checked in the handler.
        .layer(DefaultBodyLimit::max(8 * MAX_SCRIPT_BYTES))
        .layer(cors)
        .with_state(Arc::new(config))
}

async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") }))
}

async fn eval(
    State(config): State<Arc<Config>>,
    body: Result<Json<EvalRequest>, JsonRejection>,
) -> Response {
    let req = match body {
        Ok(Json(r)) => r,
        Err(e) if e.status() == StatusCode::PAYLOAD_TOO_LARGE => {
            return reject(StatusCode::PAYLOAD_TOO_LARGE, "request body too large");
        }
        Err(e) => return reject(StatusCode::BAD_REQUEST, e.body_text()),
    };
    if req.script.len() > MAX_SCRIPT_BYTES {
        return reject(
            StatusCode::PAYLOAD_TOO_LARGE,
            format!("script exceeds {MAX_SCRIPT_BYTES} bytes"),
        );
    }
    let timeout_ms = req
        .timeout_ms
        .unwrap_or(DEFAULT_TIMEOUT_MS.min(config.max_timeout_ms));
    if timeout_ms == 0 || timeout_ms > config.max_timeout_ms {
        return reject(
            StatusCode::BAD_REQUEST,
            format!("timeout_ms must be between 1 and {}", config.max_timeout_ms),
        );
    }
    let results = evaluate(req.script, req.format, Duration::from_millis(timeout_ms)).await;
    Json(results).into_response()
}

/// Runs `script` on the blocking pool. Statements still pending when the
/// deadline passes are reported as timed out.
pub async fn evaluate(script: String, format: Format, timeout: Duration) -> EvalResponse {
    let start = Instant::now();
    let flag = Arc::new(AtomicBool::new(false));
    let cancel = CancelToken::with_flag(flag.clone()).and_deadline(start + timeout);
    let done = Arc::new(Mutex::new(Vec::new()));

    let worker = {
        let done = done.clone();
        let script = script.clone();
        tokio::task::spawn_blocking(move || {
            let mut session = Session::with_cancel(cancel);
            session.run_with(&script, |o| {
                done.lock()
                    .expect("result lock poisoned")
                    .push(StatementResult::from_outcome(o, format));
            });
        })
    };
    if tokio::time::timeout(timeout + GRACE, worker).await.is_err() {
        flag.store(true, Ordering::Relaxed);
    }

    let mut results = std::mem::take(&mut *done.lock().expect("result lock poisoned"));
    let statements = parse_script(&script);
    results.extend(
        statements
            .into_iter()
            .skip(results.len())
            .map(|st| StatementResult::timed_out(st.text)),
    );
    EvalResponse {
        results,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}
