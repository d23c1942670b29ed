use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use mathpar_service::{app, Config, EvalResponse, MAX_SCRIPT_BYTES};
use serde_json::{json, Value};
use tower::ServiceExt;

const CYCLIC5: &str = "SPACE=Q[a,b,c,d,e]; \\groebner(a+b+c+d+e, a*b+b*c+c*d+d*e+e*a, \
    a*b*c+b*c*d+c*d*e+d*e*a+e*a*b, a*b*c*d+b*c*d*e+c*d*e*a+d*e*a*b+e*a*b*c, a*b*c*d*e-1); 1+1;";

async fn call(router: Router, req: Request<Body>) -> (StatusCode, Value) {
    let resp = router.oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (
        status,
        serde_json::from_slice(&bytes).unwrap_or(Value::Null),
    )
}

fn post(body: impl Into<Body>) -> Request<Body> {
    Request::builder()
        .method(Method::POST)
        .uri("/api/v1/eval")
        .header(header::CONTENT_TYPE, "application/json")
        .body(body.into())
        .unwrap()
}

async fn eval(body: Value) -> (StatusCode, Value) {
    call(app(Config::default()), post(body.to_string())).await
}

#[tokio::test]
async fn evaluates_the_means_script() {
    let (status, v) = eval(json!({ "script": "SPACE=R64[]; FLOATPOS=3; \\AGM(1,5);" })).await;
    assert_eq!(status, StatusCode::OK);
    let r: EvalResponse = serde_json::from_value(v).unwrap();
    assert_eq!(r.results.len(), 3);
    assert_eq!(r.results[2].output, "2.604");
    assert_eq!(r.results[2].latex.as_deref(), Some("2.604"));
    assert!(r.results.iter().all(|s| s.ok));
}

#[tokio::test]
async fn empty_script_and_formats() {
    let (status, v) = eval(json!({ "script": "" })).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["results"], json!([]));

    let (_, v) = eval(json!({ "script": "SPACE=Q[]; 1/2;", "format": "text" })).await;
    assert_eq!(v["results"][1]["output"], "1/2");
    assert!(v["results"][1].get("latex").is_none());
    let (_, v) = eval(json!({ "script": "SPACE=Q[]; 1/2;", "format": "latex" })).await;
    assert_eq!(v["results"][1]["output"], "\\frac{1}{2}");
}

#[tokio::test]
async fn evaluation_errors_are_reported_in_the_body() {
    let (status, v) = eval(json!({ "script": "SPACE=Z[x]; \\nosuch(x); 1+;  2;" })).await;
    assert_eq!(status, StatusCode::OK);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 4);
    assert_eq!(results[1]["ok"], false);
    assert_eq!(results[1]["error"], "unknown function \\nosuch");
    assert_eq!(results[2]["ok"], false);
    assert_eq!(results[3]["output"], "2");
}

#[tokio::test]
async fn malformed_requests_are_rejected() {
    let router = app(Config::default());
    let (status, _) = call(router.clone(), post("{not json")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(router.clone(), post(json!({ "scrip": "1;" }).to_string())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    for t in [0, 60_001] {
        let body = json!({ "script": "1;", "timeout_ms": t }).to_string();
        let (status, v) = call(router.clone(), post(body)).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{v}");
    }
    let (status, _) = eval(json!({ "script": "1;", "format": "pdf" })).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn oversize_scripts_are_rejected() {
    let big = "1;".repeat(MAX_SCRIPT_BYTES / 2 + 1);
    let (status, _) = eval(json!({ "script": big })).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
    let huge = "1".repeat(16 * MAX_SCRIPT_BYTES);
    let (status, _) = eval(json!({ "script": huge })).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
}

#[tokio::test]
async fn timeouts_yield_partial_results() {
    let (status, v) = eval(json!({ "script": CYCLIC5, "timeout_ms": 10 })).await;
    assert_eq!(status, StatusCode::OK);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 3);
    assert_eq!(results[0]["ok"], true);
    assert_eq!(results[1]["error"], "evaluation timed out");
    assert_eq!(results[2]["error"], "evaluation timed out");
    assert!(v["elapsed_ms"].as_u64().unwrap() < 1000);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn health_stays_up_during_long_evaluations() {
    let router = app(Config::default());
    let long = tokio::spawn(call(
        router.clone(),
        post(json!({ "script": CYCLIC5, "timeout_ms": 2000 }).to_string()),
    ));
    let req = Request::builder()
        .uri("/api/v1/health")
        .body(Body::empty())
        .unwrap();
    let (status, v) = call(router, req).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(long.await.unwrap().0, StatusCode::OK);
}

fn linear(v: &str, c: i32) -> String {
    if c == 0 {
        format!("2*{v}")
    } else {
        format!("2*{v}+{c}")
    }
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_requests_are_isolated() {
    let router = app(Config::default());
    let tasks: Vec<_> = (0..16)
        .map(|i| {
            let script = if i % 2 == 0 {
                format!("SPACE=Z[x]; f = x + {i}; f*2; y;")
            } else {
                format!("SPACE=Zp32[y]; MOD32 = 7; f = y + {i}; f*2; x;")
            };
            let router = router.clone();
            tokio::spawn(async move {
                (
                    i,
                    call(router, post(json!({ "script": script }).to_string())).await,
                )
            })
        })
        .collect();
    for t in tasks {
        let (i, (status, v)) = t.await.unwrap();
        assert_eq!(status, StatusCode::OK);
        let r = v["results"].as_array().unwrap();
        if i % 2 == 0 {
            assert_eq!(r[2]["output"], linear("x", 2 * i));
            assert_eq!(r[3]["error"], "unknown name `y`");
        } else {
            assert_eq!(r[3]["output"], linear("y", (2 * i) % 7));
            assert_eq!(r[4]["error"], "unknown name `x`");
        }
    }
}

#[tokio::test]
async fn corpus_statement_counts_match() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../listings");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|x| x != "mp") {
            continue;
        }
        let script = std::fs::read_to_string(&path).unwrap();
        let (_, v) = eval(json!({ "script": script })).await;
        let n = mathpar::lang::parse_script(&script).len();
        assert_eq!(
            v["results"].as_array().unwrap().len(),
            n,
            "{}",
            path.display()
        );
        assert!(v["results"]
            .as_array()
            .unwrap()
            .iter()
            .all(|r| r["ok"] == true));
    }
}

#[tokio::test]
async fn cors_headers() {
    let req = Request::builder()
        .uri("/api/v1/health")
        .header(header::ORIGIN, "http://ui.example")
        .body(Body::empty())
        .unwrap();
    let resp = app(Config::default()).oneshot(req).await.unwrap();
    assert_eq!(resp.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN], "*");

    let cfg = Config {
        cors_origin: Some("http://ui.example".into()),
        ..Config::default()
    };
    let req = Request::builder()
        .uri("/api/v1/health")
        .header(header::ORIGIN, "http://other.example")
        .body(Body::empty())
        .unwrap();
    let resp = app(cfg).oneshot(req).await.unwrap();
    assert_eq!(
        resp.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN],
        "http://ui.example"
    );
}
