use std::process::ExitCode;

use mathpar_service::{app, Config, DEFAULT_MAX_TIMEOUT_MS};

fn config_from_env() -> Result<(String, Config), String> {
    let addr = std::env::var("BIND_ADDR").unwrap_or_else(|_| "127.0.0.1:8080".into());
    let max_timeout_ms = match std::env::var("MAX_TIMEOUT_MS") {
        Ok(v) => v
            .parse::<u64>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("MAX_TIMEOUT_MS must be a positive integer, got `{v}`"))?,
        Err(_) => DEFAULT_MAX_TIMEOUT_MS,
    };
    let cors_origin = std::env::var("CORS_ORIGIN")
        .ok()
        .filter(|o| !o.is_empty() && o != "*");
    Ok((
        addr,
        Config {
            max_timeout_ms,
            cors_origin,
        },
    ))
}

async fn shutdown() {
    // If the handler cannot be installed, run until killed.
    if tokio::signal::ctrl_c().await.is_err() {
        std::future::pending::<()>().await;
    }
}

#[tokio::main]
async fn main() -> ExitCode {
    let (addr, config) = match config_from_env() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("mathpar-service: {e}");
            return ExitCode::FAILURE;
        }
    };
    let listener = match tokio::net::TcpListener::bind(&addr).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("mathpar-service: cannot bind {addr}: {e}");
            return ExitCode::FAILURE;
        }
    };
    eprintln!("mathpar-service listening on {addr}");
    if let Err(e) = axum::serve(listener, app(config))
        .with_graceful_shutdown(shutdown())
        .await
    {
        eprintln!("mathpar-service: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
