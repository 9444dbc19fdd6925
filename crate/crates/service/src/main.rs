use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::Parser;
use tracemon_core::replay::load_spec;
use tracemon_core::DEFAULT_FRONTIER_CAP;
use tracemon_service::{router, Monitor};

/// Monitors JSON events posted over HTTP against a trace expression
/// specification.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// Port to listen on.
    #[arg(long, default_value_t = 8080, value_parser = clap::value_parser!(u16).range(1..))]
    port: u16,
    /// Address to bind.
    #[arg(long, default_value = "127.0.0.1")]
    host: std::net::IpAddr,
    /// Specification file (.texp).
    #[arg(long)]
    spec: PathBuf,
    /// Largest number of simultaneous derivations per session.
    #[arg(long, default_value_t = DEFAULT_FRONTIER_CAP, value_parser = positive)]
    frontier_cap: usize,
    /// Append every processed event to this JSONL file.
    #[arg(long)]
    log: Option<PathBuf>,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        Ok(_) => Err("must be at least 1".into()),
        Err(e) => Err(e.to_string()),
    }
}

#[tokio::main]
async fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = Args::parse();

    let program = match load_spec(&args.spec) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    for w in program.warnings() {
        log::warn!("{}:{w}", args.spec.display());
    }
    let mut monitor = Monitor::new(program, args.frontier_cap);
    if let Some(path) = &args.log {
        monitor = match monitor.with_log(path) {
            Ok(m) => m,
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                return ExitCode::from(2);
            }
        };
    }

    let addr = SocketAddr::new(args.host, args.port);
    let listener = match tokio::net::TcpListener::bind(addr).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("cannot listen on {addr}: {e}");
            return ExitCode::FAILURE;
        }
    };
    log::info!("monitoring {} on http://{addr}", args.spec.display());
    let app = router(Arc::new(monitor));
    let shutdown = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    if let Err(e) = axum::serve(listener, app).with_graceful_shutdown(shutdown).await {
        eprintln!("server error: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
