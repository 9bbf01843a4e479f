//! The `seqpred` command line.

use std::fs;
use std::io::{self, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Parser, Subcommand};

use seqpred::transcript::replay;

use crate::config::{read_outcomes, ExperimentConfig};
use crate::error::{HarnessError, HarnessResult};
use crate::game::{play, GameOptions};
use crate::graphs::{node_classify, rad, NodeClassifyOptions, RadOptions};
use crate::server::{serve, ServerOptions};
use crate::session::{SessionStore, StoreOptions};
use crate::verify::run_suite;

pub const PORT_ENV: &str = "SEQPRED_PORT";

#[derive(Debug, Parser)]
#[command(
    name = "seqpred",
    version,
    about = "Sequence prediction from potential functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the verification suite for a configuration and print a JSON report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay an outcome stream and write the JSONL transcript.
    Predict {
        #[arg(long)]
        config: PathBuf,
        /// Outcome stream; defaults to the `outcomes` path of the configuration.
        #[arg(long)]
        outcomes: Option<PathBuf>,
        /// Transcript destination; defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify the vertices of a graph online, in vertex order.
    NodeClassify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        labels: PathBuf,
        /// Use the convex relaxation of the labeling set.
        #[arg(long)]
        relaxed: bool,
        /// Playouts per round; 0 averages over every future tail.
        #[arg(long)]
        playouts: Option<usize>,
        /// Monte Carlo samples for the penalty on large graphs.
        #[arg(long, default_value_t = 10_000)]
        rad_samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Transcript destination; the summary always goes to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the Rademacher average of the relaxed labeling set and
    /// compare it with the spectral bound.
    Rad {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Enumerate all sign vectors as well.
        #[arg(long)]
        exhaustive: bool,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Play matching pennies against the machine in the terminal.
    Game {
        #[arg(long, default_value_t = 30)]
        rounds: usize,
        #[arg(long, default_value_t = 3)]
        max_period: usize,
        /// Defaults to a seed drawn from the clock.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Serve the commit-reveal session API.
    Serve {
        /// Overridden by the SEQPRED_PORT environment variable.
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Allowed CORS origin, or `*`.
        #[arg(long)]
        cors_origin: Option<String>,
        /// Static files served outside `/api`.
        #[arg(long)]
        static_dir: Option<PathBuf>,
        /// Directory receiving one JSONL transcript per session.
        #[arg(long)]
        persist_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 3600)]
        idle_timeout_secs: u64,
    },
}

fn write_file(path: &Path, contents: &str) -> HarnessResult<()> {
    fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}

fn emit(out: &mut impl Write, text: &str) -> HarnessResult<()> {
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

/// Resolves the listening port: `SEQPRED_PORT` wins over the flag.
pub fn resolve_port(flag: u16, env: Option<&str>) -> HarnessResult<u16> {
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| HarnessError::config(format!("{PORT_ENV}=`{v}` is not a port number"))),
        None => Ok(flag),
    }
}

fn clock_seed() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_nanos() as u64)
}

/// Runs one command, writing results to `out`.
pub fn execute(command: Command, out: &mut impl Write) -> HarnessResult<()> {
    match command {
        Command::Verify { config, out: path } => {
            let exp = ExperimentConfig::load(&config)?;
            let report = run_suite(&exp)?;
            let text = to_json(&report);
            if let Some(path) = path {
                write_file(&path, &text)?;
            }
            emit(out, &text)?;
            if !report.passed {
                return Err(HarnessError::Verification(format!(
                    "failed checks: {}",
                    report.failed_checks().join(", ")
                )));
            }
        }
        Command::Predict {
            config,
            outcomes,
            out: path,
        } => {
            let exp = ExperimentConfig::load(&config)?;
            let phi = exp.plain("predict")?;
            let stream = match (outcomes, &exp.config.outcomes) {
                (Some(p), _) => p,
                (None, Some(p)) => exp.resolve(p),
                (None, None) => {
                    return Err(HarnessError::config(
                        "no outcome stream: pass --outcomes or set `outcomes`",
                    ))
                }
            };
            let y = read_outcomes(&stream, phi.alphabet())?;
            let transcript = replay(phi, exp.playout_config(), exp.config.seed, &y)?;
            match path {
                Some(p) => write_file(&p, &transcript.to_jsonl())?,
                None => out.write_all(transcript.to_jsonl().as_bytes())?,
            }
        }
        Command::NodeClassify {
            graph,
            kappa,
            labels,
            relaxed,
            playouts,
            rad_samples,
            seed,
            out: path,
        } => {
            let report = node_classify(&NodeClassifyOptions {
                graph,
                kappa,
                labels,
                relaxed,
                playouts,
                rad_samples,
                seed,
            })?;
            if let Some(p) = path {
                write_file(&p, &report.transcript.to_jsonl())?;
            }
            emit(out, &to_json(&report))?;
        }
        Command::Rad {
            graph,
            kappa,
            samples,
            seed,
            exhaustive,
            json,
        } => {
            let report = rad(&RadOptions {
                graph,
                kappa,
                samples,
                seed,
                exhaustive,
            })?;
            let text = if json {
                to_json(&report)
            } else {
                report.to_string()
            };
            emit(out, &text)?;
        }
        Command::Game {
            rounds,
            max_period,
            seed,
        } => {
            let opts = GameOptions {
                rounds,
                max_period,
                seed: seed.unwrap_or_else(clock_seed),
            };
            play(opts, io::stdin().lock(), &mut *out)?;
        }
        Command::Serve {
            port,
            host,
            cors_origin,
            static_dir,
            persist_dir,
            idle_timeout_secs,
        } => {
            let env = std::env::var(PORT_ENV).ok();
            let port = resolve_port(port, env.as_deref())?;
            let store = Arc::new(SessionStore::new(StoreOptions {
                idle_timeout: Duration::from_secs(idle_timeout_secs),
                persist_dir,
            }));
            let options = ServerOptions {
                cors_origin,
                static_dir,
            };
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(serve(SocketAddr::new(host, port), store, &options))?;
        }
    }
    Ok(())
}

/// Parses the process arguments, runs the command and maps failures to
/// exit statuses: 1 verification, 2 configuration, 3 input/output.
pub fn run() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match execute(cli.command, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("seqpred: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
