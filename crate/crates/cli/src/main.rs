//! `tbm`: evaluate belief networks, run the golden suites, serve the HTTP API.

use std::net::SocketAddr;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use tbm_client::{Client, ClientError};
use tbm_core::golden::{run_suite, Suite};
use tbm_core::render::{fmt3, render_row};
use tbm_core::report::ObservationDelta;
use tbm_core::scenarios::{builtin_text, BUILTINS};
use tbm_core::{
    evaluate, evaluate_unnormalized, parse_formula, parse_network, to_network_text, Error, EvaluationReport,
    ExceptionMode, Formula, NetworkSpec,
};

#[derive(Parser)]
#[command(name = "tbm", version, about = "Belief-function evaluation of default-reasoning networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a network file (or `builtin:<name>`) and print marginals.
    Eval(EvalArgs),
    /// Run golden suites: table1, table2, clyde, limits, misuse or all.
    Golden {
        #[arg(default_value = "all")]
        suite: String,
    },
    /// Serve the HTTP/JSON API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
    },
    /// List the built-in networks.
    Builtins,
}

#[derive(clap::Args)]
struct EvalArgs {
    /// Path to a network file, or `builtin:<name>`.
    network: String,
    /// Extra observation formula; repeatable.
    #[arg(long = "observe", value_name = "FORMULA")]
    observe: Vec<String>,
    /// Variables to report, in order (default: all).
    #[arg(long, num_args = 1.., value_name = "VAR")]
    query: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long, value_enum, default_value_t = Mode::Hard)]
    mode: Mode,
    /// Also combine without normalization and print the conflict and the
    /// mass left on the empty set (to stderr).
    #[arg(long, conflicts_with = "server")]
    unnormalized_diagnostics: bool,
    /// Evaluate through a running service instead of in-process.
    #[arg(long, value_name = "URL")]
    server: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Hard,
    Weak,
}

impl From<Mode> for ExceptionMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Hard => ExceptionMode::Hard,
            Mode::Weak => ExceptionMode::Weak,
        }
    }
}

/// Exit status for observations in total conflict with the network.
const EXIT_CONFLICT: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::FAILURE;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Eval(args) => eval(args),
        Command::Golden { suite } => golden(&suite),
        Command::Serve { addr } => {
            tracing_subscriber::fmt()
                .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
                .init();
            runtime()?.block_on(tbm_service::serve(addr))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Builtins => {
            for (name, description) in BUILTINS {
                println!("{name:16} {description}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn runtime() -> anyhow::Result<tokio::runtime::Runtime> {
    Ok(tokio::runtime::Builder::new_multi_thread().enable_all().build()?)
}

fn load(source: &str) -> anyhow::Result<NetworkSpec> {
    let (text, origin) = match source.strip_prefix("builtin:") {
        Some(name) => {
            let text = builtin_text(name).ok_or_else(|| anyhow!("no built-in network `{name}`"))?;
            (text.to_owned(), source.to_owned())
        }
        None => (std::fs::read_to_string(source).with_context(|| format!("cannot read {source}"))?, source.to_owned()),
    };
    parse_network(&text).with_context(|| origin)
}

fn eval(args: EvalArgs) -> anyhow::Result<ExitCode> {
    let base = load(&args.network)?.with_exception_mode(args.mode.into());
    let mut extra: Vec<Formula> = Vec::new();
    for src in &args.observe {
        let f = parse_formula(src).with_context(|| format!("--observe `{src}`"))?;
        if !base.observations().iter().chain(&extra).any(|o| o.to_string() == f.to_string()) {
            extra.push(f);
        }
    }
    let spec = base.with_observations(extra.iter().cloned()).context("--observe")?;

    let report = match &args.server {
        Some(url) => match remote(url, &base, &extra) {
            Ok(r) => r,
            Err(ClientError::Conflict(body)) => {
                eprintln!("error: {}", body.message);
                return Ok(ExitCode::from(EXIT_CONFLICT));
            }
            Err(e) => return Err(e.into()),
        },
        None => {
            if args.unnormalized_diagnostics {
                let (raw, empty) = evaluate_unnormalized(&spec)?;
                eprintln!("conflict: {}", fmt3(raw.conflict.conflict_mass));
                eprintln!("empty-set mass: {}", fmt3(empty));
            }
            match evaluate(&spec) {
                Ok(result) => EvaluationReport::new(&spec, result),
                Err(e @ Error::TotalConflict { .. }) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(EXIT_CONFLICT));
                }
                Err(e) => return Err(e.into()),
            }
        }
    };

    let report = if args.query.is_empty() { report } else { report.restrict(&args.query)? };
    match args.format {
        Format::Table => println!("{}", render_row(report.marginals.iter().map(|m| (m.variable.as_str(), &m.marginal)))),
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
    }
    Ok(ExitCode::SUCCESS)
}

/// Uploads the network (exception mode already applied) and adds the extra
/// observations in a single delta.
fn remote(url: &str, base: &NetworkSpec, extra: &[Formula]) -> Result<EvaluationReport, ClientError> {
    let rt = runtime().expect("tokio runtime");
    rt.block_on(async {
        let client = Client::new(url);
        let net = client.create_network(to_network_text(base)).await?;
        let delta = ObservationDelta { add: extra.iter().map(|f| f.to_string()).collect(), remove: vec![] };
        client.observe(&net.id, &delta).await
    })
}

fn golden(which: &str) -> anyhow::Result<ExitCode> {
    let suites: Vec<Suite> = if which == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![which.parse::<Suite>().map_err(|e| anyhow!(e))?]
    };
    let mut ok = true;
    for suite in suites {
        let report = run_suite(suite);
        print!("{report}");
        ok &= report.passed();
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
