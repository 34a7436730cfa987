use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ptacl_cli::report::{self, Search};
use ptacl_cli::store::PolicyStore;
use ptacl_core::{
    parse_policy, parse_request, parse_target, AccessDecision, ParseError, Policy, Request,
    SubRequestMode, Target, DEFAULT_LIMIT,
};
use serde::Serialize;

const EXIT_DENY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_WITNESSES: u8 = 4;

/// Evaluate and analyze PTaCL policies.
#[derive(Parser)]
#[command(name = "ptacl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a policy (.ptp) on a request (.ptq).
    Eval {
        policy: PathBuf,
        request: PathBuf,
        /// Resolve the decision set to allow or deny; exit 0 on allow, 1 on deny.
        #[arg(long)]
        resolve: bool,
        /// Print every node with its target value and decision set.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Classify a target (.ptt) or policy (.ptp) and search for monotonicity counterexamples.
    Analyze {
        file: PathBuf,
        /// Treat the file as this kind instead of guessing from its extension.
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        /// Also search this request for hiding attacks (policies only).
        #[arg(long)]
        request: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
    },
    /// List sub-requests of a denied request that would be allowed.
    Hiding {
        policy: PathBuf,
        request: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
    },
    /// Run the HTTP policy decision point.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: IpAddr,
        /// Load every *.ptp file from this directory at startup.
        #[arg(long, env = "PTACL_POLICY_DIR")]
        policy_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Target,
    Policy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    #[value(name = "arbitrary-subset", alias = "subset")]
    ArbitrarySubset,
    #[value(name = "all-or-nothing", alias = "aon")]
    AllOrNothing,
}

impl From<Mode> for SubRequestMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::ArbitrarySubset => SubRequestMode::ArbitrarySubset,
            Mode::AllOrNothing => SubRequestMode::AllOrNothing,
        }
    }
}

#[derive(Args)]
struct SearchArgs {
    /// Which sub-requests an attacker can form.
    #[arg(long, value_enum, default_value = "arbitrary-subset")]
    mode: Mode,
    /// Largest exhaustive search, as a power of two.
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    limit: usize,
    /// Sample this many cases instead of enumerating (non-exhaustive).
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0, requires = "samples")]
    seed: u64,
}

impl SearchArgs {
    fn search(&self) -> Search {
        match self.samples {
            Some(samples) => Search::Sampled { samples, seed: self.seed },
            None => Search::Exhaustive { limit: self.limit },
        }
    }
}

/// A failure reported on standard error with its exit code.
struct Failure(u8, String);

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn parsed<T>(path: &Path, parse: impl Fn(&str) -> Result<T, ParseError>) -> Result<T, Failure> {
    let src = read(path)?;
    parse(&src).map_err(|e| Failure(EXIT_USAGE, format!("{}:{}", path.display(), e.render(&src))))
}

fn load_policy(path: &Path) -> Result<Policy, Failure> {
    parsed(path, parse_policy)
}

fn load_request(path: &Path) -> Result<Request, Failure> {
    parsed(path, parse_request)
}

fn budget(e: ptacl_core::BudgetExceeded) -> Failure {
    Failure(EXIT_BUDGET, e.to_string())
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce(&T) -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
    } else {
        print!("{}", text(value));
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Eval {
            policy,
            request,
            resolve,
            trace,
            json,
        } => {
            let report = report::evaluate(&load_policy(&policy)?, &load_request(&request)?, trace);
            emit(json, &report, |r| r.render(resolve));
            Ok(match report.resolved {
                AccessDecision::Deny if resolve => EXIT_DENY,
                _ => 0,
            })
        }
        Command::Analyze {
            file,
            kind,
            request,
            search,
            json,
        } => {
            let kind = kind.unwrap_or(match file.extension().and_then(|e| e.to_str()) {
                Some("ptt") => Kind::Target,
                _ => Kind::Policy,
            });
            let mode = search.mode.into();
            match kind {
                Kind::Target => {
                    if request.is_some() {
                        return Err(Failure(EXIT_USAGE, "--request applies to policies only".into()));
                    }
                    let target: Target = parsed(&file, parse_target)?;
                    let report = report::analyze_target(&target, mode, search.search()).map_err(budget)?;
                    emit(json, &report, |r| r.render());
                    Ok(0)
                }
                Kind::Policy => {
                    let policy = load_policy(&file)?;
                    let request = request.as_deref().map(load_request).transpose()?;
                    let report = report::analyze_policy(&policy, mode, request.as_ref(), search.search())
                        .map_err(budget)?;
                    emit(json, &report, |r| r.render());
                    Ok(match &report.witnesses {
                        Some(w) if !w.is_empty() => EXIT_WITNESSES,
                        _ => 0,
                    })
                }
            }
        }
        Command::Hiding {
            policy,
            request,
            search,
            json,
        } => {
            let report = report::hiding(
                &load_policy(&policy)?,
                &load_request(&request)?,
                search.mode.into(),
                search.search(),
            )
            .map_err(budget)?;
            emit(json, &report, |r| r.render());
            Ok(if report.witnesses.is_empty() { 0 } else { EXIT_WITNESSES })
        }
        Command::Serve {
            port,
            bind,
            policy_dir,
        } => {
            let store = match policy_dir {
                Some(dir) => PolicyStore::load_dir(&dir).map_err(|e| Failure(EXIT_USAGE, e.to_string()))?,
                None => PolicyStore::new(),
            };
            let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure(1, e.to_string()))?;
            runtime
                .block_on(ptacl_cli::service::serve(Arc::new(store), SocketAddr::new(bind, port)))
                .map_err(|e| Failure(1, e.to_string()))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, message)) => {
            eprintln!("ptacl: {message}");
            ExitCode::from(code)
        }
    }
}
