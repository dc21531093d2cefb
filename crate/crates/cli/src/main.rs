//! `l2dim`: exact L²-invariants, extended dimensions and Burnside-group
//! computations from JSON input files.
//!
//! Exit codes: 0 on success, 1 when a computation's preconditions fail, 2 on
//! malformed input or usage errors.

mod commands;
mod config;
mod render;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use config::{Config, OutputFormat};

#[derive(Debug, Parser)]
#[command(name = "l2dim", version, about = "Exact L2-Betti numbers, extended dimensions and Burnside-group invariants")]
struct Cli {
    /// Output format; overrides the configuration file.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Write the report to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// TOML configuration file; defaults to $L2DIM_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extended dimension and torsion/projective split of a module.
    Dim {
        #[arg(long)]
        module: PathBuf,
    },
    /// Closure of the submodule given in a module file.
    Closure {
        #[arg(long)]
        module: PathBuf,
    },
    /// Dimension of the colimit of a directed chain, directly and by formula.
    Colim {
        #[arg(long)]
        chain: PathBuf,
    },
    /// L²-Betti numbers of a Γ-CW-complex.
    Betti {
        #[arg(long)]
        complex: PathBuf,
    },
    /// L²-Euler characteristic and orbit mass of a Γ-CW-complex.
    Euler {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Character matrix of a subgroup table and the character of an element.
    Burnside(BurnsideArgs),
    /// Integrality check of a character vector.
    Congruence {
        #[arg(long)]
        table: PathBuf,
        /// Comma-separated rationals, one per class in canonical order.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        eta: Vec<String>,
    },
    /// Hattori–Stallings rank of an idempotent matrix over a group ring.
    Hs {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Return probabilities and spectral-radius evidence for amenability.
    Amenable(AmenableArgs),
    /// Check that an input file is well formed and valid.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct BurnsideArgs {
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long, conflicts_with = "element")]
    complex: Option<PathBuf>,
    #[arg(long)]
    element: Option<PathBuf>,
    /// `n,p,r`: the subgroup data of `Zⁿ ⋊ Z/p` with `r` classes of order `p`.
    #[arg(long, value_delimiter = ',', num_args = 1, conflicts_with_all = ["table", "complex", "element"])]
    example9: Option<Vec<u64>>,
}

#[derive(Debug, Args)]
struct AmenableArgs {
    /// `Z^n`, `F_k`, `Z/n`, `D<n>` (order 2n), `S<n>`, `A<n>` or `V4`.
    #[arg(long)]
    group: String,
    /// JSON array of generators; defaults to a standard symmetric set.
    #[arg(long)]
    generators: Option<String>,
    #[arg(long, default_value_t = 30)]
    steps: usize,
    #[arg(long, default_value = "1/10")]
    margin: String,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct ValidateArgs {
    #[arg(long)]
    complex: Option<PathBuf>,
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long)]
    module: Option<PathBuf>,
    #[arg(long)]
    chain: Option<PathBuf>,
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long)]
    element: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input; exit code 2.
    Input(String),
    /// A computation's precondition failed; exit code 1.
    Domain(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "malformed input: {m}"),
            CliError::Domain(m) => write!(f, "{m}"),
        }
    }
}

impl From<l2dim::io::IoError> for CliError {
    fn from(e: l2dim::io::IoError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Computation context: configuration plus a running digest of every input
/// read.
pub struct Context {
    pub config: Config,
    digest: Sha256,
}

impl Context {
    pub fn read(&mut self, path: &std::path::Path) -> Result<String, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        self.digest.update(text.as_bytes());
        Ok(text)
    }

    pub fn note(&mut self, input: &str) {
        self.digest.update(input.as_bytes());
    }

    pub fn ingest_options(&self) -> l2dim::io::IngestOptions {
        l2dim::io::IngestOptions { max_finite_order: self.config.max_finite_group_order }
    }
}

/// A command's result as JSON and as text lines.
pub struct Outcome {
    pub result: Value,
    pub text: String,
}

fn execute(cli: Cli, echo: String) -> Result<(), CliError> {
    let config = Config::load(cli.config.as_deref())?;
    let format = cli.format.unwrap_or(config.output_format);
    let mut ctx = Context { config, digest: Sha256::new() };
    let outcome = match cli.command {
        Command::Dim { module } => commands::dim(&mut ctx, &module),
        Command::Closure { module } => commands::closure(&mut ctx, &module),
        Command::Colim { chain } => commands::colim(&mut ctx, &chain),
        Command::Betti { complex } => commands::betti(&mut ctx, &complex),
        Command::Euler { complex } => commands::euler(&mut ctx, &complex),
        Command::Burnside(a) => match a.example9 {
            Some(v) => commands::example9(&mut ctx, &v),
            None => commands::burnside(&mut ctx, a.table.as_deref(), a.complex.as_deref(), a.element.as_deref()),
        },
        Command::Congruence { table, eta } => commands::congruence(&mut ctx, &table, &eta),
        Command::Hs { matrix } => commands::hs(&mut ctx, &matrix),
        Command::Amenable(a) => {
            commands::amenable(&mut ctx, &a.group, a.generators.as_deref(), a.steps, &a.margin)
        }
        Command::Validate(v) => {
            let (kind, path) = [
                ("complex", v.complex),
                ("table", v.table),
                ("module", v.module),
                ("chain", v.chain),
                ("matrix", v.matrix),
                ("element", v.element),
            ]
            .into_iter()
            .find_map(|(k, p)| p.map(|p| (k, p)))
            .expect("clap requires one input");
            commands::validate(&mut ctx, kind, &path)
        }
    }?;
    let digest: String = ctx.digest.finalize().iter().map(|b| format!("{b:02x}")).collect();
    let body = match format {
        OutputFormat::Json => {
            let report = json!({
                "format": l2dim::io::FORMAT,
                "command": echo,
                "input_digest": digest,
                "config": {
                    "max_finite_group_order": ctx.config.max_finite_group_order,
                    "walk_support_bound": ctx.config.walk_support_bound,
                    "random_seed": ctx.config.random_seed,
                },
                "result": outcome.result,
            });
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
        OutputFormat::Text => format!("command: {echo}\ninput digest: {digest}\n{}", outcome.text),
    };
    match cli.output {
        Some(path) => std::fs::write(&path, body)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(args: Vec<OsString>) -> u8 {
    let echo = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>().join(" ");
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code() as u8;
            let _ = e.print();
            return code;
        }
    };
    match execute(cli, echo) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os().collect()))
}
