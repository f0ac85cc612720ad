//! The `rqc` command line: transpile, run, verify, synthesize and benchmark
//! `.rqc` circuits.
//!
//! [`run`] is the whole program minus process plumbing, so tests drive it
//! in-process with captured output.

mod bench;
mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rqc_core::{Circuit, LoweringLevel, SynthConfig};

use config::{parse_config, FileOptions};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Unreadable input, malformed `.rqc` text or a bad config file.
    pub const PARSE: i32 = 1;
    /// Well-formed input that fails validation, or bad option values.
    pub const INVALID: i32 = 2;
    pub const NOT_REACHABLE: i32 = 3;
    pub const VERIFY_FAILED: i32 = 4;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    /// Real gates plus the R-I ancilla.
    Real,
    /// `F` gates only, plus the work ancilla.
    F,
    /// Powers of the fixed gate `G = F(φ)`.
    G,
}

impl Level {
    pub fn lowering(self) -> LoweringLevel {
        match self {
            Level::Real => LoweringLevel::RealEncoded,
            Level::F => LoweringLevel::FOnly,
            Level::G => LoweringLevel::GOnly,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rqc", version, about = "Compile quantum circuits to a single real two-qubit gate")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lower a circuit to the requested level and print it with a report.
    Transpile(InputArgs),
    /// Simulate a circuit and print its outcome distribution or sample counts.
    Run(InputArgs),
    /// Check every lowering level against direct simulation.
    Verify(InputArgs),
    /// Find the smallest power of G approximating F(theta).
    Synth {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[command(flatten)]
        opts: Options,
    },
    /// Run the built-in benchmark suite.
    Bench(Options),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// `.rqc` file, or `-` for standard input.
    input: PathBuf,
    #[command(flatten)]
    opts: Options,
}

#[derive(Debug, Default, Args)]
struct Options {
    #[arg(long, value_enum)]
    level: Option<Level>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long = "k-max")]
    k_max: Option<u64>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    init: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// `key = value` file with defaults for any of the options above.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Fully resolved options: flags over config file over defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub level: Level,
    pub synth: SynthConfig,
    pub shots: u64,
    pub seed: u64,
    pub init: usize,
    pub out: Option<PathBuf>,
}

/// A command failure: exit code plus message for standard error.
#[derive(Debug)]
pub(crate) struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

fn resolve(opts: &Options) -> Result<Settings, Failure> {
    let file = match &opts.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::new(exit::PARSE, format!("{}: {e}", path.display())))?;
            parse_config(&text).map_err(|e| Failure::new(exit::PARSE, format!("{}: {e}", path.display())))?
        }
        None => FileOptions::default(),
    };
    let level = match (opts.level, &file.level) {
        (Some(l), _) => l,
        (None, Some(name)) => Level::from_str(name, true)
            .map_err(|_| Failure::new(exit::INVALID, format!("unknown level `{name}` (expected real, f or g)")))?,
        (None, None) => Level::G,
    };
    let defaults = SynthConfig::default();
    let synth = SynthConfig {
        phi: opts.phi.or(file.phi).map_or(defaults.phi, Into::into),
        eps: opts.eps.or(file.eps).unwrap_or(defaults.eps),
        k_max: opts.k_max.or(file.k_max).unwrap_or(defaults.k_max),
    };
    synth.validate().map_err(|e| Failure::new(exit::INVALID, e.to_string()))?;
    Ok(Settings {
        level,
        synth,
        shots: opts.shots.or(file.shots).unwrap_or(0),
        seed: opts.seed.or(file.seed).unwrap_or(0),
        init: opts.init.or(file.init).unwrap_or(0),
        out: opts.out.clone().or(file.out.map(PathBuf::from)),
    })
}

/// Alters a lowered circuit before verification simulates it.
pub type Tamper<'a> = &'a mut dyn FnMut(LoweringLevel, &mut Circuit);

/// Run the CLI on `args` (including the program name) and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_tamper(args, out, err, &mut |_, _| {})
}

/// As [`run`], with a hook applied to each lowered circuit inside `verify`.
/// Exists for negative-control tests.
#[doc(hidden)]
pub fn run_with_tamper<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, tamper: Tamper<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::INVALID } else { exit::OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Transpile(a) => resolve(&a.opts).and_then(|s| commands::transpile(&a.input, &s, out)),
        Command::Run(a) => resolve(&a.opts).and_then(|s| commands::run(&a.input, &s, out)),
        Command::Verify(a) => resolve(&a.opts).and_then(|s| commands::verify(&a.input, &s, out, tamper)),
        Command::Synth { theta, opts } => resolve(opts).and_then(|s| commands::synth(*theta, &s, out)),
        Command::Bench(opts) => resolve(opts).and_then(|s| bench::bench(&s, out)),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
