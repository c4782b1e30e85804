//! `semicrossed`: decide and certify approximate units of ideals in
//! semicrossed products from the command line.
//!
//! Exit codes: 0 success or verdict yes, 1 verdict no (certificate emitted),
//! 2 input error, 3 capability or budget error.

mod commands;
mod files;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use semicrossed::dynamics::DynamicsError;
use semicrossed::ideals::{IdealError, Mutation};
use semicrossed::units::Side;

#[derive(Debug, Parser)]
#[command(name = "semicrossed", version, about = "Approximate units of ideals in semicrossed products")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// System description (TOML).
    #[arg(long, global = true)]
    system: Option<PathBuf>,
    /// Ideal spec (TOML).
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Series literal file.
    #[arg(long, global = true)]
    series: Option<PathBuf>,
    /// Write the record here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the system and, if given, the spec.
    Validate {
        /// Window radius for spot checks on infinite carriers.
        #[arg(long, default_value_t = 16)]
        radius: i64,
    },
    /// Decide whether the ideal has an approximate unit.
    Decide(DecideArgs),
    /// The obstruction witness for one side, if there is one.
    Witness {
        #[arg(long, value_parser = parse_side)]
        side: Side,
    },
    /// The unit element on the canonical window of radius N.
    Unit {
        #[arg(long)]
        window: usize,
    },
    /// ‖AV − A‖₁ or ‖VA − A‖₁ for the unit element V on a window.
    Residual {
        #[arg(long, value_parser = parse_side)]
        side: Side,
        #[arg(long)]
        window: usize,
    },
    /// Bracket the operator norm of a series between compressions and ‖·‖₁.
    Norm {
        /// Comma-separated `RADIUS:EXTRA_LEVELS` steps.
        #[arg(long, default_value = "0:0,2:1,4:2,8:3")]
        schedule: String,
    },
    /// Cross-validate the decision procedures by enumeration.
    Crosscheck(CrosscheckArgs),
    /// Re-verify a witness record against sampled ideal elements.
    VerifyWitness {
        #[arg(long)]
        witness: PathBuf,
        /// Random ideal elements, on top of the unit elements.
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("which").required(true).args(["right", "left", "au", "m_ideal"])))]
pub struct DecideArgs {
    #[arg(long)]
    right: bool,
    #[arg(long)]
    left: bool,
    #[arg(long)]
    au: bool,
    #[arg(long)]
    m_ideal: bool,
}

#[derive(Debug, Args)]
pub struct CrosscheckArgs {
    #[arg(long, default_value_t = 4)]
    max_carrier: usize,
    #[arg(long, default_value_t = 3)]
    max_stable_len: usize,
    #[arg(long, default_value_t = 8)]
    template_window: usize,
    #[arg(long, default_value_t = 25)]
    sample_count: usize,
    #[arg(long, default_value_t = 10)]
    cond2_horizon: usize,
    #[arg(long, default_value_t = 50)]
    obstruction_samples: usize,
    #[arg(long, default_value_t = Mutation::None, value_parser = parse_mutation)]
    mutation: Mutation,
}

fn parse_side(s: &str) -> Result<Side, String> {
    s.parse()
}

fn parse_mutation(s: &str) -> Result<Mutation, String> {
    s.parse()
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Capability(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            Self::Input(_) => 2,
            Self::Capability(_) => 3,
        }
    }

    fn line(&self) -> String {
        let (kind, msg) = match self {
            Self::Input(m) => ("input", m),
            Self::Capability(m) => ("capability", m),
        };
        format!("error: {kind}: {}", msg.replace('\n', " "))
    }
}

impl From<IdealError> for CliError {
    fn from(e: IdealError) -> Self {
        if e.is_capability() {
            Self::Capability(e.to_string())
        } else {
            Self::Input(e.to_string())
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        IdealError::from(e).into()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", CliError::Input(format!("usage: {first}")).line());
            return ExitCode::from(2);
        }
    };
    match commands::run(&cli).and_then(|out| render::emit(&cli, &out).map(|()| out.code)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.code())
        }
    }
}
