//! `vcoalg`: JSON in, JSON out front end for the coalgebra engine and the
//! bouncing-ball simulator.
//!
//! Exit codes: 0 success, 1 a checked property failed (or a witness did not
//! reproduce), 2 invalid input or usage.

mod commands;
mod config;
mod error;
mod load;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::Config;
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "vcoalg", about = "Vietoris coalgebras over finite spaces", disable_version_flag = true)]
pub struct Cli {
    /// TOML file with size caps and ball defaults.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Print the effective configuration as TOML and exit.
    #[arg(long)]
    pub show_config: bool,
    /// Print the version and the configuration digest.
    #[arg(long, short = 'V')]
    pub version: bool,
    #[arg(long, global = true, value_name = "N")]
    pub max_base_points: Option<usize>,
    #[arg(long, global = true, value_name = "N")]
    pub max_points: Option<usize>,
    /// Write the report here instead of stdout. For `ball simulate` and
    /// `ball nondet` this is the trajectory file (.csv or .svg).
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Add wall-clock timing to the report (breaks byte-determinism).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Finite spaces.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Functor expressions.
    #[command(subcommand)]
    Functor(FunctorCmd),
    /// Hyperspaces.
    #[command(subcommand)]
    Vietoris(VietorisCmd),
    /// Counterexample reproductions.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Levels of the terminal sequence of a functor.
    TerminalSeq {
        #[arg(long)]
        functor: String,
        #[arg(long)]
        steps: usize,
        /// Extra constant space, as name=file.
        #[arg(long = "const", value_name = "NAME=FILE")]
        constants: Vec<String>,
        /// Include the point labels of every level.
        #[arg(long)]
        labels: bool,
    },
    /// Depth-n behavioural partition of a coalgebra.
    Behaviour {
        #[arg(long, value_name = "FILE")]
        coalg: PathBuf,
        #[arg(long)]
        depth: usize,
        /// Include each state's image in every level of the terminal sequence.
        #[arg(long)]
        labels: bool,
    },
    /// Equalizer of two parallel coalgebra homomorphisms.
    Equalizer {
        #[arg(long, value_name = "FILE")]
        h1: PathBuf,
        #[arg(long, value_name = "FILE")]
        h2: PathBuf,
    },
    /// Coreflection of a coalgebra along a subfunctor of V.
    Coreflect {
        #[arg(long, value_enum)]
        sigma: Sigma,
        #[arg(long, value_name = "FILE")]
        coalg: PathBuf,
    },
    /// The bouncing ball.
    #[command(subcommand)]
    Ball(BallCmd),
}

#[derive(Subcommand, Debug)]
pub enum SpaceCmd {
    /// Validate a space and report its separation properties.
    Check {
        #[arg(long, value_name = "FILE")]
        space: PathBuf,
        /// Fail (exit 1) unless the property holds.
        #[arg(long, value_enum)]
        require: Vec<Property>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    T0,
    T2,
    Discrete,
    StablyCompact,
}

#[derive(Subcommand, Debug)]
pub enum FunctorCmd {
    /// Parse and pretty-print an expression.
    Parse {
        #[arg(long)]
        expr: String,
    },
    /// Apply an expression to a space, and optionally to a map.
    Apply {
        #[arg(long)]
        expr: String,
        #[arg(long, value_name = "FILE", required_unless_present = "map")]
        space: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        map: Option<PathBuf>,
        #[arg(long = "const", value_name = "NAME=FILE")]
        constants: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum VietorisCmd {
    /// Build a hyperspace of a space.
    Build {
        #[arg(long, value_name = "FILE")]
        space: PathBuf,
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// Also build it from its subbasis and compare (exit 1 on mismatch).
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum VariantArg {
    Vl,
    V,
    #[value(name = "v+")]
    VPlus,
    Vc,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Sigma {
    #[value(name = "v+")]
    VPlus,
    Vc,
}

#[derive(Subcommand, Debug)]
pub enum WitnessCmd {
    /// The classic Vietoris construction is not a functor.
    ClassicVietoris,
    /// V(π1), V(π2) are not jointly mono.
    Monocone {
        /// Defaults to the discrete two-point space.
        #[arg(long, value_name = "FILE")]
        space: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum BallCmd {
    /// Deterministic bounces.
    #[command(allow_negative_numbers = true)]
    Simulate {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        v: f64,
        #[arg(long)]
        bounces: usize,
        #[arg(long)]
        g: Option<f64>,
        #[arg(long)]
        factor: Option<f64>,
        /// Sampling step of the exported file.
        #[arg(long)]
        step: Option<f64>,
    },
    /// Non-deterministic restitution in [lo, hi].
    #[command(allow_negative_numbers = true)]
    Nondet {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        v: f64,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long)]
        lo: Option<f64>,
        #[arg(long)]
        hi: Option<f64>,
        #[arg(long)]
        g: Option<f64>,
        /// Include the whole tree in the report.
        #[arg(long)]
        tree: bool,
        /// Which extremal path `--out` exports.
        #[arg(long, value_enum, default_value = "low")]
        branch: Branch,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Perturb the initial state and compare trajectories.
    #[command(allow_negative_numbers = true)]
    Stability {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        v: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        horizon: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "ball")]
        system: SystemArg,
        #[arg(long)]
        g: Option<f64>,
        #[arg(long)]
        factor: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Fail (exit 1) if any flight time moves by more than this.
        #[arg(long)]
        bound: Option<f64>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Branch {
    Low,
    High,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SystemArg {
    /// The continuous ball.
    Ball,
    /// Restitution jumps at height 5.
    Jump,
}

fn effective_config(cli: &Cli) -> Result<Config, CliError> {
    let mut c = Config::load(cli.config.as_deref())?;
    if let Some(n) = cli.max_base_points {
        c.limits.max_base_points = n;
    }
    if let Some(n) = cli.max_points {
        c.limits.max_points = n;
    }
    Ok(c)
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("{}", serde_json::to_string_pretty(&e.to_json()).unwrap());
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let msg = e.render().to_string();
            return fail(CliError::Usage(msg.trim().trim_start_matches("error: ").to_string()));
        }
        Err(e) => e.exit(),
    };
    let config = match effective_config(&cli) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    if cli.version {
        println!("vcoalg {} (config sha256:{})", env!("CARGO_PKG_VERSION"), config.digest());
        return ExitCode::SUCCESS;
    }
    if cli.show_config {
        print!("{}", config.to_toml());
        return ExitCode::SUCCESS;
    }
    let Some(command) = &cli.command else {
        return fail(CliError::Usage("no command given; see --help".into()));
    };
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match report::run(&cli, command, &config, argv) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => fail(e),
    }
}
