use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod commands;
mod output;

/// Multi-index rough paths: bases, identity checks, lifts, solves and
/// translations.
#[derive(Parser, Debug, Serialize)]
#[command(name = "mirp", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct Common {
    /// Number of driving signals besides time.
    #[arg(long, global = true, default_value_t = 2)]
    pub d: usize,
    /// Regularity as an exact fraction `p/q` in (0, 1).
    #[arg(long, global = true)]
    pub gamma: Option<String>,
    /// Truncation degree.
    #[arg(long, global = true)]
    pub max_norm: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Dyadic mesh `2^-L`.
    #[arg(long, global = true)]
    pub mesh_level: Option<u32>,
    /// RK4 substeps per log-ODE step.
    #[arg(long, global = true, default_value_t = 8)]
    pub substeps: usize,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Leave the timestamp out of the provenance header.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// List populated multi-indices up to degree `--max-norm`.
    Enumerate,
    /// Run the exact identity suites; exit 1 on any failure.
    Verify {
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Lift a sampled path (CSV `t,x1,…,xd`) or a Brownian path.
    Lift {
        #[arg(long, conflicts_with = "brownian", required_unless_present = "brownian")]
        input: Option<PathBuf>,
        /// Brownian motion on [0, 1] with `2^mesh-level` steps.
        #[arg(long)]
        brownian: bool,
        #[arg(long, value_enum, default_value_t = Mode::Strat)]
        mode: Mode,
        /// Stream index of the Brownian path under `--seed`.
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// Solve the flow of a polynomial field along a lifted path.
    Solve {
        #[arg(long)]
        path: PathBuf,
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        y0: f64,
    },
    /// Translate a lifted path by characters.
    Translate {
        #[arg(long)]
        path: PathBuf,
        #[command(flatten)]
        chars: CharArgs,
    },
    /// Translate a polynomial field, `f ↦ f^ℓ`.
    TranslateField {
        #[arg(long)]
        field: PathBuf,
        #[command(flatten)]
        chars: CharArgs,
    },
    /// Davie residuals of the flow over dyadic pairs and the fitted rate.
    DavieReport {
        #[arg(long)]
        path: PathBuf,
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        y0: f64,
        /// Coarsest pair level.
        #[arg(long, default_value_t = 2)]
        min_pair_level: u32,
        /// Finest pair level.
        #[arg(long, default_value_t = 7)]
        max_pair_level: u32,
    },
    /// Monte-Carlo level-two Stratonovich minus Itô table, and optionally
    /// the geometric Brownian motion comparison.
    ItoStratDemo {
        #[arg(long, default_value_t = 10_000)]
        paths: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 0.75, 1.0])]
        times: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        gbm_paths: usize,
        #[arg(long, default_value_t = 0.1)]
        mu: f64,
        #[arg(long, default_value_t = 0.2)]
        sigma: f64,
    },
}

#[derive(Args, Debug, Serialize)]
pub struct CharArgs {
    /// Character JSON file (object or array of objects); repeatable.
    #[arg(long = "character")]
    pub characters: Vec<PathBuf>,
    /// Use the Itô to Stratonovich character.
    #[arg(long)]
    pub ito_strat: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ito,
    Strat,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                mirp::Error::Diverged { .. } => 3,
                _ => 2,
            })
        }
    }
}
