use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use syndyn_core::doubled::{DEFAULT_N_MAX, DEFAULT_TAIL_TOLERANCE};

#[derive(Debug, Parser)]
#[command(name = "syndyn", version, about = "Syntax dynamics: X-bar growth, collective modes, doubled algebra and narrow syntax")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Fock cutoff per mode for the doubled algebra.
    #[arg(long, global = true, env = "SYNDYN_N_MAX", default_value_t = DEFAULT_N_MAX)]
    pub n_max: usize,
    /// Largest tolerated truncation tail.
    #[arg(long, global = true, env = "SYNDYN_TAIL_TOL", default_value_t = DEFAULT_TAIL_TOLERANCE)]
    pub tail_tol: f64,
    /// Evaluate independent modes on this many threads.
    #[arg(long, global = true, value_name = "M", default_value_t = 1)]
    pub parallel_modes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DickeOp {
    #[value(name = "sigma+")]
    SigmaPlus,
    #[value(name = "sigma-")]
    SigmaMinus,
    S3,
    Contraction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    /// Closed-form ladder coefficients.
    Ladder,
    /// Holstein–Primakoff form through `A_S`.
    Hp,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grow the X-bar tree, or count its states per step.
    Tree {
        #[arg(long)]
        depth: usize,
        /// Per-step counts from the recurrence; nothing is materialized.
        #[arg(long)]
        counts_only: bool,
        /// The mirrored tree, with states and σ± exchanged.
        #[arg(long)]
        symmetric: bool,
    },
    /// Fibonacci numbers through powers of the Fibonacci matrix.
    Fib {
        #[arg(long)]
        n: u64,
        /// Print Fⁿ instead of F_n.
        #[arg(long)]
        matrix: bool,
    },
    /// Collective ladder operators on a symmetric state |l⟩ of N elements.
    Dicke {
        #[arg(long = "N", value_name = "N")]
        n: u64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        op: DickeOp,
        #[arg(long, value_enum, default_value_t = Route::Ladder)]
        route: Route,
    },
    /// θ-vacuum of one or more modes.
    Bogoliubov {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 1)]
        modes: usize,
        /// Include the pair-occupation weights of every mode.
        #[arg(long)]
        report: bool,
        /// Tag attached to the θ-set.
        #[arg(long)]
        concept: Option<String>,
    },
    /// Entropy, number and bare-vacuum overlap over a θ sweep.
    Entropy {
        /// `start:stop:step`, inclusive of `stop`.
        #[arg(long, value_name = "A:B:STEP", allow_hyphen_values = true)]
        theta_sweep: String,
        /// Entropy in bits instead of nats.
        #[arg(long)]
        bits: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Check dE = (1/β) dS along a linear θ ramp through the free-energy minimum.
    Heat {
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        beta: f64,
        /// `t0:t1:steps`.
        #[arg(long, value_name = "T0:T1:STEPS", allow_hyphen_values = true)]
        ramp: String,
        /// dθ/dt along the ramp.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        rate: f64,
        /// θ at the ramp midpoint; defaults to the stationary θ*.
        #[arg(long, allow_hyphen_values = true)]
        center: Option<f64>,
    },
    /// Run a derivation script against a lexicon.
    Derive {
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        script: PathBuf,
    },
    /// Run the acceptance suite and print a pass/fail table.
    Selftest {
        /// Only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        /// Emit JSON instead of the table.
        #[arg(long)]
        json: bool,
    },
}
