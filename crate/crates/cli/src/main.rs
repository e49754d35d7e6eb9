//! `toeplab`: command-line front end for the toeplitz-lab library.
//!
//! Exit codes: 0 pass, 1 input/config error, 2 numerical-quality error,
//! 3 theorem violation, 4 property not satisfied.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use toeplitz_lab::ssh_bulk_edge::{
    DEFAULT_DELTA_FRACTION, DEFAULT_EDGE_LENGTH, DEFAULT_MOMENTUM_GRID,
};
use toeplitz_lab::toeplitz_index::{DEFAULT_TRUNCATION, DEFAULT_WINDING_GRID};

/// Seed used when `--seed` is omitted.
pub const DEFAULT_SEED: u64 = 0x5EED_0001;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "toeplab",
    version,
    about = "Toeplitz index, SSH bulk-edge, Fock relation and Levi form checks"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for every randomized step.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,

    /// Tolerance override: zero tolerance for `winding`, kernel tolerance for
    /// `index`, verdict band for `levi`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SymbolSource {
    /// JSON file `{"coeffs": [{"mode": 1, "re": 1.0, "im": 0.0}, ...]}`.
    #[arg(long)]
    pub symbol_file: Option<PathBuf>,

    /// Inline coefficients `mode:re[:im],...`, e.g. `-2:1,0:0.1`.
    #[arg(long, allow_hyphen_values = true)]
    pub symbol: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Winding number by argument principle and by log-derivative quadrature.
    Winding {
        #[command(flatten)]
        source: SymbolSource,
        /// Number of grid points on the circle.
        #[arg(long, default_value_t = DEFAULT_WINDING_GRID)]
        grid: usize,
    },
    /// Fredholm index by two routes, checked against both winding numbers.
    Index {
        #[command(flatten)]
        source: SymbolSource,
        /// Truncation size N.
        #[arg(long = "n", default_value_t = DEFAULT_TRUNCATION)]
        n: usize,
        /// Grid size for the winding routes.
        #[arg(long, default_value_t = DEFAULT_WINDING_GRID)]
        grid: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Bulk and edge invariants of the SSH chain over a list of masses.
    SshSweep {
        /// Comma-separated masses.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "m_range")]
        m: Option<String>,
        /// Inclusive range `start:stop:step`.
        #[arg(long, allow_hyphen_values = true)]
        m_range: Option<String>,
        /// Fiber dimension n.
        #[arg(long = "n", default_value_t = 1)]
        fiber_dim: usize,
        /// Edge chain length L.
        #[arg(long = "L", default_value_t = DEFAULT_EDGE_LENGTH)]
        lattice_length: usize,
        /// Absolute spectral cutoff; defaults to a fraction of the gap.
        #[arg(long, conflicts_with = "delta_fraction")]
        delta: Option<f64>,
        /// Cutoff as a fraction of each row's gap.
        #[arg(long, default_value_t = DEFAULT_DELTA_FRACTION)]
        delta_fraction: f64,
        /// Momentum grid size Nk.
        #[arg(long, default_value_t = DEFAULT_MOMENTUM_GRID)]
        nk: usize,
        /// Fourier convention, +1 or -1.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        fourier_sign: i64,
    },
    /// Toeplitz/Cuntz relations, tensor-power identification and covariance.
    FockCheck {
        /// Fiber dimension n.
        #[arg(long = "n", default_value_t = 2)]
        fiber_dim: usize,
        /// Truncation level K.
        #[arg(long = "K", default_value_t = 4)]
        levels: usize,
        /// Number of points p.
        #[arg(long = "p")]
        points: Option<usize>,
        /// 1-based images of the permutation, e.g. `2,3,1`; defaults to the
        /// cyclic shift on p points.
        #[arg(long)]
        perm: Option<String>,
        /// Largest tensor power checked.
        #[arg(long, default_value_t = 5)]
        k_max: usize,
        /// Random trials per tensor power.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Truncation used for the covariance check.
        #[arg(long, default_value_t = 8)]
        pv_levels: usize,
    },
    /// Sampled strong pseudoconvexity test for a polynomial domain.
    Levi {
        /// JSON list of `{hol_multi_index, antihol_multi_index, re, im}`.
        #[arg(long)]
        domain_file: PathBuf,
        /// Number of random boundary samples.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// Skip the coordinate-axis boundary points.
        #[arg(long)]
        no_axis: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(commands::run(&cli))
}
