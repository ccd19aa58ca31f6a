use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use teich_core::spectra::Method;

/// Thurston and length-spectrum distances between marked punctured
/// hyperbolic surfaces.
///
/// A GROUP is a JSON group file, `builtin:torus:X,Y[,plus|minus]` for the
/// once-punctured torus with generator traces X and Y, or `builtin:tps` for
/// the thrice-punctured sphere.
#[derive(Debug, Parser)]
#[command(name = "teich", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the main output here instead of stdout. JSON runs also write a
    /// CSV next to it (`.trace.csv` for distance, `.samples.csv` for
    /// boundary).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Leave out the `meta` block (version and timestamp) so that repeated
    /// runs are byte-identical.
    #[arg(long, global = true)]
    pub no_meta: bool,

    /// Tolerance override, e.g. `--tol class=1e-8`. Repeatable.
    #[arg(long = "tol", value_name = "KEY=VAL", global = true)]
    pub tol: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Delta,
    Rho,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Delta => Method::Delta,
            MethodArg::Rho => Method::Rho,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the generators and peripheral words of a group.
    Classify { group: String },
    /// Estimate the Thurston distances in both directions and the
    /// length-spectrum distance.
    Distance {
        source: String,
        target: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        /// Longest word enumerated.
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        max_len: u64,
        /// Largest power used for the parabolic estimator.
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,
    },
    /// Numerical checks of the underlying identities and limits.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// Sample the boundary map and fit its local Hölder exponents.
    Boundary {
        source: String,
        target: String,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        max_len: u64,
        /// Word whose fixed point anchors a fit, e.g. "1 -2". Repeatable.
        /// Without it the anchors of largest local distortion are used.
        #[arg(long, allow_hyphen_values = true)]
        anchor: Vec<String>,
        /// Number of automatic anchors.
        #[arg(long, default_value_t = 5)]
        fits: usize,
        /// Half-width of the fitting window.
        #[arg(long, default_value_t = teich_core::boundary::DEFAULT_WINDOW)]
        window: f64,
        /// Also estimate the cross-ratio and length-spectrum norms.
        #[arg(long, requires = "seed")]
        norm: bool,
        /// Random 4-tuples for the norm estimate.
        #[arg(long, default_value_t = 10_000)]
        tuples: usize,
        /// Seed for the random tuples; required with --norm.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Check {
    /// Trace exponents of powers approach the multiplier exponent.
    Tr(Pair),
    /// Conjugating the unit translation by a parabolic squares its
    /// translation vector, with a minus sign.
    Square(Parabolic),
    /// Trace of the unit translation composed with a parabolic.
    Eq2(Parabolic),
    /// Closed form for the translation vector of a conjugated power.
    Eq3 {
        /// Multiplier of the hyperbolic map.
        #[arg(long)]
        lambda: f64,
        /// Its repelling fixed point; the attracting one is 0.
        #[arg(long = "N", allow_negative_numbers = true)]
        repelling: f64,
        /// Power.
        #[arg(long)]
        n: u32,
    },
    /// Log-ratio of translation vectors of conjugated powers tends to the
    /// multiplier exponent.
    Bn(Pair),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Pair {
    /// Source multiplier.
    #[arg(long)]
    pub lsrc: f64,
    /// Target multiplier.
    #[arg(long)]
    pub ltgt: f64,
    /// Source repelling fixed point; the attracting one is 0.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub nsrc: f64,
    /// Target repelling fixed point.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub ntgt: f64,
    #[arg(long, default_value_t = 20)]
    pub nmax: u32,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Parabolic {
    /// Translation vector of the parabolic.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: f64,
    /// Its finite fixed point.
    #[arg(long, allow_negative_numbers = true)]
    pub fixed: f64,
}
