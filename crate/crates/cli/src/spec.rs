use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use opineq::sweep::SweepKind;
use opineq::{FunctionDescriptor, Interval, QuadratureConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Scalar four-term chain over an interval.
    Hh,
    /// Operator chain through a positive unital map.
    Operator,
    /// Power chain with the K or C constant.
    Power,
    /// Integral refinement of the Kantorovich inequality.
    Kantorovich,
    /// Chain for an ordered pair A <= B.
    Furuta,
    /// Print the K and C constants for an interval and exponent.
    Constants,
    /// Randomized sweep over one chain family.
    Sweep,
    /// Sampled check that a map is positive, unital and linear.
    VerifyMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// alpha = 1, beta the chord gap.
    Unit,
    /// alpha the chord-to-function ratio, beta = 0.
    Ratio,
    /// Multiplicative Kantorovich constant.
    K,
    /// Additive Kantorovich constant.
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Pretty,
}

/// Inclusive dimension range, written `N` or `LO,HI`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims(pub usize, pub usize);

impl std::str::FromStr for Dims {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let num = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad dimension '{x}': {e}"))
        };
        match s.split_once(',') {
            Some((lo, hi)) => Ok(Dims(num(lo)?, num(hi)?)),
            None => {
                let n = num(s)?;
                Ok(Dims(n, n))
            }
        }
    }
}

/// Everything needed to reproduce one invocation.
#[derive(Debug, Clone, PartialEq, Parser, Serialize, Deserialize)]
#[command(
    name = "opineq",
    version,
    about = "Verify Hermite-Hadamard and Jensen-type operator inequality chains"
)]
pub struct RunSpec {
    #[arg(value_enum, required_unless_present = "spec")]
    pub command: Option<Command>,

    /// Load the whole run from a JSON file written by --print-spec.
    #[arg(long)]
    #[serde(skip)]
    pub spec: Option<PathBuf>,

    /// Print the run as JSON instead of executing it.
    #[arg(long)]
    #[serde(skip)]
    pub print_spec: bool,

    /// Matrix A: a JSON file, or inline JSON ({"n":..,"entries":[..]} or nested rows).
    #[arg(long)]
    pub matrix: Option<String>,

    /// Matrix B for the ordered-pair chain.
    #[arg(long)]
    pub matrix_b: Option<String>,

    /// Positive unital map: normalized_trace, pinching:B1,B2,..., inline JSON or a JSON file.
    #[arg(long)]
    pub map: Option<String>,

    /// Function: power:R, exp, affine_power:SCALE,SHIFT,R, or JSON.
    #[arg(long = "f", allow_hyphen_values = true)]
    pub f: Option<FunctionDescriptor>,

    /// Power transform t in (0, 1].
    #[arg(long = "t")]
    pub t: Option<f64>,

    /// Spectral window m,M; defaults to the spectrum bounds.
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Option<Interval>,

    #[arg(long, value_enum)]
    pub mode: Option<Mode>,

    /// Explicit alpha; beta is computed to match.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,

    /// Exponent for the power chains and constants.
    #[arg(long = "r", allow_hyphen_values = true)]
    pub r: Option<f64>,

    /// Quadrature: gl:N, simpson:TOL,DEPTH or JSON.
    #[arg(long)]
    pub quad: Option<QuadratureConfig>,

    /// Chain family for sweeps.
    #[arg(long)]
    pub kind: Option<SweepKind>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    #[serde(default)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,

    #[arg(long)]
    pub trials: Option<usize>,

    /// Matrix dimensions for sweeps: N or LO,HI.
    #[arg(long)]
    pub dims: Option<Dims>,

    /// Log progress to standard error.
    #[arg(short, long)]
    #[serde(default)]
    pub verbose: bool,
}

impl RunSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}
