//! Randomized sweeps over the chain builders.
//!
//! Draw `i` of a sweep uses its own ChaCha8 stream derived from the sweep
//! seed, so results do not depend on the number of worker threads.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chains::{
    furuta_power_chain, hh_chain, kantorovich_integral_chain, operator_chain, power_chain,
    AlphaChoice, ChainParams, ChainReport, PowerMode,
};
use crate::error::{Error, Result};
use crate::funcat::{is_power_convex, FunctionDescriptor, FunctionKind, Interval, PowerTransform};
use crate::quad::QuadratureConfig;
use crate::sample::{
    random_gram, random_interval, random_map, random_positive, random_symmetric, MapFamily,
};
use crate::symmat::{spectrum_bounds, SymMatrix};

const TRANSFORMS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
const POWER_EXPONENTS: [f64; 5] = [-2.0, -1.0, -0.5, 2.0, 3.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Hh,
    Operator,
    Power,
    Kantorovich,
    Furuta,
}

impl std::str::FromStr for SweepKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_ascii_lowercase()))
            .map_err(|_| Error::Parse(format!("unknown sweep kind '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub kind: SweepKind,
    pub trials: usize,
    pub seed: u64,
    /// Inclusive range of matrix dimensions.
    pub dims: (usize, usize),
    #[serde(default)]
    pub quad: QuadratureConfig,
}

impl SweepConfig {
    pub fn new(kind: SweepKind, trials: usize, seed: u64) -> Self {
        SweepConfig {
            kind,
            trials,
            seed,
            dims: (2, 6),
            quad: QuadratureConfig::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.dims;
        if lo == 0 || lo > hi || hi > 64 {
            return Err(Error::InvalidParameter(format!(
                "dimension range must satisfy 1 <= lo <= hi <= 64, got {lo}..={hi}"
            )));
        }
        self.quad.validate()
    }
}

/// Outcome of a single draw.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Draw {
    Evaluated {
        passed: bool,
        min_gap: f64,
        /// `λ_min(last − second to last)`
        tight_gap: f64,
        /// `λ_min(last − first)`
        outer_gap: f64,
    },
    /// The drawn configuration violated a precondition of the builder.
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub kind: SweepKind,
    pub seed: u64,
    pub trials: usize,
    pub evaluated: usize,
    pub passed: usize,
    pub skipped: usize,
    pub worst_gap: f64,
    pub mean_tight_gap: f64,
    pub mean_outer_gap: f64,
    /// Per-draw outcomes, ordered by draw index.
    pub draws: Vec<Draw>,
}

impl SweepSummary {
    pub fn all_passed(&self) -> bool {
        self.passed == self.evaluated
    }
}

fn draw_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepSummary> {
    cfg.validate()?;
    let draws: Vec<Draw> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = draw_rng(cfg.seed, i);
            match draw_once(cfg, i, &mut rng) {
                Ok(report) => summarize(&report),
                Err(e) if e.is_precondition() => Ok(Draw::Skipped {
                    reason: e.to_string(),
                }),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let evaluated: Vec<(bool, f64, f64, f64)> = draws
        .iter()
        .filter_map(|d| match *d {
            Draw::Evaluated {
                passed,
                min_gap,
                tight_gap,
                outer_gap,
            } => Some((passed, min_gap, tight_gap, outer_gap)),
            Draw::Skipped { .. } => None,
        })
        .collect();
    let n = evaluated.len();
    let mean = |sel: fn(&(bool, f64, f64, f64)) -> f64| {
        if n == 0 {
            f64::NAN
        } else {
            evaluated.iter().map(sel).sum::<f64>() / n as f64
        }
    };
    let summary = SweepSummary {
        kind: cfg.kind,
        seed: cfg.seed,
        trials: cfg.trials,
        evaluated: n,
        passed: evaluated.iter().filter(|d| d.0).count(),
        skipped: cfg.trials - n,
        worst_gap: evaluated.iter().map(|d| d.1).fold(f64::INFINITY, f64::min),
        mean_tight_gap: mean(|d| d.2),
        mean_outer_gap: mean(|d| d.3),
        draws,
    };
    log::info!(
        "sweep {:?}: {}/{} passed, {} skipped",
        summary.kind,
        summary.passed,
        summary.evaluated,
        summary.skipped
    );
    Ok(summary)
}

fn summarize(report: &ChainReport) -> Result<Draw> {
    Ok(Draw::Evaluated {
        passed: report.passed,
        min_gap: report.min_gap(),
        tight_gap: report
            .links
            .last()
            .map_or(f64::NAN, |l| l.min_gap_eigenvalue),
        outer_gap: report.outer_gap()?,
    })
}

/// Catalog functions that are positive only on positive windows need a
/// shifted spectrum; `exp` does not.
fn needs_positive(f: &FunctionDescriptor) -> bool {
    !matches!(f.kind(), FunctionKind::Exp)
}

fn pick_transform(
    f: &FunctionDescriptor,
    j: Interval,
    candidates: &[f64],
    rng: &mut ChaCha8Rng,
) -> Result<PowerTransform> {
    let mut admissible = Vec::new();
    for &t in candidates {
        let t = PowerTransform::new(t)?;
        if is_power_convex(f, t, j, 64)? {
            admissible.push(t);
        }
    }
    admissible
        .choose(rng)
        .copied()
        .ok_or_else(|| Error::Precondition(format!("no admissible power transform for {f} on {j}")))
}

/// Spectral window for a sampled operand. Degenerate spectra (always the
/// case for `n = 1`) are widened by a random margin, staying positive when
/// `positive` is set.
fn sample_window(a: &SymMatrix, positive: bool, rng: &mut ChaCha8Rng) -> Result<Interval> {
    match spectrum_bounds(a) {
        Err(Error::DegenerateSpectrum { min, .. }) => {
            let lo = if positive {
                min * rng.gen_range(0.5..1.0)
            } else {
                min - rng.gen_range(0.1..1.0)
            };
            Interval::new(lo, min + rng.gen_range(0.1..1.0))
        }
        other => other,
    }
}

/// Transforms with `1 < 1/t <= r` for `r > 1`, any `t < 1` for `r < 0`.
fn power_transforms(r: f64) -> Vec<f64> {
    TRANSFORMS
        .iter()
        .copied()
        .filter(|&t| t < 1.0 && (r < 0.0 || t * r >= 1.0))
        .collect()
}

fn draw_once(cfg: &SweepConfig, index: usize, rng: &mut ChaCha8Rng) -> Result<ChainReport> {
    let n = rng.gen_range(cfg.dims.0..=cfg.dims.1);
    let mode = if index.is_multiple_of(2) {
        PowerMode::RatioK
    } else {
        PowerMode::DifferenceC
    };
    match cfg.kind {
        SweepKind::Hh => {
            let f = *FunctionDescriptor::catalog()
                .choose(rng)
                .expect("catalog is not empty");
            let j = random_interval(0.05..5.0, 0.01..5.0, rng);
            let t = PowerTransform::new(*TRANSFORMS.choose(rng).expect("nonempty"))?;
            hh_chain(&f, t, j, &cfg.quad)
        }
        SweepKind::Operator => {
            let f = *FunctionDescriptor::catalog()
                .choose(rng)
                .expect("catalog is not empty");
            let a = if needs_positive(&f) {
                random_positive(n, 0.05, rng)
            } else {
                random_symmetric(n, rng)
            };
            let phi = random_map(*MapFamily::ALL.choose(rng).expect("nonempty"), n, rng);
            let j = sample_window(&a, needs_positive(&f), rng)?;
            let t = pick_transform(&f, j, &TRANSFORMS, rng)?;
            let alpha = if index.is_multiple_of(2) {
                AlphaChoice::Unit
            } else {
                AlphaChoice::Ratio
            };
            operator_chain(&f, &a, &phi, &ChainParams::new(t, alpha).with_interval(j))
        }
        SweepKind::Power => {
            let r = *POWER_EXPONENTS.choose(rng).expect("nonempty");
            let t = PowerTransform::new(*power_transforms(r).choose(rng).expect("nonempty"))?;
            let a = random_positive(n, 0.05, rng);
            let phi = random_map(*MapFamily::ALL.choose(rng).expect("nonempty"), n, rng);
            let j = sample_window(&a, true, rng)?;
            power_chain(r, t, &a, &phi, Some(j), mode)
        }
        SweepKind::Kantorovich => {
            let a = random_positive(n, 0.05, rng);
            let phi = random_map(*MapFamily::ALL.choose(rng).expect("nonempty"), n, rng);
            let j = sample_window(&a, true, rng)?;
            kantorovich_integral_chain(&a, &phi, Some(j), &cfg.quad)
        }
        SweepKind::Furuta => {
            let r = *POWER_EXPONENTS.choose(rng).expect("nonempty");
            let t = PowerTransform::new(*power_transforms(r).choose(rng).expect("nonempty"))?;
            let a = random_positive(n, 0.05, rng);
            let b = a.add(&random_gram(n, 0.5, rng))?;
            furuta_power_chain(r, t, &a, &b, None, mode)
        }
    }
}
