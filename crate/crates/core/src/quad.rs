//! Deterministic one-dimensional quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum QuadratureConfig {
    GaussLegendre { nodes: usize },
    AdaptiveSimpson { abs_tol: f64, max_depth: u32 },
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig::GaussLegendre { nodes: 64 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        match *self {
            QuadratureConfig::GaussLegendre { nodes } if !(2..=256).contains(&nodes) => Err(
                Error::InvalidParameter(format!("Gauss-Legendre nodes must be in [2, 256], got {nodes}")),
            ),
            QuadratureConfig::AdaptiveSimpson { abs_tol, max_depth } if abs_tol.is_nan() || abs_tol <= 0.0 || max_depth > 40 => {
                Err(Error::InvalidParameter(format!(
                    "adaptive Simpson needs abs_tol > 0 and max_depth <= 40, got {abs_tol}, {max_depth}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Requested absolute accuracy, if the scheme has one.
    pub fn abs_tol(&self) -> Option<f64> {
        match *self {
            QuadratureConfig::GaussLegendre { .. } => None,
            QuadratureConfig::AdaptiveSimpson { abs_tol, .. } => Some(abs_tol),
        }
    }

    /// Precomputes whatever the scheme needs (Gauss nodes and weights).
    pub fn prepare(&self) -> Result<Quadrature> {
        self.validate()?;
        Ok(match *self {
            QuadratureConfig::GaussLegendre { nodes } => {
                let (x, w) = gauss_legendre_rule(nodes);
                Quadrature::Gauss {
                    nodes: x,
                    weights: w,
                }
            }
            QuadratureConfig::AdaptiveSimpson { abs_tol, max_depth } => {
                Quadrature::Simpson { abs_tol, max_depth }
            }
        })
    }
}

impl std::str::FromStr for QuadratureConfig {
    type Err = Error;

    /// Accepts `gl:N`, `simpson:TOL,DEPTH`, or a JSON config.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return Ok(serde_json::from_str(s)?);
        }
        let bad = || {
            Error::Parse(format!(
                "unknown quadrature '{s}' (expected gl:N, simpson:TOL,DEPTH or JSON)"
            ))
        };
        let cfg = match s.split_once(':') {
            Some(("gl", n)) => QuadratureConfig::GaussLegendre {
                nodes: n.trim().parse().map_err(|_| bad())?,
            },
            Some(("simpson", rest)) => {
                let (tol, depth) = rest.split_once(',').ok_or_else(bad)?;
                QuadratureConfig::AdaptiveSimpson {
                    abs_tol: tol.trim().parse().map_err(|_| bad())?,
                    max_depth: depth.trim().parse().map_err(|_| bad())?,
                }
            }
            _ => return Err(bad()),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A ready-to-use quadrature rule.
#[derive(Debug, Clone)]
pub enum Quadrature {
    Gauss { nodes: Vec<f64>, weights: Vec<f64> },
    Simpson { abs_tol: f64, max_depth: u32 },
}

impl Quadrature {
    pub fn integrate(&self, g: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
        if a.is_nan() || b.is_nan() || a >= b {
            return Err(Error::InvalidParameter(format!(
                "integration needs a < b, got [{a}, {b}]"
            )));
        }
        match self {
            Quadrature::Gauss { nodes, weights } => {
                let half = 0.5 * (b - a);
                let mid = 0.5 * (a + b);
                let s: f64 = nodes
                    .iter()
                    .zip(weights)
                    .map(|(&x, &w)| w * g(mid + half * x))
                    .sum();
                Ok(half * s)
            }
            Quadrature::Simpson { abs_tol, max_depth } => {
                adaptive_simpson(&g, a, b, *abs_tol, *max_depth)
            }
        }
    }
}

/// One-shot integration; prefer [`QuadratureConfig::prepare`] in loops.
pub fn integrate(g: impl Fn(f64) -> f64, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.prepare()?.integrate(g, a, b)
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// nodes ascending.
pub fn gauss_legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess, then Newton on P_n.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d.is_finite() {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

fn adaptive_simpson(
    g: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64> {
    let (fa, fm, fb) = (g(a), g(0.5 * (a + b)), g(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut exhausted = false;
    let est = simpson_step(g, a, b, fa, fm, fb, whole, tol, max_depth, &mut exhausted);
    if exhausted {
        Err(Error::Accuracy {
            estimate: est,
            max_depth,
        })
    } else {
        Ok(est)
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    g: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    exhausted: &mut bool,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (g(lm), g(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    if depth == 0 {
        *exhausted = true;
        return left + right + delta / 15.0;
    }
    simpson_step(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, exhausted)
        + simpson_step(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, exhausted)
}
