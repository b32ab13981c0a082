//! Builders for the inequality chains.
//!
//! Every builder returns a [`ChainReport`]: an ordered list of terms, each
//! expected to be Loewner-below the next, with the verdict of every link and
//! the constants that went into the terms. Scalar chains use `1 × 1` terms so
//! that scalar and matrix chains share one verification path.
//!
//! Notation used throughout: `J = [m, M]` is the spectral window, `t` the
//! power transform, and
//!
//! ```text
//! G_t(z) = ((M - z)/(M - m) f(m)^t + (z - m)/(M - m) f(M)^t)^(1/t)
//! ```
//!
//! the power-mean envelope, which sits between `f` and its chord whenever
//! `f^t` is convex.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::funcat::{
    beta_constant, is_power_convex, kantorovich_c, kantorovich_k, ratio_alpha, FunctionDescriptor,
    Interval, PowerTransform,
};
use crate::posmap::{apply_map, MapDescriptor};
use crate::quad::QuadratureConfig;
use crate::sample::random_unit_vector;
use crate::symmat::{
    apply_fn, eigendecompose, loewner_leq, spectrum_bounds_of, EigenDecomp, LoewnerVerdict,
    SymMatrix, DEFAULT_TOL_SCALE,
};

/// Grid used for the sampled convexity preconditions.
const CONVEXITY_GRID: usize = 64;

/// Floor on the Loewner tolerance of links that involve quadrature.
const QUADRATURE_TOL_FLOOR: f64 = 1e-8;

/// Constants that entered a chain.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Constants {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

/// Terms of a chain and the verdicts of `terms[i] ⪯ terms[i + 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub chain: &'static str,
    pub mode: Option<String>,
    pub labels: Vec<String>,
    pub terms: Vec<SymMatrix>,
    pub links: Vec<LoewnerVerdict>,
    pub constants: Constants,
    pub interval: Option<Interval>,
    pub tol_scale: f64,
    pub passed: bool,
}

impl ChainReport {
    fn build(
        chain: &'static str,
        mode: Option<String>,
        labels: &[&str],
        terms: Vec<SymMatrix>,
        constants: Constants,
        interval: Option<Interval>,
        tol_scale: f64,
    ) -> Result<Self> {
        debug_assert_eq!(labels.len(), terms.len());
        let mut report = ChainReport {
            chain,
            mode,
            labels: labels.iter().map(|s| s.to_string()).collect(),
            terms,
            links: Vec::new(),
            constants,
            interval,
            tol_scale,
            passed: false,
        };
        report.relink(tol_scale)?;
        Ok(report)
    }

    fn relink(&mut self, tol_scale: f64) -> Result<()> {
        self.links = self
            .terms
            .windows(2)
            .map(|w| loewner_leq(&w[0], &w[1], tol_scale))
            .collect::<Result<_>>()?;
        self.tol_scale = tol_scale;
        self.passed = self.links.iter().all(|l| l.holds);
        Ok(())
    }

    /// Re-verifies every link at a different relative tolerance.
    pub fn with_tolerance(mut self, tol_scale: f64) -> Result<Self> {
        self.relink(tol_scale)?;
        Ok(self)
    }

    /// Smallest gap eigenvalue over all links.
    pub fn min_gap(&self) -> f64 {
        self.links
            .iter()
            .map(|l| l.min_gap_eigenvalue)
            .fold(f64::INFINITY, f64::min)
    }

    /// Index and verdict of the first failing link.
    pub fn first_violation(&self) -> Option<(usize, &LoewnerVerdict)> {
        self.links.iter().enumerate().find(|(_, l)| !l.holds)
    }

    /// `λ_min(last − first)`: how far the outer bound is from the quantity bounded.
    pub fn outer_gap(&self) -> Result<f64> {
        let (first, last) = (&self.terms[0], &self.terms[self.terms.len() - 1]);
        Ok(eigendecompose(&last.sub(first)?)?.min())
    }

    /// Term values when every term is `1 × 1`.
    pub fn scalar_terms(&self) -> Option<Vec<f64>> {
        self.terms
            .iter()
            .map(|t| (t.dim() == 1).then(|| t.get(0, 0)))
            .collect()
    }

    pub fn term_dim(&self) -> usize {
        self.terms.first().map_or(0, SymMatrix::dim)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    chain: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<&'a str>,
    labels: &'a [String],
    dim: usize,
    /// Row-major entries of each term.
    terms: Vec<&'a [f64]>,
    gaps: Vec<f64>,
    constants: Constants,
    #[serde(skip_serializing_if = "Option::is_none")]
    interval: Option<Interval>,
    passed: bool,
    tolerance: f64,
}

impl Serialize for ChainReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReportJson {
            chain: self.chain,
            mode: self.mode.as_deref(),
            labels: &self.labels,
            dim: self.term_dim(),
            terms: self.terms.iter().map(SymMatrix::as_slice).collect(),
            gaps: self.links.iter().map(|l| l.min_gap_eigenvalue).collect(),
            constants: self.constants,
            interval: self.interval,
            passed: self.passed,
            tolerance: self.tol_scale,
        }
        .serialize(s)
    }
}

/// `G_t` over a fixed window, with `f(m)^t` and `f(M)^t` precomputed.
#[derive(Debug, Clone, Copy)]
struct Envelope {
    j: Interval,
    fm_t: f64,
    f_big_t: f64,
    inv_t: f64,
}

impl Envelope {
    fn new(f: &FunctionDescriptor, t: PowerTransform, j: Interval) -> Result<Self> {
        let t = t.get();
        Ok(Envelope {
            j,
            fm_t: f.eval(j.m())?.powf(t),
            f_big_t: f.eval(j.big_m())?.powf(t),
            inv_t: 1.0 / t,
        })
    }

    /// Evaluates at `z` clamped into the window.
    fn at(&self, z: f64) -> f64 {
        let z = z.clamp(self.j.m(), self.j.big_m());
        let (w1, w2) = self.j.weights(z);
        (w1 * self.fm_t + w2 * self.f_big_t).powf(self.inv_t)
    }
}

/// `G_t(z) = ((M − z)/(M − m) f(m)^t + (z − m)/(M − m) f(M)^t)^(1/t)`.
pub fn middle_term_scalar(
    f: &FunctionDescriptor,
    t: PowerTransform,
    j: Interval,
    z: f64,
) -> Result<f64> {
    if !j.contains(z) {
        return Err(Error::domain(format!("point outside {j}"), z));
    }
    Ok(Envelope::new(f, t, j)?.at(z))
}

/// Pointwise bounds `lower ≤ middle ≤ upper` at a point `z` of `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Refinement {
    /// `f(a + b − z)`
    pub lower: f64,
    /// `G_t(z) + G_t(a + b − z) − f(z)`
    pub middle: f64,
    /// `f(a) + f(b) − f(z)`
    pub upper: f64,
}

impl Refinement {
    pub fn is_ordered(&self, tol: f64) -> bool {
        let slack = tol * (1.0 + self.upper.abs());
        self.lower <= self.middle + slack && self.middle <= self.upper + slack
    }
}

pub fn pointwise_refinement(
    f: &FunctionDescriptor,
    t: PowerTransform,
    j: Interval,
    z: f64,
) -> Result<Refinement> {
    if !j.contains(z) {
        return Err(Error::domain(format!("point outside {j}"), z));
    }
    let env = Envelope::new(f, t, j)?;
    let (a, b) = (j.m(), j.big_m());
    let reflected = (a + b - z).clamp(a, b);
    let fz = f.eval(z)?;
    Ok(Refinement {
        lower: f.eval(reflected)?,
        middle: env.at(z) + env.at(reflected) - fz,
        upper: f.eval(a)? + f.eval(b)? - fz,
    })
}

fn require_power_convex(f: &FunctionDescriptor, t: PowerTransform, j: Interval) -> Result<()> {
    f.check_interval(j)?;
    if !is_power_convex(f, t, j, CONVEXITY_GRID)? {
        return Err(Error::Precondition(format!(
            "{f} raised to t = {} is not convex on {j}",
            t.get()
        )));
    }
    Ok(())
}

fn scalar(x: f64) -> SymMatrix {
    SymMatrix::diag(&[x])
}

/// Four-term scalar chain
/// `f((a+b)/2) ≤ mean of f ≤ mean of G_t ≤ (f(a) + f(b))/2` over `J = [a, b]`.
pub fn hh_chain(
    f: &FunctionDescriptor,
    t: PowerTransform,
    j: Interval,
    cfg: &QuadratureConfig,
) -> Result<ChainReport> {
    require_power_convex(f, t, j)?;
    let quad = cfg.prepare()?;
    let env = Envelope::new(f, t, j)?;
    let (a, b) = (j.m(), j.big_m());
    let w = b - a;
    // check_interval makes eval total on [a, b].
    let mean_f = quad.integrate(|z| f.eval(z).unwrap_or(f64::NAN), a, b)? / w;
    let mean_env = quad.integrate(|z| env.at(z), a, b)? / w;
    let terms = vec![
        scalar(f.eval(0.5 * (a + b))?),
        scalar(mean_f),
        scalar(mean_env),
        scalar(0.5 * (f.eval(a)? + f.eval(b)?)),
    ];
    let tol = cfg
        .abs_tol()
        .map_or(DEFAULT_TOL_SCALE, |q| DEFAULT_TOL_SCALE.max(10.0 * q));
    ChainReport::build(
        "hh",
        None,
        &["f(midpoint)", "mean f", "mean G_t", "endpoint average"],
        terms,
        Constants::default(),
        Some(j),
        tol,
    )
}

/// How `alpha` is chosen in [`operator_chain`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "value")]
pub enum AlphaChoice {
    /// `alpha = 1`, `beta` the maximal chord gap.
    Unit,
    /// `alpha` the maximal chord-to-function ratio, `beta = 0`.
    Ratio,
    /// A caller-supplied `alpha`; `beta` computed to match.
    Given(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    pub t: PowerTransform,
    pub alpha: AlphaChoice,
    /// Spectral window; defaults to the tight spectrum bounds of the input.
    pub interval: Option<Interval>,
}

impl ChainParams {
    pub fn new(t: PowerTransform, alpha: AlphaChoice) -> Self {
        ChainParams {
            t,
            alpha,
            interval: None,
        }
    }

    pub fn with_interval(mut self, j: Interval) -> Self {
        self.interval = Some(j);
        self
    }
}

fn check_spectrum_in(eig: &EigenDecomp, j: Interval, what: &str) -> Result<()> {
    let slack = 1e-10 * (1.0 + j.m().abs().max(j.big_m().abs()));
    if eig.min() < j.m() - slack || eig.max() > j.big_m() + slack {
        return Err(Error::Precondition(format!(
            "spectrum of {what} [{}, {}] is not contained in {j}",
            eig.min(),
            eig.max()
        )));
    }
    Ok(())
}

fn resolve_interval(eig: &EigenDecomp, given: Option<Interval>, what: &str) -> Result<Interval> {
    let j = match given {
        Some(j) => j,
        None => spectrum_bounds_of(eig)?,
    };
    check_spectrum_in(eig, j, what)?;
    Ok(j)
}

/// `f(A)` and `G_t(A)` for an operand whose spectrum lies in `j`.
fn function_and_envelope(
    f: &FunctionDescriptor,
    t: PowerTransform,
    eig: &EigenDecomp,
    j: Interval,
) -> Result<(SymMatrix, SymMatrix)> {
    let env = Envelope::new(f, t, j)?;
    let fa = eig.map(|l| f.eval(l.clamp(j.m(), j.big_m())))?;
    let ga = eig.map(|l| Ok(env.at(l)))?;
    Ok((fa, ga))
}

fn eval_at(f: &FunctionDescriptor, a: &SymMatrix) -> Result<SymMatrix> {
    apply_fn(|z| f.eval(z), a)
}

/// `Φ(f(A)) ⪯ Φ(G_t(A)) ⪯ β·I + α·f(Φ(A))`.
pub fn operator_chain(
    f: &FunctionDescriptor,
    a: &SymMatrix,
    phi: &MapDescriptor,
    params: &ChainParams,
) -> Result<ChainReport> {
    phi.validate(a.dim())?;
    let eig = eigendecompose(a)?;
    let j = resolve_interval(&eig, params.interval, "A")?;
    require_power_convex(f, params.t, j)?;

    let (alpha, beta, mode) = match params.alpha {
        AlphaChoice::Unit => (1.0, beta_constant(f, j, 1.0)?, "unit"),
        AlphaChoice::Ratio => (ratio_alpha(f, j)?, 0.0, "ratio"),
        AlphaChoice::Given(alpha) => (alpha, beta_constant(f, j, alpha)?, "given"),
    };

    let (fa, ga) = function_and_envelope(f, params.t, &eig, j)?;
    let phi_a = apply_map(phi, a)?;
    let upper = eval_at(f, &phi_a)?.scale(alpha).shift(beta);
    ChainReport::build(
        "operator",
        Some(mode.into()),
        &["Phi(f(A))", "Phi(G_t(A))", "beta*I + alpha*f(Phi(A))"],
        vec![apply_map(phi, &fa)?, apply_map(phi, &ga)?, upper],
        Constants {
            alpha: Some(alpha),
            beta: Some(beta),
            ..Constants::default()
        },
        Some(j),
        DEFAULT_TOL_SCALE,
    )
}

/// Which closed-form constant bounds the power chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerMode {
    /// Multiplicative: `K(m, M, r)·X^r`.
    RatioK,
    /// Additive: `C(m, M, r)·I + X^r`.
    DifferenceC,
}

/// Admissible `(r, t)` for the power chains: `r > 1` with `1 < 1/t ≤ r`, or
/// `r < 0` with any `0 < t < 1`.
fn check_power_exponents(r: f64, t: PowerTransform) -> Result<()> {
    let t = t.get();
    let ok = if r > 1.0 {
        t < 1.0 && t * r >= 1.0 - 1e-12
    } else {
        r < 0.0 && t < 1.0
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "power chains need r > 1 with 1 < 1/t <= r, or r < 0 with 0 < t < 1; got r = {r}, t = {t}"
        )))
    }
}

fn require_positive_window(j: Interval) -> Result<()> {
    if j.m() <= 0.0 {
        return Err(Error::domain(
            "power chains need a positive spectral window; m",
            j.m(),
        ));
    }
    Ok(())
}

fn power_constant(j: Interval, r: f64, mode: PowerMode) -> Result<Constants> {
    Ok(match mode {
        PowerMode::RatioK => Constants {
            alpha: None,
            beta: None,
            k: Some(kantorovich_k(j, r)?),
            c: None,
        },
        PowerMode::DifferenceC => Constants {
            c: Some(kantorovich_c(j, r)?),
            ..Constants::default()
        },
    })
}

/// `X ↦ K·X^r` or `X ↦ C·I + X^r` applied to `x`.
fn power_bound(x: &SymMatrix, r: f64, constants: &Constants) -> Result<SymMatrix> {
    let xr = apply_fn(|z| FunctionDescriptor::power(r)?.eval(z), x)?;
    Ok(match (constants.k, constants.c) {
        (Some(k), _) => xr.scale(k),
        (_, Some(c)) => xr.shift(c),
        _ => xr,
    })
}

/// `Φ(A^r) ⪯ Φ(G_t(A)) ⪯ K·Φ(A)^r` (or `C·I + Φ(A)^r`).
pub fn power_chain(
    r: f64,
    t: PowerTransform,
    a: &SymMatrix,
    phi: &MapDescriptor,
    interval: Option<Interval>,
    mode: PowerMode,
) -> Result<ChainReport> {
    check_power_exponents(r, t)?;
    phi.validate(a.dim())?;
    let eig = eigendecompose(a)?;
    let j = resolve_interval(&eig, interval, "A")?;
    require_positive_window(j)?;
    let f = FunctionDescriptor::power(r)?;
    require_power_convex(&f, t, j)?;

    let constants = power_constant(j, r, mode)?;
    let (fa, ga) = function_and_envelope(&f, t, &eig, j)?;
    let upper = power_bound(&apply_map(phi, a)?, r, &constants)?;
    let (mode_name, upper_label) = match mode {
        PowerMode::RatioK => ("ratio_k", "K*Phi(A)^r"),
        PowerMode::DifferenceC => ("difference_c", "C*I + Phi(A)^r"),
    };
    ChainReport::build(
        "power",
        Some(mode_name.into()),
        &["Phi(A^r)", "Phi(G_t(A))", upper_label],
        vec![apply_map(phi, &fa)?, apply_map(phi, &ga)?, upper],
        constants,
        Some(j),
        DEFAULT_TOL_SCALE,
    )
}

/// Integrand `t ↦ (w₁ m^(−t) + w₂ M^(−t))^(1/t)` at the eigenvalue `z`,
/// extended to `t = 0` by its limit, the weighted geometric mean
/// `m^(−w₁) M^(−w₂)`.
pub fn kantorovich_integrand(j: Interval, z: f64, t: f64) -> f64 {
    let z = z.clamp(j.m(), j.big_m());
    let (w1, w2) = j.weights(z);
    let (lm, lbig) = (j.m().ln(), j.big_m().ln());
    if t == 0.0 {
        return (-(w1 * lm + w2 * lbig)).exp();
    }
    let s = w1 * (-t * lm).exp() + w2 * (-t * lbig).exp();
    (s.ln() / t).exp()
}

/// `Φ(A⁻¹) ⪯ Φ(∫₀¹ G_t(A) dt) ⪯ ((M + m)²/(4Mm))·Φ(A)⁻¹`, the integral taken
/// eigenvalue by eigenvalue.
pub fn kantorovich_integral_chain(
    a: &SymMatrix,
    phi: &MapDescriptor,
    interval: Option<Interval>,
    cfg: &QuadratureConfig,
) -> Result<ChainReport> {
    phi.validate(a.dim())?;
    let eig = eigendecompose(a)?;
    if eig.min() <= 0.0 {
        return Err(Error::domain(
            "non-positive spectrum; smallest eigenvalue",
            eig.min(),
        ));
    }
    let j = resolve_interval(&eig, interval, "A")?;
    require_positive_window(j)?;
    let quad = cfg.prepare()?;

    let inv = eig.map(|l| Ok(1.0 / l))?;
    let integrated = eig.map(|l| quad.integrate(|t| kantorovich_integrand(j, l, t), 0.0, 1.0))?;
    let (m, big_m) = (j.m(), j.big_m());
    let k = (big_m + m).powi(2) / (4.0 * big_m * m);
    let phi_a = apply_map(phi, a)?;
    let upper = apply_fn(
        |z| {
            if z > 0.0 {
                Ok(k / z)
            } else {
                Err(Error::domain("Phi(A) not invertible", z))
            }
        },
        &phi_a,
    )?;
    let tol = cfg
        .abs_tol()
        .map_or(QUADRATURE_TOL_FLOOR, |q| QUADRATURE_TOL_FLOOR.max(10.0 * q));
    ChainReport::build(
        "kantorovich",
        None,
        &["Phi(A^-1)", "Phi(int_0^1 G_t(A) dt)", "K*Phi(A)^-1"],
        vec![apply_map(phi, &inv)?, apply_map(phi, &integrated)?, upper],
        Constants {
            k: Some(k),
            ..Constants::default()
        },
        Some(j),
        tol,
    )
}

/// Checks `A ⪯ B`, returning the smallest eigenvalue of `B − A` on failure.
fn require_ordered(a: &SymMatrix, b: &SymMatrix) -> Result<()> {
    let v = loewner_leq(a, b, DEFAULT_TOL_SCALE)?;
    if !v.holds {
        return Err(Error::NotOrdered {
            gap: v.min_gap_eigenvalue,
        });
    }
    Ok(())
}

fn hull_interval(ea: &EigenDecomp, eb: &EigenDecomp, given: Option<Interval>) -> Result<Interval> {
    let j = match given {
        Some(j) => j,
        None => {
            let (lo, hi) = (ea.min().min(eb.min()), ea.max().max(eb.max()));
            if hi - lo <= 1e-12 * (1.0 + hi.abs()) {
                return Err(Error::DegenerateSpectrum { min: lo, max: hi });
            }
            Interval::new(lo, hi)?
        }
    };
    check_spectrum_in(ea, j, "A")?;
    check_spectrum_in(eb, j, "B")?;
    Ok(j)
}

/// Shared body of the Furuta-type chains once `alpha` and `beta` are fixed.
#[allow(clippy::too_many_arguments)]
fn furuta_terms(
    f: &FunctionDescriptor,
    t: PowerTransform,
    a: &SymMatrix,
    b: &SymMatrix,
    j: Interval,
    upper_of: impl Fn(&SymMatrix) -> Result<SymMatrix>,
    constants: Constants,
    mode: &str,
) -> Result<ChainReport> {
    // Increasing f: f(A) ⪯ G_t(A) ⪯ bound(B). Decreasing f reverses the
    // order of the arguments: f(B) ⪯ G_t(B) ⪯ bound(A).
    let (lower_op, upper_op, labels, orientation) = match f.monotonicity(j)? {
        Some(true) => (a, b, ["f(A)", "G_t(A)", "bound(f(B))"], "increasing"),
        Some(false) => (b, a, ["f(B)", "G_t(B)", "bound(f(A))"], "decreasing"),
        None => {
            return Err(Error::Precondition(format!("{f} is not monotone on {j}")));
        }
    };
    let eig = eigendecompose(lower_op)?;
    let (fl, gl) = function_and_envelope(f, t, &eig, j)?;
    let upper = upper_of(upper_op)?;
    ChainReport::build(
        "furuta",
        Some(format!("{mode}/{orientation}")),
        &labels,
        vec![fl, gl, upper],
        constants,
        Some(j),
        DEFAULT_TOL_SCALE,
    )
}

/// For `A ⪯ B`: `f(A) ⪯ G_t(A) ⪯ β·I + α·f(B)` with `β` the maximal gap
/// between the chord and `α f`. For decreasing `f` the roles of `A` and
/// `B` are exchanged.
pub fn furuta_chain(
    f: &FunctionDescriptor,
    t: PowerTransform,
    a: &SymMatrix,
    b: &SymMatrix,
    interval: Option<Interval>,
    alpha: f64,
) -> Result<ChainReport> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    require_ordered(a, b)?;
    let (ea, eb) = (eigendecompose(a)?, eigendecompose(b)?);
    let j = hull_interval(&ea, &eb, interval)?;
    require_power_convex(f, t, j)?;
    let beta = beta_constant(f, j, alpha)?;
    furuta_terms(
        f,
        t,
        a,
        b,
        j,
        |x| Ok(eval_at(f, x)?.scale(alpha).shift(beta)),
        Constants {
            alpha: Some(alpha),
            beta: Some(beta),
            ..Constants::default()
        },
        "general",
    )
}

/// Power specialization of [`furuta_chain`] with `(α, β) = (K, 0)` or `(1, C)`.
pub fn furuta_power_chain(
    r: f64,
    t: PowerTransform,
    a: &SymMatrix,
    b: &SymMatrix,
    interval: Option<Interval>,
    mode: PowerMode,
) -> Result<ChainReport> {
    check_power_exponents(r, t)?;
    require_ordered(a, b)?;
    let (ea, eb) = (eigendecompose(a)?, eigendecompose(b)?);
    let j = hull_interval(&ea, &eb, interval)?;
    require_positive_window(j)?;
    let f = FunctionDescriptor::power(r)?;
    require_power_convex(&f, t, j)?;
    let constants = power_constant(j, r, mode)?;
    let mut reported = constants;
    match mode {
        PowerMode::RatioK => {
            reported.alpha = constants.k;
            reported.beta = Some(0.0);
        }
        PowerMode::DifferenceC => {
            reported.alpha = Some(1.0);
            reported.beta = constants.c;
        }
    }
    let mode_name = match mode {
        PowerMode::RatioK => "ratio_k",
        PowerMode::DifferenceC => "difference_c",
    };
    furuta_terms(
        &f,
        t,
        a,
        b,
        j,
        |x| power_bound(x, r, &constants),
        reported,
        mode_name,
    )
}

/// Checks `f(⟨Ax, x⟩) ≤ ⟨f(A)x, x⟩` for `x` and `trials` further random unit
/// vectors drawn from `seed`.
pub fn mond_pecaric_check(
    f: &FunctionDescriptor,
    a: &SymMatrix,
    x: &[f64],
    trials: usize,
    seed: u64,
) -> Result<bool> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "x must be a unit vector, has norm {norm}"
        )));
    }
    let eig = eigendecompose(a)?;
    if let Ok(j) = spectrum_bounds_of(&eig) {
        f.check_interval(j)?;
        if !is_power_convex(f, PowerTransform::new(1.0)?, j, CONVEXITY_GRID)? {
            return Err(Error::Precondition(format!("{f} is not convex on {j}")));
        }
    }
    let fa = eig.map(|l| f.eval(l))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probes = std::iter::once(x.to_vec())
        .chain((0..trials).map(|_| random_unit_vector(a.dim(), &mut rng)));
    for v in probes {
        let lhs = f.eval(a.quadratic_form(&v)?)?;
        let rhs = fa.quadratic_form(&v)?;
        if lhs > rhs + 1e-9 * rhs.abs().max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verdict for `f(Φ(A)) ⪯ Φ(f(A))`; only meaningful for operator convex `f`.
pub fn dcj_check(
    f: &FunctionDescriptor,
    a: &SymMatrix,
    phi: &MapDescriptor,
) -> Result<LoewnerVerdict> {
    if !f.declared_operator_convex() {
        return Err(Error::Precondition(format!(
            "{f} is not declared operator convex; convexity alone does not suffice"
        )));
    }
    phi.validate(a.dim())?;
    let lhs = eval_at(f, &apply_map(phi, a)?)?;
    let rhs = apply_map(phi, &eval_at(f, a)?)?;
    loewner_leq(&lhs, &rhs, DEFAULT_TOL_SCALE)
}

/// `(1/α)Φ(f(A)) ⪯ f(Φ(A)) ⪯ αΦ(f(A))` with `α` the chord-to-function ratio.
pub fn theorem_c_chain(
    f: &FunctionDescriptor,
    a: &SymMatrix,
    phi: &MapDescriptor,
    interval: Option<Interval>,
) -> Result<ChainReport> {
    phi.validate(a.dim())?;
    let eig = eigendecompose(a)?;
    let j = resolve_interval(&eig, interval, "A")?;
    require_power_convex(f, PowerTransform::new(1.0)?, j)?;
    let alpha = ratio_alpha(f, j)?;
    let phi_fa = apply_map(phi, &eig.map(|l| f.eval(l.clamp(j.m(), j.big_m())))?)?;
    let f_phi_a = eval_at(f, &apply_map(phi, a)?)?;
    ChainReport::build(
        "theorem_c",
        None,
        &["Phi(f(A))/alpha", "f(Phi(A))", "alpha*Phi(f(A))"],
        vec![phi_fa.scale(1.0 / alpha), f_phi_a, phi_fa.scale(alpha)],
        Constants {
            alpha: Some(alpha),
            ..Constants::default()
        },
        Some(j),
        DEFAULT_TOL_SCALE,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmat::Dense;

    fn p(r: f64) -> FunctionDescriptor {
        FunctionDescriptor::power(r).unwrap()
    }

    fn t(x: f64) -> PowerTransform {
        PowerTransform::new(x).unwrap()
    }

    fn iv(m: f64, big_m: f64) -> Interval {
        Interval::new(m, big_m).unwrap()
    }

    fn example_a() -> SymMatrix {
        SymMatrix::from_rows(&[vec![2.0, -1.0], vec![-1.0, 3.0]]).unwrap()
    }

    fn gl64() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn assert_scalars(report: &ChainReport, want: &[f64], tol: f64) {
        let got = report.scalar_terms().expect("scalar chain");
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= tol, "got {got:?}, want {want:?}");
        }
    }

    #[test]
    fn middle_term_examples() {
        for z in [1.0, 1.3, 2.0] {
            let g = middle_term_scalar(&p(2.0), t(0.5), iv(1.0, 2.0), z).unwrap();
            assert!((g - z * z).abs() < 1e-14);
        }
        // Oracle: direct arithmetic with 1/sqrt(m), 1/sqrt(M).
        let (m, big_m) = (1.35f64, 3.8f64);
        let oracle = |z: f64| {
            ((big_m - z) / (big_m - m) / m.sqrt() + (z - m) / (big_m - m) / big_m.sqrt()).powi(2)
        };
        let s5 = 5f64.sqrt();
        for z in [(5.0 + s5) / 2.0, (5.0 - s5) / 2.0] {
            let g = middle_term_scalar(&p(-1.0), t(0.5), iv(m, big_m), z).unwrap();
            assert!((g - oracle(z)).abs() < 1e-15);
        }
        let hi = middle_term_scalar(&p(-1.0), t(0.5), iv(m, big_m), (5.0 + s5) / 2.0).unwrap();
        let lo = middle_term_scalar(&p(-1.0), t(0.5), iv(m, big_m), (5.0 - s5) / 2.0).unwrap();
        assert!((hi - 0.290_317_9).abs() < 1e-7, "{hi}");
        assert!((lo - 0.732_953_0).abs() < 1e-7, "{lo}");
        assert!(middle_term_scalar(&p(-1.0), t(0.5), iv(m, big_m), 4.0).is_err());
    }

    #[test]
    fn pointwise_examples() {
        let e = std::f64::consts::E;
        let r =
            pointwise_refinement(&FunctionDescriptor::exp(), t(0.5), iv(0.0, 1.0), 0.25).unwrap();
        let g = |z: f64| ((1.0 - z) + z * e.sqrt()).powi(2);
        assert!((r.lower - 0.75f64.exp()).abs() < 1e-14);
        assert!((r.middle - (g(0.25) + g(0.75) - 0.25f64.exp())).abs() < 1e-14);
        assert!((r.upper - (1.0 + e - 0.25f64.exp())).abs() < 1e-14);
        assert!(r.lower < r.middle && r.middle < r.upper);

        let r = pointwise_refinement(&p(1.0), t(1.0), iv(1.0, 2.0), 1.5).unwrap();
        assert!(
            (r.lower - 1.5).abs() < 1e-15
                && (r.middle - 1.5).abs() < 1e-14
                && (r.upper - 1.5).abs() < 1e-15
        );

        let r = pointwise_refinement(&p(2.0), t(0.5), iv(1.0, 2.0), 1.0).unwrap();
        assert!(
            (r.lower - 4.0).abs() < 1e-14
                && (r.middle - 4.0).abs() < 1e-14
                && (r.upper - 4.0).abs() < 1e-14
        );
    }

    #[test]
    fn pointwise_fails_for_concave_transform() {
        // z^(1/2) is concave, so the middle term drops below the lower one.
        let r = pointwise_refinement(&p(1.0), t(0.5), iv(1.0, 2.0), 1.5).unwrap();
        assert!(!r.is_ordered(1e-12));
    }

    #[test]
    fn hh_examples() {
        let e = std::f64::consts::E;
        let c = e.sqrt() - 1.0;
        let report = hh_chain(&FunctionDescriptor::exp(), t(0.5), iv(0.0, 1.0), &gl64()).unwrap();
        assert_scalars(
            &report,
            &[
                e.sqrt(),
                e - 1.0,
                ((1.0 + c).powi(3) - 1.0) / (3.0 * c),
                (1.0 + e) / 2.0,
            ],
            1e-12,
        );
        assert!(report.passed);

        let report = hh_chain(&p(2.0), t(0.5), iv(1.0, 2.0), &gl64()).unwrap();
        assert_scalars(&report, &[2.25, 7.0 / 3.0, 7.0 / 3.0, 2.5], 1e-12);
        assert!(report.passed);

        let report = hh_chain(&p(1.0), t(1.0), iv(0.5, 2.0), &gl64()).unwrap();
        assert_scalars(&report, &[1.25; 4], 1e-12);
    }

    #[test]
    fn hh_rejects_nonconvex_transform() {
        assert!(matches!(
            hh_chain(&p(1.0), t(0.5), iv(0.5, 2.0), &gl64()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn operator_example_ratio_mode() {
        let params = ChainParams::new(t(0.5), AlphaChoice::Ratio).with_interval(iv(1.35, 3.8));
        let report = operator_chain(
            &p(-1.0),
            &example_a(),
            &MapDescriptor::NormalizedTrace,
            &params,
        )
        .unwrap();
        let terms = report.scalar_terms().unwrap();
        assert!((terms[0] - 0.5).abs() < 1e-12);
        assert!((terms[1] - 0.511_635_443).abs() < 1e-8, "{terms:?}");
        assert!((terms[2] - 0.517_007_797).abs() < 1e-8, "{terms:?}");
        assert!(report.passed);
        assert_eq!(report.constants.beta, Some(0.0));
    }

    #[test]
    fn operator_affine_collapses() {
        let params = ChainParams::new(t(1.0), AlphaChoice::Unit);
        let report = operator_chain(
            &p(1.0),
            &example_a(),
            &MapDescriptor::NormalizedTrace,
            &params,
        )
        .unwrap();
        assert_scalars(&report, &[2.5, 2.5, 2.5], 1e-12);
        assert!(report.constants.beta.unwrap().abs() < 1e-12);
    }

    #[test]
    fn operator_pinching_example() {
        let params = ChainParams::new(t(0.5), AlphaChoice::Unit).with_interval(iv(1.0, 2.0));
        let phi = MapDescriptor::Pinching { blocks: vec![1, 1] };
        let report = operator_chain(&p(2.0), &SymMatrix::diag(&[1.0, 2.0]), &phi, &params).unwrap();
        let want = SymMatrix::diag(&[1.0, 4.0]);
        assert!(report.terms[0].max_abs_diff(&want) < 1e-13);
        assert!(report.terms[1].max_abs_diff(&want) < 1e-13);
        assert!(report.terms[2].max_abs_diff(&want.shift(0.25)) < 1e-12);
        assert!(report.passed);
    }

    #[test]
    fn operator_rejects_spectrum_outside_window() {
        let params = ChainParams::new(t(0.5), AlphaChoice::Unit).with_interval(iv(1.5, 3.8));
        assert!(matches!(
            operator_chain(
                &p(-1.0),
                &example_a(),
                &MapDescriptor::NormalizedTrace,
                &params
            ),
            Err(Error::Precondition(_))
        ));
        let params = ChainParams::new(t(0.5), AlphaChoice::Unit);
        assert!(matches!(
            operator_chain(
                &p(-1.0),
                &SymMatrix::scalar(2, 2.0),
                &MapDescriptor::NormalizedTrace,
                &params
            ),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }

    #[test]
    fn power_examples() {
        let j = iv(1.35, 3.8);
        let report = power_chain(
            -1.0,
            t(0.5),
            &example_a(),
            &MapDescriptor::NormalizedTrace,
            Some(j),
            PowerMode::RatioK,
        )
        .unwrap();
        let terms = report.scalar_terms().unwrap();
        assert!((terms[0] - 0.5).abs() < 1e-12);
        assert!((0.505..=0.515).contains(&terms[1]));
        assert!((0.5165..=0.5175).contains(&terms[2]));
        assert!(report.passed);

        let d = SymMatrix::diag(&[1.0, 2.0]);
        let j = iv(1.0, 2.0);
        let report = power_chain(
            2.0,
            t(0.5),
            &d,
            &MapDescriptor::NormalizedTrace,
            Some(j),
            PowerMode::RatioK,
        )
        .unwrap();
        assert_scalars(&report, &[2.5, 2.5, 2.53125], 1e-12);
        assert!(report.passed);
        let report = power_chain(
            2.0,
            t(0.5),
            &d,
            &MapDescriptor::NormalizedTrace,
            Some(j),
            PowerMode::DifferenceC,
        )
        .unwrap();
        assert_scalars(&report, &[2.5, 2.5, 2.5], 1e-12);
        assert!(report.passed);
    }

    #[test]
    fn power_rejects_bad_exponents() {
        let d = SymMatrix::diag(&[1.0, 2.0]);
        let phi = MapDescriptor::NormalizedTrace;
        // 1/t = 4 > r = 2
        assert!(matches!(
            power_chain(2.0, t(0.25), &d, &phi, None, PowerMode::RatioK),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            power_chain(0.5, t(0.5), &d, &phi, None, PowerMode::RatioK),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            power_chain(-1.0, t(1.0), &d, &phi, None, PowerMode::RatioK),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn kantorovich_integrand_limit() {
        let j = iv(1.35, 3.8);
        let z = 2.2;
        let lim = kantorovich_integrand(j, z, 0.0);
        let near = kantorovich_integrand(j, z, 1e-7);
        assert!((lim - near).abs() < 1e-6 * lim);
        // t = 1 is the chord of 1/z.
        let (w1, w2) = j.weights(z);
        assert!((kantorovich_integrand(j, z, 1.0) - (w1 / 1.35 + w2 / 3.8)).abs() < 1e-15);
    }

    #[test]
    fn kantorovich_examples() {
        let d = SymMatrix::diag(&[1.0, 2.0]);
        let report = kantorovich_integral_chain(
            &d,
            &MapDescriptor::NormalizedTrace,
            Some(iv(1.0, 2.0)),
            &gl64(),
        )
        .unwrap();
        let terms = report.scalar_terms().unwrap();
        assert!((terms[0] - 0.75).abs() < 1e-14);
        assert!((terms[2] - 0.75).abs() < 1e-14);
        assert!((terms[1] - 0.75).abs() < 1e-10, "{terms:?}");
        assert!(report.min_gap() >= -1e-8);
        assert!(report.passed);

        let report = kantorovich_integral_chain(
            &example_a(),
            &MapDescriptor::NormalizedTrace,
            Some(iv(1.35, 3.8)),
            &gl64(),
        )
        .unwrap();
        let terms = report.scalar_terms().unwrap();
        assert!((terms[0] - 0.5).abs() < 1e-12);
        assert!((terms[2] - 0.517_007_797).abs() < 1e-8);
        assert!(terms[0] < terms[1] && terms[1] < terms[2], "{terms:?}");

        assert!(matches!(
            kantorovich_integral_chain(
                &SymMatrix::scalar(2, 3.0),
                &MapDescriptor::NormalizedTrace,
                None,
                &gl64()
            ),
            Err(Error::DegenerateSpectrum { .. })
        ));
        assert!(matches!(
            kantorovich_integral_chain(
                &SymMatrix::diag(&[-1.0, 2.0]),
                &MapDescriptor::NormalizedTrace,
                None,
                &gl64()
            ),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn kantorovich_gauss_matches_simpson() {
        let simpson = QuadratureConfig::AdaptiveSimpson {
            abs_tol: 1e-11,
            max_depth: 30,
        };
        let a = example_a();
        let j = Some(iv(1.35, 3.8));
        let g =
            kantorovich_integral_chain(&a, &MapDescriptor::NormalizedTrace, j, &gl64()).unwrap();
        let s =
            kantorovich_integral_chain(&a, &MapDescriptor::NormalizedTrace, j, &simpson).unwrap();
        assert!(g.terms[1].max_abs_diff(&s.terms[1]) < 1e-9);
    }

    #[test]
    fn furuta_examples() {
        let a = SymMatrix::diag(&[1.0, 2.0]);
        let b = SymMatrix::diag(&[2.0, 3.0]);
        let j = iv(1.0, 3.0);
        let k = kantorovich_k(j, 2.0).unwrap();
        assert!((k - 4.0 / 3.0).abs() < 1e-14);
        let report = furuta_chain(&p(2.0), t(0.5), &a, &b, Some(j), k).unwrap();
        let want = SymMatrix::diag(&[1.0, 4.0]);
        assert!(report.terms[0].max_abs_diff(&want) < 1e-13);
        assert!(report.terms[1].max_abs_diff(&want) < 1e-13);
        assert!(report.terms[2].max_abs_diff(&SymMatrix::diag(&[16.0 / 3.0, 12.0])) < 1e-9);
        assert!(report.constants.beta.unwrap().abs() < 1e-12);
        assert!(report.passed);

        let report = furuta_power_chain(2.0, t(0.5), &a, &b, Some(j), PowerMode::RatioK).unwrap();
        assert!(report.terms[2].max_abs_diff(&SymMatrix::diag(&[16.0 / 3.0, 12.0])) < 1e-13);

        let report = furuta_chain(&p(1.0), t(1.0), &a, &b, None, 1.0).unwrap();
        assert!(report.terms[0].max_abs_diff(&a) < 1e-14);
        assert!(report.terms[1].max_abs_diff(&a) < 1e-14);
        assert!(report.constants.beta.unwrap().abs() < 1e-12);
        assert!(report.passed);

        let a = SymMatrix::diag(&[0.5, 2.0]);
        assert!(matches!(
            furuta_chain(&p(2.0), t(0.5), &a, &b, Some(j), k),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn furuta_rejects_unordered_pair() {
        let a = SymMatrix::diag(&[0.0, 2.0]).shift(1.0);
        let b = SymMatrix::diag(&[1.0, 1.0]).shift(1.0);
        match furuta_chain(&p(2.0), t(0.5), &a, &b, None, 1.0) {
            Err(Error::NotOrdered { gap }) => assert!((gap + 1.0).abs() < 1e-14),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn literal_reciprocal_furuta_is_false() {
        // A ⪯ B but A⁻¹ ⪯ K·B⁻¹ fails: the reciprocal is decreasing.
        let a = SymMatrix::diag(&[1.0, 1.1]);
        let b = SymMatrix::diag(&[2.0, 2.0]);
        let j = iv(1.0, 2.0);
        let k = kantorovich_k(j, -1.0).unwrap();
        let inv = |x: &SymMatrix| apply_fn(|z| Ok(1.0 / z), x).unwrap();
        let literal = loewner_leq(&inv(&a), &inv(&b).scale(k), DEFAULT_TOL_SCALE).unwrap();
        assert!(!literal.holds);
        assert!((literal.min_gap_eigenvalue + 0.4375).abs() < 1e-14);

        // The builder orients the chain by monotonicity and passes.
        let report = furuta_power_chain(-1.0, t(0.5), &a, &b, Some(j), PowerMode::RatioK).unwrap();
        assert_eq!(report.labels[0], "f(B)");
        assert!(report.passed);
    }

    #[test]
    fn mond_pecaric_examples() {
        let d = SymMatrix::diag(&[1.0, 2.0]);
        let x = [1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()];
        assert!(mond_pecaric_check(&p(2.0), &d, &x, 0, 0).unwrap());
        // Equality in the affine case.
        let a = example_a();
        let lhs = a.quadratic_form(&x).unwrap();
        let rhs = apply_fn(|z| p(1.0).eval(z), &a)
            .unwrap()
            .quadratic_form(&x)
            .unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
        assert!(mond_pecaric_check(&p(1.0), &a, &x, 10, 1).unwrap());
        assert!(mond_pecaric_check(&p(-1.0), &a, &x, 100, 2).unwrap());
        assert!(matches!(
            mond_pecaric_check(&p(2.0), &d, &[1.0, 1.0], 0, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn dcj_examples() {
        let v = dcj_check(&p(2.0), &example_a(), &MapDescriptor::NormalizedTrace).unwrap();
        // f(Φ(A)) = 2.5² = 6.25; Φ(A²) = tr([[5,-5],[-5,10]])/2 = 7.5.
        assert!(v.holds);
        assert!((v.min_gap_eigenvalue - 1.25).abs() < 1e-13);

        let v = dcj_check(&p(1.0), &example_a(), &MapDescriptor::NormalizedTrace).unwrap();
        assert!(v.min_gap_eigenvalue.abs() < 1e-14);

        let v = dcj_check(
            &p(-1.0),
            &SymMatrix::diag(&[1.0, 4.0]),
            &MapDescriptor::Pinching { blocks: vec![1, 1] },
        )
        .unwrap();
        assert!(v.holds && v.min_gap_eigenvalue.abs() < 1e-15);

        assert!(matches!(
            dcj_check(
                &FunctionDescriptor::exp(),
                &example_a(),
                &MapDescriptor::NormalizedTrace
            ),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn theorem_c_examples() {
        let report = theorem_c_chain(
            &p(-1.0),
            &example_a(),
            &MapDescriptor::NormalizedTrace,
            Some(iv(1.35, 3.8)),
        )
        .unwrap();
        let alpha = report.constants.alpha.unwrap();
        assert!((alpha - 1.292_519_5).abs() < 1e-6);
        assert_scalars(&report, &[0.5 / alpha, 0.4, 0.5 * alpha], 1e-12);
        assert!(report.passed);

        let report =
            theorem_c_chain(&p(1.0), &example_a(), &MapDescriptor::NormalizedTrace, None).unwrap();
        assert!((report.constants.alpha.unwrap() - 1.0).abs() < 1e-12);
        assert_scalars(&report, &[2.5, 2.5, 2.5], 1e-12);

        let report = theorem_c_chain(
            &p(2.0),
            &SymMatrix::diag(&[1.0, 2.0]),
            &MapDescriptor::NormalizedTrace,
            Some(iv(1.0, 2.0)),
        )
        .unwrap();
        assert_scalars(&report, &[2.5 / 1.125, 2.25, 2.5 * 1.125], 1e-12);
        assert!(report.passed);
    }

    #[test]
    fn scalar_and_matrix_paths_agree() {
        // 1×1 input: every term is plain arithmetic on the single eigenvalue.
        let a = SymMatrix::diag(&[2.2]);
        let j = iv(1.0, 3.0);
        let f = p(-1.0);
        let params = ChainParams::new(t(0.5), AlphaChoice::Unit).with_interval(j);
        let report = operator_chain(&f, &a, &MapDescriptor::NormalizedTrace, &params).unwrap();
        let beta = beta_constant(&f, j, 1.0).unwrap();
        let g = middle_term_scalar(&f, t(0.5), j, 2.2).unwrap();
        assert_scalars(&report, &[1.0 / 2.2, g, beta + 1.0 / 2.2], 1e-12);
    }

    #[test]
    fn report_json_shape() {
        let report = hh_chain(&FunctionDescriptor::exp(), t(0.5), iv(0.0, 1.0), &gl64()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(v["labels"].as_array().unwrap().len(), 4);
        assert_eq!(v["terms"].as_array().unwrap().len(), 4);
        assert_eq!(v["gaps"].as_array().unwrap().len(), 3);
        assert_eq!(v["passed"], serde_json::Value::Bool(true));
        assert!(v["tolerance"].is_number());
        assert_eq!(v["interval"]["M"], serde_json::json!(1.0));
    }

    #[test]
    fn tolerance_rescaling() {
        let report = hh_chain(&p(2.0), t(0.5), iv(1.0, 2.0), &gl64()).unwrap();
        let strict = report.clone().with_tolerance(0.0).unwrap();
        assert_eq!(strict.tol_scale, 0.0);
        assert_eq!(strict.links.len(), 3);
        let _ = Dense::identity(1);
    }
}
