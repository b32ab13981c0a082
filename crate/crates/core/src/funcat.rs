//! Scalar function catalog and the constants built from it.
//!
//! Every function here is strictly positive on the intervals it is used on.
//! The constants (chord slope and intercept, the additive gap `beta`, the
//! ratio `alpha`, and the closed-form Kantorovich constants `K` and `C`)
//! all depend on the spectral window `[m, M]` actually in use.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimize::{maximize, Maximum};

/// Closed spectral window `[m, M]` with `m < M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IntervalRepr", into = "IntervalRepr")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    m: f64,
    #[serde(rename = "M")]
    big_m: f64,
}

impl TryFrom<IntervalRepr> for Interval {
    type Error = Error;
    fn try_from(r: IntervalRepr) -> Result<Self> {
        Interval::new(r.m, r.big_m)
    }
}

impl From<Interval> for IntervalRepr {
    fn from(j: Interval) -> Self {
        IntervalRepr {
            m: j.lo,
            big_m: j.hi,
        }
    }
}

impl Interval {
    pub fn new(m: f64, big_m: f64) -> Result<Self> {
        if !(m.is_finite() && big_m.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "interval endpoints must be finite, got [{m}, {big_m}]"
            )));
        }
        if m >= big_m {
            return Err(Error::InvalidParameter(format!(
                "interval requires m < M, got [{m}, {big_m}]"
            )));
        }
        Ok(Interval { lo: m, hi: big_m })
    }

    /// Lower end `m`.
    pub fn m(&self) -> f64 {
        self.lo
    }

    /// Upper end `M`.
    pub fn big_m(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, z: f64) -> bool {
        z >= self.lo && z <= self.hi
    }

    /// Barycentric weights `((M - z)/(M - m), (z - m)/(M - m))` of `z`.
    pub fn weights(&self, z: f64) -> (f64, f64) {
        let w = self.width();
        ((self.hi - z) / w, (z - self.lo) / w)
    }

    /// `n` equally spaced points including both ends (`n >= 2`).
    pub fn grid(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let h = self.width() / (n - 1) as f64;
        (0..n).map(move |i| {
            if i + 1 == n {
                self.hi
            } else {
                self.lo + h * i as f64
            }
        })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl FromStr for Interval {
    type Err = Error;

    /// Parses `"m,M"`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("interval must be 'm,M', got '{s}'")))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad interval endpoint '{x}': {e}")))
        };
        Interval::new(parse(a)?, parse(b)?)
    }
}

/// Exponent `t` applied to `f` before forming the chord; `0 < t <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PowerTransform(f64);

impl PowerTransform {
    pub fn new(t: f64) -> Result<Self> {
        if t > 0.0 && t <= 1.0 {
            Ok(PowerTransform(t))
        } else {
            Err(Error::InvalidParameter(format!(
                "power transform needs 0 < t <= 1, got {t}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PowerTransform {
    type Error = Error;
    fn try_from(t: f64) -> Result<Self> {
        PowerTransform::new(t)
    }
}

impl From<PowerTransform> for f64 {
    fn from(t: PowerTransform) -> f64 {
        t.0
    }
}

/// Shape of a catalog function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FunctionKind {
    /// `z^r`
    Power { r: f64 },
    /// `e^z`
    Exp,
    /// `scale * z^r + shift` with `scale > 0`, `shift >= 0`.
    AffinePower { scale: f64, shift: f64, r: f64 },
}

/// A positive scalar function together with its operator-convexity flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionRepr", into = "FunctionRepr")]
pub struct FunctionDescriptor {
    kind: FunctionKind,
    declared_operator_convex: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum FunctionRepr {
    Power { r: f64 },
    Exp,
    AffinePower { scale: f64, shift: f64, r: f64 },
}

impl TryFrom<FunctionRepr> for FunctionDescriptor {
    type Error = Error;
    fn try_from(r: FunctionRepr) -> Result<Self> {
        match r {
            FunctionRepr::Power { r } => FunctionDescriptor::power(r),
            FunctionRepr::Exp => Ok(FunctionDescriptor::exp()),
            FunctionRepr::AffinePower { scale, shift, r } => {
                FunctionDescriptor::affine_power(scale, shift, r)
            }
        }
    }
}

impl From<FunctionDescriptor> for FunctionRepr {
    fn from(f: FunctionDescriptor) -> Self {
        match f.kind {
            FunctionKind::Power { r } => FunctionRepr::Power { r },
            FunctionKind::Exp => FunctionRepr::Exp,
            FunctionKind::AffinePower { scale, shift, r } => {
                FunctionRepr::AffinePower { scale, shift, r }
            }
        }
    }
}

/// `z^r` is operator convex on `(0, inf)` exactly for these exponents.
fn power_is_operator_convex(r: f64) -> bool {
    (-1.0..=0.0).contains(&r) || (1.0..=2.0).contains(&r)
}

impl FunctionDescriptor {
    pub fn power(r: f64) -> Result<Self> {
        if !r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "power exponent must be finite, got {r}"
            )));
        }
        Ok(FunctionDescriptor {
            kind: FunctionKind::Power { r },
            declared_operator_convex: power_is_operator_convex(r),
        })
    }

    pub fn exp() -> Self {
        FunctionDescriptor {
            kind: FunctionKind::Exp,
            declared_operator_convex: false,
        }
    }

    pub fn affine_power(scale: f64, shift: f64, r: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite())
            || !(shift >= 0.0 && shift.is_finite())
            || !r.is_finite()
        {
            return Err(Error::InvalidParameter(format!(
                "affine power needs scale > 0, shift >= 0, finite r; got scale={scale}, shift={shift}, r={r}"
            )));
        }
        Ok(FunctionDescriptor {
            kind: FunctionKind::AffinePower { scale, shift, r },
            // Positive scaling and adding a constant preserve operator convexity.
            declared_operator_convex: power_is_operator_convex(r),
        })
    }

    pub fn kind(&self) -> FunctionKind {
        self.kind
    }

    pub fn declared_operator_convex(&self) -> bool {
        self.declared_operator_convex
    }

    /// The exponent, for power-type kinds.
    fn exponent(&self) -> Option<f64> {
        match self.kind {
            FunctionKind::Power { r } | FunctionKind::AffinePower { r, .. } => Some(r),
            FunctionKind::Exp => None,
        }
    }

    /// Whether evaluation needs `z > 0` (negative or fractional exponents).
    pub fn requires_positive(&self) -> bool {
        self.exponent().is_some_and(|r| r < 0.0 || r.fract() != 0.0)
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        if self.requires_positive() && z <= 0.0 {
            return Err(Error::domain(
                format!("{self} needs a positive argument"),
                z,
            ));
        }
        let v = match self.kind {
            FunctionKind::Power { r } => pow(z, r),
            FunctionKind::Exp => z.exp(),
            FunctionKind::AffinePower { scale, shift, r } => scale * pow(z, r) + shift,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::domain(format!("{self} is not finite"), z))
        }
    }

    /// Checks that `f` can be evaluated and is strictly positive at both ends
    /// of `j` (and hence, for the catalog, on all of `j`).
    pub fn check_interval(&self, j: Interval) -> Result<()> {
        if self.requires_positive() && j.m() <= 0.0 {
            return Err(Error::domain(format!("{self} needs m > 0"), j.m()));
        }
        for z in [j.m(), j.big_m()] {
            if self.eval(z)? <= 0.0 {
                return Err(Error::domain(format!("{self} is not positive"), z));
            }
        }
        // Even powers vanish at 0, which may sit inside the window.
        if j.contains(0.0) && self.eval(0.0)? <= 0.0 {
            return Err(Error::domain(format!("{self} is not positive"), 0.0));
        }
        Ok(())
    }

    /// Sampled monotonicity on `j`: `Some(true)` increasing, `Some(false)`
    /// decreasing, `None` if neither.
    pub fn monotonicity(&self, j: Interval) -> Result<Option<bool>> {
        let vals = j
            .grid(257)
            .map(|z| self.eval(z))
            .collect::<Result<Vec<_>>>()?;
        let inc = vals.windows(2).all(|w| w[1] > w[0]);
        let dec = vals.windows(2).all(|w| w[1] < w[0]);
        Ok(match (inc, dec) {
            (true, _) => Some(true),
            (_, true) => Some(false),
            _ => None,
        })
    }

    /// The standard catalog used by sweeps and property tests.
    pub fn catalog() -> Vec<FunctionDescriptor> {
        let p = |r| FunctionDescriptor::power(r).expect("finite exponent");
        vec![
            p(-1.0),
            p(-2.0),
            p(-0.5),
            p(2.0),
            p(3.0),
            p(4.0),
            FunctionDescriptor::exp(),
            FunctionDescriptor::affine_power(2.0, 0.5, -1.0).expect("valid"),
            FunctionDescriptor::affine_power(0.5, 1.0, 2.0).expect("valid"),
        ]
    }
}

fn pow(z: f64, r: f64) -> f64 {
    if r.fract() == 0.0 && r.abs() <= i32::MAX as f64 {
        z.powi(r as i32)
    } else {
        z.powf(r)
    }
}

impl fmt::Display for FunctionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FunctionKind::Power { r } => write!(f, "power:{r}"),
            FunctionKind::Exp => write!(f, "exp"),
            FunctionKind::AffinePower { scale, shift, r } => {
                write!(f, "affine_power:{scale},{shift},{r}")
            }
        }
    }
}

impl FromStr for FunctionDescriptor {
    type Err = Error;

    /// Parses the shorthand `power:R`, `exp`, or `affine_power:SCALE,SHIFT,R`,
    /// or a JSON descriptor.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return Ok(serde_json::from_str(s)?);
        }
        let (head, args) = s.split_once(':').unwrap_or((s, ""));
        let nums = || -> Result<Vec<f64>> {
            args.split(',')
                .map(|x| {
                    x.trim().parse::<f64>().map_err(|e| {
                        Error::Parse(format!("bad number '{x}' in function '{s}': {e}"))
                    })
                })
                .collect()
        };
        match head {
            "exp" if args.is_empty() => Ok(FunctionDescriptor::exp()),
            "power" => match nums()?.as_slice() {
                [r] => FunctionDescriptor::power(*r),
                _ => Err(Error::Parse(format!("expected power:R, got '{s}'"))),
            },
            "affine_power" => match nums()?.as_slice() {
                [scale, shift, r] => FunctionDescriptor::affine_power(*scale, *shift, *r),
                _ => Err(Error::Parse(format!(
                    "expected affine_power:SCALE,SHIFT,R, got '{s}'"
                ))),
            },
            _ => Err(Error::Parse(format!("unknown function '{s}'"))),
        }
    }
}

/// Midpoint-convexity test of `z -> f(z)^t` over all pairs of a uniform grid on `j`.
pub fn is_power_convex(
    f: &FunctionDescriptor,
    t: PowerTransform,
    j: Interval,
    grid_size: usize,
) -> Result<bool> {
    if grid_size < 3 {
        return Err(Error::InvalidParameter(format!(
            "grid_size must be >= 3, got {grid_size}"
        )));
    }
    let t = t.get();
    let pts: Vec<f64> = j.grid(grid_size).collect();
    let g = pts
        .iter()
        .map(|&z| Ok(f.eval(z)?.powf(t)))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..pts.len() {
        for k in (i + 1)..pts.len() {
            let mid = f.eval(0.5 * (pts[i] + pts[k]))?.powf(t);
            let slack = 1e-10 * g[i].abs().max(g[k].abs());
            if mid > 0.5 * (g[i] + g[k]) + slack {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Slope and intercept of the chord of `f` over `[m, M]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChordCoeffs {
    pub a_f: f64,
    pub b_f: f64,
}

impl ChordCoeffs {
    pub fn at(&self, z: f64) -> f64 {
        self.a_f * z + self.b_f
    }
}

pub fn chord_coeffs(f: &FunctionDescriptor, j: Interval) -> Result<ChordCoeffs> {
    let (m, big_m) = (j.m(), j.big_m());
    let (fm, f_big) = (f.eval(m)?, f.eval(big_m)?);
    Ok(ChordCoeffs {
        a_f: (f_big - fm) / (big_m - m),
        b_f: (big_m * fm - m * f_big) / (big_m - m),
    })
}

/// `max_{s in [m, M]} (a_f s + b_f - alpha f(s))`.
pub fn beta_constant(f: &FunctionDescriptor, j: Interval, alpha: f64) -> Result<f64> {
    Ok(beta_maximum(f, j, alpha)?.value)
}

/// Like [`beta_constant`] but also returns the maximizer.
pub fn beta_maximum(f: &FunctionDescriptor, j: Interval, alpha: f64) -> Result<Maximum> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "alpha must be finite, got {alpha}"
        )));
    }
    f.check_interval(j)?;
    let chord = chord_coeffs(f, j)?;
    // check_interval makes eval total on j.
    Ok(maximize(
        |s| chord.at(s) - alpha * f.eval(s).unwrap_or(f64::NAN),
        j.m(),
        j.big_m(),
    ))
}

/// `max_{s in [m, M]} (a_f s + b_f) / f(s)`, the `alpha` for which the
/// additive constant vanishes.
pub fn ratio_alpha(f: &FunctionDescriptor, j: Interval) -> Result<f64> {
    f.check_interval(j)?;
    let chord = chord_coeffs(f, j)?;
    Ok(maximize(
        |s| chord.at(s) / f.eval(s).unwrap_or(f64::NAN),
        j.m(),
        j.big_m(),
    )
    .value)
}

fn check_kantorovich_args(j: Interval, r: f64) -> Result<()> {
    if j.m() <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Kantorovich constants need m > 0, got {j}"
        )));
    }
    if r == 0.0 || r == 1.0 || !r.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Kantorovich constants need r not in {{0, 1}}, got {r}"
        )));
    }
    Ok(())
}

fn real_pow(base: f64, e: f64) -> Result<f64> {
    if base < 0.0 && e.fract() != 0.0 {
        return Err(Error::InvalidParameter(format!(
            "negative base {base} raised to fractional power {e}"
        )));
    }
    Ok(pow(base, e))
}

/// Generalized Kantorovich constant `K(m, M, r)`.
pub fn kantorovich_k(j: Interval, r: f64) -> Result<f64> {
    check_kantorovich_args(j, r)?;
    let (m, big_m) = (j.m(), j.big_m());
    let (mr, big_mr) = (pow(m, r), pow(big_m, r));
    let cross = m * big_mr - big_m * mr;
    let lead = cross / ((r - 1.0) * (big_m - m));
    let base = (r - 1.0) / r * (big_mr - mr) / cross;
    Ok(lead * real_pow(base, r)?)
}

/// Kantorovich constant for the difference `C(m, M, r)`.
pub fn kantorovich_c(j: Interval, r: f64) -> Result<f64> {
    check_kantorovich_args(j, r)?;
    let (m, big_m) = (j.m(), j.big_m());
    let (mr, big_mr) = (pow(m, r), pow(big_m, r));
    let base = (big_mr - mr) / (r * (big_m - m));
    Ok((big_m * mr - m * big_mr) / (big_m - m) + (r - 1.0) * real_pow(base, r / (r - 1.0))?)
}
