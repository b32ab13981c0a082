//! Dense real symmetric matrices, their spectral factorization, the
//! functional calculus `f(A) = Q diag(f(λ)) Qᵀ`, and Loewner-order checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcat::Interval;

/// Asymmetry above this is repaired with a warning by constructors and
/// rejected by the JSON parser.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Default relative tolerance for Loewner comparisons.
pub const DEFAULT_TOL_SCALE: f64 = 1e-9;

const LOEWNER_ABS_FLOOR: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// General dense row-major matrix. Used for isometries and orthogonal factors.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut d = Dense::zeros(n, n);
        for i in 0..n {
            d[(i, i)] = 1.0;
        }
        d
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Shape("matrix must be non-empty".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "matrix entries must be finite".into(),
            ));
        }
        Ok(Dense {
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Dense {
        let mut t = Dense::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Dense) -> Result<Dense> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Dense::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// `‖XᵀX − I‖_max`, zero exactly for matrices with orthonormal columns.
    pub fn isometry_defect(&self) -> f64 {
        let g = self.transpose().matmul(self).expect("square product");
        max_abs_diff(&g.data, &Dense::identity(self.cols).data)
    }

    /// `Xᵀ S X` for symmetric `S`, returned as a symmetric matrix.
    pub fn congruence(&self, s: &SymMatrix) -> Result<SymMatrix> {
        if s.n != self.rows {
            return Err(Error::Shape(format!(
                "congruence needs {} rows, matrix has dimension {}",
                self.rows, s.n
            )));
        }
        let sx = s.as_dense().matmul(self)?;
        let out = self.transpose().matmul(&sx)?;
        Ok(SymMatrix::symmetrized(out.cols, out.data))
    }
}

impl std::ops::Index<(usize, usize)> for Dense {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Dense {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Dense real symmetric `n × n` matrix; `self[(i, j)] == self[(j, i)]` exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    entries: Vec<Vec<f64>>,
}

impl TryFrom<MatrixRepr> for SymMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.entries.len() != r.n {
            return Err(Error::Parse(format!(
                "declared n = {} but {} rows given",
                r.n,
                r.entries.len()
            )));
        }
        let dense = Dense::from_rows(&r.entries)?;
        if dense.cols != r.n {
            return Err(Error::Parse(format!("expected {0}x{0} entries", r.n)));
        }
        let asym = asymmetry(r.n, &dense.data);
        if asym > SYMMETRY_TOL {
            return Err(Error::Parse(format!(
                "matrix is not symmetric (asymmetry {asym:e})"
            )));
        }
        Ok(SymMatrix::symmetrized(r.n, dense.data))
    }
}

impl From<SymMatrix> for MatrixRepr {
    fn from(s: SymMatrix) -> Self {
        MatrixRepr {
            n: s.n,
            entries: s.to_rows(),
        }
    }
}

fn asymmetry(n: usize, data: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((data[i * n + j] - data[j * n + i]).abs());
        }
    }
    worst
}

impl SymMatrix {
    /// Builds from rows, replacing the input by `(X + Xᵀ)/2`. Asymmetry above
    /// [`SYMMETRY_TOL`] is logged.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = Dense::from_rows(rows)?;
        if d.rows != d.cols {
            return Err(Error::Shape(format!(
                "expected a square matrix, got {}x{}",
                d.rows, d.cols
            )));
        }
        let asym = asymmetry(d.rows, &d.data);
        if asym > SYMMETRY_TOL {
            log::warn!("symmetrizing input with asymmetry {asym:e}");
        }
        Ok(SymMatrix::symmetrized(d.rows, d.data))
    }

    pub(crate) fn symmetrized(n: usize, mut data: Vec<f64>) -> Self {
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (data[i * n + j] + data[j * n + i]);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        SymMatrix { n, data }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![1.0; n])
    }

    pub fn scalar(n: usize, c: f64) -> Self {
        Self::diag(&vec![c; n])
    }

    pub fn diag(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = SymMatrix::zeros(n);
        for (i, &v) in d.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.n.max(1))
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub fn as_dense(&self) -> Dense {
        Dense {
            rows: self.n,
            cols: self.n,
            data: self.data.clone(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, x| a.max(x.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        max_abs_diff(&self.data, &other.data)
    }

    fn check_same_dim(&self, other: &SymMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Shape(format!("dimension {} vs {}", self.n, other.n)));
        }
        Ok(())
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.check_same_dim(other)?;
        Ok(SymMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.check_same_dim(other)?;
        Ok(SymMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// `self + c·I`.
    pub fn shift(&self, c: f64) -> SymMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] += c;
        }
        out
    }

    /// `xᵀ A x`.
    pub fn quadratic_form(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::Shape(format!(
                "vector of length {} for dimension {}",
                x.len(),
                self.n
            )));
        }
        let mut acc = 0.0;
        for i in 0..self.n {
            let row: f64 = (0..self.n).map(|j| self.get(i, j) * x[j]).sum();
            acc += x[i] * row;
        }
        Ok(acc)
    }

    /// Max-norm of the commutator `AB − BA`.
    pub fn commutator_norm(&self, other: &SymMatrix) -> Result<f64> {
        self.check_same_dim(other)?;
        let ab = self.as_dense().matmul(&other.as_dense())?;
        let ba = other.as_dense().matmul(&self.as_dense())?;
        Ok(max_abs_diff(&ab.data, &ba.data))
    }
}

/// Spectral factorization `A = Q diag(λ) Qᵀ` with ascending eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomp {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: Dense,
}

impl EigenDecomp {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    /// `Q diag(f(λ)) Qᵀ`. The first eigenvalue outside the domain of `f`
    /// is reported in the error.
    pub fn map(&self, f: impl Fn(f64) -> Result<f64>) -> Result<SymMatrix> {
        let vals = self
            .eigenvalues
            .iter()
            .map(|&l| {
                f(l).map_err(|e| match e {
                    Error::Domain { what, .. } => {
                        Error::domain(format!("eigenvalue outside domain ({what})"), l)
                    }
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.reassemble(&vals))
    }

    /// `Q diag(d) Qᵀ`.
    pub fn reassemble(&self, d: &[f64]) -> SymMatrix {
        let n = self.dim();
        let q = &self.eigenvectors;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v: f64 = (0..n).map(|k| q[(i, k)] * d[k] * q[(j, k)]).sum();
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        SymMatrix { n, data }
    }
}

/// Cyclic Jacobi eigensolver.
pub fn eigendecompose(a: &SymMatrix) -> Result<EigenDecomp> {
    let n = a.n;
    let mut w = a.data.clone();
    let mut q = Dense::identity(n);
    let target = 1e-14 * a.frobenius();

    let off = |w: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * w[i * n + j] * w[i * n + j];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&w) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off: off(&w),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for r in (p + 1)..n {
                let apr = w[p * n + r];
                if apr == 0.0 {
                    continue;
                }
                let app = w[p * n + p];
                let arr = w[r * n + r];
                // Rotation angle that annihilates w[p][r]; smaller root for stability.
                let theta = (arr - app) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let wkp = w[k * n + p];
                    let wkr = w[k * n + r];
                    w[k * n + p] = c * wkp - s * wkr;
                    w[k * n + r] = s * wkp + c * wkr;
                }
                for k in 0..n {
                    let wpk = w[p * n + k];
                    let wrk = w[r * n + k];
                    w[p * n + k] = c * wpk - s * wrk;
                    w[r * n + k] = s * wpk + c * wrk;
                }
                w[p * n + r] = 0.0;
                w[r * n + p] = 0.0;

                for k in 0..n {
                    let qkp = q[(k, p)];
                    let qkr = q[(k, r)];
                    q[(k, p)] = c * qkp - s * qkr;
                    q[(k, r)] = s * qkp + c * qkr;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[i * n + i].total_cmp(&w[j * n + j]));
    let eigenvalues = order.iter().map(|&i| w[i * n + i]).collect();
    let mut eigenvectors = Dense::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            eigenvectors[(k, dst)] = q[(k, src)];
        }
    }
    Ok(EigenDecomp {
        eigenvalues,
        eigenvectors,
    })
}

/// `f(A)` through the spectral decomposition.
pub fn apply_fn(f: impl Fn(f64) -> Result<f64>, a: &SymMatrix) -> Result<SymMatrix> {
    eigendecompose(a)?.map(f)
}

/// Tight spectral window `[λ_min, λ_max]`; errors when the two coincide.
pub fn spectrum_bounds(a: &SymMatrix) -> Result<Interval> {
    let eig = eigendecompose(a)?;
    spectrum_bounds_of(&eig)
}

pub(crate) fn spectrum_bounds_of(eig: &EigenDecomp) -> Result<Interval> {
    let (lo, hi) = (eig.min(), eig.max());
    if hi - lo <= 1e-12 * (1.0 + hi.abs()) {
        return Err(Error::DegenerateSpectrum { min: lo, max: hi });
    }
    Interval::new(lo, hi)
}

/// Outcome of a Loewner comparison `A ⪯ B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoewnerVerdict {
    pub holds: bool,
    /// `λ_min(B − A)`.
    pub min_gap_eigenvalue: f64,
    pub tolerance_used: f64,
}

impl LoewnerVerdict {
    pub(crate) fn from_gap(gap: f64, tolerance: f64) -> Self {
        LoewnerVerdict {
            holds: gap >= -tolerance,
            min_gap_eigenvalue: gap,
            tolerance_used: tolerance,
        }
    }
}

/// Loewner tolerance for operands of the given scale.
pub fn loewner_tolerance(tol_scale: f64, a: &SymMatrix, b: &SymMatrix) -> f64 {
    (tol_scale * (1.0 + a.max_abs().max(b.max_abs()))).max(LOEWNER_ABS_FLOOR)
}

/// Decides `A ⪯ B` from the smallest eigenvalue of `B − A`.
pub fn loewner_leq(a: &SymMatrix, b: &SymMatrix, tol_scale: f64) -> Result<LoewnerVerdict> {
    let diff = b.sub(a)?;
    let gap = eigendecompose(&diff)?.min();
    Ok(LoewnerVerdict::from_gap(
        gap,
        loewner_tolerance(tol_scale, a, b),
    ))
}
