//! Positive unital linear maps on symmetric matrices.

use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::{random_gram, random_symmetric};
use crate::symmat::{eigendecompose, Dense, SymMatrix};

/// Dimension used to exercise [`MapDescriptor::NormalizedTrace`], which
/// accepts any input size.
const TRACE_PROBE_DIM: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapRepr", into = "MapRepr")]
pub enum MapDescriptor {
    /// `X ↦ [tr(X)/n]`.
    NormalizedTrace,
    /// `X ↦ VᵀXV` with `V` of size `n × k`.
    Compression { v: Dense },
    /// Keeps the diagonal blocks of the given sizes and zeroes the rest.
    Pinching { blocks: Vec<usize> },
    /// `X ↦ Σ wᵢ UᵢᵀXUᵢ`.
    UnitaryMixture {
        weights: Vec<f64>,
        unitaries: Vec<Dense>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case")]
enum MapRepr {
    NormalizedTrace,
    Compression {
        v: Vec<Vec<f64>>,
    },
    Pinching {
        blocks: Vec<usize>,
    },
    UnitaryMixture {
        weights: Vec<f64>,
        unitaries: Vec<Vec<Vec<f64>>>,
    },
}

impl TryFrom<MapRepr> for MapDescriptor {
    type Error = Error;
    fn try_from(r: MapRepr) -> Result<Self> {
        Ok(match r {
            MapRepr::NormalizedTrace => MapDescriptor::NormalizedTrace,
            MapRepr::Compression { v } => MapDescriptor::Compression {
                v: Dense::from_rows(&v)?,
            },
            MapRepr::Pinching { blocks } => MapDescriptor::Pinching { blocks },
            MapRepr::UnitaryMixture { weights, unitaries } => MapDescriptor::UnitaryMixture {
                weights,
                unitaries: unitaries
                    .iter()
                    .map(|u| Dense::from_rows(u))
                    .collect::<Result<_>>()?,
            },
        })
    }
}

impl From<MapDescriptor> for MapRepr {
    fn from(m: MapDescriptor) -> Self {
        match m {
            MapDescriptor::NormalizedTrace => MapRepr::NormalizedTrace,
            MapDescriptor::Compression { v } => MapRepr::Compression { v: v.to_rows() },
            MapDescriptor::Pinching { blocks } => MapRepr::Pinching { blocks },
            MapDescriptor::UnitaryMixture { weights, unitaries } => MapRepr::UnitaryMixture {
                weights,
                unitaries: unitaries.iter().map(Dense::to_rows).collect(),
            },
        }
    }
}

impl FromStr for MapDescriptor {
    type Err = Error;

    /// Accepts `normalized_trace`, `pinching:B1,B2,...`, or a JSON descriptor.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return Ok(serde_json::from_str(s)?);
        }
        match s.split_once(':') {
            None if s == "normalized_trace" || s == "trace" => Ok(MapDescriptor::NormalizedTrace),
            Some(("pinching", sizes)) => {
                let blocks = sizes
                    .split(',')
                    .map(|b| {
                        b.trim()
                            .parse::<usize>()
                            .map_err(|e| Error::Parse(format!("bad block size '{b}': {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(MapDescriptor::Pinching { blocks })
            }
            _ => Err(Error::Parse(format!(
                "unknown map '{s}' (expected normalized_trace, pinching:B1,B2,..., or JSON)"
            ))),
        }
    }
}

impl MapDescriptor {
    pub fn name(&self) -> &'static str {
        match self {
            MapDescriptor::NormalizedTrace => "normalized_trace",
            MapDescriptor::Compression { .. } => "compression",
            MapDescriptor::Pinching { .. } => "pinching",
            MapDescriptor::UnitaryMixture { .. } => "unitary_mixture",
        }
    }

    /// Required input dimension; `None` for the trace map, which takes any.
    pub fn input_dim(&self) -> Option<usize> {
        match self {
            MapDescriptor::NormalizedTrace => None,
            MapDescriptor::Compression { v } => Some(v.rows()),
            MapDescriptor::Pinching { blocks } => Some(blocks.iter().sum()),
            MapDescriptor::UnitaryMixture { unitaries, .. } => unitaries.first().map(Dense::rows),
        }
    }

    pub fn output_dim(&self, n: usize) -> usize {
        match self {
            MapDescriptor::NormalizedTrace => 1,
            MapDescriptor::Compression { v } => v.cols(),
            _ => n,
        }
    }

    /// Structural invariants that make the map positive and unital on `n × n`
    /// inputs.
    pub fn validate(&self, n: usize) -> Result<()> {
        if let Some(d) = self.input_dim() {
            if d != n {
                return Err(Error::Shape(format!(
                    "{} map takes dimension {d}, got {n}",
                    self.name()
                )));
            }
        }
        match self {
            MapDescriptor::NormalizedTrace => Ok(()),
            MapDescriptor::Compression { v } => {
                let defect = v.isometry_defect();
                if v.cols() > v.rows() || defect > 1e-10 {
                    return Err(Error::Precondition(format!(
                        "compression matrix is not an isometry (‖VᵀV − I‖ = {defect:e})"
                    )));
                }
                Ok(())
            }
            MapDescriptor::Pinching { blocks } => {
                if blocks.is_empty() || blocks.contains(&0) {
                    return Err(Error::Precondition(
                        "pinching blocks must be positive".into(),
                    ));
                }
                Ok(())
            }
            MapDescriptor::UnitaryMixture { weights, unitaries } => {
                if weights.is_empty() || weights.len() != unitaries.len() {
                    return Err(Error::Precondition(format!(
                        "unitary mixture has {} weights for {} unitaries",
                        weights.len(),
                        unitaries.len()
                    )));
                }
                if weights.iter().any(|&w| w.is_nan() || w <= 0.0) {
                    return Err(Error::Precondition(
                        "mixture weights must be positive".into(),
                    ));
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::Precondition(format!(
                        "mixture weights sum to {total}, not 1"
                    )));
                }
                for u in unitaries {
                    if u.rows() != n || u.cols() != n {
                        return Err(Error::Shape(format!(
                            "unitary is {}x{}, expected {n}x{n}",
                            u.rows(),
                            u.cols()
                        )));
                    }
                    let defect = u.isometry_defect();
                    if defect > 1e-10 {
                        return Err(Error::Precondition(format!(
                            "mixture factor is not orthogonal (defect {defect:e})"
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

pub fn apply_map(phi: &MapDescriptor, a: &SymMatrix) -> Result<SymMatrix> {
    let n = a.dim();
    if let Some(d) = phi.input_dim() {
        if d != n {
            return Err(Error::Shape(format!(
                "{} map takes dimension {d}, got {n}",
                phi.name()
            )));
        }
    }
    match phi {
        MapDescriptor::NormalizedTrace => Ok(SymMatrix::diag(&[a.trace() / n as f64])),
        MapDescriptor::Compression { v } => v.congruence(a),
        MapDescriptor::Pinching { blocks } => {
            let mut block_of = Vec::with_capacity(n);
            for (b, &size) in blocks.iter().enumerate() {
                block_of.extend(std::iter::repeat_n(b, size));
            }
            let rows = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if block_of[i] == block_of[j] {
                                a.get(i, j)
                            } else {
                                0.0
                            }
                        })
                        .collect()
                })
                .collect::<Vec<Vec<f64>>>();
            SymMatrix::from_rows(&rows)
        }
        MapDescriptor::UnitaryMixture { weights, unitaries } => {
            let mut acc = SymMatrix::zeros(n);
            for (w, u) in weights.iter().zip(unitaries) {
                acc = acc.add(&u.congruence(a)?.scale(*w))?;
            }
            Ok(acc)
        }
    }
}

/// Sampled check of unitality, linearity and positivity on `trials` random
/// inputs. Any structural mismatch (wrong dimensions) counts as failure.
pub fn verify_map(phi: &MapDescriptor, trials: usize, seed: u64) -> bool {
    let n = phi.input_dim().unwrap_or(TRACE_PROBE_DIM);
    if n == 0 {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut run = || -> Result<bool> {
        let id = apply_map(phi, &SymMatrix::identity(n))?;
        if id.max_abs_diff(&SymMatrix::identity(id.dim())) > 1e-10 {
            return Ok(false);
        }
        for _ in 0..trials.max(1) {
            let x = random_symmetric(n, &mut rng);
            let y = random_symmetric(n, &mut rng);
            let (a, b) = (rng_coef(&mut rng), rng_coef(&mut rng));
            let lhs = apply_map(phi, &x.scale(a).add(&y.scale(b))?)?;
            let rhs = apply_map(phi, &x)?
                .scale(a)
                .add(&apply_map(phi, &y)?.scale(b))?;
            if lhs.max_abs_diff(&rhs) > 1e-10 {
                return Ok(false);
            }
            let g = random_gram(n, 1.0, &mut rng);
            if eigendecompose(&apply_map(phi, &g)?)?.min() < -1e-9 {
                return Ok(false);
            }
        }
        Ok(true)
    };
    run().unwrap_or(false)
}

fn rng_coef(rng: &mut ChaCha8Rng) -> f64 {
    use rand::Rng;
    rng.gen_range(-2.0..2.0)
}
