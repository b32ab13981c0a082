//! Seeded random ensembles for sweeps and property checks.

use rand::Rng;

use crate::funcat::Interval;
use crate::posmap::MapDescriptor;
use crate::symmat::{eigendecompose, Dense, SymMatrix};

/// Symmetric matrix with entries uniform in `[-1, 1]`.
pub fn random_symmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SymMatrix {
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-1.0..=1.0);
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    SymMatrix::symmetrized(n, data)
}

/// Like [`random_symmetric`], shifted so that the smallest eigenvalue lands
/// uniformly in `[floor, floor + 1]`.
pub fn random_positive<R: Rng + ?Sized>(n: usize, floor: f64, rng: &mut R) -> SymMatrix {
    let a = random_symmetric(n, rng);
    let lo = eigendecompose(&a).expect("symmetric input converges").min();
    a.shift(floor - lo + rng.gen_range(0.0..1.0))
}

/// `GᵀG` with `G` entries uniform in `[-scale, scale]`.
pub fn random_gram<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> SymMatrix {
    let mut g = Dense::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = rng.gen_range(-scale..=scale);
        }
    }
    g.congruence(&SymMatrix::identity(n)).expect("square")
}

/// Orthogonal matrix from the eigenvectors of a random symmetric matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Dense {
    eigendecompose(&random_symmetric(n, rng))
        .expect("symmetric input converges")
        .eigenvectors
}

/// `n × k` matrix with orthonormal columns (`k <= n`).
pub fn random_isometry<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Dense {
    let q = random_orthogonal(n, rng);
    let mut v = Dense::zeros(n, k);
    for i in 0..n {
        for j in 0..k {
            v[(i, j)] = q[(i, j)];
        }
    }
    v
}

/// Random composition of `n` into positive block sizes.
pub fn random_blocks<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut blocks = Vec::new();
    let mut left = n;
    while left > 0 {
        let b = rng.gen_range(1..=left);
        blocks.push(b);
        left -= b;
    }
    blocks
}

/// Which family of positive unital map to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapFamily {
    NormalizedTrace,
    Compression,
    Pinching,
    UnitaryMixture,
}

impl MapFamily {
    pub const ALL: [MapFamily; 4] = [
        MapFamily::NormalizedTrace,
        MapFamily::Compression,
        MapFamily::Pinching,
        MapFamily::UnitaryMixture,
    ];
}

/// Random map of the given family with input dimension `n`.
pub fn random_map<R: Rng + ?Sized>(family: MapFamily, n: usize, rng: &mut R) -> MapDescriptor {
    match family {
        MapFamily::NormalizedTrace => MapDescriptor::NormalizedTrace,
        MapFamily::Compression => {
            let k = rng.gen_range(1..=n);
            MapDescriptor::Compression {
                v: random_isometry(n, k, rng),
            }
        }
        MapFamily::Pinching => MapDescriptor::Pinching {
            blocks: random_blocks(n, rng),
        },
        MapFamily::UnitaryMixture => {
            let count = rng.gen_range(1..=3);
            let raw: Vec<f64> = (0..count).map(|_| rng.gen_range(0.1..1.0)).collect();
            let total: f64 = raw.iter().sum();
            MapDescriptor::UnitaryMixture {
                weights: raw.iter().map(|w| w / total).collect(),
                unitaries: (0..count).map(|_| random_orthogonal(n, rng)).collect(),
            }
        }
    }
}

/// Interval `[m, m + w]` with `m` uniform in `lo` and `w` uniform in `width`.
pub fn random_interval<R: Rng + ?Sized>(
    lo: std::ops::Range<f64>,
    width: std::ops::Range<f64>,
    rng: &mut R,
) -> Interval {
    let m = rng.gen_range(lo);
    Interval::new(m, m + rng.gen_range(width)).expect("positive width")
}

/// Unit vector with uniformly distributed direction.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-3 && norm <= 1.0 {
            return x.into_iter().map(|v| v / norm).collect();
        }
    }
}
