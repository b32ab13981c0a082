//! Deterministic scalar maximization over a closed interval.
//!
//! The objectives handled here are continuous but need not be unimodal, so a
//! uniform grid scan picks the best cell first and golden-section search then
//! polishes inside the cells adjacent to the best grid point.

/// Number of subintervals of the initial scan (the grid has one more point).
pub const GRID_CELLS: usize = 1024;

/// Absolute tolerance on the argument for the golden-section polish.
pub const ARG_TOL: f64 = 1e-12;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Location and value of a maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub arg: f64,
    pub value: f64,
}

/// Maximizes `f` over `[lo, hi]` by grid scan followed by golden-section search.
pub fn maximize(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Maximum {
    debug_assert!(lo <= hi);
    let h = (hi - lo) / GRID_CELLS as f64;
    let node = |i: usize| {
        if i == GRID_CELLS {
            hi
        } else {
            lo + h * i as f64
        }
    };

    let mut best = Maximum {
        arg: lo,
        value: f(lo),
    };
    let mut best_i = 0;
    for i in 1..=GRID_CELLS {
        let x = node(i);
        let v = f(x);
        if v > best.value {
            best = Maximum { arg: x, value: v };
            best_i = i;
        }
    }

    let a = node(best_i.saturating_sub(1));
    let b = node((best_i + 1).min(GRID_CELLS));
    let polished = golden_section_max(&f, a, b, ARG_TOL);
    if polished.value > best.value {
        polished
    } else {
        best
    }
}

/// Golden-section search for a maximum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `tol`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Maximum {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);

    // 200 iterations shrink any finite bracket below f64 resolution.
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }

    let mid = 0.5 * (a + b);
    let fm = f(mid);
    [(x1, f1), (x2, f2), (mid, fm)].into_iter().fold(
        Maximum {
            arg: mid,
            value: f64::NEG_INFINITY,
        },
        |acc, (x, v)| {
            if v > acc.value {
                Maximum { arg: x, value: v }
            } else {
                acc
            }
        },
    )
}
