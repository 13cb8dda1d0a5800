use crate::error::{Error, Result};
use crate::singularity::{scale_length, ExtReal};

use super::well::parity_of_channel;
use super::{merge_levels, Level, Momentum, Series, WellParams};

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let prev = if q == 0.0 { f64::EPSILON * (diag[i - 1].abs() + 1.0) } else { q };
        q = diag[i] - x - off[i - 1] * off[i - 1] / prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest `n` eigenvalues by Sturm-sequence bisection.
fn lowest_eigenvalues(diag: &[f64], off: &[f64], n: usize) -> Vec<f64> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..diag.len() {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i < off.len() { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let scale = lo.abs().max(hi.abs());
    (0..n.min(diag.len()))
        .map(|j| {
            let (mut a, mut b) = (lo, hi);
            while b - a > 1e-15 * scale.max(a.abs()).max(1.0) * 4.0 {
                let mid = 0.5 * (a + b);
                if mid == a || mid == b {
                    break;
                }
                if sturm_count(diag, off, mid) > j {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

/// Finite-difference spectrum (`k²` values) of `−d²/dx²` on `(0, l]` with
/// Dirichlet at `l` and `φ(0) + L φ′(0) = 0` imposed through a ghost node,
/// on `m_intervals` equal intervals.
pub fn robin_half_well_fd(theta: f64, half_width: f64, l0: f64, m_intervals: usize, n: usize) -> Vec<f64> {
    let h = half_width / m_intervals as f64;
    let inv_h2 = 1.0 / (h * h);
    let len = scale_length(theta, l0);
    let (diag, off) = match len {
        ExtReal::Finite(l) if l == 0.0 => {
            // Dirichlet: unknowns at x_1 … x_{M−1}
            let size = m_intervals - 1;
            (vec![2.0 * inv_h2; size], vec![-inv_h2; size - 1])
        }
        _ => {
            let size = m_intervals;
            let robin = match len {
                ExtReal::Finite(l) => 2.0 * h / l,
                ExtReal::Infinite => 0.0,
            };
            let mut diag = vec![2.0 * inv_h2; size];
            diag[0] = (2.0 - robin) * inv_h2;
            let mut off = vec![-inv_h2; size - 1];
            // φ₀ rescaled by 1/√2 to symmetrize the ghost-node row
            off[0] = -std::f64::consts::SQRT_2 * inv_h2;
            (diag, off)
        }
    };
    lowest_eigenvalues(&diag, &off, n)
}

fn momentum_from_k2(k2: f64) -> Momentum {
    if k2 >= 0.0 {
        Momentum::Real(k2.sqrt())
    } else {
        Momentum::Imaginary((-k2).sqrt())
    }
}

/// Independent finite-difference spectrum of the well.
///
/// `U` is diagonalized and each eigen-channel is discretized as a half well
/// with its Robin length `L(θ±)`; `grid_points` counts nodes on `[−l, l]`.
pub fn finite_difference_oracle(w: &WellParams, grid_points: usize, n_levels: usize) -> Result<Vec<Level>> {
    if grid_points < 200 {
        return Err(Error::InvalidParameter(format!("oracle needs at least 200 grid points, got {grid_points}")));
    }
    let m = grid_points / 2;
    let p = &w.singularity;
    let mut levels = Vec::new();
    for (theta, series) in [(p.theta_plus, Series::Plus), (p.theta_minus, Series::Minus)] {
        for k2 in robin_half_well_fd(theta, w.half_width, p.l0, m, n_levels) {
            levels.push(Level {
                index: 0,
                momentum: Some(momentum_from_k2(k2)),
                energy: w.units.kinetic() * k2,
                parity: parity_of_channel(w, series),
                series,
            });
        }
    }
    let mut merged = merge_levels(levels);
    merged.truncate(n_levels);
    Ok(merged)
}
