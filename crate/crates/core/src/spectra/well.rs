use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::singularity::{classify, scale_length, BoundaryVectors, ExtReal};
use crate::specfun::{bisect, find_roots, RootScanConfig};
use crate::{Complex64, Units};

use super::{channel_parities, merge_levels, Level, Momentum, Parity, Series, WellParams};

/// Pole-free form of the well condition `k L₀ cot(kl) = tan(θ/2)`:
/// `k L₀ cos(kl) cos(θ/2) − sin(kl) sin(θ/2)`.
pub fn well_residual(k: f64, theta: f64, half_width: f64, l0: f64) -> f64 {
    let (s, c) = (0.5 * theta).sin_cos();
    k * l0 * (k * half_width).cos() * c - (k * half_width).sin() * s
}

/// Hyperbolic analogue for `k = iκ`, scaled by `e^{−κl}`.
fn bound_residual(kappa: f64, theta: f64, half_width: f64, l0: f64) -> f64 {
    let (s, c) = (0.5 * theta).sin_cos();
    let e = (-2.0 * kappa * half_width).exp();
    0.5 * (kappa * l0 * (1.0 + e) * c - (1.0 - e) * s)
}

/// Lowest `count` levels of the half well `(0, l]` with Dirichlet at `l` and
/// the Robin condition of angle `θ` at the origin. A bound state (negative
/// energy) exists exactly when `0 < L(θ) < l` and comes first.
pub fn robin_half_well_levels(
    theta: f64,
    half_width: f64,
    l0: f64,
    count: usize,
    units: &Units,
) -> Result<Vec<(Momentum, f64)>> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    if let ExtReal::Finite(len) = scale_length(theta, l0) {
        if len > 0.0 && len < half_width && (len - half_width).abs() > 1e-9 * half_width {
            let hi = 2.0 / len + 1.0 / half_width;
            let lo = 1e-12 / half_width;
            let kappa = bisect(|x| bound_residual(x, theta, half_width, l0), lo, hi, 1e-15 * hi);
            out.push((Momentum::Imaginary(kappa), -units.kinetic() * kappa * kappa));
        } else if (len - half_width).abs() <= 1e-9 * half_width {
            // L = l: the zero-energy state ψ ∝ l − x
            out.push((Momentum::Real(0.0), 0.0));
        }
    }
    let zero_level = out.iter().any(|(m, _)| *m == Momentum::Real(0.0));
    let needed = count - out.len();
    if needed > 0 {
        let step = PI / (40.0 * half_width);
        let cfg = RootScanConfig::new(
            if zero_level { step / 2.0 } else { 1e-7 / half_width },
            (needed as f64 + 2.0) * PI / half_width,
            step,
            1e-14 * (needed as f64 + 2.0) * PI / half_width,
            needed + 8,
        )?;
        let roots = find_roots(|k| well_residual(k, theta, half_width, l0), &cfg)?;
        if roots.len() < needed {
            return Err(Error::NonConvergence(format!(
                "found {} of {needed} well levels for θ = {theta}",
                roots.len()
            )));
        }
        for &k in roots.iter().take(needed) {
            out.push((Momentum::Real(k), units.kinetic() * k * k));
        }
    }
    Ok(out)
}

/// The lowest `count` levels of each eigen-channel of `U`, merged by energy.
///
/// With Dirichlet walls the well separates exactly into two half wells in
/// the eigenbasis of `U`, so the spectrum depends only on `(θ₊, θ₋)`.
pub fn well_spectrum(w: &WellParams, count: usize) -> Result<Vec<Level>> {
    let p = &w.singularity;
    let (par_plus, par_minus) = channel_parities(p);
    let mut levels = Vec::with_capacity(2 * count);
    for (theta, parity, series) in [
        (p.theta_plus, par_plus, Series::Plus),
        (p.theta_minus, par_minus, Series::Minus),
    ] {
        for (m, e) in robin_half_well_levels(theta, w.half_width, p.l0, count, &w.units)? {
            levels.push(Level { index: 0, momentum: Some(m), energy: e, parity, series });
        }
    }
    Ok(merge_levels(levels))
}

/// [`well_spectrum`] restricted to parity-invariant singularities: symmetric
/// levels come from `θ₊`, antisymmetric from `θ₋` (for `(μ, ν) = (π/2, 0)`).
pub fn well_spectrum_parity_invariant(w: &WellParams, count: usize) -> Result<Vec<Level>> {
    if !classify(&w.matrix()).parity_invariant {
        return Err(Error::UnsupportedSingularity(
            "well_spectrum_parity_invariant needs σ₁Uσ₁ = U".into(),
        ));
    }
    well_spectrum(w, count)
}

/// Eigenstate `ψₙ = c₊ ξₙ⁺ + c₋ e^{iν} ξₙ⁻` of the scale-invariant well,
/// `ξₙ^± = l^{−1/2} sin kₙ(x ∓ l) Θ(±x)`, `kₙ = (n − ½)π/(2l)`, normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleInvariantWellState {
    pub mu: f64,
    pub nu: f64,
    pub half_width: f64,
    pub n: usize,
    pub k: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    /// Factor applied to the printed combination to make `∫|ψ|² = 1`.
    pub normalization: f64,
}

pub fn scale_invariant_well_state(mu: f64, nu: f64, half_width: f64, n: usize) -> Result<ScaleInvariantWellState> {
    if n == 0 {
        return Err(Error::InvalidParameter("state index n starts at 1".into()));
    }
    if !(half_width > 0.0) {
        return Err(Error::InvalidParameter(format!("half-width must be positive, got {half_width}")));
    }
    let k = (n as f64 - 0.5) * PI / (2.0 * half_width);
    let (s, c) = (0.5 * mu).sin_cos();
    let (c_plus, c_minus) = (c - s, c + s);
    // ∫|ξ^±|² = 1/2 − sin(2kl)/(4kl); c₊² + c₋² = 2
    let kl = k * half_width;
    let xi_norm = 0.5 - (2.0 * kl).sin() / (4.0 * kl);
    let normalization = 1.0 / (2.0 * xi_norm).sqrt();
    Ok(ScaleInvariantWellState { mu, nu, half_width, n, k, c_plus, c_minus, normalization })
}

impl ScaleInvariantWellState {
    fn amp(&self) -> f64 {
        self.normalization / self.half_width.sqrt()
    }

    pub fn value(&self, x: f64) -> Complex64 {
        let l = self.half_width;
        if x > 0.0 && x <= l {
            Complex64::new(self.amp() * self.c_plus * (self.k * (x - l)).sin(), 0.0)
        } else if x < 0.0 && x >= -l {
            Complex64::from_polar(self.amp() * self.c_minus * (self.k * (x + l)).sin(), self.nu)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn derivative(&self, x: f64) -> Complex64 {
        let l = self.half_width;
        let a = self.amp() * self.k;
        if x > 0.0 && x <= l {
            Complex64::new(a * self.c_plus * (self.k * (x - l)).cos(), 0.0)
        } else if x < 0.0 && x >= -l {
            Complex64::from_polar(a * self.c_minus * (self.k * (x + l)).cos(), self.nu)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// `∂ψ/∂ν` at fixed `x`.
    pub fn nu_derivative(&self, x: f64) -> Complex64 {
        if x < 0.0 {
            self.value(x) * Complex64::new(0.0, 1.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// One-sided limits at the singularity.
    pub fn boundary_vectors(&self) -> BoundaryVectors {
        let tiny = 1e-300;
        let lim = |sign: f64| {
            // the pieces are analytic up to 0, so evaluate the closed forms there
            let x = sign * tiny;
            (self.value(x), self.derivative(x))
        };
        BoundaryVectors::from_limits(lim(1.0), lim(-1.0))
    }
}

pub(crate) fn parity_of_channel(w: &WellParams, series: Series) -> Parity {
    let (p, m) = channel_parities(&w.singularity);
    match series {
        Series::Plus => p,
        Series::Minus => m,
        Series::None => Parity::None,
    }
}
