use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::singularity::ExtReal;
use crate::specfun::{bisect, find_roots, gamma, rgamma, RootScanConfig};

use super::{Level, Parity, Series};

/// Harmonic oscillator `mω²x²/2` plus the inverse-square core `g/x²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    pub omega: f64,
    pub g: f64,
    pub hbar: f64,
    pub mass: f64,
}

impl OscillatorParams {
    /// Both solution series are square integrable for `0 < g < 3ħ²/(8m)`;
    /// `g = 0` (the plain oscillator, `a = 1/2`) is admitted as the limit.
    pub fn new(omega: f64, g: f64, hbar: f64, mass: f64) -> Result<Self> {
        if !(omega > 0.0 && hbar > 0.0 && mass > 0.0) {
            return Err(Error::InvalidParameter("ω, ħ and m must be positive".into()));
        }
        let g_max = 3.0 * hbar * hbar / (8.0 * mass);
        if !(g >= 0.0 && g < g_max) {
            return Err(Error::InvalidParameter(format!(
                "coupling g = {g} outside [0, 3ħ²/8m) = [0, {g_max})"
            )));
        }
        Ok(OscillatorParams { omega, g, hbar, mass })
    }

    /// Natural units `ħ = m = ω = 1` with the exponent `a ∈ [1/2, 1)`.
    pub fn from_a(a: f64) -> Result<Self> {
        Self::from_a_with(a, 1.0, 1.0, 1.0)
    }

    pub fn from_a_with(a: f64, omega: f64, hbar: f64, mass: f64) -> Result<Self> {
        if !(0.5..1.0).contains(&a) {
            return Err(Error::InvalidParameter(format!("a = {a} outside [1/2, 1)")));
        }
        let g = hbar * hbar * (4.0 * a * a - 1.0) / (8.0 * mass);
        Self::new(omega, g, hbar, mass)
    }

    /// `a = √(1 + 8mg/ħ²)/2`.
    pub fn a(&self) -> f64 {
        0.5 * (1.0 + 8.0 * self.mass * self.g / (self.hbar * self.hbar)).sqrt()
    }

    pub fn c1(&self) -> f64 {
        1.0 + self.a()
    }

    pub fn c2(&self) -> f64 {
        1.0 - self.a()
    }

    /// `√(mω/ħ)`, so that `y = βx`.
    pub fn beta(&self) -> f64 {
        (self.mass * self.omega / self.hbar).sqrt()
    }

    pub fn energy(&self, lambda: f64) -> f64 {
        lambda * self.hbar * self.omega
    }
}

/// Prefactor of the Γ-ratio: `β Γ(c₂) / ((c₁ − c₂) Γ(c₁))`.
fn ratio_prefactor(o: &OscillatorParams) -> Result<f64> {
    let (c1, c2) = (o.c1(), o.c2());
    Ok(o.beta() * gamma(c2)? / ((c1 - c2) * gamma(c1)?))
}

fn channel_weights(length: ExtReal) -> (f64, f64) {
    match length {
        ExtReal::Infinite => (1.0, 0.0),
        ExtReal::Finite(l) => {
            let n = l.hypot(1.0);
            (l / n, 1.0 / n)
        }
    }
}

/// Pole-free, normalized residual of the spectral condition
/// `K Γ((c₁−λ)/2)/Γ((c₂−λ)/2) = 1/L`, written with reciprocal gammas as
/// `w₁ K/Γ(q) − w₂/Γ(p)` with `(w₁, w₂) ∝ (L, 1)`.
pub fn calogero_residual(o: &OscillatorParams, length: ExtReal, lambda: f64) -> Result<f64> {
    let k = ratio_prefactor(o)?;
    Ok(residual_with(k, o, length, lambda))
}

fn residual_with(k: f64, o: &OscillatorParams, length: ExtReal, lambda: f64) -> f64 {
    let (w1, w2) = channel_weights(length);
    let rq = rgamma(0.5 * (o.c2() - lambda));
    let rp = rgamma(0.5 * (o.c1() - lambda));
    (w1 * k * rq - w2 * rp) / ((k * rq).abs() + rp.abs())
}

fn channel_roots(o: &OscillatorParams, length: ExtReal, count: usize) -> Result<Vec<f64>> {
    let k = ratio_prefactor(o)?;
    let f = |lam: f64| residual_with(k, o, length, lam);
    let a = o.a();
    let mut roots = Vec::with_capacity(count);
    // Below λ = −6 there is at most one root, present when 1/L > 0; the
    // left side grows like K(|λ|/2)^a there.
    let split = -6.0;
    if let ExtReal::Finite(l) = length {
        if l > 0.0 {
            let lower = -2.0 * (1.0 / (k * l)).abs().powf(1.0 / a) - 6.0 + split;
            if lower < split && f(lower) * f(split) < 0.0 {
                roots.push(bisect(f, lower, split, 1e-13 * lower.abs().max(1.0)));
            }
        }
    }
    let upper = 2.0 * count as f64 + 6.0;
    let cfg = RootScanConfig::new(split, upper, 0.01, 1e-13, count + 12)?;
    roots.extend(find_roots(f, &cfg)?);
    if roots.len() < count {
        return Err(Error::NonConvergence(format!(
            "found {} of {count} oscillator levels for L = {length}",
            roots.len()
        )));
    }
    roots.truncate(count);
    Ok(roots)
}

/// The lowest `count` eigenvalues `λ = E/ħω` of each channel, where
/// `length_plus` and `length_minus` are the scale lengths `L(θ±)`.
/// Returned in channel order: all `Plus` levels, then all `Minus` levels.
pub fn calogero_spectrum(
    o: &OscillatorParams,
    length_plus: ExtReal,
    length_minus: ExtReal,
    count: usize,
) -> Result<Vec<Level>> {
    let o = OscillatorParams::new(o.omega, o.g, o.hbar, o.mass)?;
    let mut out = Vec::with_capacity(2 * count);
    for (len, series) in [(length_plus, Series::Plus), (length_minus, Series::Minus)] {
        for (i, lam) in channel_roots(&o, len, count)?.into_iter().enumerate() {
            out.push(Level {
                index: i,
                momentum: None,
                energy: o.energy(lam),
                parity: Parity::None,
                series,
            });
        }
    }
    Ok(out)
}
