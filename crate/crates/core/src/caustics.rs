//! Oscillator with an inverse-square core: eigenbasis, evolution, the
//! current through the singularity and the copy process at caustic times.
//!
//! Two bases are provided. The free-point basis (`U = σ₁`) has the closed
//! form modes `φ⁽¹⁾` (odd) and `φ⁽²⁾` (even) with `λ = 2n + c`, evaluated by a
//! normalized Laguerre recurrence. The general basis takes the levels from
//! [`calogero_spectrum`] and builds each mode as the decaying combination of
//! `φ⁽¹⁾` and `φ⁽²⁾`, evaluated from Kummer's series near the origin and by
//! inward Numerov integration further out.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::singularity::{adjoint, conjugator, ExtReal, SingularityParams};
use crate::specfun::{fit_limit_with_exponents, gamma, kummer_m, rgamma};
use crate::spectra::{calogero_spectrum, OscillatorParams, Series};
use crate::Complex64;

/// Symmetric midpoint grid `xᵢ = (i − half_count + ½)·spacing`; it never
/// contains `x = 0`, where the even modes diverge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricGrid {
    pub spacing: f64,
    pub half_count: usize,
}

impl SymmetricGrid {
    pub fn new(spacing: f64, half_count: usize) -> Result<Self> {
        if !(spacing > 0.0) || half_count == 0 {
            return Err(Error::InvalidParameter("grid needs spacing > 0 and points".into()));
        }
        Ok(SymmetricGrid { spacing, half_count })
    }

    /// Grid covering `[−extent, extent]` with spacing at most `max_spacing`.
    pub fn covering(extent: f64, max_spacing: f64) -> Result<Self> {
        let half_count = (extent / max_spacing).ceil().max(1.0) as usize;
        Self::new(extent / half_count as f64, half_count)
    }

    pub fn len(&self) -> usize {
        2 * self.half_count
    }

    pub fn is_empty(&self) -> bool {
        self.half_count == 0
    }

    pub fn point(&self, i: usize) -> f64 {
        (i as f64 - self.half_count as f64 + 0.5) * self.spacing
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// Index of the grid point mirrored through the origin.
    pub fn mirror(&self, i: usize) -> usize {
        self.len() - 1 - i
    }
}

/// Complex samples of a wavefunction on a [`SymmetricGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledProfile {
    pub grid: SymmetricGrid,
    pub values: Vec<Complex64>,
}

impl SampledProfile {
    pub fn from_fn(grid: SymmetricGrid, f: impl Fn(f64) -> Complex64) -> Self {
        SampledProfile { grid, values: grid.points().map(f).collect() }
    }

    /// Normalized amplitude `∝ exp(−(x − x₀)²/(2σ²))` on `x > 0`, zero for
    /// `x < 0`.
    pub fn gaussian(grid: SymmetricGrid, center: f64, width: f64) -> Self {
        let mut p = Self::from_fn(grid, |x| {
            if x > 0.0 {
                Complex64::new((-(x - center).powi(2) / (2.0 * width * width)).exp(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let n = p.norm_sqr().sqrt();
        if n > 0.0 {
            p.values.iter_mut().for_each(|v| *v /= n);
        }
        p
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing
    }

    /// `∫ |ψ|²` over the grid points inside `[lo, hi]`.
    pub fn weight_in(&self, lo: f64, hi: f64) -> f64 {
        self.grid
            .points()
            .zip(&self.values)
            .filter(|(x, _)| *x >= lo && *x <= hi)
            .map(|(_, v)| v.norm_sqr())
            .sum::<f64>()
            * self.grid.spacing
    }
}

/// Radial part of a general-U mode: the solution of
/// `u″ = (y² + (a² − ¼)/y² − 2λ) u` decaying at infinity, normalized so that
/// `∫₀^∞ u² dx = 1`.
#[derive(Debug, Clone, PartialEq)]
struct RadialMode {
    lambda: f64,
    // analytic region y ≤ y_match: u = w1 φ⁽¹⁾ + w2 φ⁽²⁾
    w1: f64,
    w2: f64,
    y_match: f64,
    // Numerov table on y_match + i·step
    step: f64,
    table: Vec<f64>,
    scale: f64,
}

/// `φ⁽ˢ⁾(y) = y^{c−½} e^{−y²/2} M((c−λ)/2, c; y²)` and its `y`-derivative.
fn kummer_solution(c: f64, lambda: f64, y: f64) -> Result<(f64, f64)> {
    let alpha = 0.5 * (c - lambda);
    let z = y * y;
    let m = kummer_m(alpha, c, z)?;
    let dm = alpha / c * kummer_m(alpha + 1.0, c + 1.0, z)?;
    let pre = y.powf(c - 0.5) * (-0.5 * z).exp();
    let v = pre * m;
    Ok((v, v * ((c - 0.5) / y - y) + pre * 2.0 * y * dm))
}

impl RadialMode {
    fn build(o: &OscillatorParams, lambda: f64) -> Result<Self> {
        let (a, c1, c2) = (o.a(), o.c1(), o.c2());
        // Tricomi combination: w1 = Γ(1−c₁)/Γ((c₂−λ)/2), w2 = Γ(c₁−1)/Γ((c₁−λ)/2)
        let w1 = gamma(1.0 - c1)? * rgamma(0.5 * (c2 - lambda));
        let w2 = gamma(c1 - 1.0)? * rgamma(0.5 * (c1 - lambda));
        let y_match = 1.5 / (lambda.abs() + 1.0).sqrt();
        let analytic = |y: f64| -> Result<f64> {
            Ok(w1 * kummer_solution(c1, lambda, y)?.0 + w2 * kummer_solution(c2, lambda, y)?.0)
        };
        let step = 2e-3 * y_match.min(1.0);
        let y_max = (2.0 * lambda.max(0.0)).sqrt() + 10.0;
        let count = ((y_max - y_match) / step).ceil() as usize + 1;
        let q = |y: f64| y * y + (a * a - 0.25) / (y * y) - 2.0 * lambda;
        let mut u = vec![0.0; count];
        u[count - 2] = 1e-30;
        let h2 = step * step / 12.0;
        for i in (1..count - 1).rev() {
            let (ym, y0, yp) = (
                y_match + (i - 1) as f64 * step,
                y_match + i as f64 * step,
                y_match + (i + 1) as f64 * step,
            );
            u[i - 1] = (2.0 * u[i] * (1.0 + 5.0 * h2 * q(y0)) - u[i + 1] * (1.0 - h2 * q(yp))) / (1.0 - h2 * q(ym));
            if u[i - 1].abs() > 1e100 {
                u[i - 1..].iter_mut().for_each(|v| *v *= 1e-100);
            }
        }
        // least-squares scale over the first few table points
        let (mut num, mut den) = (0.0, 0.0);
        for (i, t) in u.iter().enumerate().take(8) {
            let av = analytic(y_match + i as f64 * step)?;
            num += av * t;
            den += t * t;
        }
        let ratio = num / den;
        u.iter_mut().for_each(|v| *v *= ratio);
        let mut mode = RadialMode { lambda, w1, w2, y_match, step, table: u, scale: 1.0 };
        // ∫ u² dy: y = y_match t² on the inner part, Simpson on the table
        let inner_n = 400;
        let mut inner = 0.0;
        for i in 0..inner_n {
            let t = (i as f64 + 0.5) / inner_n as f64;
            let v = analytic(y_match * t * t)?;
            inner += v * v * 2.0 * y_match * t;
        }
        inner /= inner_n as f64;
        let tab = &mode.table;
        let mut outer = 0.0;
        for (i, v) in tab.iter().enumerate() {
            let w = if i == 0 || i == tab.len() - 1 { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            outer += w * v * v;
        }
        outer *= step / 3.0;
        mode.scale = ((inner + outer) / o.beta()).sqrt().recip();
        Ok(mode)
    }

    /// `(u, du/dy)` at `y > 0`.
    fn eval(&self, o: &OscillatorParams, y: f64) -> (f64, f64) {
        let (c1, c2) = (o.c1(), o.c2());
        if y <= self.y_match {
            let (Ok(p), Ok(q)) = (kummer_solution(c1, self.lambda, y), kummer_solution(c2, self.lambda, y)) else {
                return (f64::NAN, f64::NAN);
            };
            return (
                self.scale * (self.w1 * p.0 + self.w2 * q.0),
                self.scale * (self.w1 * p.1 + self.w2 * q.1),
            );
        }
        let s = (y - self.y_match) / self.step;
        let i = s.floor() as usize;
        if i + 1 >= self.table.len() {
            return (0.0, 0.0);
        }
        let f = s - i as f64;
        let v = self.table[i] * (1.0 - f) + self.table[i + 1] * f;
        let d = (self.table[i + 1] - self.table[i]) / self.step;
        (self.scale * v, self.scale * d)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum ModeShape {
    /// Closed-form free-point mode, evaluated through the Laguerre recurrence.
    Free,
    /// `sides[0] u(|x|)` for `x > 0`, `sides[1] u(|x|)` for `x < 0`.
    General { sides: [Complex64; 2], radial: Box<RadialMode> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    /// 1 for the `φ⁽¹⁾`-led (minus) channel, 2 for the `φ⁽²⁾`-led (plus) channel.
    pub series: u8,
    pub channel: Series,
    pub n: usize,
    /// `E/ħω`.
    pub lambda: f64,
    pub energy: f64,
    shape: ModeShape,
}

/// Normalized eigenmodes, `count` per channel, series 1 first.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBasis {
    pub oscillator: OscillatorParams,
    pub length_plus: ExtReal,
    pub length_minus: ExtReal,
    pub modes: Vec<Mode>,
    free_point: bool,
    per_series: usize,
}

/// Values and `x`-derivatives of the normalized free-point modes
/// `√β y^{α+½} e^{−y²/2} L̃ₙ^{α}(y²)`, `α = c − 1`, for `n < count`.
/// The recurrence runs on `L̃ₙ = Lₙ √(n!/Γ(n+α+1))` with a running log scale.
fn laguerre_modes(o: &OscillatorParams, c: f64, y: f64, count: usize, out: &mut Vec<(f64, f64)>) {
    let alpha = c - 1.0;
    let z = y * y;
    let beta = o.beta();
    let log_pre = 0.5 * beta.ln() + (alpha + 0.5) * y.ln() - 0.5 * z;
    let g = gamma(alpha + 1.0).unwrap_or(f64::NAN);
    let (mut prev, mut cur, mut log_scale) = (0.0, g.sqrt().recip(), 0.0);
    for n in 0..count {
        let nf = n as f64;
        let e = (log_pre + log_scale).exp();
        let v = e * cur;
        let dlag = if n == 0 { 0.0 } else { nf * cur - (nf * (nf + alpha)).sqrt() * prev };
        let dy = v * ((alpha + 0.5) / y - y) + e * 2.0 / y * dlag;
        out.push((v, beta * dy));
        let mut next = (2.0 * nf + 1.0 + alpha - z) * cur * ((nf + 1.0) / (nf + alpha + 1.0)).sqrt();
        if n > 0 {
            next -= (nf + alpha) * prev * (nf * (nf + 1.0) / ((nf + alpha) * (nf + alpha + 1.0))).sqrt();
        }
        next /= nf + 1.0;
        prev = cur;
        cur = next;
        if cur.abs() > 1e200 {
            prev *= 1e-200;
            cur *= 1e-200;
            log_scale += 200.0 * std::f64::consts::LN_10;
        }
    }
}

impl ModeBasis {
    /// Basis of the free point `U = σ₁`: `λ = 2n + c₁` (odd) and `2n + c₂`
    /// (even), `n < count`.
    pub fn free(o: &OscillatorParams, count: usize) -> Result<Self> {
        let o = OscillatorParams::new(o.omega, o.g, o.hbar, o.mass)?;
        if count == 0 {
            return Err(Error::InvalidParameter("basis needs at least one mode per series".into()));
        }
        let mut modes = Vec::with_capacity(2 * count);
        for (series, channel, c) in [(1u8, Series::Minus, o.c1()), (2u8, Series::Plus, o.c2())] {
            for n in 0..count {
                let lambda = 2.0 * n as f64 + c;
                modes.push(Mode { series, channel, n, lambda, energy: o.energy(lambda), shape: ModeShape::Free });
            }
        }
        Ok(ModeBasis {
            oscillator: o,
            length_plus: ExtReal::Infinite,
            length_minus: ExtReal::Finite(0.0),
            modes,
            free_point: true,
            per_series: count,
        })
    }

    /// Basis for a general singularity: levels from the spectral condition,
    /// each mode `v_± u_λ(|x|)` with `v_±` the eigenvectors of `U` on the
    /// two sides of the origin.
    pub fn general(o: &OscillatorParams, p: &SingularityParams, count: usize) -> Result<Self> {
        let o = OscillatorParams::new(o.omega, o.g, o.hbar, o.mass)?;
        p.validate()?;
        let (lp, lm) = (p.length_plus(), p.length_minus());
        let levels = calogero_spectrum(&o, lp, lm, count)?;
        let vdag = adjoint(&conjugator(p.mu, p.nu));
        let mut modes = Vec::with_capacity(2 * count);
        // series 1 (minus channel) first, as in the free basis
        for (series, channel, col) in [(1u8, Series::Minus, 1usize), (2u8, Series::Plus, 0usize)] {
            let sides = [vdag[0][col], vdag[1][col]];
            for lv in levels.iter().filter(|l| l.series == channel) {
                let lambda = lv.energy / (o.hbar * o.omega);
                let radial = Box::new(RadialMode::build(&o, lambda)?);
                modes.push(Mode {
                    series,
                    channel,
                    n: lv.index,
                    lambda,
                    energy: lv.energy,
                    shape: ModeShape::General { sides, radial },
                });
            }
        }
        Ok(ModeBasis { oscillator: o, length_plus: lp, length_minus: lm, modes, free_point: false, per_series: count })
    }

    pub fn is_free_point(&self) -> bool {
        self.free_point
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Values and derivatives of every mode at `x ≠ 0`, in basis order.
    pub fn eval_all(&self, x: f64) -> Vec<(Complex64, Complex64)> {
        let o = &self.oscillator;
        let beta = o.beta();
        let y = beta * x.abs();
        let sign = x.signum();
        if self.free_point {
            let mut raw = Vec::with_capacity(self.len());
            laguerre_modes(o, o.c1(), y, self.per_series, &mut raw);
            let odd = raw.len();
            laguerre_modes(o, o.c2(), y, self.per_series, &mut raw);
            // odd extension for series 1, even for series 2
            return raw
                .into_iter()
                .enumerate()
                .map(|(i, (v, d))| {
                    if i < odd {
                        (Complex64::new(sign * v, 0.0), Complex64::new(d, 0.0))
                    } else {
                        (Complex64::new(v, 0.0), Complex64::new(sign * d, 0.0))
                    }
                })
                .collect();
        }
        self.modes
            .iter()
            .map(|m| match &m.shape {
                ModeShape::General { sides, radial } => {
                    let (u, du) = radial.eval(o, y);
                    let s = if x > 0.0 { sides[0] } else { sides[1] };
                    (s * u, s * (sign * beta * du))
                }
                ModeShape::Free => unreachable!("free modes only in free-point bases"),
            })
            .collect()
    }

    pub fn mode_value(&self, index: usize, x: f64) -> Complex64 {
        self.eval_all(x)[index].0
    }

    /// Largest local wavenumber among the retained modes, `β√(2λ_max)`.
    pub fn max_wavenumber(&self) -> f64 {
        let lam = self.modes.iter().map(|m| m.lambda).fold(0.0, f64::max);
        self.oscillator.beta() * (2.0 * lam).sqrt()
    }

    /// Mode values on every grid point: `table[i][m]`.
    fn sample(&self, grid: &SymmetricGrid) -> Vec<Vec<Complex64>> {
        grid.points().map(|x| self.eval_all(x).into_iter().map(|p| p.0).collect()).collect()
    }

    /// Gram matrix of the series-`series` modes by quadrature on the half
    /// line with `x = s²`, which smooths the `y^{c₂−½}` endpoint.
    pub fn overlap_matrix(&self, series: u8, points: usize) -> Vec<Vec<f64>> {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| self.modes[i].series == series).collect();
        let o = &self.oscillator;
        let lam = idx.iter().map(|&i| self.modes[i].lambda).fold(0.0, f64::max);
        let x_max = ((2.0 * lam).sqrt() + 9.0) / o.beta();
        let s_max = x_max.sqrt();
        let ds = s_max / points as f64;
        let mut g = vec![vec![0.0; idx.len()]; idx.len()];
        for k in 0..points {
            let s = (k as f64 + 0.5) * ds;
            let x = s * s;
            let w = 2.0 * s * ds;
            let vals = self.eval_all(x);
            let vals_l = self.eval_all(-x);
            for (a, &i) in idx.iter().enumerate() {
                for (b, &j) in idx.iter().enumerate() {
                    g[a][b] += w * (vals[i].0.conj() * vals[j].0 + vals_l[i].0.conj() * vals_l[j].0).re;
                }
            }
        }
        g
    }
}

/// Coefficients of a state in a [`ModeBasis`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateExpansion {
    pub coefficients: Vec<Complex64>,
    pub truncation_n_max: usize,
    /// `‖f − Σcψ‖/‖f‖` on the input grid (0 for a zero input).
    pub residual: f64,
}

impl StateExpansion {
    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }
}

fn check_resolution(grid: &SymmetricGrid, basis: &ModeBasis) -> Result<()> {
    let limit = 2.0 * PI / basis.max_wavenumber() / 8.0;
    if grid.spacing > limit {
        return Err(Error::UnderResolved { spacing: grid.spacing, limit });
    }
    Ok(())
}

/// Coefficients by midpoint-rule inner products on the profile's grid.
pub fn expand_state(f: &SampledProfile, basis: &ModeBasis) -> Result<StateExpansion> {
    check_resolution(&f.grid, basis)?;
    let table = basis.sample(&f.grid);
    let dx = f.grid.spacing;
    let mut coefficients = vec![Complex64::new(0.0, 0.0); basis.len()];
    for (row, v) in table.iter().zip(&f.values) {
        for (c, m) in coefficients.iter_mut().zip(row) {
            *c += m.conj() * v * dx;
        }
    }
    let norm = f.norm_sqr();
    let residual = if norm == 0.0 {
        0.0
    } else {
        let err: f64 = table
            .iter()
            .zip(&f.values)
            .map(|(row, v)| (v - row.iter().zip(&coefficients).map(|(m, c)| m * c).sum::<Complex64>()).norm_sqr())
            .sum::<f64>()
            * dx;
        (err / norm).sqrt()
    };
    Ok(StateExpansion { coefficients, truncation_n_max: basis.per_series, residual })
}

/// `cₙ ↦ cₙ e^{−iEₙT/ħ}`.
pub fn propagate(e: &StateExpansion, basis: &ModeBasis, time: f64) -> StateExpansion {
    let hbar = basis.oscillator.hbar;
    let coefficients = e
        .coefficients
        .iter()
        .zip(&basis.modes)
        .map(|(c, m)| c * Complex64::from_polar(1.0, -m.energy * time / hbar))
        .collect();
    StateExpansion { coefficients, ..e.clone() }
}

/// `(ψ(x), ψ′(x))` for an expanded state.
pub fn reconstruct(e: &StateExpansion, basis: &ModeBasis, x: f64) -> (Complex64, Complex64) {
    basis
        .eval_all(x)
        .into_iter()
        .zip(&e.coefficients)
        .fold((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)), |(v, d), ((m, dm), c)| (v + m * c, d + dm * c))
}

pub fn reconstruct_on(e: &StateExpansion, basis: &ModeBasis, grid: SymmetricGrid) -> SampledProfile {
    SampledProfile::from_fn(grid, |x| reconstruct(e, basis, x).0)
}

/// Amplitudes of the return and mirror terms of the propagator at
/// `T = kπ/ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CausticWeights {
    pub return_amp: Complex64,
    pub mirror_amp: Complex64,
}

pub fn caustic_weights(a: f64, k: u32) -> CausticWeights {
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let phase = a * k as f64 * PI;
    CausticWeights {
        return_amp: Complex64::new(sign * phase.cos(), 0.0),
        mirror_amp: Complex64::new(0.0, sign * phase.sin()),
    }
}

/// Outcome of the copy process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CopyOutcome {
    pub measured_return_weight: f64,
    pub measured_mirror_weight: f64,
    pub leakage: f64,
    pub predicted_return_weight: f64,
    pub predicted_mirror_weight: f64,
    pub expansion_residual: f64,
}

/// Evolve `f` for `T = kπ/ω` in the free-point basis and measure `|ψ(T)|²`
/// on `window` (on `x > 0`) and on its mirror image.
pub fn copy_simulation(f: &SampledProfile, basis: &ModeBasis, k: u32, window: (f64, f64)) -> Result<CopyOutcome> {
    if !basis.is_free_point() {
        return Err(Error::UnsupportedSingularity("the copy process is defined for the free point U = σ₁".into()));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let (lo, hi) = (window.0.max(0.0), window.1);
    if !(hi > lo) {
        return Err(Error::InvalidParameter("empty projection window".into()));
    }
    let e = expand_state(f, basis)?;
    if e.residual >= 1e-3 {
        return Err(Error::ExpansionResidual(e.residual));
    }
    let t = k as f64 * PI / basis.oscillator.omega;
    let evolved = reconstruct_on(&propagate(&e, basis, t), basis, f.grid);
    let total = f.norm_sqr();
    let ret = evolved.weight_in(lo, hi) / total;
    let mir = evolved.weight_in(-hi, -lo) / total;
    let w = caustic_weights(basis.oscillator.a(), k);
    Ok(CopyOutcome {
        measured_return_weight: ret,
        measured_mirror_weight: mir,
        leakage: 1.0 - ret - mir,
        predicted_return_weight: w.return_amp.norm_sqr(),
        predicted_mirror_weight: w.mirror_amp.norm_sqr(),
        expansion_residual: e.residual,
    })
}

/// One-sided limits of the probability current at the singularity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularityCurrent {
    pub plus: f64,
    pub minus: f64,
}

/// `j = (ħ/m) Im(ψ*ψ′)` at `x → ±0` for the state evolved to time `t`,
/// from a fit in `ε` with the correction powers of the two series.
pub fn singularity_current(e: &StateExpansion, basis: &ModeBasis, t: f64) -> Result<SingularityCurrent> {
    let o = &basis.oscillator;
    let a = o.a();
    let state = propagate(e, basis, t);
    let mut exps: Vec<f64> = vec![2.0 - 2.0 * a, 2.0, 2.0 + 2.0 * a, 4.0 - 4.0 * a, 4.0 - 2.0 * a, 4.0];
    exps.sort_by(f64::total_cmp);
    exps.dedup_by(|x, y| (*x - *y).abs() < 1e-9);
    let eps0 = 0.02 / (o.beta() * (1.0 + basis.max_wavenumber() / o.beta() / 10.0));
    let steps: Vec<f64> = (0..12).map(|j| eps0 / 2f64.powi(j)).collect();
    let pref = o.hbar / o.mass;
    let limit = |sign: f64| -> Result<f64> {
        let vals: Vec<f64> = steps
            .iter()
            .map(|&s| {
                let (v, d) = reconstruct(&state, basis, sign * s);
                pref * (v.conj() * d).im
            })
            .collect();
        let full = fit_limit_with_exponents(&steps, &vals, &exps)?;
        let fine = fit_limit_with_exponents(&steps[2..], &vals[2..], &exps)?;
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        if (full - fine).abs() > 1e-6 * scale.max(full.abs()) + 1e-14 {
            return Err(Error::NonConvergence(format!("current limit unstable: {full} vs {fine}")));
        }
        Ok(full)
    };
    Ok(SingularityCurrent { plus: limit(1.0)?, minus: limit(-1.0)? })
}

/// `W[φ⁽¹⁾, φ⁽²⁾/(c₂ − c₁)]` in `x` at the reference energy `λ = 0`; it is
/// constant and equals `√(mω/ħ)`.
pub fn reference_wronskian(o: &OscillatorParams, x: f64) -> Result<f64> {
    let beta = o.beta();
    let y = beta * x;
    let (p, dp) = kummer_solution(o.c1(), 0.0, y)?;
    let (q, dq) = kummer_solution(o.c2(), 0.0, y)?;
    Ok(beta * (p * dq - q * dp) / (o.c2() - o.c1()))
}
