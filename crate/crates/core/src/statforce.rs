//! Statistical force on a partition wall that is Neumann from the right
//! and Dirichlet from the left, with `N` particles on each side of a box
//! of half width `l`.
//!
//! Levels are `e⁺ₙ = (n − ½)²` and `e⁻ₙ = n²` in units of
//! `ℰ = (ħ²/2m)(π/l)²`; the force from each side is `(2ℰ/l) Σ eₙNₙ`.
//! Dimensionless forces below are `(l/2ℰ)F`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{bisect, golden_section_min};
use crate::Units;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Bose,
    Fermi,
}

impl std::fmt::Display for Statistics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Statistics::Bose => "bose",
            Statistics::Fermi => "fermi",
        })
    }
}

/// Right (`Plus`, Neumann-facing) or left (`Minus`, Dirichlet-facing) half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn level(self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            Side::Plus => (n - 0.5) * (n - 0.5),
            Side::Minus => n * n,
        }
    }

    /// `σ` of the Poisson resummation: the `n = 0` term removed from the
    /// full-lattice sum.
    fn sigma(self) -> f64 {
        match self {
            Side::Plus => 0.0,
            Side::Minus => 1.0,
        }
    }

    /// `(∓1)` of the dual sum: half-integer shift on the plus side.
    fn dual_sign(self) -> f64 {
        match self {
            Side::Plus => -1.0,
            Side::Minus => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasConfig {
    pub n_particles: usize,
    pub statistics: Statistics,
    /// `kT/ℰ`.
    pub t: f64,
    pub half_width: f64,
    pub units: Units,
}

impl GasConfig {
    pub fn new(n_particles: usize, statistics: Statistics, t: f64) -> Result<Self> {
        let c = GasConfig { n_particles, statistics, t, half_width: 1.0, units: Units::default() };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_particles == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::InvalidParameter(format!("temperature t = {} must be positive", self.t)));
        }
        if !(self.half_width > 0.0) {
            return Err(Error::InvalidParameter("half width must be positive".into()));
        }
        Ok(())
    }

    pub fn with_t(&self, t: f64) -> Self {
        GasConfig { t, ..*self }
    }

    /// `ℰ = (ħ²/2m)(π/l)²`.
    pub fn energy_unit(&self) -> f64 {
        self.units.kinetic() * (PI / self.half_width).powi(2)
    }

    /// `2ℰ/l`, converting dimensionless forces to physical ones.
    pub fn force_unit(&self) -> f64 {
        2.0 * self.energy_unit() / self.half_width
    }
}

/// Net force at one temperature. Fields a method does not produce are
/// `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForcePoint {
    pub t: f64,
    pub alpha_plus: Option<f64>,
    pub alpha_minus: Option<f64>,
    /// Dimensionless one-sided forces `Σ eₙNₙ`.
    pub f_plus: Option<f64>,
    pub f_minus: Option<f64>,
    /// `F⁻ − F⁺` in physical units.
    pub delta_f: f64,
    pub dimensionless_delta_f: f64,
}

impl ForcePoint {
    fn new(cfg: &GasConfig, alphas: Option<(f64, f64)>, forces: Option<(f64, f64)>, dimless: f64) -> Self {
        ForcePoint {
            t: cfg.t,
            alpha_plus: alphas.map(|a| a.0),
            alpha_minus: alphas.map(|a| a.1),
            f_plus: forces.map(|f| f.0),
            f_minus: forces.map(|f| f.1),
            delta_f: cfg.force_unit() * dimless,
            dimensionless_delta_f: dimless,
        }
    }
}

/// `Σ Nₙ` and `Σ eₙNₙ`, where the occupation is a function of the
/// exponent `xₙ = α + eₙ/t`. The bosonic exponent is passed relative to
/// the ground level, `xₙ = δ + (eₙ − e₁)/t`, so that tiny `δ` keeps its
/// precision.
fn level_sums(side: Side, stats: Statistics, t: f64, offset: f64) -> (f64, f64) {
    let e1 = side.level(1);
    let exponent = |n: usize| match stats {
        Statistics::Bose => offset + (side.level(n) - e1) / t,
        Statistics::Fermi => offset + side.level(n) / t,
    };
    let occupation = |x: f64| match stats {
        Statistics::Bose => 1.0 / x.exp_m1(),
        Statistics::Fermi => 1.0 / (x.exp() + 1.0),
    };
    let (mut count, mut energy) = (0.0, 0.0);
    let mut n = 1usize;
    loop {
        let x = exponent(n);
        let occ = occupation(x);
        count += occ;
        energy += side.level(n) * occ;
        // tail past n: gaps eₘ₊₁ − eₘ ≥ 2m give a geometric envelope
        let x_next = exponent(n + 1);
        if x_next > 0.0 {
            let rho = (-2.0 * (n + 1) as f64 / t).exp();
            if rho < 1.0 {
                let head = match stats {
                    Statistics::Bose => (-x_next).exp() / -(-x_next).exp_m1(),
                    Statistics::Fermi => (-x_next).exp(),
                };
                let tail_n = head / (1.0 - rho);
                let tail_e = head * side.level(n + 1) * (1.0 + rho) / (1.0 - rho).powi(3);
                if tail_n <= 1e-12 * count && tail_e <= 1e-12 * energy {
                    break;
                }
            }
        }
        n += 1;
        if n > 50_000_000 {
            break;
        }
    }
    (count, energy)
}

/// `α` with `Σ Nₙ(α) = N`, `Nₙ = 1/(e^{α + eₙ/t} ∓ 1)`.
pub fn solve_alpha(n_particles: usize, t: f64, side: Side, stats: Statistics) -> Result<f64> {
    GasConfig::new(n_particles, stats, t)?;
    Ok(solve_offset(n_particles as f64, t, side, stats).0)
}

/// Returns `(α, Σ Nₙ, Σ eₙNₙ)`.
fn solve_offset(n: f64, t: f64, side: Side, stats: Statistics) -> (f64, f64, f64) {
    let e1 = side.level(1);
    match stats {
        Statistics::Bose => {
            // δ = α + e₁/t > 0, bisection in ln δ
            let f = |ld: f64| level_sums(side, stats, t, ld.exp()).0 - n;
            let hi = (t.sqrt() + 1.0).ln() + 5.0 + n.ln().abs();
            let ld = bisect(f, -60.0 - n.ln(), hi, 0.0);
            let delta = ld.exp();
            let (c, e) = level_sums(side, stats, t, delta);
            (delta - e1 / t, c, e)
        }
        Statistics::Fermi => {
            let f = |a: f64| level_sums(side, stats, t, a).0 - n;
            let lo = -(n + 2.0).powi(2) / t - 60.0;
            let hi = (t.sqrt() + 1.0).ln() + 60.0;
            let a = bisect(f, lo, hi, 0.0);
            let (c, e) = level_sums(side, stats, t, a);
            (a, c, e)
        }
    }
}

/// Occupations `N₁, N₂, …` for the solved `α`, up to `levels` entries.
pub fn occupations(cfg: &GasConfig, side: Side, levels: usize) -> Result<Vec<f64>> {
    cfg.validate()?;
    let a = solve_offset(cfg.n_particles as f64, cfg.t, side, cfg.statistics).0;
    Ok((1..=levels)
        .map(|n| match cfg.statistics {
            Statistics::Bose => {
                let x = (a + side.level(1) / cfg.t) + (side.level(n) - side.level(1)) / cfg.t;
                1.0 / x.exp_m1()
            }
            Statistics::Fermi => 1.0 / ((a + side.level(n) / cfg.t).exp() + 1.0),
        })
        .collect())
}

/// Forces from the level sums of Eq. (45) with `α±` solved from the
/// particle number.
pub fn exact_net_force(cfg: &GasConfig) -> Result<ForcePoint> {
    cfg.validate()?;
    let n = cfg.n_particles as f64;
    let (ap, _, fp) = solve_offset(n, cfg.t, Side::Plus, cfg.statistics);
    let (am, _, fm) = solve_offset(n, cfg.t, Side::Minus, cfg.statistics);
    Ok(ForcePoint::new(cfg, Some((ap, am)), Some((fp, fm)), fm - fp))
}

/// Approximation schemes for the net force.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForceMethod {
    Exact,
    /// Ground and first excited levels only.
    LowT,
    /// Linear decrease from the zero-temperature value.
    Linear,
    /// Sums replaced by integrals, `|α| < 1`.
    Integral,
    /// Poisson-resummed series truncated at `k_max` and `|m| ≤ m_max`.
    Poisson { k_max: usize, m_max: usize },
    /// `(N/2)√(t/π)` in dimensionless units.
    Asymptotic,
}

impl ForceMethod {
    pub const POISSON_DEFAULT: ForceMethod = ForceMethod::Poisson { k_max: 40, m_max: 10 };

    pub fn name(&self) -> &'static str {
        match self {
            ForceMethod::Exact => "exact",
            ForceMethod::LowT => "low_t",
            ForceMethod::Linear => "linear",
            ForceMethod::Integral => "integral",
            ForceMethod::Poisson { .. } => "poisson",
            ForceMethod::Asymptotic => "asymptotic",
        }
    }
}

pub fn approx_net_force(cfg: &GasConfig, method: ForceMethod) -> Result<ForcePoint> {
    cfg.validate()?;
    let n = cfg.n_particles as f64;
    let t = cfg.t;
    let bose_only = |m: ForceMethod| -> Result<()> {
        if cfg.statistics != Statistics::Bose {
            return Err(Error::MethodStatistics { method: m.name().into(), statistics: cfg.statistics.to_string() });
        }
        Ok(())
    };
    match method {
        ForceMethod::Exact => exact_net_force(cfg),
        ForceMethod::LowT => {
            bose_only(method)?;
            let v = 0.75 * n + 3.0 * (-3.0 / t).exp() - 2.0 * (-2.0 / t).exp();
            Ok(ForcePoint::new(cfg, None, None, v))
        }
        ForceMethod::Linear => {
            bose_only(method)?;
            let e1 = std::f64::consts::E - 1.0;
            Ok(ForcePoint::new(cfg, None, None, 0.75 * n - t / (e1 * e1)))
        }
        ForceMethod::Integral => {
            bose_only(method)?;
            let ap = integral_alpha(n, t, Side::Plus)?;
            let am = integral_alpha(n, t, Side::Minus)?;
            let v = (n * t + 35.0 / 96.0 * PI.sqrt() * t.powf(1.5)) * (ap - am)
                + (Side::Plus.level(1).sqrt() - Side::Minus.level(1).sqrt()) * t;
            Ok(ForcePoint::new(cfg, Some((ap, am)), None, v))
        }
        ForceMethod::Poisson { k_max, m_max } => {
            if k_max == 0 {
                return Err(Error::InvalidParameter("k_max must be positive".into()));
            }
            let (qp, fp) = poisson_side(n, t, Side::Plus, cfg.statistics, k_max, m_max)?;
            let (qm, fm) = poisson_side(n, t, Side::Minus, cfg.statistics, k_max, m_max)?;
            Ok(ForcePoint::new(cfg, Some((-qp.ln(), -qm.ln())), Some((fp, fm)), fm - fp))
        }
        ForceMethod::Asymptotic => Ok(ForcePoint::new(cfg, None, None, 0.5 * n * (t / PI).sqrt())),
    }
}

/// Right-hand side of Eq. (49), with the `α → 0` limit of the bracket.
pub fn integral_particle_number(alpha: f64, t: f64, side: Side) -> f64 {
    let (e1, e2) = (side.level(1), side.level(2));
    let mut v = 1.0 / (alpha + e1 / t) + 0.5 / (alpha + e2 / t) - 0.75 - (((2.0 - alpha) * t).sqrt() - e2.sqrt()) / 2.0;
    let m = alpha.abs();
    let bracket = if m < 1e-12 {
        t / e2.sqrt() - (t / (2.0 - alpha)).sqrt()
    } else {
        let x1 = (m * t / e2).sqrt();
        let x2 = (m / (2.0 - alpha)).sqrt();
        let f = |x: f64| if alpha > 0.0 { x.atan() } else { x.atanh() };
        (t / m).sqrt() * (f(x1) - f(x2))
    };
    v += bracket;
    v
}

/// Root of Eq. (49) in `|α| < 1`. The formula has spurious roots at
/// negative `α`; the physical one is the largest, where the particle number
/// falls with `α` as the exact sum does.
fn integral_alpha(n: f64, t: f64, side: Side) -> Result<f64> {
    let g = |a: f64| integral_particle_number(a, t, side) - n;
    let steps = 4000;
    let pts: Vec<f64> = (0..=steps).map(|i| -1.0 + 2.0 * i as f64 / steps as f64).collect();
    pts.windows(2)
        .rev()
        .find(|w| {
            let (fa, fb) = (g(w[0]), g(w[1]));
            fa.is_finite() && fb.is_finite() && fa >= 0.0 && fb <= 0.0
        })
        .map(|w| bisect(g, w[0], w[1], 1e-14))
        .ok_or_else(|| Error::NotBracketed(format!("Eq. 49 has no root with |α| < 1 at t = {t}")))
}

/// `Σₘ (∓1)^m e^{−π²tm²/k}` and `Σₘ (∓1)^m (1 − 2π²tm²/k) e^{−π²tm²/k}`.
fn dual_sums(side: Side, k: f64, t: f64, m_max: usize) -> (f64, f64) {
    let (mut s0, mut s1) = (1.0, 1.0);
    for m in 1..=m_max {
        let mf = m as f64;
        let arg = PI * PI * t * mf * mf / k;
        let w = 2.0 * side.dual_sign().powi(m as i32) * (-arg).exp();
        s0 += w;
        s1 += w * (1.0 - 2.0 * arg);
    }
    (s0, s1)
}

/// The Poisson-resummed `Σ_{n≥1} e^{−k eₙ/t} = −σ/2 + √(πt/4k) Σₘ …`.
pub fn theta_sum_resummed(side: Side, k: f64, t: f64, m_max: usize) -> f64 {
    -0.5 * side.sigma() + (PI * t / (4.0 * k)).sqrt() * dual_sums(side, k, t, m_max).0
}

/// Direct `Σ_{n≥1} e^{−k eₙ/t}`.
pub fn theta_sum_direct(side: Side, k: f64, t: f64) -> f64 {
    let mut s = 0.0;
    for n in 1.. {
        let term = (-k * side.level(n) / t).exp();
        s += term;
        if term < 1e-18 * s {
            break;
        }
    }
    s
}

fn statistics_sign(stats: Statistics, k: usize) -> f64 {
    match stats {
        Statistics::Bose => 1.0,
        Statistics::Fermi => if k % 2 == 1 { 1.0 } else { -1.0 },
    }
}

/// `N(q)` from Eq. (53): `Σₖ q^k [−σ/2 + √(πt/4k) Σₘ (∓1)^m e^{−π²tm²/k}]`.
pub fn poisson_particle_number(q: f64, t: f64, side: Side, stats: Statistics, k_max: usize, m_max: usize) -> f64 {
    (1..=k_max)
        .map(|k| statistics_sign(stats, k) * q.powi(k as i32) * theta_sum_resummed(side, k as f64, t, m_max))
        .sum()
}

/// `N(q) = Σₙ 1/(q⁻¹e^{eₙ/t} ∓ 1)` summed directly over levels.
pub fn direct_particle_number(q: f64, t: f64, side: Side, stats: Statistics) -> f64 {
    let mut s = 0.0;
    for n in 1.. {
        let x = side.level(n) / t - q.ln();
        let occ = match stats {
            Statistics::Bose => 1.0 / x.exp_m1(),
            Statistics::Fermi => 1.0 / (x.exp() + 1.0),
        };
        s += occ;
        if x > 0.0 && occ < 1e-18 * s {
            break;
        }
    }
    s
}

/// `(q, Σ eₙNₙ)` with `q` solving Eq. (53) truncated at `k_max`.
/// Fermions use `Nₙ = Σₖ (−1)^{k+1} q^k e^{−k eₙ/t}`.
fn poisson_side(n: f64, t: f64, side: Side, stats: Statistics, k_max: usize, m_max: usize) -> Result<(f64, f64)> {
    let terms: Vec<(f64, f64)> = (1..=k_max)
        .map(|k| {
            let kf = k as f64;
            let (s0, s1) = dual_sums(side, kf, t, m_max);
            let count = -0.5 * side.sigma() + (PI * t / (4.0 * kf)).sqrt() * s0;
            let force = (PI * t.powi(3) / (16.0 * kf.powi(3))).sqrt() * s1;
            (count, force)
        })
        .collect();
    let sign = |k: usize| statistics_sign(stats, k);
    let total = |q: f64, col: usize| -> f64 {
        terms
            .iter()
            .enumerate()
            .map(|(i, tm)| sign(i + 1) * q.powi(i as i32 + 1) * if col == 0 { tm.0 } else { tm.1 })
            .sum()
    };
    // convergence radius of Σₖ (q e^{−e₁/t})^k
    let q_max = (side.level(1) / t).exp().min(1e300);
    let g = |lq: f64| total(lq.exp(), 0) - n;
    let (lo, hi) = (-700.0f64, q_max.ln());
    if !(g(lo) < 0.0 && g(hi) > 0.0) {
        return Err(Error::NotBracketed(format!("Eq. 53 for q on side {side:?} at t = {t}")));
    }
    let q = bisect(g, lo, hi, 1e-15).exp();
    Ok((q, total(q, 1)))
}

/// Net force at each temperature, in input order.
pub fn force_curve(template: &GasConfig, t_values: &[f64], method: ForceMethod) -> Result<Vec<ForcePoint>> {
    if t_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("temperatures must be ascending".into()));
    }
    t_values.par_iter().map(|&t| approx_net_force(&template.with_t(t), method)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceMinimum {
    pub t_min: f64,
    pub delta_f_min: f64,
}

/// Minimum of the exact dimensionless `ΔF(t)` on `[1, 10N]` (bosons) or
/// `[1, 10N²]` (fermions): a logarithmic scan, then golden section in
/// `ln t` to `10⁻³` relative.
pub fn find_force_minimum(template: &GasConfig) -> Result<ForceMinimum> {
    template.with_t(1.0).validate()?;
    let n = template.n_particles as f64;
    let upper = match template.statistics {
        Statistics::Bose => 10.0 * n,
        Statistics::Fermi => 10.0 * n * n,
    };
    let f = |lt: f64| exact_net_force(&template.with_t(lt.exp())).map(|p| p.dimensionless_delta_f).unwrap_or(f64::INFINITY);
    let scan = 80;
    let (l0, l1) = (0.0, upper.ln());
    let pts: Vec<f64> = (0..=scan).map(|i| l0 + (l1 - l0) * i as f64 / scan as f64).collect();
    let vals: Vec<f64> = pts.par_iter().map(|&x| f(x)).collect();
    let i = (0..vals.len()).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    let a = pts[i.saturating_sub(1)];
    let b = pts[(i + 1).min(scan)];
    let (x, fx) = golden_section_min(f, a, b, 1e-4);
    Ok(ForceMinimum { t_min: x.exp(), delta_f_min: fx })
}
