//! Berry phase on the isospectral sphere and level anholonomy on the
//! spectral torus.
//!
//! The eigenstates of the scale-invariant well carry the connection
//! `A = −(1 + sin μ)/2 dν` with curvature `F = −(cos μ)/2 dμ∧dν`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::TrackingResult;

/// Coordinates a loop lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoopSpace {
    /// `(μ, ν)` on the isospectral sphere.
    Sphere,
    /// `(θ₊, θ₋)` on the spectral torus.
    Torus,
}

/// A polyline in parameter space. Angles may run past `2π`; closure is
/// checked modulo `2π` in the periodic coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopPath {
    pub space: LoopSpace,
    pub points: Vec<[f64; 2]>,
}

const CLOSURE_TOL: f64 = 1e-9;

fn same_mod_tau(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(TAU);
    d < CLOSURE_TOL || TAU - d < CLOSURE_TOL
}

impl LoopPath {
    pub fn new(space: LoopSpace, points: Vec<[f64; 2]>) -> Result<Self> {
        let path = LoopPath { space, points };
        path.validate()?;
        Ok(path)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::InvalidParameter("loop has no points".into()));
        }
        if self.points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("loop coordinates must be finite".into()));
        }
        if self.space == LoopSpace::Sphere && self.points.iter().any(|p| !(0.0..=PI).contains(&p[0])) {
            return Err(Error::InvalidParameter("sphere loops need μ in [0, π]".into()));
        }
        Ok(())
    }

    pub fn is_closed(&self) -> bool {
        let (first, last) = (self.points[0], *self.points.last().unwrap());
        match self.space {
            LoopSpace::Sphere => (first[0] - last[0]).abs() < CLOSURE_TOL && same_mod_tau(first[1], last[1]),
            LoopSpace::Torus => same_mod_tau(first[0], last[0]) && same_mod_tau(first[1], last[1]),
        }
    }

    /// Constant-`μ` circle `ν: 0 → 2π` with `segments` pieces.
    pub fn constant_mu(mu: f64, segments: usize) -> Result<Self> {
        let pts = (0..=segments).map(|i| [mu, TAU * i as f64 / segments as f64]).collect();
        Self::new(LoopSpace::Sphere, pts)
    }

    /// Straight torus loop `(θ₊, θ₋) = start + s·winding`, `s ∈ [0, 1]`,
    /// e.g. winding `(2π, 2π)` for loops parallel to the self-dual line.
    pub fn torus_line(start: [f64; 2], winding: [f64; 2], segments: usize) -> Result<Self> {
        let pts = (0..=segments)
            .map(|i| {
                let s = i as f64 / segments as f64;
                [start[0] + s * winding[0], start[1] + s * winding[1]]
            })
            .collect();
        Self::new(LoopSpace::Torus, pts)
    }

    pub fn reversed(&self) -> Self {
        let mut p = self.clone();
        p.points.reverse();
        p
    }

    /// `self` followed by `other`; `other` must start where `self` ends.
    pub fn concat(&self, other: &LoopPath) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::UnsupportedLoop("cannot join sphere and torus loops".into()));
        }
        let end = *self.points.last().unwrap();
        let start = other.points[0];
        if !(same_mod_tau(end[0], start[0]) && same_mod_tau(end[1], start[1])) {
            return Err(Error::UnsupportedLoop("loops do not join".into()));
        }
        // continue the coordinates without a 2π jump
        let shift = [
            end[0] - start[0],
            end[1] - start[1],
        ];
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().skip(1).map(|p| [p[0] + shift[0], p[1] + shift[1]]));
        Ok(LoopPath { space: self.space, points: pts })
    }

    /// Cumulative polyline length at each vertex.
    pub fn cumulative_length(&self) -> Vec<f64> {
        let mut c = vec![0.0];
        for seg in self.points.windows(2) {
            c.push(c.last().unwrap() + (seg[1][0] - seg[0][0]).hypot(seg[1][1] - seg[0][1]));
        }
        c
    }

    /// Point at fraction `s ∈ [0, 1]` of the polyline length.
    pub fn point_at(&self, s: f64) -> [f64; 2] {
        polyline_point(&self.points, &self.cumulative_length(), s)
    }

    /// The loop traversed `times` times.
    pub fn repeated(&self, times: usize) -> Result<Self> {
        let mut out = self.clone();
        for _ in 1..times {
            out = out.concat(self)?;
        }
        Ok(out)
    }
}

pub(crate) fn polyline_point(points: &[[f64; 2]], cumulative: &[f64], s: f64) -> [f64; 2] {
    let total = *cumulative.last().unwrap();
    if total == 0.0 {
        return points[0];
    }
    let target = s * total;
    let i = match cumulative.binary_search_by(|c| c.total_cmp(&target)) {
        Ok(i) => return points[i],
        Err(i) => i.clamp(1, points.len() - 1),
    };
    let (c0, c1) = (cumulative[i - 1], cumulative[i]);
    let t = if c1 > c0 { (target - c0) / (c1 - c0) } else { 0.0 };
    let (a, b) = (points[i - 1], points[i]);
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// `dν` coefficient of the Berry connection: `−(1 + sin μ)/2`.
pub fn berry_connection(mu: f64) -> f64 {
    -0.5 * (1.0 + mu.sin())
}

/// `dμ∧dν` coefficient of the curvature: `−(cos μ)/2`.
pub fn berry_curvature(mu: f64) -> f64 {
    -0.5 * mu.cos()
}

/// A loop phase, raw and reduced into `(−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerryPhase {
    pub raw: f64,
    pub reduced: f64,
}

pub fn reduce_phase(raw: f64) -> f64 {
    let mut r = raw - TAU * (raw / TAU).round();
    if r <= -PI {
        r += TAU;
    }
    if r > PI {
        r -= TAU;
    }
    r
}

fn unwrap_delta(d: f64) -> f64 {
    let r = reduce_phase(d);
    // a jump of exactly π is read as +π
    if (r + PI).abs() < 1e-15 {
        PI
    } else {
        r
    }
}

/// Largest `ν` increment per quadrature piece.
const MAX_NU_STEP: f64 = PI / 50.0;

/// `γ(C) = ∮ A` by the trapezoid rule on the polyline, resampled so that
/// no piece advances `ν` by more than `π/50`. `ν` steps are unwrapped into
/// `(−π, π]`.
pub fn berry_phase_loop(path: &LoopPath) -> Result<BerryPhase> {
    path.validate()?;
    if path.space != LoopSpace::Sphere {
        return Err(Error::UnsupportedLoop("Berry phase needs a loop on the isospectral sphere".into()));
    }
    if !path.is_closed() {
        return Err(Error::OpenLoop);
    }
    let mut raw = 0.0;
    for seg in path.points.windows(2) {
        let (mu_a, mu_b) = (seg[0][0], seg[1][0]);
        let dnu = unwrap_delta(seg[1][1] - seg[0][1]);
        let pieces = ((dnu.abs() / MAX_NU_STEP).ceil() as usize).max(1);
        for j in 0..pieces {
            let t0 = j as f64 / pieces as f64;
            let t1 = (j + 1) as f64 / pieces as f64;
            let m0 = mu_a + t0 * (mu_b - mu_a);
            let m1 = mu_a + t1 * (mu_b - mu_a);
            raw += 0.5 * (berry_connection(m0) + berry_connection(m1)) * dnu / pieces as f64;
        }
    }
    Ok(BerryPhase { raw, reduced: reduce_phase(raw) })
}

fn constant_mu_circle(path: &LoopPath) -> Result<(f64, f64)> {
    if path.space != LoopSpace::Sphere {
        return Err(Error::UnsupportedLoop("Stokes check needs sphere loops".into()));
    }
    let mu = path.points[0][0];
    if path.points.iter().any(|p| (p[0] - mu).abs() > 1e-12) {
        return Err(Error::UnsupportedLoop("Stokes check needs constant-μ circles".into()));
    }
    let winding: f64 = path.points.windows(2).map(|s| unwrap_delta(s[1][1] - s[0][1])).sum();
    if (winding.abs() - TAU).abs() > 1e-9 {
        return Err(Error::UnsupportedLoop("Stokes check needs circles covering the full ν range once".into()));
    }
    Ok((mu, winding.signum()))
}

/// `|(γ(b) − γ(a)) − ∬ F|` over the band between two constant-`μ` circles.
/// `F` does not depend on `ν`, so the flux is `2π ∫ F dμ`, by composite
/// Simpson on `band_mesh` intervals (rounded up to even).
pub fn stokes_residual(loop_a: &LoopPath, loop_b: &LoopPath, band_mesh: usize) -> Result<f64> {
    if band_mesh == 0 {
        return Err(Error::InvalidParameter("band mesh must be positive".into()));
    }
    let (mu_a, dir_a) = constant_mu_circle(loop_a)?;
    let (mu_b, dir_b) = constant_mu_circle(loop_b)?;
    if dir_a != dir_b {
        return Err(Error::UnsupportedLoop("circles must share their orientation".into()));
    }
    let lhs = berry_phase_loop(loop_b)?.raw - berry_phase_loop(loop_a)?.raw;
    let m = band_mesh + band_mesh % 2;
    let h = (mu_b - mu_a) / m as f64;
    let mut sum = berry_curvature(mu_a) + berry_curvature(mu_b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * berry_curvature(mu_a + i as f64 * h);
    }
    let flux = TAU * sum * h / 3.0;
    Ok((lhs - dir_a * flux).abs())
}

/// The common index shift of the tracked levels after a loop on the spectral
/// torus. Positive means the levels end lower than they started.
pub fn level_anholonomy_shift(tracking: &TrackingResult) -> Result<i64> {
    let dev = tracking.spectrum_mismatch();
    if dev > 1e-8 {
        return Err(Error::SpectrumNotRecovered(dev));
    }
    let mut common = None;
    for &(_, shift) in &tracking.shifts {
        if let Some(s) = shift {
            match common {
                None => common = Some(s),
                Some(c) if c != s => return Err(Error::NonUniformShift(tracking.shifts.clone())),
                _ => {}
            }
        }
    }
    common.ok_or_else(|| Error::NonUniformShift(tracking.shifts.clone()))
}
