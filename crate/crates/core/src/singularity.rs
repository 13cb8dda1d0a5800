//! The characteristic matrix `U ∈ U(2)` of a point singularity.
//!
//! Wave functions meet the singularity through the boundary vectors
//! `Ψ = (ψ(+0), ψ(−0))`, `Ψ′ = (ψ′(+0), −ψ′(−0))` and obey the connection
//! condition `(U − I)Ψ + iL₀(U + I)Ψ′ = 0`. `U` is parametrized as
//! `U = V†DV` with `D = diag(e^{iθ₊}, e^{iθ₋})` and
//! `V = e^{iμσ₂/2} e^{iνσ₃/2}`.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::fit_limit_with_exponents;
use crate::Units;

pub type Vec2 = [Complex64; 2];
pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub const IDENTITY: Mat2 = [[ONE, ZERO], [ZERO, ONE]];
pub const SIGMA1: Mat2 = [[ZERO, ONE], [ONE, ZERO]];
pub const SIGMA2: Mat2 = [[ZERO, Complex64 { re: 0.0, im: -1.0 }], [I, ZERO]];
pub const SIGMA3: Mat2 = [[ONE, ZERO], [ZERO, Complex64 { re: -1.0, im: 0.0 }]];

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat_vec(a: &Mat2, v: &Vec2) -> Vec2 {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

pub fn adjoint(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

pub fn mat_add(a: &Mat2, b: &Mat2, scale_b: Complex64) -> Mat2 {
    let mut out = *a;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] += scale_b * b[i][j];
        }
    }
    out
}

/// Largest entry modulus of `a − b`.
pub fn max_abs_diff(a: &Mat2, b: &Mat2) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

/// Reduce an angle into `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A real number or the infinity marker (Neumann lengths, pole couplings).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtReal::Infinite)
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinite => None,
        }
    }

    /// `1/x`, with `1/∞ = 0`. `1/0` is `f64::INFINITY`.
    pub fn recip(&self) -> f64 {
        match *self {
            ExtReal::Finite(v) => 1.0 / v,
            ExtReal::Infinite => 0.0,
        }
    }

    /// From a float, treating non-finite values as the infinity marker.
    pub fn from_f64(v: f64) -> Self {
        if v.is_finite() {
            ExtReal::Finite(v)
        } else {
            ExtReal::Infinite
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::Infinite => write!(f, "inf"),
        }
    }
}

// Snap angles this close to 0 or π onto them when evaluating cot/tan.
const ANGLE_SNAP: f64 = 1e-14;

/// `cot(θ/2)` as an extended real: ∞ at θ ≡ 0, exactly 0 at θ ≡ π.
fn cot_half(theta: f64) -> ExtReal {
    let t = wrap_angle(theta);
    if t < ANGLE_SNAP || TAU - t < ANGLE_SNAP {
        ExtReal::Infinite
    } else if (t - PI).abs() < ANGLE_SNAP {
        ExtReal::Finite(0.0)
    } else {
        let h = 0.5 * t;
        ExtReal::Finite(h.cos() / h.sin())
    }
}

/// `tan(θ/2)` as an extended real: ∞ at θ ≡ π, exactly 0 at θ ≡ 0.
fn tan_half(theta: f64) -> ExtReal {
    let t = wrap_angle(theta);
    if (t - PI).abs() < ANGLE_SNAP {
        ExtReal::Infinite
    } else if t < ANGLE_SNAP || TAU - t < ANGLE_SNAP {
        ExtReal::Finite(0.0)
    } else {
        let h = 0.5 * t;
        ExtReal::Finite(h.sin() / h.cos())
    }
}

/// The four `U(2)` angles plus the reference length `L₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularityParams {
    pub theta_plus: f64,
    pub theta_minus: f64,
    pub mu: f64,
    pub nu: f64,
    pub l0: f64,
}

impl SingularityParams {
    /// Validated constructor; angles must already lie in their ranges.
    pub fn new(theta_plus: f64, theta_minus: f64, mu: f64, nu: f64, l0: f64) -> Result<Self> {
        let p = SingularityParams { theta_plus, theta_minus, mu, nu, l0 };
        p.validate()?;
        Ok(p)
    }

    /// Like [`SingularityParams::new`] but reduces `θ₊, θ₋, ν` mod 2π first.
    pub fn wrapped(theta_plus: f64, theta_minus: f64, mu: f64, nu: f64, l0: f64) -> Result<Self> {
        Self::new(wrap_angle(theta_plus), wrap_angle(theta_minus), mu, wrap_angle(nu), l0)
    }

    /// Parity-invariant family `(μ, ν) = (π/2, 0)`.
    pub fn parity_invariant(theta_plus: f64, theta_minus: f64, l0: f64) -> Result<Self> {
        Self::wrapped(theta_plus, theta_minus, PI / 2.0, 0.0, l0)
    }

    /// Separated (diagonal) family `μ = 0`.
    pub fn separated(theta_plus: f64, theta_minus: f64, l0: f64) -> Result<Self> {
        Self::wrapped(theta_plus, theta_minus, 0.0, 0.0, l0)
    }

    pub fn validate(&self) -> Result<()> {
        let in_circle = |x: f64| (0.0..TAU).contains(&x);
        if !in_circle(self.theta_plus) || !in_circle(self.theta_minus) {
            return Err(Error::InvalidParameter(format!(
                "θ± must lie in [0, 2π), got ({}, {})",
                self.theta_plus, self.theta_minus
            )));
        }
        if !(0.0..=PI).contains(&self.mu) {
            return Err(Error::InvalidParameter(format!("μ must lie in [0, π], got {}", self.mu)));
        }
        if !in_circle(self.nu) {
            return Err(Error::InvalidParameter(format!("ν must lie in [0, 2π), got {}", self.nu)));
        }
        if self.l0 == 0.0 || !self.l0.is_finite() {
            return Err(Error::InvalidParameter(format!("L₀ must be finite and nonzero, got {}", self.l0)));
        }
        Ok(())
    }

    /// `L(θ₊)`, the scale length of the `θ₊` channel.
    pub fn length_plus(&self) -> ExtReal {
        scale_length(self.theta_plus, self.l0)
    }

    /// `L(θ₋)`.
    pub fn length_minus(&self) -> ExtReal {
        scale_length(self.theta_minus, self.l0)
    }
}

/// The characteristic matrix, checked unitary on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicMatrix {
    pub u: Mat2,
}

pub const UNITARITY_TOL: f64 = 1e-10;

impl CharacteristicMatrix {
    pub fn new(u: Mat2) -> Result<Self> {
        let dev = unitarity_deviation(&u);
        if !(dev <= UNITARITY_TOL) {
            return Err(Error::NotUnitary(dev));
        }
        Ok(CharacteristicMatrix { u })
    }

    pub fn identity() -> Self {
        CharacteristicMatrix { u: IDENTITY }
    }

    pub fn diagonal(theta_plus: f64, theta_minus: f64) -> Self {
        CharacteristicMatrix {
            u: [
                [Complex64::from_polar(1.0, theta_plus), ZERO],
                [ZERO, Complex64::from_polar(1.0, theta_minus)],
            ],
        }
    }

    /// `e^{iθ}` is an eigenvalue of the restriction to `v`; returns `⟨v|U|v⟩/⟨v|v⟩`.
    pub fn expectation(&self, v: &Vec2) -> Complex64 {
        let uv = mat_vec(&self.u, v);
        let num = v[0].conj() * uv[0] + v[1].conj() * uv[1];
        num / (v[0].norm_sqr() + v[1].norm_sqr())
    }
}

/// `‖U†U − I‖` in the max-entry norm.
pub fn unitarity_deviation(u: &Mat2) -> f64 {
    max_abs_diff(&mat_mul(&adjoint(u), u), &IDENTITY)
}

/// The conjugating matrix `V = e^{iμσ₂/2} e^{iνσ₃/2}`.
pub fn conjugator(mu: f64, nu: f64) -> Mat2 {
    let (c, s) = ((0.5 * mu).cos(), (0.5 * mu).sin());
    let ep = Complex64::from_polar(1.0, 0.5 * nu);
    let em = ep.conj();
    [[ep * c, em * s], [ep * (-s), em * c]]
}

/// `U = V†DV`.
pub fn build_characteristic_matrix(p: &SingularityParams) -> CharacteristicMatrix {
    let v = conjugator(p.mu, p.nu);
    let d = CharacteristicMatrix::diagonal(p.theta_plus, p.theta_minus).u;
    CharacteristicMatrix { u: mat_mul(&adjoint(&v), &mat_mul(&d, &v)) }
}

/// Inverse of [`build_characteristic_matrix`].
///
/// `θ₊` is taken to be the eigenvalue whose eigenvector leans towards the
/// first basis vector (`μ ≤ π/2`); at `μ = π/2` the smaller angle is `θ₊`.
/// Degenerate eigenvalues give `(μ, ν) = (0, 0)`.
pub fn decompose_characteristic_matrix(u: &CharacteristicMatrix, l0: f64) -> Result<SingularityParams> {
    let dev = unitarity_deviation(&u.u);
    if !(dev <= UNITARITY_TOL) {
        return Err(Error::NotUnitary(dev));
    }
    let m = &u.u;
    // U = e^{iφ} W with W ∈ SU(2), W = a₀ I + i a·σ.
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let phase = 0.5 * det.arg();
    let rot = Complex64::from_polar(1.0, -phase);
    let w = [[m[0][0] * rot, m[0][1] * rot], [m[1][0] * rot, m[1][1] * rot]];
    let a0 = 0.5 * (w[0][0] + w[1][1]).re;
    let a1 = 0.5 * (w[0][1] + w[1][0]).im;
    let a2 = 0.5 * (w[0][1] - w[1][0]).re;
    let a3 = 0.5 * (w[0][0] - w[1][1]).im;
    let norm = (a1 * a1 + a2 * a2 + a3 * a3).sqrt();
    let chi = norm.atan2(a0);
    if norm < 1e-13 {
        let theta = wrap_angle(phase + chi);
        return SingularityParams::new(theta, theta, 0.0, 0.0, l0);
    }
    // Eigenvalue e^{i(φ+χ)} has Bloch vector n, e^{i(φ−χ)} has −n.
    let mut n = [a1 / norm, a2 / norm, a3 / norm];
    let mut tp = wrap_angle(phase + chi);
    let mut tm = wrap_angle(phase - chi);
    let flip = if n[2].abs() < 1e-12 { tp > tm } else { n[2] < 0.0 };
    if flip {
        std::mem::swap(&mut tp, &mut tm);
        n = [-n[0], -n[1], -n[2]];
    }
    let transverse = n[0].hypot(n[1]);
    let mu = transverse.atan2(n[2]).clamp(0.0, PI);
    let nu = if transverse < 1e-14 { 0.0 } else { wrap_angle(n[1].atan2(n[0])) };
    SingularityParams::new(tp, tm, mu, nu, l0)
}

/// Boundary vectors `(Ψ, Ψ′)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryVectors {
    pub psi: Vec2,
    pub psi_prime: Vec2,
}

impl BoundaryVectors {
    /// From one-sided values and derivatives `ψ(±0)`, `ψ′(±0)`.
    pub fn from_limits(plus: (Complex64, Complex64), minus: (Complex64, Complex64)) -> Self {
        BoundaryVectors { psi: [plus.0, minus.0], psi_prime: [plus.1, -minus.1] }
    }

    /// A state that satisfies the connection condition of `U`:
    /// `Ψ = L₀(U + I)w`, `Ψ′ = i(U − I)w`.
    pub fn compliant(u: &CharacteristicMatrix, l0: f64, w: Vec2) -> Self {
        let plus = mat_add(&u.u, &IDENTITY, ONE);
        let minus = mat_add(&u.u, &IDENTITY, -ONE);
        let p = mat_vec(&plus, &w);
        let q = mat_vec(&minus, &w);
        BoundaryVectors { psi: [p[0] * l0, p[1] * l0], psi_prime: [q[0] * I, q[1] * I] }
    }

    /// Probability currents `(j(+0), j(−0))` with `j = (ħ/m) Im(ψ* ψ′)`.
    pub fn currents(&self, units: &Units) -> (f64, f64) {
        let k = units.hbar / units.mass;
        let jp = k * (self.psi[0].conj() * self.psi_prime[0]).im;
        let jm = k * (self.psi[1].conj() * (-self.psi_prime[1])).im;
        (jp, jm)
    }
}

/// `(U − I)Ψ + iL₀(U + I)Ψ′`.
pub fn connection_residual(u: &CharacteristicMatrix, l0: f64, b: &BoundaryVectors) -> Vec2 {
    let minus = mat_add(&u.u, &IDENTITY, -ONE);
    let plus = mat_add(&u.u, &IDENTITY, ONE);
    let r1 = mat_vec(&minus, &b.psi);
    let r2 = mat_vec(&plus, &b.psi_prime);
    let f = I * l0;
    [r1[0] + f * r2[0], r1[1] + f * r2[1]]
}

/// Value and derivative of a function at a point.
pub type ValueDeriv = (Complex64, Complex64);

/// `W[f, g] = f g′ − g f′`.
pub fn wronskian(f: ValueDeriv, g: ValueDeriv) -> Complex64 {
    f.0 * g.1 - g.0 * f.1
}

/// Settings for the `ε → 0` limit in [`wronskian_boundary_vectors`].
#[derive(Debug, Clone, PartialEq)]
pub struct WronskianLimit {
    /// Largest sample distance; samples are `ε, ε/2, ε/4, …`.
    pub epsilon: f64,
    pub samples: usize,
    /// Powers of `ε` allowed in the correction terms.
    pub exponents: Vec<f64>,
    /// Absolute tolerance on the agreement between the full fit and the
    /// fit without the two coarsest samples.
    pub tolerance: f64,
}

impl WronskianLimit {
    /// Polynomial corrections, as for smooth states and references.
    pub fn polynomial(epsilon: f64) -> Self {
        WronskianLimit { epsilon, samples: 10, exponents: vec![1.0, 2.0, 3.0, 4.0], tolerance: 1e-7 }
    }
}

/// Limit of `g(ε)` as `ε → 0` from samples, fitting the given correction powers.
pub(crate) fn limit_from_samples(
    steps: &[f64],
    values: &[Complex64],
    exponents: &[f64],
    tolerance: f64,
) -> Result<Complex64> {
    let re: Vec<f64> = values.iter().map(|v| v.re).collect();
    let im: Vec<f64> = values.iter().map(|v| v.im).collect();
    let full = Complex64::new(
        fit_limit_with_exponents(steps, &re, exponents)?,
        fit_limit_with_exponents(steps, &im, exponents)?,
    );
    let fine = Complex64::new(
        fit_limit_with_exponents(&steps[2..], &re[2..], exponents)?,
        fit_limit_with_exponents(&steps[2..], &im[2..], exponents)?,
    );
    let scale = values.iter().map(|v| v.norm()).fold(1.0, f64::max);
    if !full.re.is_finite() || !full.im.is_finite() || (full - fine).norm() > tolerance * scale {
        return Err(Error::NonConvergence(format!(
            "ε → 0 limit unstable: {} vs {}",
            full, fine
        )));
    }
    Ok(full)
}

/// Generalised boundary vectors built from Wronskians with reference states:
/// `Ψ = (W[ψ, φ₁]₊₀, W[ψ, φ₁]₋₀)`, `Ψ′ = (W[ψ, φ₂]₊₀, −W[ψ, φ₂]₋₀)`.
///
/// With `φ₁ = x` and `φ₂ = −1` these reduce to the plain boundary values.
pub fn wronskian_boundary_vectors<F, G, H>(
    psi: F,
    phi1: G,
    phi2: H,
    limit: &WronskianLimit,
) -> Result<BoundaryVectors>
where
    F: Fn(f64) -> ValueDeriv,
    G: Fn(f64) -> ValueDeriv,
    H: Fn(f64) -> ValueDeriv,
{
    if !(limit.epsilon > 0.0) || limit.samples < limit.exponents.len() + 3 {
        return Err(Error::InvalidParameter(
            "Wronskian limit needs ε > 0 and more samples than fit terms + 2".into(),
        ));
    }
    let steps: Vec<f64> = (0..limit.samples).map(|j| limit.epsilon / 2f64.powi(j as i32)).collect();
    let mut series: [Vec<Complex64>; 4] = Default::default();
    for &e in &steps {
        let (pp, pm) = (psi(e), psi(-e));
        series[0].push(wronskian(pp, phi1(e)));
        series[1].push(wronskian(pm, phi1(-e)));
        series[2].push(wronskian(pp, phi2(e)));
        series[3].push(wronskian(pm, phi2(-e)));
    }
    let lim = |s: &Vec<Complex64>| limit_from_samples(&steps, s, &limit.exponents, limit.tolerance);
    Ok(BoundaryVectors {
        psi: [lim(&series[0])?, lim(&series[1])?],
        psi_prime: [lim(&series[2])?, -lim(&series[3])?],
    })
}

/// The isospectral transformations and their action on `U`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    /// `x → −x`: `U → σ₁Uσ₁`.
    Parity,
    /// `ψ → ψ·sign(x)`: `U → σ₃Uσ₃`.
    HalfReflection,
    /// Product of the two: `U → σ₂Uσ₂`.
    ProductQ,
}

pub fn symmetry_transform(u: &CharacteristicMatrix, which: Symmetry) -> CharacteristicMatrix {
    let s = match which {
        Symmetry::Parity => SIGMA1,
        Symmetry::HalfReflection => SIGMA3,
        Symmetry::ProductQ => SIGMA2,
    };
    CharacteristicMatrix { u: mat_mul(&s, &mat_mul(&u.u, &s)) }
}

/// Membership of `U` in the distinguished subfamilies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub separated: bool,
    pub parity_invariant: bool,
    pub scale_invariant: bool,
    pub self_dual: bool,
}

pub const CLASSIFY_TOL: f64 = 1e-10;

pub fn classify(u: &CharacteristicMatrix) -> Classification {
    let m = &u.u;
    let separated = m[0][1].norm() < CLASSIFY_TOL && m[1][0].norm() < CLASSIFY_TOL;
    let parity_invariant =
        max_abs_diff(&symmetry_transform(u, Symmetry::Parity).u, m) < CLASSIFY_TOL;
    let trace = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    // eigenvalues {1, −1}
    let scale_invariant = trace.norm() < CLASSIFY_TOL && (det + ONE).norm() < CLASSIFY_TOL;
    let half = trace * 0.5;
    let self_dual = max_abs_diff(m, &[[half, ZERO], [ZERO, half]]) < CLASSIFY_TOL;
    Classification { separated, parity_invariant, scale_invariant, self_dual }
}

/// `L(θ) = L₀ cot(θ/2)`.
pub fn scale_length(theta: f64, l0: f64) -> ExtReal {
    match cot_half(theta) {
        ExtReal::Finite(c) => ExtReal::Finite(l0 * c),
        ExtReal::Infinite => ExtReal::Infinite,
    }
}

/// Coupling constants `(g₊, g₋) = (tan(θ₊/2), cot(θ₋/2))` of the
/// parity-invariant family.
pub fn coupling_constants(theta_plus: f64, theta_minus: f64) -> (ExtReal, ExtReal) {
    (tan_half(theta_plus), cot_half(theta_minus))
}

/// Eigenphase of `U` on the parity-even vector `(1, 1)/√2`.
pub fn symmetric_channel_angle(u: &CharacteristicMatrix) -> f64 {
    wrap_angle(u.expectation(&[ONE, ONE]).arg())
}

/// Eigenphase of `U` on the parity-odd vector `(1, −1)/√2`.
pub fn antisymmetric_channel_angle(u: &CharacteristicMatrix) -> f64 {
    wrap_angle(u.expectation(&[ONE, -ONE]).arg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn free_point_is_sigma1() {
        let p = SingularityParams::new(0.0, PI, PI / 2.0, 0.0, 1.0).unwrap();
        let u = build_characteristic_matrix(&p);
        assert!(max_abs_diff(&u.u, &SIGMA1) < 1e-15);
    }

    #[test]
    fn scalar_diagonal_commutes() {
        let p = SingularityParams::new(PI, PI, 1.1, 2.3, 1.0).unwrap();
        let u = build_characteristic_matrix(&p);
        assert!(max_abs_diff(&u.u, &[[c(-1.0), ZERO], [ZERO, c(-1.0)]]) < 1e-15);
        let t = PI / 3.0;
        let p = SingularityParams::new(t, t, 0.4, 5.0, 1.0).unwrap();
        let e = Complex64::from_polar(1.0, t);
        assert!(max_abs_diff(&build_characteristic_matrix(&p).u, &[[e, ZERO], [ZERO, e]]) < 1e-15);
    }

    #[test]
    fn decompose_examples() {
        let s1 = CharacteristicMatrix::new(SIGMA1).unwrap();
        let p = decompose_characteristic_matrix(&s1, 1.0).unwrap();
        assert!(p.theta_plus.abs() < 1e-14 && (p.theta_minus - PI).abs() < 1e-14);
        assert!((p.mu - PI / 2.0).abs() < 1e-14 && p.nu.abs() < 1e-14);

        let mi = CharacteristicMatrix::new([[c(-1.0), ZERO], [ZERO, c(-1.0)]]).unwrap();
        let p = decompose_characteristic_matrix(&mi, 1.0).unwrap();
        assert!((p.theta_plus - PI).abs() < 1e-14 && (p.theta_minus - PI).abs() < 1e-14);
        assert_eq!((p.mu, p.nu), (0.0, 0.0));

        let p0 = SingularityParams::new(1.0, 2.0, 0.7, 3.0, 1.0).unwrap();
        let u = build_characteristic_matrix(&p0);
        let p = decompose_characteristic_matrix(&u, 1.0).unwrap();
        assert!(max_abs_diff(&build_characteristic_matrix(&p).u, &u.u) < 1e-12);
        assert!((p.theta_plus - 1.0).abs() < 1e-12 && (p.mu - 0.7).abs() < 1e-12);
    }

    #[test]
    fn non_unitary_rejected() {
        let bad = [[c(2.0), ZERO], [ZERO, ONE]];
        assert!(matches!(CharacteristicMatrix::new(bad), Err(Error::NotUnitary(_))));
        let u = CharacteristicMatrix { u: bad };
        assert!(matches!(decompose_characteristic_matrix(&u, 1.0), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn connection_examples() {
        let s1 = CharacteristicMatrix::new(SIGMA1).unwrap();
        let b = BoundaryVectors { psi: [c(1.0), c(1.0)], psi_prime: [c(2.0), c(-2.0)] };
        assert!(connection_residual(&s1, 1.0, &b).iter().all(|z| z.norm() < 1e-15));

        let dir = CharacteristicMatrix::new([[c(-1.0), ZERO], [ZERO, c(-1.0)]]).unwrap();
        let b = BoundaryVectors { psi: [ZERO, ZERO], psi_prime: [c(5.0), c(-3.0)] };
        assert!(connection_residual(&dir, 1.0, &b).iter().all(|z| z.norm() < 1e-15));

        let neu = CharacteristicMatrix::identity();
        let b = BoundaryVectors { psi: [c(4.0), c(7.0)], psi_prime: [ZERO, ZERO] };
        assert!(connection_residual(&neu, 1.0, &b).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn separated_condition_is_robin() {
        // ψ(+0) + L(θ₊)ψ′(+0) = 0 and ψ(−0) − L(θ₋)ψ′(−0) = 0
        let (tp, tm, l0) = (1.2, 2.5, 0.8);
        let u = CharacteristicMatrix::diagonal(tp, tm);
        let (lp, lm) = (scale_length(tp, l0).finite().unwrap(), scale_length(tm, l0).finite().unwrap());
        let b = BoundaryVectors::from_limits((c(-lp), c(1.0)), (c(lm), c(1.0)));
        assert!(connection_residual(&u, l0, &b).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn wronskian_regains_plain_boundary_vectors() {
        let psi = |x: f64| (c((2.0 * x).sin() + 1.5 + x * x), c(2.0 * (2.0 * x).cos() + 2.0 * x));
        let phi1 = |x: f64| (c(x), ONE);
        let phi2 = |_x: f64| (c(-1.0), ZERO);
        let b = wronskian_boundary_vectors(psi, phi1, phi2, &WronskianLimit::polynomial(1e-2)).unwrap();
        let direct = BoundaryVectors::from_limits(psi(0.0), psi(0.0));
        for i in 0..2 {
            assert!((b.psi[i] - direct.psi[i]).norm() < 1e-9);
            assert!((b.psi_prime[i] - direct.psi_prime[i]).norm() < 1e-9);
        }
        // ψ = φ₁ gives a zero Ψ
        let b = wronskian_boundary_vectors(phi1, phi1, phi2, &WronskianLimit::polynomial(1e-2)).unwrap();
        assert!(b.psi.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn wronskian_nonconvergence_reported() {
        // ψ = sin(1/x) has no limit
        let psi = |x: f64| (c((1.0 / x).sin()), c(-(1.0 / x).cos() / (x * x)));
        let phi1 = |x: f64| (c(x), ONE);
        let phi2 = |_x: f64| (c(-1.0), ZERO);
        let r = wronskian_boundary_vectors(psi, phi1, phi2, &WronskianLimit::polynomial(1e-2));
        assert!(matches!(r, Err(Error::NonConvergence(_))));
    }

    #[test]
    fn symmetry_examples() {
        let s1 = CharacteristicMatrix::new(SIGMA1).unwrap();
        assert!(max_abs_diff(&symmetry_transform(&s1, Symmetry::Parity).u, &SIGMA1) < 1e-15);
        let d = CharacteristicMatrix::diagonal(0.3, 1.9);
        assert!(max_abs_diff(&symmetry_transform(&d, Symmetry::HalfReflection).u, &d.u) < 1e-15);
        let (tp, tm) = (0.4, 2.2);
        let u = build_characteristic_matrix(&SingularityParams::parity_invariant(tp, tm, 1.0).unwrap());
        let r = symmetry_transform(&u, Symmetry::HalfReflection);
        let swapped = build_characteristic_matrix(&SingularityParams::parity_invariant(tm, tp, 1.0).unwrap());
        assert!(max_abs_diff(&r.u, &swapped.u) < 1e-14);
    }

    #[test]
    fn classify_examples() {
        let mi = CharacteristicMatrix::new([[c(-1.0), ZERO], [ZERO, c(-1.0)]]).unwrap();
        assert_eq!(
            classify(&mi),
            Classification { separated: true, parity_invariant: true, scale_invariant: false, self_dual: true }
        );
        let s1 = CharacteristicMatrix::new(SIGMA1).unwrap();
        assert_eq!(
            classify(&s1),
            Classification { separated: false, parity_invariant: true, scale_invariant: true, self_dual: false }
        );
        let d = CharacteristicMatrix::diagonal(PI / 3.0, PI / 5.0);
        assert_eq!(
            classify(&d),
            Classification { separated: true, parity_invariant: false, scale_invariant: false, self_dual: false }
        );
    }

    #[test]
    fn scale_length_and_couplings() {
        assert_eq!(scale_length(PI, 1.0), ExtReal::Finite(0.0));
        assert_eq!(scale_length(0.0, 1.0), ExtReal::Infinite);
        assert!((scale_length(PI / 2.0, 2.0).finite().unwrap() - 2.0).abs() < 1e-15);

        assert_eq!(coupling_constants(0.0, PI), (ExtReal::Finite(0.0), ExtReal::Finite(0.0)));
        let (gp, gm) = coupling_constants(PI / 2.0, PI / 2.0);
        assert!((gp.finite().unwrap() - 1.0).abs() < 1e-15 && (gm.finite().unwrap() - 1.0).abs() < 1e-15);
        let (gp, gm) = coupling_constants(PI / 2.0, 1.5 * PI);
        let (hp, hm) = coupling_constants(1.5 * PI, PI / 2.0);
        assert!((hp.finite().unwrap() + 1.0 / gp.finite().unwrap()).abs() < 1e-14);
        assert!((hm.finite().unwrap() + 1.0 / gm.finite().unwrap()).abs() < 1e-14);
    }

    #[test]
    fn channel_angles_of_parity_invariant_family() {
        let u = build_characteristic_matrix(&SingularityParams::parity_invariant(0.7, 4.0, 1.0).unwrap());
        assert!((symmetric_channel_angle(&u) - 0.7).abs() < 1e-14);
        assert!((antisymmetric_channel_angle(&u) - 4.0).abs() < 1e-14);
    }

    fn angle() -> impl Strategy<Value = f64> {
        0.0..TAU
    }

    fn complex_pair() -> impl Strategy<Value = Vec2> {
        (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64)
            .prop_map(|(a, b, c, d)| [Complex64::new(a, b), Complex64::new(c, d)])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn built_matrix_is_unitary(tp in angle(), tm in angle(), mu in 0.0..=PI, nu in angle()) {
            let p = SingularityParams::new(tp, tm, mu, nu, 1.0).unwrap();
            prop_assert!(unitarity_deviation(&build_characteristic_matrix(&p).u) < 1e-12);
        }

        #[test]
        fn round_trip(tp in angle(), tm in angle(), mu in 0.0..=PI, nu in angle()) {
            let p = SingularityParams::new(tp, tm, mu, nu, 1.0).unwrap();
            let u = build_characteristic_matrix(&p);
            let q = decompose_characteristic_matrix(&u, 1.0).unwrap();
            prop_assert!(max_abs_diff(&build_characteristic_matrix(&q).u, &u.u) < 1e-10);
        }

        #[test]
        fn parity_family_commutes_with_sigma1(tp in angle(), tm in angle()) {
            let u = build_characteristic_matrix(&SingularityParams::parity_invariant(tp, tm, 1.0).unwrap());
            prop_assert!(max_abs_diff(&mat_mul(&u.u, &SIGMA1), &mat_mul(&SIGMA1, &u.u)) < 1e-12);
        }

        #[test]
        fn current_is_continuous(tp in angle(), tm in angle(), mu in 0.0..=PI, nu in angle(),
                                 l0 in 0.2..3.0f64, w in complex_pair()) {
            let u = build_characteristic_matrix(&SingularityParams::new(tp, tm, mu, nu, l0).unwrap());
            let b = BoundaryVectors::compliant(&u, l0, w);
            prop_assert!(connection_residual(&u, l0, &b).iter().all(|z| z.norm() < 1e-12));
            let (jp, jm) = b.currents(&Units::default());
            prop_assert!((jp - jm).abs() < 1e-8);
        }

        #[test]
        fn separated_blocks_current(tp in angle(), tm in angle(), l0 in 0.2..3.0f64, w in complex_pair()) {
            let u = CharacteristicMatrix::diagonal(tp, tm);
            let b = BoundaryVectors::compliant(&u, l0, w);
            let (jp, jm) = b.currents(&Units::default());
            prop_assert!(jp.abs() < 1e-8 && jm.abs() < 1e-8);
        }
    }
}
