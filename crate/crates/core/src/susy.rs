//! Supersymmetry of the two-component (half-line) formulation.
//!
//! A state is written as `Ψ(x) = (ψ(x), ψ(−x))` for `x > 0`, so that
//! `Ψ(0)` and `Ψ′(0)` are exactly the boundary vectors of the connection
//! condition. The supercharges are `Q = −iλ σ_a d/dx + σ_b` with
//! `λ = ħ/(2√m)`, `|a| = 1` and `a·b = 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::singularity::{
    adjoint, build_characteristic_matrix, conjugator, connection_residual, mat_mul, mat_vec,
    BoundaryVectors, CharacteristicMatrix, ExtReal, Mat2, SingularityParams, Vec2, SIGMA1,
    SIGMA2, SIGMA3,
};
use crate::spectra::{Level, Momentum, Parity, Series};
use crate::{Complex64, Units};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const NEG_I: Complex64 = Complex64 { re: 0.0, im: -1.0 };

/// `Σ vᵢ σᵢ`.
pub fn pauli(v: [f64; 3]) -> Mat2 {
    let mut m = [[ZERO; 2]; 2];
    for (c, s) in v.iter().zip([SIGMA1, SIGMA2, SIGMA3]) {
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] += s[i][j] * *c;
            }
        }
    }
    m
}

/// Components of a traceless Hermitian matrix along the Pauli matrices.
fn pauli_components(m: &Mat2) -> [f64; 3] {
    let tr = |s: &Mat2| {
        let p = mat_mul(s, m);
        0.5 * (p[0][0] + p[1][1]).re
    };
    [tr(&SIGMA1), tr(&SIGMA2), tr(&SIGMA3)]
}

fn add(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

fn scale(a: Vec2, s: Complex64) -> Vec2 {
    [a[0] * s, a[1] * s]
}

fn vnorm(a: &Vec2) -> f64 {
    (a[0].norm_sqr() + a[1].norm_sqr()).sqrt()
}

/// A two-component state on `[0, l]` with its first two derivatives.
pub trait TwoComponentState {
    fn value(&self, x: f64) -> Vec2;
    fn derivative(&self, x: f64) -> Vec2;
    fn second_derivative(&self, x: f64) -> Vec2;
    /// Right end `l` of the domain.
    fn extent(&self) -> f64;
    /// Whether the derivatives are exact (tightens residual tolerances).
    fn analytic(&self) -> bool {
        true
    }

    fn boundary_vectors(&self) -> BoundaryVectors {
        BoundaryVectors { psi: self.value(0.0), psi_prime: self.derivative(0.0) }
    }
}

/// A state given only by its values; derivatives by central differences
/// with step `10⁻⁵ l` (one-sided at the ends of the domain).
pub struct SampledState<F: Fn(f64) -> Vec2> {
    pub f: F,
    pub extent: f64,
}

impl<F: Fn(f64) -> Vec2> SampledState<F> {
    fn h(&self) -> f64 {
        1e-5 * self.extent
    }

    fn center(&self, x: f64) -> f64 {
        let h = self.h();
        x.clamp(2.0 * h, self.extent - 2.0 * h)
    }
}

impl<F: Fn(f64) -> Vec2> TwoComponentState for SampledState<F> {
    fn value(&self, x: f64) -> Vec2 {
        (self.f)(x)
    }

    fn derivative(&self, x: f64) -> Vec2 {
        let h = self.h();
        let c = self.center(x);
        // Taylor-shift the centered estimate when clamped at an end
        let d1 = scale(add((self.f)(c + h), scale((self.f)(c - h), -Complex64::new(1.0, 0.0))), Complex64::new(0.5 / h, 0.0));
        add(d1, scale(self.second_derivative(c), Complex64::new(x - c, 0.0)))
    }

    fn second_derivative(&self, x: f64) -> Vec2 {
        let h = self.h();
        let c = self.center(x);
        let (a, b, m) = ((self.f)(c + h), (self.f)(c - h), (self.f)(c));
        let k = Complex64::new(1.0 / (h * h), 0.0);
        [(a[0] + b[0] - m[0] * 2.0) * k, (a[1] + b[1] - m[1] * 2.0) * k]
    }

    fn extent(&self) -> f64 {
        self.extent
    }

    fn analytic(&self) -> bool {
        false
    }
}

/// `Q = −iλ σ_a d/dx + σ_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Supercharge {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub lambda: f64,
}

/// Parameters of the supercharge family built for `U = V†diag(e^{iθ}, −1)V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperchargeFamily {
    pub alpha: f64,
    pub c: f64,
    pub theta: f64,
    pub mu: f64,
    pub nu: f64,
    pub l0: f64,
}

pub fn susy_lambda(units: &Units) -> f64 {
    units.hbar / (2.0 * units.mass.sqrt())
}

impl Supercharge {
    /// Checked constructor: `|a| = 1` and `a·b = 0`.
    pub fn new(a: [f64; 3], b: [f64; 3], lambda: f64) -> Result<Self> {
        let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        if (na - 1.0).abs() > 1e-12 || dot.abs() > 1e-12 || !(lambda > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "supercharge needs |a| = 1, a·b = 0, λ > 0 (got |a| = {na}, a·b = {dot})"
            )));
        }
        Ok(Supercharge { a, b, lambda })
    }

    /// The family `Q = V† q(α, c; θ) V` with
    /// `q = −iλ d/dx σ_{a₀} − (λ/L(θ)) σ_{a₀⊥} + c σ₃`,
    /// `a₀ = (cos α, sin α, 0)`, `a₀⊥ = (−sin α, cos α, 0)`.
    pub fn from_family(f: &SuperchargeFamily, units: &Units) -> Result<Self> {
        let lambda = susy_lambda(units);
        let inv_len = match crate::singularity::scale_length(f.theta, f.l0) {
            ExtReal::Infinite => 0.0,
            ExtReal::Finite(l) if l != 0.0 => 1.0 / l,
            _ => {
                return Err(Error::InvalidParameter(
                    "supercharge family needs e^{iθ} ≠ −1 (L(θ) ≠ 0)".into(),
                ))
            }
        };
        let (s, c) = f.alpha.sin_cos();
        let a0 = [c, s, 0.0];
        let b0 = [lambda * inv_len * s, -lambda * inv_len * c, f.c];
        let v = conjugator(f.mu, f.nu);
        let conj = |w: [f64; 3]| pauli_components(&mat_mul(&adjoint(&v), &mat_mul(&pauli(w), &v)));
        Supercharge::new(conj(a0), conj(b0), lambda)
    }

    pub fn b_norm_sqr(&self) -> f64 {
        self.b.iter().map(|x| x * x).sum()
    }

    fn apply_parts(&self, d: Vec2, v: Vec2) -> Vec2 {
        let sa = mat_vec(&pauli(self.a), &d);
        let sb = mat_vec(&pauli(self.b), &v);
        add(scale(sa, NEG_I * self.lambda), sb)
    }
}

/// `QΨ` as a state in its own right. Its second derivative needs `Ψ‴`,
/// taken by a central difference of `Ψ″`.
pub struct Charged<'a, S: TwoComponentState + ?Sized> {
    pub q: Supercharge,
    pub state: &'a S,
}

pub fn apply_supercharge<'a, S: TwoComponentState + ?Sized>(q: &Supercharge, s: &'a S) -> Charged<'a, S> {
    Charged { q: *q, state: s }
}

impl<S: TwoComponentState + ?Sized> TwoComponentState for Charged<'_, S> {
    fn value(&self, x: f64) -> Vec2 {
        self.q.apply_parts(self.state.derivative(x), self.state.value(x))
    }

    fn derivative(&self, x: f64) -> Vec2 {
        self.q.apply_parts(self.state.second_derivative(x), self.state.derivative(x))
    }

    fn second_derivative(&self, x: f64) -> Vec2 {
        let h = 1e-5 * self.state.extent();
        let xc = x.clamp(h, self.state.extent() - h);
        let d2p = self.state.second_derivative(xc + h);
        let d2m = self.state.second_derivative(xc - h);
        let third = scale(add(d2p, scale(d2m, -Complex64::new(1.0, 0.0))), Complex64::new(0.5 / h, 0.0));
        self.q.apply_parts(third, self.state.second_derivative(x))
    }

    fn extent(&self) -> f64 {
        self.state.extent()
    }

    fn analytic(&self) -> bool {
        false
    }
}

/// Residuals of the squared supercharge on a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraResidual {
    /// `max |2Q²Ψ − (HΨ + 2|b|²Ψ)| / max |HΨ|`: the identity that holds.
    pub corrected: f64,
    /// Same with the shift `|b|²` in place of `2|b|²`.
    pub literal: f64,
}

/// Compare `2Q²Ψ` with `HΨ + 2|b|²Ψ` on `sample_grid` interior points.
///
/// `Q(QΨ)` is assembled from `Ψ, Ψ′, Ψ″` without using the algebraic
/// expansion, so the check also exercises `a·b = 0`.
pub fn susy_algebra_residual<S: TwoComponentState + ?Sized>(
    q: &Supercharge,
    s: &S,
    sample_grid: usize,
    units: &Units,
) -> AlgebraResidual {
    let l = s.extent();
    let kinetic = units.kinetic();
    let b2 = q.b_norm_sqr();
    let (mut num_c, mut num_l, mut den) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..sample_grid.max(1) {
        let x = l * (i as f64 + 0.5) / sample_grid.max(1) as f64;
        let (v, d1, d2) = (s.value(x), s.derivative(x), s.second_derivative(x));
        let qv = q.apply_parts(d1, v);
        let qd = q.apply_parts(d2, d1);
        let qqv = q.apply_parts(qd, qv);
        let two_qq = scale(qqv, Complex64::new(2.0, 0.0));
        let h = scale(d2, Complex64::new(-kinetic, 0.0));
        let diff = |shift: f64| {
            let rhs = add(h, scale(v, Complex64::new(shift, 0.0)));
            vnorm(&add(two_qq, scale(rhs, -Complex64::new(1.0, 0.0))))
        };
        num_c = num_c.max(diff(2.0 * b2));
        num_l = num_l.max(diff(b2));
        den = den.max(vnorm(&h));
    }
    if den == 0.0 {
        let r = if num_c == 0.0 { 0.0 } else { f64::INFINITY };
        return AlgebraResidual { corrected: r, literal: if num_l == 0.0 { 0.0 } else { f64::INFINITY } };
    }
    AlgebraResidual { corrected: num_c / den, literal: num_l / den }
}

/// Whether a state and its image under `Q` obey the connection condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreservationCheck {
    pub state_ok: bool,
    pub image_ok: bool,
}

fn relative_connection_residual(u: &CharacteristicMatrix, l0: f64, b: &BoundaryVectors) -> f64 {
    let r = connection_residual(u, l0, b);
    let size = vnorm(&b.psi) + l0.abs() * vnorm(&b.psi_prime);
    vnorm(&r) / size.max(1.0)
}

pub fn condition_preservation_check<S: TwoComponentState + ?Sized>(
    u: &CharacteristicMatrix,
    l0: f64,
    q: &Supercharge,
    s: &S,
) -> PreservationCheck {
    let state_ok = relative_connection_residual(u, l0, &s.boundary_vectors()) < 1e-8;
    let image = BoundaryVectors {
        psi: q.apply_parts(s.derivative(0.0), s.value(0.0)),
        psi_prime: q.apply_parts(s.second_derivative(0.0), s.derivative(0.0)),
    };
    let image_ok = relative_connection_residual(u, l0, &image) < 1e-6;
    PreservationCheck { state_ok, image_ok }
}

/// Energy eigenstate of the half-line problem for `U`: in the eigenbasis of
/// `U` each component solves `−χ″ = k²χ` with its channel's Robin condition
/// at 0, i.e. `χ = sin kx − kL cos kx` (`cos kx` when `L = ∞`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelEigenstate {
    pub params: SingularityParams,
    pub k: f64,
    pub weights: [Complex64; 2],
    pub extent: f64,
}

impl ChannelEigenstate {
    fn channel(&self, theta: f64, x: f64, order: u32) -> f64 {
        let k = self.k;
        let (s, c) = (k * x).sin_cos();
        // derivatives of sin and cos cycle with period 4
        let ds = [s, k * c, -k * k * s][order as usize];
        let dc = [c, -k * s, -k * k * c][order as usize];
        match crate::singularity::scale_length(theta, self.params.l0) {
            ExtReal::Infinite => dc,
            ExtReal::Finite(l) => ds - k * l * dc,
        }
    }

    fn eval(&self, x: f64, order: u32) -> Vec2 {
        let chi = [
            self.weights[0] * self.channel(self.params.theta_plus, x, order),
            self.weights[1] * self.channel(self.params.theta_minus, x, order),
        ];
        let v = conjugator(self.params.mu, self.params.nu);
        mat_vec(&adjoint(&v), &chi)
    }
}

impl TwoComponentState for ChannelEigenstate {
    fn value(&self, x: f64) -> Vec2 {
        self.eval(x, 0)
    }
    fn derivative(&self, x: f64) -> Vec2 {
        self.eval(x, 1)
    }
    fn second_derivative(&self, x: f64) -> Vec2 {
        self.eval(x, 2)
    }
    fn extent(&self) -> f64 {
        self.extent
    }
}

/// Eigenstate of the N = 1 well: `N(−e^{−iν} cos k(x − l), sin k(x − l))`,
/// `N = l^{−1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SusyWellState {
    pub n: i64,
    pub mu: f64,
    pub nu: f64,
    pub half_width: f64,
    pub k: f64,
}

impl SusyWellState {
    fn eval(&self, x: f64, order: u32) -> Vec2 {
        let k = self.k;
        let t = k * (x - self.half_width);
        let (s, c) = t.sin_cos();
        let (sv, cv) = match order {
            0 => (s, c),
            1 => (k * c, -k * s),
            _ => (-k * k * s, -k * k * c),
        };
        let norm = 1.0 / self.half_width.sqrt();
        [Complex64::from_polar(-norm * cv, -self.nu), Complex64::new(norm * sv, 0.0)]
    }

    /// The `b = 0` supercharge with `a = (−sin ν, cos ν, 0)`, under which
    /// this state maps to `λkΨ`.
    pub fn invariance_supercharge(&self, units: &Units) -> Supercharge {
        Supercharge { a: [-self.nu.sin(), self.nu.cos(), 0.0], b: [0.0; 3], lambda: susy_lambda(units) }
    }
}

impl TwoComponentState for SusyWellState {
    fn value(&self, x: f64) -> Vec2 {
        self.eval(x, 0)
    }
    fn derivative(&self, x: f64) -> Vec2 {
        self.eval(x, 1)
    }
    fn second_derivative(&self, x: f64) -> Vec2 {
        self.eval(x, 2)
    }
    fn extent(&self) -> f64 {
        self.half_width
    }
}

/// The characteristic matrix `V†σ₃V` of the N = 1 well.
pub fn n1_well_matrix(mu: f64, nu: f64) -> Result<CharacteristicMatrix> {
    Ok(build_characteristic_matrix(&SingularityParams::wrapped(0.0, PI, mu, nu, 1.0)?))
}

/// Levels `kₙ = (nπ + μ/2)/l` of the N = 1 well for every `n` in the range.
/// Negative `n` give `kₙ < 0`; these are distinct eigenstates with energy
/// `ħ²kₙ²/2m` and pair with positive `n` when `μ ∈ {0, π}`.
pub fn n1_susy_well_spectrum(
    mu: f64,
    nu: f64,
    half_width: f64,
    n_range: std::ops::RangeInclusive<i64>,
    units: &Units,
) -> Result<Vec<(Level, SusyWellState)>> {
    if !(0.0..=PI).contains(&mu) || !(half_width > 0.0) {
        return Err(Error::InvalidParameter("N = 1 well needs μ ∈ [0, π] and l > 0".into()));
    }
    let mut out: Vec<(Level, SusyWellState)> = n_range
        .map(|n| {
            let k = (n as f64 * PI + 0.5 * mu) / half_width;
            let state = SusyWellState { n, mu, nu, half_width, k };
            let level = Level {
                index: 0,
                momentum: Some(Momentum::Real(k)),
                energy: units.kinetic() * k * k,
                parity: Parity::None,
                series: Series::None,
            };
            (level, state)
        })
        .collect();
    out.sort_by(|a, b| a.0.energy.total_cmp(&b.0.energy).then(a.1.n.cmp(&b.1.n)));
    for (i, (l, _)) in out.iter_mut().enumerate() {
        l.index = i;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn units() -> Units {
        Units::default()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn sigma1_action() {
        let q = Supercharge::new([1.0, 0.0, 0.0], [0.0; 3], 0.5).unwrap();
        let s = SampledState { f: |x: f64| [c(x.sin()), c(x * x)], extent: 1.0 };
        let img = apply_supercharge(&q, &s);
        let x = 0.4;
        let v = img.value(x);
        assert!((v[0] - Complex64::new(0.0, -0.5 * 2.0 * x)).norm() < 1e-8);
        assert!((v[1] - Complex64::new(0.0, -0.5 * x.cos())).norm() < 1e-8);
        let zero = SampledState { f: |_x: f64| [ZERO, ZERO], extent: 1.0 };
        assert_eq!(apply_supercharge(&q, &zero).value(0.5), [ZERO, ZERO]);
    }

    #[test]
    fn algebra_with_b_zero() {
        let q = Supercharge::new([1.0, 0.0, 0.0], [0.0; 3], susy_lambda(&units())).unwrap();
        let s = SusyWellState { n: 2, mu: 0.7, nu: 0.3, half_width: 1.0, k: (2.0 * PI + 0.35) };
        let r = susy_algebra_residual(&q, &s, 200, &units());
        assert!(r.corrected < 1e-12 && r.literal < 1e-12);
    }

    #[test]
    fn algebra_for_family_needs_twice_b_squared() {
        let fam = SuperchargeFamily { alpha: 0.4, c: 0.3, theta: PI / 2.0, mu: 0.9, nu: 1.7, l0: 1.0 };
        let q = Supercharge::from_family(&fam, &units()).unwrap();
        let s = ChannelEigenstate {
            params: SingularityParams::new(PI / 2.0, PI, 0.9, 1.7, 1.0).unwrap(),
            k: 2.3,
            weights: [c(0.6), Complex64::new(0.2, 0.5)],
            extent: 1.0,
        };
        let r = susy_algebra_residual(&q, &s, 200, &units());
        assert!(r.corrected < 1e-12, "{r:?}");
        assert!(r.literal > 1e-3);
    }

    #[test]
    fn violated_constraint_breaks_algebra() {
        let q = Supercharge { a: [1.0, 0.0, 0.0], b: [0.8, 0.0, 0.0], lambda: 0.5 };
        let s = SusyWellState { n: 1, mu: 0.5, nu: 0.0, half_width: 1.0, k: PI + 0.25 };
        assert!(susy_algebra_residual(&q, &s, 100, &units()).corrected > 0.1);
    }

    #[test]
    fn sampled_state_algebra_within_numeric_tolerance() {
        let q = Supercharge::new([0.0, 0.6, 0.8], [0.0, 0.8 * 0.3, -0.6 * 0.3], susy_lambda(&units())).unwrap();
        let s = SampledState { f: |x: f64| [c((2.0 * x).sin()), Complex64::new(x.cos(), x * x)], extent: 1.0 };
        assert!(susy_algebra_residual(&q, &s, 100, &units()).corrected < 1e-4);
    }

    #[test]
    fn preservation_for_minus_one_eigenvalue() {
        for &(theta, mu, nu, cc, alpha) in &[(PI / 2.0, 0.9, 1.7, 0.3, 0.4), (1.1, 2.5, 0.2, -0.8, 2.0)] {
            let p = SingularityParams::new(theta, PI, mu, nu, 1.0).unwrap();
            let u = build_characteristic_matrix(&p);
            let q = Supercharge::from_family(&SuperchargeFamily { alpha, c: cc, theta, mu, nu, l0: 1.0 }, &units()).unwrap();
            let s = ChannelEigenstate { params: p, k: 1.9, weights: [c(0.7), Complex64::new(-0.3, 0.4)], extent: 1.0 };
            assert_eq!(condition_preservation_check(&u, 1.0, &q, &s), PreservationCheck { state_ok: true, image_ok: true });
        }
    }

    #[test]
    fn preservation_fails_for_generic_pair() {
        let p = SingularityParams::new(0.8, 2.1, 1.2, 0.5, 1.0).unwrap();
        let u = build_characteristic_matrix(&p);
        let q = Supercharge::new([0.0, 0.6, 0.8], [0.5, 0.0, 0.0], susy_lambda(&units())).unwrap();
        let s = ChannelEigenstate { params: p, k: 1.3, weights: [c(0.5), c(0.5)], extent: 1.0 };
        assert_eq!(condition_preservation_check(&u, 1.0, &q, &s), PreservationCheck { state_ok: true, image_ok: false });
        let zero = SampledState { f: |_x: f64| [ZERO, ZERO], extent: 1.0 };
        assert_eq!(condition_preservation_check(&u, 1.0, &q, &zero), PreservationCheck { state_ok: true, image_ok: true });
    }

    #[test]
    fn n1_well_examples() {
        let lv = n1_susy_well_spectrum(PI / 2.0, 0.0, 1.0, 0..=3, &units()).unwrap();
        for (n, (_, s)) in lv.iter().enumerate() {
            assert!((s.k - (n as f64 * PI + PI / 4.0)).abs() < 1e-14);
        }
        let lv = n1_susy_well_spectrum(0.0, 0.0, 1.0, -3..=3, &units()).unwrap();
        // zero mode, then pairs (n, −n)
        assert_eq!(lv[0].1.n, 0);
        for pair in lv[1..].chunks(2) {
            assert!((pair[0].0.energy - pair[1].0.energy).abs() < 1e-12);
            assert_eq!(pair[0].1.n, -pair[1].1.n);
        }
        for (_, s) in &lv {
            let v = s.value(1.0);
            let d = s.derivative(1.0);
            assert!(d[0].norm() < 1e-14 && v[1].norm() < 1e-14);
        }
    }

    #[test]
    fn n1_states_obey_eq26_and_are_invariant() {
        let (mu, nu) = (1.2, 0.8);
        let u = n1_well_matrix(mu, nu).unwrap();
        for (_, s) in n1_susy_well_spectrum(mu, nu, 1.0, -4..=4, &units()).unwrap() {
            let r = connection_residual(&u, 1.0, &s.boundary_vectors());
            assert!(vnorm(&r) < 1e-10);
            let q = s.invariance_supercharge(&units());
            let img = apply_supercharge(&q, &s);
            for &x in &[0.1, 0.5, 0.9] {
                let (a, b) = (img.value(x), s.value(x));
                let want = scale(b, c(q.lambda * s.k));
                assert!(vnorm(&add(a, scale(want, c(-1.0)))) < 1e-8);
            }
        }
    }

    #[test]
    fn two_independent_supercharges() {
        let base = SuperchargeFamily { alpha: 0.3, c: 0.2, theta: 1.0, mu: 0.4, nu: 2.0, l0: 1.0 };
        let q1 = Supercharge::from_family(&base, &units()).unwrap();
        let q2 = Supercharge::from_family(&SuperchargeFamily { alpha: 0.3 + PI / 2.0, ..base }, &units()).unwrap();
        let dot: f64 = q1.a.iter().zip(&q2.a).map(|(x, y)| x * y).sum();
        assert!(dot.abs() < 1e-12);
        let s = ChannelEigenstate {
            params: SingularityParams::new(1.0, PI, 0.4, 2.0, 1.0).unwrap(),
            k: 3.1,
            weights: [c(1.0), c(0.2)],
            extent: 1.0,
        };
        for q in [q1, q2] {
            assert!(susy_algebra_residual(&q, &s, 100, &units()).corrected < 1e-12);
        }
    }
}
