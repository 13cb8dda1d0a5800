//! Special functions and one-dimensional numerics shared by the physics
//! modules: the gamma function, Kummer's confluent hypergeometric function,
//! a pole-aware root scanner, golden-section minimisation and limit
//! extrapolation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Magnitude above which a sign change is treated as a pole, not a root.
pub const BLOWUP_THRESHOLD: f64 = 1e8;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `sin(πx)` with exact zeros at the integers.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).floor(); // r in [0, 2)
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    (PI * r).sin()
}

/// Lanczos sum for `Γ(x)`, valid for `x ≥ 0.5`.
fn gamma_lanczos(x: f64) -> f64 {
    let xm = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (xm + i as f64);
    }
    let t = xm + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * acc * ((xm + 0.5) * t.ln() - t).exp()
}

/// The gamma function on the real line.
///
/// Lanczos approximation on `x ≥ 1/2`, reflection `Γ(x)Γ(1−x) = π/sin(πx)`
/// below. Poles at the non-positive integers are reported as errors.
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole(x));
    }
    if x >= 0.5 {
        Ok(gamma_lanczos(x))
    } else {
        Ok(PI / (sin_pi(x) * gamma_lanczos(1.0 - x)))
    }
}

/// `1/Γ(x)`, an entire function: exactly zero at the poles of `Γ`.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x >= 0.5 {
        1.0 / gamma_lanczos(x)
    } else {
        sin_pi(x) * gamma_lanczos(1.0 - x) / PI
    }
}

/// Generalised Laguerre polynomial `L_n^{(α)}(z)` by the three-term recurrence.
pub fn laguerre(n: usize, alpha: f64, z: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - z;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - z) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Kummer's confluent hypergeometric function `₁F₁(α; γ; z)`.
///
/// Direct series for `z ≥ 0`, Kummer's transformation
/// `M(α, γ, z) = e^z M(γ−α, γ, −z)` for `z < 0` so that summed terms never
/// alternate in the argument. Terminating cases (`α` a non-positive integer)
/// go through the Laguerre recurrence. Supported for `|z| ≤ 200`.
pub fn kummer_m(alpha: f64, gamma_param: f64, z: f64) -> Result<f64> {
    if is_nonpositive_integer(gamma_param) {
        return Err(Error::ParameterPole(format!(
            "M(α; γ; z) with γ = {gamma_param}"
        )));
    }
    if !z.is_finite() || z.abs() > 200.0 {
        return Err(Error::OutOfRange(format!("kummer_m argument z = {z}")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if is_nonpositive_integer(alpha) {
        return Ok(kummer_terminating((-alpha) as usize, gamma_param, z));
    }
    if z < 0.0 {
        let b_minus_a = gamma_param - alpha;
        let inner = if is_nonpositive_integer(b_minus_a) {
            kummer_terminating((-b_minus_a) as usize, gamma_param, -z)
        } else {
            kummer_series(b_minus_a, gamma_param, -z)?
        };
        return Ok(z.exp() * inner);
    }
    kummer_series(alpha, gamma_param, z)
}

fn kummer_terminating(n: usize, b: f64, z: f64) -> f64 {
    // M(-n, b, z) = L_n^{(b-1)}(z) / binom(n + b - 1, n)
    let alpha = b - 1.0;
    let mut binom = 1.0;
    for k in 1..=n {
        binom *= (alpha + k as f64) / k as f64;
    }
    laguerre(n, alpha, z) / binom
}

fn kummer_series(a: f64, b: f64, z: f64) -> Result<f64> {
    const MAX_TERMS: usize = 20_000;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * z / (kf + 1.0);
        sum += term;
        // Past the peak (k > z and k > |a|) the terms fall monotonically.
        if term.abs() <= 1e-17 * sum.abs() && kf > a.abs() {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        if !sum.is_finite() {
            break;
        }
    }
    Err(Error::NonConvergence(format!(
        "kummer series M({a}, {b}, {z}) after {MAX_TERMS} terms"
    )))
}

/// Settings for [`find_roots`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootScanConfig {
    pub lower: f64,
    pub upper: f64,
    pub scan_step: f64,
    pub refine_tolerance: f64,
    pub max_roots: usize,
}

impl RootScanConfig {
    pub fn new(lower: f64, upper: f64, scan_step: f64, refine_tolerance: f64, max_roots: usize) -> Result<Self> {
        let cfg = RootScanConfig { lower, upper, scan_step, refine_tolerance, max_roots };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if !(self.lower < self.upper) {
            return Err(Error::InvalidParameter(format!(
                "root scan needs lower < upper, got [{}, {}]",
                self.lower, self.upper
            )));
        }
        if !(self.scan_step > 0.0) || !(self.refine_tolerance > 0.0) || self.max_roots == 0 {
            return Err(Error::InvalidParameter(
                "root scan needs positive step, tolerance and max_roots".into(),
            ));
        }
        Ok(())
    }
}

/// Bisection on a bracket `[a, b]` with `f(a)·f(b) ≤ 0`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// All simple roots of `f` in `[lower, upper]`, ascending.
///
/// The interval is scanned on a uniform grid; each sign change is refined by
/// bisection. A sign change is rejected as a pole when both bracket ends
/// exceed [`BLOWUP_THRESHOLD`] in magnitude, or when `|f|` at the refined
/// point exceeds both bracket ends.
pub fn find_roots<F: Fn(f64) -> f64>(f: F, config: &RootScanConfig) -> Result<Vec<f64>> {
    config.validate()?;
    let n_steps = ((config.upper - config.lower) / config.scan_step).ceil() as usize;
    let grid = |i: usize| (config.lower + i as f64 * config.scan_step).min(config.upper);
    let mut roots = Vec::new();
    let push = |r: f64, roots: &mut Vec<f64>| -> Result<()> {
        if roots.len() >= config.max_roots {
            return Err(Error::TooManyRoots(config.max_roots));
        }
        roots.push(r);
        Ok(())
    };
    let mut x0 = grid(0);
    let mut f0 = f(x0);
    if f0 == 0.0 {
        push(x0, &mut roots)?;
    }
    for i in 1..=n_steps {
        let x1 = grid(i);
        let f1 = f(x1);
        if f1 == 0.0 {
            push(x1, &mut roots)?;
        } else if f0 != 0.0 && f0.is_finite() && f1.is_finite() && (f0 < 0.0) != (f1 < 0.0) {
            let blowup = f0.abs() > BLOWUP_THRESHOLD && f1.abs() > BLOWUP_THRESHOLD;
            if !blowup {
                let r = bisect(&f, x0, x1, config.refine_tolerance);
                let fr = f(r).abs();
                if fr <= f0.abs().max(f1.abs()) {
                    push(r, &mut roots)?;
                }
            }
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(roots)
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
/// Returns `(x_min, f(x_min))`; stops when the bracket is below `tol`.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Polynomial (Neville) extrapolation of `values[i] = g(steps[i])` to `g(0)`.
///
/// Returns the extrapolated value and the difference between the two
/// highest-order estimates as an error indicator.
pub fn extrapolate_to_zero(steps: &[f64], values: &[Complex64]) -> (Complex64, f64) {
    assert_eq!(steps.len(), values.len());
    assert!(!steps.is_empty());
    let n = steps.len();
    let mut table: Vec<Complex64> = values.to_vec();
    let mut prev_top = table[n - 1];
    let mut top = table[n - 1];
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xim) = (steps[i], steps[i + m]);
            table[i] = (table[i + 1] * xi - table[i] * xim) / (xi - xim);
        }
        prev_top = top;
        top = table[0];
    }
    (top, (top - prev_top).norm())
}

/// Least-squares fit of `values[i] ≈ c₀ + Σ_j c_j · steps[i]^{exponents[j]}`,
/// returning `c₀`. Used for limits whose corrections have known, possibly
/// non-integer, powers.
pub fn fit_limit_with_exponents(steps: &[f64], values: &[f64], exponents: &[f64]) -> Result<f64> {
    let n = steps.len();
    let p = exponents.len() + 1;
    if n < p {
        return Err(Error::InvalidParameter(format!(
            "need at least {p} samples for the limit fit, got {n}"
        )));
    }
    // Columns are scaled by the largest step so the normal equations stay tame.
    let scale = steps.iter().cloned().fold(0.0, f64::max);
    let row = |i: usize| -> Vec<f64> {
        let s = steps[i] / scale;
        std::iter::once(1.0).chain(exponents.iter().map(|&e| s.powf(e))).collect()
    };
    let mut ata = vec![vec![0.0; p]; p];
    let mut atb = vec![0.0; p];
    for i in 0..n {
        let r = row(i);
        for a in 0..p {
            atb[a] += r[a] * values[i];
            for b in 0..p {
                ata[a][b] += r[a] * r[b];
            }
        }
    }
    let sol = solve_dense(ata, atb)?;
    Ok(sol[0])
}

/// Gaussian elimination with partial pivoting.
pub(crate) fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col].abs() < 1e-300 {
            return Err(Error::NonConvergence("singular linear system".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let factor = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= factor * a[col][c];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Ok(x)
}
