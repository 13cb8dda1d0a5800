//! Spectra of the three solvable settings: the free line, the infinite well
//! `[−l, l]` with a central singularity, and the harmonic oscillator with an
//! inverse-square core. Also level tracking along loops on the spectral torus
//! and a finite-difference oracle for the well.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::singularity::{
    build_characteristic_matrix, classify, CharacteristicMatrix, SingularityParams, Vec2,
};
use crate::{Complex64, Units};

mod calogero;
mod line;
mod oracle;
mod tracking;
mod well;

pub use calogero::{calogero_residual, calogero_spectrum, OscillatorParams};
pub use line::line_bound_states;
pub use oracle::{finite_difference_oracle, robin_half_well_fd};
pub use tracking::{track_levels_along_loop, LevelTrajectory, TrackingResult};
pub use well::{
    robin_half_well_levels, scale_invariant_well_state, well_residual, well_spectrum,
    well_spectrum_parity_invariant, ScaleInvariantWellState,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Symmetric,
    Antisymmetric,
    None,
}

/// Which eigen-channel (`θ₊` or `θ₋`) a level belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Series {
    Plus,
    Minus,
    None,
}

/// Wave number of a level: real `k` for scattering-type levels, `k = iκ` for
/// bound states below zero energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Momentum {
    Real(f64),
    Imaginary(f64),
}

impl Momentum {
    /// `k²`, negative for bound states.
    pub fn squared(&self) -> f64 {
        match *self {
            Momentum::Real(k) => k * k,
            Momentum::Imaginary(kappa) => -kappa * kappa,
        }
    }

    /// Signed scalar: `k` or `−κ`.
    pub fn signed(&self) -> f64 {
        match *self {
            Momentum::Real(k) => k,
            Momentum::Imaginary(kappa) => -kappa,
        }
    }
}

/// One energy eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub index: usize,
    pub momentum: Option<Momentum>,
    pub energy: f64,
    pub parity: Parity,
    pub series: Series,
}

/// Infinite well `[−l, l]` with Dirichlet walls and a singularity at the centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellParams {
    pub half_width: f64,
    pub singularity: SingularityParams,
    pub units: Units,
}

impl WellParams {
    pub fn new(half_width: f64, singularity: SingularityParams) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "well half-width must be positive, got {half_width}"
            )));
        }
        singularity.validate()?;
        Ok(WellParams { half_width, singularity, units: Units::default() })
    }

    pub fn l0(&self) -> f64 {
        self.singularity.l0
    }

    pub fn matrix(&self) -> CharacteristicMatrix {
        build_characteristic_matrix(&self.singularity)
    }
}

/// Parity carried by the `θ₊` eigenvector `(cos μ/2, sin μ/2 e^{iν})` when `U`
/// is parity invariant; the `θ₋` channel carries the opposite one.
pub(crate) fn channel_parities(p: &SingularityParams) -> (Parity, Parity) {
    let u = build_characteristic_matrix(p);
    if !classify(&u).parity_invariant {
        return (Parity::None, Parity::None);
    }
    let v: Vec2 = [
        Complex64::new((0.5 * p.mu).cos(), 0.0),
        Complex64::from_polar((0.5 * p.mu).sin(), p.nu),
    ];
    let overlap = (v[0] + v[1]).norm_sqr() / 2.0;
    if overlap >= 0.5 {
        (Parity::Symmetric, Parity::Antisymmetric)
    } else {
        (Parity::Antisymmetric, Parity::Symmetric)
    }
}

/// Sort by energy and renumber.
pub(crate) fn merge_levels(mut levels: Vec<Level>) -> Vec<Level> {
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    for (i, l) in levels.iter_mut().enumerate() {
        l.index = i;
    }
    levels
}
