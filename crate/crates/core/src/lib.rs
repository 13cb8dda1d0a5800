//! Point singularities in one-dimensional quantum mechanics.
//!
//! A point singularity on the line is labelled by a 2×2 unitary matrix `U`
//! that fixes how wave functions connect across `x = 0`. This crate builds
//! the physics of that `U(2)` family end to end:
//!
//! - [`singularity`]: the characteristic matrix, its `(θ₊, θ₋, μ, ν)`
//!   decomposition, connection conditions and symmetry transforms.
//! - [`spectra`]: spectra on the line, in an infinite well and in the
//!   harmonic oscillator with an inverse-square core, level tracking along
//!   loops, and a finite-difference oracle.
//! - [`anholonomy`]: Berry connection, loop phases and level anholonomy.
//! - [`susy`]: supercharges, the SUSY algebra and the N = 1 well.
//! - [`caustics`]: oscillator eigenbasis, propagation, the current through
//!   the singularity and the caustic copy process.
//! - [`statforce`]: the statistical force on a Dirichlet/Neumann partition.
//! - [`cli`]: the `qsingular` command-line front end.
//!
//! Runnable walkthroughs of each capability live in `examples/`.

pub mod anholonomy;
pub mod caustics;
pub mod cli;
pub mod error;
pub mod singularity;
pub mod specfun;
pub mod spectra;
pub mod statforce;
pub mod susy;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Unit system for the free-particle problems. Defaults to `ħ = m = 1`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Units {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for Units {
    fn default() -> Self {
        Units { hbar: 1.0, mass: 1.0 }
    }
}

impl Units {
    /// `ħ²/(2m)`, the kinetic prefactor.
    pub fn kinetic(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }
}
