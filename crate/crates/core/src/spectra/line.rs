use crate::error::Result;
use crate::singularity::{ExtReal, SingularityParams};
use crate::Units;

use super::{channel_parities, merge_levels, Level, Momentum, Series};

/// Bound states of the singularity on the whole line.
///
/// Inserting `ψ = A e^{−κx}Θ(x) + B e^{κx}Θ(−x)` gives `Ψ′ = −κΨ`, and the
/// determinant of `(U − I) − iκL₀(U + I)` factorizes over the eigenvalues of
/// `U` into `sin(θ/2) − κL₀ cos(θ/2)`. Each channel with `L(θ) > 0` therefore
/// binds one state with `κ = 1/L(θ)`, `E = −ħ²κ²/2m`.
pub fn line_bound_states(p: &SingularityParams, units: &Units) -> Result<Vec<Level>> {
    p.validate()?;
    let (par_plus, par_minus) = channel_parities(p);
    let mut levels = Vec::new();
    for (len, parity, series) in [
        (p.length_plus(), par_plus, Series::Plus),
        (p.length_minus(), par_minus, Series::Minus),
    ] {
        if let ExtReal::Finite(l) = len {
            if l > 0.0 {
                let kappa = 1.0 / l;
                levels.push(Level {
                    index: 0,
                    momentum: Some(Momentum::Imaginary(kappa)),
                    energy: -units.kinetic() * kappa * kappa,
                    parity,
                    series,
                });
            }
        }
    }
    Ok(merge_levels(levels))
}
