//! Quantum copy process: a Gaussian on the right of the singularity is split
//! at T = π/ω into a returning and a mirrored copy with weights
//! cos²(aπ) and sin²(aπ).

use qsingular::caustics::{copy_simulation, ModeBasis, SampledProfile, SymmetricGrid};
use qsingular::spectra::OscillatorParams;

fn main() -> qsingular::Result<()> {
    let o = OscillatorParams::from_a(0.75)?;
    let basis = ModeBasis::free(&o, 200)?;
    let profile = SampledProfile::gaussian(SymmetricGrid::covering(5.2, 0.005)?, 2.0, 0.4);
    for k in 1..=3 {
        let r = copy_simulation(&profile, &basis, k, (-0.4, 4.4))?;
        println!(
            "k = {k}: return {:.6} (predicted {:.6}), mirror {:.6} (predicted {:.6}), leakage {:.2e}",
            r.measured_return_weight,
            r.predicted_return_weight,
            r.measured_mirror_weight,
            r.predicted_mirror_weight,
            r.leakage
        );
    }
    Ok(())
}
