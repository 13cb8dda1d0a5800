//! Oscillator with an inverse-square core at a = 3/4: the two Dirichlet/
//! Neumann limits and a generic pair of scale lengths.

use qsingular::singularity::ExtReal;
use qsingular::spectra::{calogero_spectrum, OscillatorParams};

fn main() -> qsingular::Result<()> {
    let o = OscillatorParams::from_a(0.75)?;
    for (name, lp, lm) in [
        ("L₊ = ∞, L₋ = 0", ExtReal::Infinite, ExtReal::Finite(0.0)),
        ("L₊ = L₋ = 0", ExtReal::Finite(0.0), ExtReal::Finite(0.0)),
        ("L₊ = 0.7, L₋ = −2", ExtReal::Finite(0.7), ExtReal::Finite(-2.0)),
    ] {
        let lv = calogero_spectrum(&o, lp, lm, 4)?;
        let e: Vec<String> = lv.iter().map(|l| format!("{:.6}", l.energy)).collect();
        println!("{name}: {}", e.join(" "));
    }
    Ok(())
}
