//! Strong-weak duality in the infinite well: swapping θ₊ and θ₋ keeps the
//! spectrum and exchanges the parity of every level.

use qsingular::singularity::SingularityParams;
use qsingular::spectra::{well_spectrum, WellParams};

fn main() -> qsingular::Result<()> {
    let (tp, tm) = (0.7, 2.4);
    let a = WellParams::new(1.0, SingularityParams::parity_invariant(tp, tm, 1.0)?)?;
    let b = WellParams::new(1.0, SingularityParams::parity_invariant(tm, tp, 1.0)?)?;
    let (la, lb) = (well_spectrum(&a, 6)?, well_spectrum(&b, 6)?);
    println!("{:>3} {:>14} {:>14} {:>14} {:>14}", "n", "E(θ₊,θ₋)", "parity", "E(θ₋,θ₊)", "parity");
    for (n, (x, y)) in la.iter().zip(&lb).enumerate() {
        println!("{n:>3} {:>14.10} {:>14?} {:>14.10} {:>14?}", x.energy, x.parity, y.energy, y.parity);
    }
    Ok(())
}
