//! Root-finder well levels against an independent finite-difference
//! discretization, with the observed convergence order.

use qsingular::singularity::SingularityParams;
use qsingular::spectra::{finite_difference_oracle, well_spectrum, WellParams};

fn main() -> qsingular::Result<()> {
    let w = WellParams::new(1.0, SingularityParams::wrapped(1.1, 4.3, 0.9, 0.4, 0.6)?)?;
    let exact = well_spectrum(&w, 5)?;
    let mut last = None;
    for pts in [1000, 2000, 4000, 8000] {
        let fd = finite_difference_oracle(&w, pts, 5)?;
        let err = fd.iter().zip(&exact).map(|(a, b)| (a.energy - b.energy).abs()).fold(0.0, f64::max);
        let order = last.map(|e: f64| (e / err).log2());
        println!("{pts:>5} points: max error {err:.3e}, order {order:?}");
        last = Some(err);
    }
    Ok(())
}
