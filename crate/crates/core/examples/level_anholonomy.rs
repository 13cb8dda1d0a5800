//! Level anholonomy: going once around (θ, θ + π) on the spectral torus
//! returns the spectrum but moves every level up by two places.

use std::f64::consts::PI;

use qsingular::anholonomy::{level_anholonomy_shift, LoopPath};
use qsingular::singularity::SingularityParams;
use qsingular::spectra::{track_levels_along_loop, WellParams};

fn main() -> qsingular::Result<()> {
    let path = LoopPath::torus_line([0.0, PI], [2.0 * PI, 2.0 * PI], 64)?;
    let well = WellParams::new(1.0, SingularityParams::parity_invariant(0.0, PI, 1.0)?)?;
    let tr = track_levels_along_loop(&path, &well, 6, 400)?;
    for t in &tr.trajectories {
        println!("level {} ({:?}) ends at {:?}", t.start_index, t.series, t.end_index);
    }
    println!("spectrum mismatch after the loop: {:e}", tr.spectrum_mismatch());
    println!("uniform shift: {}", level_anholonomy_shift(&tr)?);
    Ok(())
}
