//! N = 1 supersymmetric well: spectrum k_n = (nπ + μ/2)/l, its degeneracy
//! at μ = 0 and π, and the algebra 2Q² = H + 2|b|² on an eigenstate.

use std::f64::consts::PI;

use qsingular::singularity::SingularityParams;
use qsingular::susy::{n1_susy_well_spectrum, susy_algebra_residual, ChannelEigenstate, Supercharge, SuperchargeFamily};
use qsingular::{Complex64, Units};

fn main() -> qsingular::Result<()> {
    let units = Units::default();
    for mu in [0.0, PI / 3.0, PI] {
        let levels = n1_susy_well_spectrum(mu, 0.0, 1.0, -2..=2, &units)?;
        let ks: Vec<String> = levels.iter().map(|(_, s)| format!("{:.4}", s.k)).collect();
        println!("mu = {mu:.4}: k = [{}]", ks.join(", "));
    }
    let fam = SuperchargeFamily { alpha: 0.4, c: 0.3, theta: 1.2, mu: 0.9, nu: 1.7, l0: 1.0 };
    let q = Supercharge::from_family(&fam, &units)?;
    let state = ChannelEigenstate {
        params: SingularityParams::wrapped(1.2, PI, 0.9, 1.7, 1.0)?,
        k: 2.3,
        weights: [Complex64::new(0.6, 0.0), Complex64::new(0.2, 0.5)],
        extent: 1.0,
    };
    let r = susy_algebra_residual(&q, &state, 200, &units);
    println!("2Q² − (H + 2|b|²): {:e}", r.corrected);
    println!("2Q² − (H + |b|²):  {:e}", r.literal);
    Ok(())
}
