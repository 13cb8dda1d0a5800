//! Berry phase of constant-μ loops on the isospectral sphere, compared with
//! −π(1 + sin μ), plus the Stokes check between two neighbouring loops.

use qsingular::anholonomy::{berry_phase_loop, stokes_residual, LoopPath};

fn main() -> qsingular::Result<()> {
    println!("{:>8} {:>16} {:>16}", "mu", "numeric", "expected");
    for i in 0..=6 {
        let mu = std::f64::consts::PI * i as f64 / 6.0;
        let g = berry_phase_loop(&LoopPath::constant_mu(mu, 400)?)?;
        println!("{mu:>8.4} {:>16.12} {:>16.12}", g.raw, -std::f64::consts::PI * (1.0 + mu.sin()));
    }
    let r = stokes_residual(&LoopPath::constant_mu(0.6, 400)?, &LoopPath::constant_mu(1.1, 400)?, 400)?;
    println!("Stokes band residual: {r:e}");
    Ok(())
}
