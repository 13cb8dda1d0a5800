//! Generalized boundary vectors from Wronskians. With references x and −1
//! they reproduce plain boundary values and the connection condition.

use qsingular::singularity::{
    build_characteristic_matrix, connection_residual, wronskian_boundary_vectors, SingularityParams, WronskianLimit,
};
use qsingular::Complex64;

fn main() -> qsingular::Result<()> {
    let p = SingularityParams::wrapped(1.0, 2.5, 0.8, 0.3, 1.0)?;
    let u = build_characteristic_matrix(&p);
    // a state built to satisfy the condition: Ψ and Ψ′ from a compliant pair
    let bv = qsingular::singularity::BoundaryVectors::compliant(&u, p.l0, [Complex64::new(0.4, 0.1), Complex64::new(-0.2, 0.7)]);
    let (a, b) = (bv.psi, bv.psi_prime);
    let psi = move |x: f64| {
        if x > 0.0 {
            (a[0] + b[0] * x + Complex64::new(x * x, 0.0), b[0] + Complex64::new(2.0 * x, 0.0))
        } else {
            (a[1] - b[1] * x, -b[1])
        }
    };
    let one = Complex64::new(1.0, 0.0);
    let w = wronskian_boundary_vectors(
        psi,
        |x| (Complex64::new(x, 0.0), one),
        |_| (-one, Complex64::new(0.0, 0.0)),
        &WronskianLimit::polynomial(0.1),
    )?;
    println!("Ψ  = {:?}\nΨ′ = {:?}", w.psi, w.psi_prime);
    let r = connection_residual(&u, p.l0, &w);
    println!("connection residual: {:.2e}", r[0].norm().max(r[1].norm()));
    Ok(())
}
