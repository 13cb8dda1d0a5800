//! Net statistical force on a Dirichlet/Neumann partition for bosons and
//! fermions, with the low-temperature approximation and the force minimum.

use qsingular::statforce::{approx_net_force, exact_net_force, find_force_minimum, ForceMethod, GasConfig, Statistics};

fn main() -> qsingular::Result<()> {
    println!("{:>10} {:>14} {:>14} {:>14}", "t", "bose", "bose low-t", "fermi");
    for t in [1e-3, 0.1, 0.3, 1.0, 10.0, 100.0, 1e4] {
        let b = GasConfig::new(100, Statistics::Bose, t)?;
        let f = GasConfig::new(100, Statistics::Fermi, t)?;
        let low = approx_net_force(&b, ForceMethod::LowT)?.dimensionless_delta_f;
        println!(
            "{t:>10} {:>14.6} {low:>14.6} {:>14.4}",
            exact_net_force(&b)?.dimensionless_delta_f,
            exact_net_force(&f)?.dimensionless_delta_f
        );
    }
    let m = find_force_minimum(&GasConfig::new(100, Statistics::Bose, 1.0)?)?;
    println!("bose minimum: t = {:.3}, ΔF = {:.4}", m.t_min, m.delta_f_min);
    Ok(())
}
