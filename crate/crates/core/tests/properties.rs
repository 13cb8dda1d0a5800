//! Invariants over random parameters.

use std::f64::consts::PI;

use proptest::prelude::*;

use qsingular::anholonomy::{berry_phase_loop, reduce_phase, LoopPath};
use qsingular::caustics::caustic_weights;
use qsingular::singularity::{
    build_characteristic_matrix, decompose_characteristic_matrix, max_abs_diff, symmetry_transform,
    unitarity_deviation, SingularityParams, Symmetry,
};
use qsingular::spectra::{well_spectrum, WellParams};
use qsingular::statforce::{occupations, solve_alpha, GasConfig, Side, Statistics};

fn energies(w: &WellParams) -> Vec<f64> {
    well_spectrum(w, 6).unwrap().iter().map(|l| l.energy).collect()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * x.abs().max(1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_is_unitary_and_decomposes_back(
        tp in 0.0..2.0 * PI, tm in 0.0..2.0 * PI, mu in 0.0..PI, nu in 0.0..2.0 * PI, l0 in 0.1..5.0f64,
    ) {
        let p = SingularityParams::new(tp, tm, mu, nu, l0).unwrap();
        let u = build_characteristic_matrix(&p);
        prop_assert!(unitarity_deviation(&u.u) < 1e-12);
        let q = decompose_characteristic_matrix(&u, l0).unwrap();
        prop_assert!(max_abs_diff(&build_characteristic_matrix(&q).u, &u.u) < 1e-9);
    }

    #[test]
    fn spectrum_ignores_isospectral_angles(
        tp in 0.0..2.0 * PI, tm in 0.0..2.0 * PI, mu in 0.0..PI, nu in 0.0..2.0 * PI,
    ) {
        let a = WellParams::new(1.0, SingularityParams::new(tp, tm, mu, nu, 1.0).unwrap()).unwrap();
        let b = WellParams::new(1.0, SingularityParams::new(tp, tm, PI / 2.0, 0.0, 1.0).unwrap()).unwrap();
        prop_assert!(close(&energies(&a), &energies(&b), 1e-10));
    }

    #[test]
    fn symmetry_transforms_keep_the_spectrum(
        tp in 0.0..2.0 * PI, tm in 0.0..2.0 * PI, mu in 0.05..PI - 0.05, nu in 0.0..2.0 * PI,
    ) {
        let p = SingularityParams::new(tp, tm, mu, nu, 1.0).unwrap();
        let u = build_characteristic_matrix(&p);
        let base = energies(&WellParams::new(1.0, p).unwrap());
        for s in [Symmetry::Parity, Symmetry::HalfReflection, Symmetry::ProductQ] {
            let q = decompose_characteristic_matrix(&symmetry_transform(&u, s), 1.0).unwrap();
            prop_assert!(close(&base, &energies(&WellParams::new(1.0, q).unwrap()), 1e-9));
        }
    }

    #[test]
    fn swapping_channel_angles_is_isospectral(tp in 0.0..2.0 * PI, tm in 0.0..2.0 * PI, l in 0.3..3.0f64) {
        let a = WellParams::new(l, SingularityParams::parity_invariant(tp, tm, 1.0).unwrap()).unwrap();
        let b = WellParams::new(l, SingularityParams::parity_invariant(tm, tp, 1.0).unwrap()).unwrap();
        prop_assert!(close(&energies(&a), &energies(&b), 1e-10));
    }

    #[test]
    fn caustic_weights_conserve_probability(a in 0.5..1.0f64, k in 1u32..50) {
        let w = caustic_weights(a, k);
        prop_assert!((w.return_amp.norm_sqr() + w.mirror_amp.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_phase_is_canonical(x in -100.0..100.0f64) {
        let r = reduce_phase(x);
        prop_assert!(r > -PI && r <= PI);
        let turns = (x - r) / (2.0 * PI);
        prop_assert!((turns - turns.round()).abs() < 1e-9);
    }

    #[test]
    fn berry_phase_reverses_with_the_loop(mu in 0.0..PI, segments in 8usize..200) {
        let c = LoopPath::constant_mu(mu, segments).unwrap();
        let f = berry_phase_loop(&c).unwrap().raw;
        let b = berry_phase_loop(&c.reversed()).unwrap().raw;
        prop_assert!((f + b).abs() < 1e-10);
    }

    #[test]
    fn chemical_potential_fixes_particle_number(
        n in 1usize..300, log_t in -2.0..5.0f64, bose in any::<bool>(), plus in any::<bool>(),
    ) {
        let stats = if bose { Statistics::Bose } else { Statistics::Fermi };
        let side = if plus { Side::Plus } else { Side::Minus };
        let t = 10f64.powf(log_t);
        let cfg = GasConfig::new(n, stats, t).unwrap();
        solve_alpha(n, t, side, stats).unwrap();
        let occ = occupations(&cfg, side, 200_000).unwrap();
        let total: f64 = occ.iter().sum();
        // occupations are truncated at 200 000 levels; allow the tail at high t
        let tail = if t > 1e4 { 1e-2 } else { 1e-9 };
        prop_assert!((total - n as f64).abs() < tail * n as f64, "{total} vs {n}");
        prop_assert!(occ.iter().all(|x| *x >= 0.0 && (bose || *x <= 1.0)));
    }
}
