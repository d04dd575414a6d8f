//! Randomized invariants on small grids.

use proptest::prelude::*;

use dwell::bose_hubbard::{analytic_eigensystem, ground_entropy, ground_rspdm_occupations, HubbardParams};
use dwell::correlations::{k_grid, momentum_distribution, natural_orbitals, rspdm};
use dwell::grid::{kinetic_matrix, potential_vector};
use dwell::scaling::{scale_energy, to_scaled, unscale_energy, unscale_g1d, unscale_kappa, PhysicalParams};
use dwell::two_particle::{solve_band, Exchange};
use dwell::Grid;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaling_round_trip(
        mass in 0.1f64..10.0,
        hbar in 0.1f64..10.0,
        amp in 0.1f64..10.0,
        kappa in 0.0f64..10.0,
        g in -5.0f64..20.0,
        e in -50.0f64..50.0,
    ) {
        let p = PhysicalParams::new(mass, hbar, amp, kappa, g);
        let s = to_scaled(&p).unwrap();
        prop_assert!(rel(unscale_kappa(s.kappa, &p).unwrap(), kappa) < 1e-12 || kappa == 0.0);
        prop_assert!(rel(unscale_g1d(s.g1d, &p).unwrap(), g) < 1e-12 || g == 0.0);
        let back = unscale_energy(scale_energy(e, &p).unwrap(), &p).unwrap();
        prop_assert!(rel(back, e) < 1e-12 || e == 0.0);
    }

    #[test]
    fn kinetic_matrix_is_symmetric_positive_definite(half in 1usize..40, h in 0.05f64..1.0) {
        let g = Grid::new(2 * half + 1, h).unwrap();
        let t = kinetic_matrix(&g);
        prop_assert!((&t - t.transpose()).amax() == 0.0);
        let min = t.symmetric_eigenvalues().min();
        prop_assert!(min > 0.0, "min eigenvalue {min}");
    }

    #[test]
    fn potential_is_even_on_the_grid(half in 1usize..60, h in 0.01f64..0.5, kappa in 0.0f64..10.0) {
        let g = Grid::new(2 * half + 1, h).unwrap();
        let v = potential_vector(&g, kappa).values;
        for i in 0..v.len() {
            prop_assert_eq!(v[i], v[g.mirror(i)]);
        }
    }

    #[test]
    fn dimer_identities(j in 1e-3f64..5.0, u in 0.0f64..20.0, eps in -5.0f64..5.0, shift in -3.0f64..3.0) {
        let p = HubbardParams::new(j, u, eps);
        let a = analytic_eigensystem(&p);
        prop_assert!(a.e_minus <= a.e_mid && a.e_mid <= a.e_plus);
        for v in [a.v_minus, a.v_mid, a.v_plus] {
            prop_assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let (l1, l2) = ground_rspdm_occupations(&p).unwrap();
        prop_assert!((l1 + l2 - 1.0).abs() < 1e-12);

        let q = HubbardParams::new(j, u, eps + shift);
        let b = analytic_eigensystem(&q);
        prop_assert!((b.e_minus - a.e_minus - 2.0 * shift).abs() < 1e-10);
        prop_assert_eq!(ground_rspdm_occupations(&q).unwrap(), (l1, l2));
        prop_assert_eq!(ground_entropy(&q).unwrap(), ground_entropy(&p).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn band_states_are_labelled_and_normalized(kappa in 0.0f64..5.0, g in 0.0f64..10.0) {
        let grid = Grid::new(31, 0.3).unwrap();
        let s = solve_band(&grid, kappa, g, 4).unwrap();
        for st in &s.band {
            prop_assert!(st.verify_labels());
            prop_assert!((st.norm_sq() - 1.0).abs() < 1e-10);
        }
        prop_assert!(s.band[0].energy <= s.band.iter().map(|b| b.energy).fold(f64::INFINITY, f64::min) + 1e-12);
        prop_assert_eq!(s.band[1].exchange, Exchange::Antisymmetric);
    }

    #[test]
    fn density_matrices_are_normalized(kappa in 0.0f64..5.0, g in 0.0f64..10.0) {
        let grid = Grid::new(31, 0.3).unwrap();
        let s = solve_band(&grid, kappa, g, 4).unwrap();
        let k = k_grid(&grid, 4 * grid.len());
        for st in &s.band {
            let rho = rspdm(st, &grid);
            prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
            prop_assert!((&rho.matrix - rho.matrix.transpose()).amax() < 1e-14);
            let d = natural_orbitals(&rho).unwrap();
            prop_assert!((d.occupations.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            prop_assert!(d.occupations.iter().all(|&l| l >= 0.0));
            let h = grid.spacing();
            for a in d.orbitals.iter().take(4) {
                for b in d.orbitals.iter().take(4) {
                    let dot: f64 = h * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
                    let target = if std::ptr::eq(a, b) { 1.0 } else { 0.0 };
                    prop_assert!((dot - target).abs() < 1e-8);
                }
            }
            prop_assert!(momentum_distribution(&d, &grid, &k).n_values.iter().all(|&n| n >= 0.0));
        }
    }
}
