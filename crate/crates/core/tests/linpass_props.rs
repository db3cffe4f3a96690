mod common;

use proptest::prelude::*;
use slhnet_core::linpass::{
    allpass_eval, dynamics_matrix, exceptional_frequencies, is_hurwitz, is_inner, is_lossless, noise_response,
    realization, sigma_eval, transfer_eval, StateSpaceRealization,
};
use slhnet_core::opalg::{c64, hermitian_max_eigenvalue, identity, max_singular_value, zeros};

fn off_spectrum(rng: &mut rand::rngs::StdRng, exceptional: &[f64]) -> f64 {
    loop {
        let w = rand::Rng::random_range(rng, -5.0..5.0);
        if exceptional.iter().all(|e| (w - e).abs() > 1e-3) {
            return w;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn transfer_is_unitary_on_the_axis(seed in any::<u64>(), n in 1usize..5, m in 1usize..6) {
        let mut rng = common::rng(seed);
        let g = common::passive(&mut rng, n, m);
        let exc = exceptional_frequencies(&g).unwrap();
        for _ in 0..10 {
            let w = off_spectrum(&mut rng, &exc);
            match is_inner(&g, w, 1e-10) {
                Ok(check) => prop_assert!(check.pass, "defect {} at {w}", check.defect),
                Err(slhnet_core::Error::Pole { .. }) => {}
                Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
            }
        }
    }

    #[test]
    fn allpass_route_agrees(seed in any::<u64>(), n in 1usize..5, m in 1usize..6) {
        let mut rng = common::rng(seed);
        let g = common::passive(&mut rng, n, m);
        for _ in 0..10 {
            let s = common::complex_point(&mut rng, (0.05, 3.0), (-4.0, 4.0));
            let direct = transfer_eval(&g, s).unwrap();
            let ap = allpass_eval(&g, s).unwrap();
            prop_assert!(common::max_abs(&(direct - ap)) < 1e-11);
        }
    }

    #[test]
    fn damping_is_negative_semidefinite(seed in any::<u64>(), n in 1usize..5, m in 1usize..6) {
        let mut rng = common::rng(seed);
        let a = dynamics_matrix(&common::passive(&mut rng, n, m));
        let re = (&a + a.adjoint()) * c64(0.5, 0.0);
        prop_assert!(hermitian_max_eigenvalue(&re).unwrap() <= 1e-12);
    }

    #[test]
    fn realization_matches_direct_formula(seed in any::<u64>(), n in 1usize..5, m in 1usize..6) {
        let mut rng = common::rng(seed);
        let g = common::passive(&mut rng, n, m);
        let r = realization(&g);
        let noise = StateSpaceRealization::new(r.a.clone(), identity(m), g.c().clone(), zeros(n, m)).unwrap();
        for _ in 0..5 {
            let s = common::complex_point(&mut rng, (0.05, 3.0), (-4.0, 4.0));
            prop_assert!(common::max_abs(&(r.eval(s).unwrap() - transfer_eval(&g, s).unwrap())) < 1e-12);
            prop_assert!(common::max_abs(&(noise.eval(s).unwrap() - noise_response(&g, s).unwrap())) < 1e-12);
        }
    }

    #[test]
    fn sigma_is_skew_on_the_axis(seed in any::<u64>(), n in 1usize..5, m in 1usize..6) {
        let mut rng = common::rng(seed);
        let g = common::passive(&mut rng, n, m);
        let exc = exceptional_frequencies(&g).unwrap();
        let w = off_spectrum(&mut rng, &exc);
        let sig = sigma_eval(&g, c64(0.0, w)).unwrap();
        let scale = 1.0 + max_singular_value(&sig);
        prop_assert!(common::max_abs(&(sig.adjoint() + &sig)) < 1e-10 * scale);
    }

    #[test]
    fn full_rank_damping_is_hurwitz_and_contractive(seed in any::<u64>(), n in 2usize..5, m in 1usize..3) {
        let mut rng = common::rng(seed);
        let g = common::passive(&mut rng, n, m);
        prop_assert!(is_hurwitz(&dynamics_matrix(&g), 1e-12).unwrap().pass);
        let grid: Vec<_> = (0..20).map(|k| c64(0.5, -5.0 + 0.5 * k as f64)).collect();
        let report = is_lossless(&g, &grid, 1e-10).unwrap();
        prop_assert!(report.gain_excess <= 1e-10);
        prop_assert!(report.pass);
    }
}
