use proptest::prelude::*;
use qmean_core::{prob_one, quantum_fisher, AmplifiedLevel, NoiseModel, RandomStream};
use qmean_oracle::{amplified_state, oracle_prob_one, oracle_qfi, SmallSystem};

fn instance(n: u32, seed: u64) -> SmallSystem {
    SmallSystem::random(n, &mut RandomStream::new(seed, u64::from(n))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuit_probability_matches_closed_form(
        n in 1u32..=4,
        seed in 0u64..10_000,
        alpha in 1u32..=12,
        p in 0.3f64..=1.0,
    ) {
        let sys = instance(n, seed);
        let nm = NoiseModel::new(p, n).unwrap();
        let level = AmplifiedLevel::new(alpha).unwrap();
        let got = oracle_prob_one(&sys, level, &nm).unwrap();
        let want = prob_one(level, sys.theta_star(), &nm).unwrap();
        prop_assert!((got - want).abs() < 1e-10, "{} vs {}", got, want);
    }

    #[test]
    fn states_stay_normalized(n in 1u32..=3, seed in 0u64..10_000, alpha in 1u32..=8) {
        let sys = instance(n, seed);
        let nm = NoiseModel::new(0.8, n).unwrap();
        let rho = amplified_state(&sys, AmplifiedLevel::new(alpha).unwrap(), &nm).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
        let purity = (&rho * &rho).trace().re;
        prop_assert!(purity <= 1.0 + 1e-12);
    }

    #[test]
    fn reprepared_angle_is_exact(seed in 0u64..10_000, theta in 0.05f64..3.09) {
        let moved = instance(3, seed).with_theta(theta).unwrap();
        prop_assert!((moved.theta_star() - theta).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn qfi_matches_closed_form(seed in 0u64..10_000, alpha in 1u32..=6, p in 0.5f64..=1.0) {
        let sys = instance(2, seed);
        let nm = NoiseModel::new(p, 2).unwrap();
        let level = AmplifiedLevel::new(alpha).unwrap();
        let got = oracle_qfi(&sys, level, &nm).unwrap();
        let want = quantum_fisher(level, &nm);
        prop_assert!(((got - want) / want).abs() < 1e-4, "{} vs {}", got, want);
    }
}
