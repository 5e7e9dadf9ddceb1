mod common;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::Rng;
use szne::estimation::{estimate_from_shadows, estimate_with_shots, shadows_of_state};
use szne::sim::DensityOperator;

fn random_state(seed: u64, n: usize) -> DensityOperator {
    let mut r = szne::rng::stream(seed, &[7]);
    let mut amps: Vec<C64> = (0..1 << n)
        .map(|_| C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    DensityOperator::from_pure(&amps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shot_estimator_unbiased(
        terms in common::raw_terms(),
        signs in prop::collection::vec(any::<bool>(), 5),
        values in prop::collection::vec(-1.0f64..=1.0, 5),
        seed in any::<u64>(),
    ) {
        let n = 4;
        let base = common::observable_from(n, &terms);
        let o = szne::observable::Observable::new(
            base.terms().iter().zip(&signs).map(|(t, &neg)| (if neg { -t.coeff } else { t.coeff }, t.string.clone())),
        )
        .unwrap();
        let v = &values[..o.len()];
        let exact: f64 = o.terms().iter().zip(v).map(|(t, x)| t.coeff * x).sum();
        let (shots, reps) = (2000u64, 50);
        let mut rng = szne::rng::stream(seed, &[]);
        let mut total = 0.0;
        for _ in 0..reps {
            let e = estimate_with_shots(v, &o, shots, &mut rng).unwrap();
            prop_assert!(e.value.abs() <= o.norm_bound() + 1e-12);
            total += e.value;
        }
        let mean = total / reps as f64;
        let sd = o.norm_bound() / ((shots * reps) as f64).sqrt();
        prop_assert!((mean - exact).abs() < 5.0 * sd, "mean {mean} exact {exact}");
    }

    #[test]
    fn shadow_estimator_unbiased(n in 2usize..4, terms in common::raw_terms(), seed in any::<u64>()) {
        let o = common::observable_from(n, &terms);
        let rho = random_state(seed, n);
        let exact: f64 = o.terms().iter().map(|t| t.coeff * rho.pauli_expectation(&t.string)).sum();
        let count = 40_000;
        let mut rng = szne::rng::stream(seed, &[]);
        let s = shadows_of_state(&rho, 1, count, &mut rng);
        let est = estimate_from_shadows(&s, &o).unwrap();
        let sd = 9.0 * o.norm_bound() / (count as f64).sqrt();
        prop_assert!((est - exact).abs() < 5.0 * sd, "est {est} exact {exact}");
    }
}
