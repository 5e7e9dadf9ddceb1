mod common;

use proptest::prelude::*;
use szne::circuits::{build_hva, HvaModel, ParamAssignment};
use szne::noise::NoiseModel;
use szne::observable::Observable;
use szne::sim::{lightcone_expectation, simulate, simulate_noisy, Backend, Device};

fn noise_models() -> Vec<NoiseModel> {
    vec![
        NoiseModel::noiseless(),
        NoiseModel::global_depolarizing(0.2).unwrap(),
        NoiseModel::table1(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn expectation_within_norm_bound(
        n in 1usize..4,
        raw in common::raw_gates(16),
        terms in common::raw_terms(),
        seed in any::<u64>(),
        level in 1u32..4,
    ) {
        let c = common::circuit_from(n, &raw, 4);
        let o = common::observable_from(n, &terms);
        let x = ParamAssignment::new(seed_angles(seed, c.group_count()));
        let b = o.norm_bound();
        for noise in noise_models() {
            let dev = Device::new(c.clone(), o.clone(), noise, Backend::Dense).unwrap();
            let mut rng = szne::rng::stream(seed, &[]);
            let v = dev.noisy(&x, level, &mut rng).unwrap();
            prop_assert!(v.abs() <= b + 1e-12);
            prop_assert!(dev.ideal(&x).unwrap().abs() <= b + 1e-12);
        }
    }

    #[test]
    fn norm_and_trace_preserved(n in 1usize..4, raw in common::raw_gates(16), seed in any::<u64>(), level in 1u32..4) {
        let c = common::circuit_from(n, &raw, 4);
        let angles = seed_angles(seed, c.slot_count());
        prop_assert!((simulate(&c, &angles).norm_sqr() - 1.0).abs() < 1e-12);
        let gn = NoiseModel::table1().gate_superops(level).unwrap();
        let rho = simulate_noisy(&c, &angles, &gn, 0.3);
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.trace().im.abs() < 1e-12);
        prop_assert!(rho.hermiticity_error() < 1e-12);
        prop_assert!(rho.diagonal().iter().all(|p| *p > -1e-12));
    }

    #[test]
    fn global_depolarizing_scales_ideal(
        n in 1usize..4,
        raw in common::raw_gates(16),
        terms in common::raw_terms(),
        seed in any::<u64>(),
        p in 0.0f64..1.0,
    ) {
        let c = common::circuit_from(n, &raw, 4);
        let o = common::observable_from(n, &terms);
        let angles = seed_angles(seed, c.slot_count());
        let clean = simulate_noisy(&c, &angles, &NoiseModel::noiseless().gate_superops(1).unwrap(), 0.0);
        let noisy = simulate_noisy(&c, &angles, &NoiseModel::noiseless().gate_superops(1).unwrap(), p);
        for t in o.terms() {
            let ideal = clean.pauli_expectation(&t.string);
            prop_assert!((noisy.pauli_expectation(&t.string) - (1.0 - p) * ideal).abs() < 1e-12);
        }
    }

    #[test]
    fn lightcone_matches_dense(
        n in 2usize..9,
        layers in 1usize..3,
        heis in any::<bool>(),
        terms in common::raw_terms(),
        seed in any::<u64>(),
    ) {
        let model = if heis { HvaModel::Heisenberg } else { HvaModel::Tfim };
        let c = build_hva(model, n, layers).unwrap();
        let o = common::observable_from(n, &terms);
        let x = ParamAssignment::new(seed_angles(seed, c.group_count()));
        let dense = Device::new(c.clone(), o.clone(), NoiseModel::noiseless(), Backend::Dense).unwrap();
        let a = dense.ideal(&x).unwrap();
        let b = lightcone_expectation(&c, &x, &o).unwrap();
        prop_assert!((a - b).abs() < 1e-10, "dense {a} lightcone {b}");
    }
}

#[test]
fn lightcone_matches_dense_on_random_circuits() {
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig::with_cases(32));
    runner
        .run(
            &(2usize..7, common::raw_gates(24), common::raw_terms(), any::<u64>()),
            |(n, raw, terms, seed)| {
                let c = common::circuit_from(n, &raw, 8);
                let o = common::observable_from(n, &terms);
                let x = ParamAssignment::new(seed_angles(seed, c.group_count()));
                let dense = Device::new(c.clone(), o.clone(), NoiseModel::noiseless(), Backend::Dense).unwrap();
                let a = dense.ideal(&x).unwrap();
                let b = lightcone_expectation(&c, &x, &o).unwrap();
                prop_assert!((a - b).abs() < 1e-10);
                Ok(())
            },
        )
        .unwrap();
}

#[test]
fn ghz_analytic_matches_dense() {
    let n = 4;
    let c = szne::circuits::build_ghz_probe(n).unwrap();
    let noise = NoiseModel::global_depolarizing(0.1).unwrap();
    let o = Observable::z_parity(n);
    let dense = Device::new(c.clone(), o.clone(), noise.clone(), Backend::Dense).unwrap();
    let analytic = Device::new(c, o, noise, Backend::Analytic).unwrap();
    let mut rng = szne::rng::stream(0, &[]);
    for k in 0..20 {
        let x = ParamAssignment::new(vec![-1.5 + 0.15 * k as f64]);
        for level in 1..=3 {
            let a = dense.noisy(&x, level, &mut rng).unwrap();
            let b = analytic.noisy(&x, level, &mut rng).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }
}

fn seed_angles(seed: u64, d: usize) -> Vec<f64> {
    use rand::Rng;
    let mut r = szne::rng::stream(seed, &[1]);
    (0..d).map(|_| r.random_range(-3.2..3.2)).collect()
}
