use proptest::prelude::*;
use szne::noise::{
    amplified_rate, depolarizing_kraus, ptm_diagonal, thermal_kraus, GateRates, NoiseComponent, NoiseModel,
};
use szne::sim::DensityOperator;
use num_complex::Complex64 as C64;

fn random_state(seed: u64, n: usize) -> DensityOperator {
    use rand::Rng;
    let mut r = szne::rng::stream(seed, &[]);
    let mut amps: Vec<C64> = (0..1 << n)
        .map(|_| C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    DensityOperator::from_pure(&amps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn depolarizing_is_trace_preserving(p in 0.0f64..=1.0, arity in 1usize..=2) {
        prop_assert!(depolarizing_kraus(arity, p).completeness_error() < 1e-12);
    }

    #[test]
    fn thermal_is_trace_preserving(t1 in 1.0f64..200.0, ratio in 0.05f64..2.0, t_g in 0.0f64..1.0, p_e in 0.0f64..=1.0) {
        let t2 = t1 * ratio;
        let k = thermal_kraus(t1, t2, t_g, p_e).unwrap();
        prop_assert!(k.completeness_error() < 1e-10);
    }

    #[test]
    fn inconsistent_relaxation_rejected(t1 in 1.0f64..200.0, excess in 1.001f64..3.0) {
        prop_assert!(thermal_kraus(t1, 2.0 * t1 * excess, 0.1, 0.0).is_err());
    }

    #[test]
    fn symmetric_pauli_channel_ptm(p in 0.0f64..=1.0) {
        let (qx, qy, qz) = ptm_diagonal(p / 4.0, p / 4.0, p / 4.0).unwrap();
        for q in [qx, qy, qz] {
            prop_assert!((q - (1.0 - p)).abs() < 1e-15);
        }
    }

    #[test]
    fn amplified_rate_monotone(p in 0.0f64..1.0, dp in 0.0f64..0.5, level in 1u32..20) {
        let a = amplified_rate(p, level);
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(amplified_rate(p, level + 1) >= a);
        prop_assert!(amplified_rate((p + dp).min(1.0), level) >= a);
        prop_assert!(a >= p - 1e-15);
    }

    #[test]
    fn amplified_rate_is_repeated_channel(p in 0.0f64..1.0, level in 1u32..8, seed in any::<u64>()) {
        let n = 2;
        let mut repeated = random_state(seed, n);
        let mut once = repeated.clone();
        for _ in 0..level {
            repeated.depolarize_global(p);
        }
        once.depolarize_global(amplified_rate(p, level));
        let d = 1 << n;
        for r in 0..d {
            for c in 0..d {
                prop_assert!((repeated.entry(r, c) - once.entry(r, c)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn channel_repetition_matches_rate_formula_for_depolarizing(p in 0.0f64..0.3, level in 1u32..5) {
        use szne::noise::Amplification;
        let comps = vec![NoiseComponent::LocalDepolarizing { p_d: GateRates { single: p, two: p } }];
        let rep = NoiseModel::new(comps.clone(), Amplification::ChannelRepetition).unwrap();
        let rate = NoiseModel::new(comps, Amplification::RateFormula).unwrap();
        let a = rep.gate_superops(level).unwrap();
        let b = rate.gate_superops(level).unwrap();
        for arity in 1..=2 {
            let (sa, sb) = (a.for_arity(arity).unwrap(), b.for_arity(arity).unwrap());
            let diff = (&sa.matrix - &sb.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max);
            prop_assert!(diff < 1e-12);
        }
    }
}

#[test]
fn table1_superops_are_trace_preserving() {
    let m = NoiseModel::table1();
    for level in 1..=5 {
        let g = m.gate_superops(level).unwrap();
        for arity in 1..=2 {
            let s = g.for_arity(arity).unwrap();
            let d = 1usize << arity;
            // the trace row of a superoperator in vec(ρ) form is vec(I)
            for col in 0..d * d {
                let mut t = C64::new(0.0, 0.0);
                for i in 0..d {
                    t += s.matrix[(i * d + i, col)];
                }
                let (r, c) = (col / d, col % d);
                let expect = if r == c { 1.0 } else { 0.0 };
                assert!((t - C64::new(expect, 0.0)).norm() < 1e-10);
            }
        }
    }
}
