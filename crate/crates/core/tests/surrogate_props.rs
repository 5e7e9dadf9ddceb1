mod common;

use proptest::prelude::*;
use rand::Rng;
use szne::circuits::ParamAssignment;
use szne::sim::ideal_expectation;
use szne::surrogates::{
    fit_ridge_surrogate, frequency_set, frequency_set_size, kernel_eval, trig_coeff_oracle, FeatureDictionary,
    SurrogateModel, TrainingMeta, Truncation,
};

fn meta(n: usize) -> TrainingMeta {
    TrainingMeta {
        samples: n,
        budget: 0,
        seed: 0,
    }
}

/// Every `ω ∈ {0,±1}^d`, by counting in base 3.
fn all_frequencies(d: usize) -> Vec<Vec<i8>> {
    (0..3usize.pow(d as u32))
        .map(|mut idx| {
            (0..d)
                .map(|_| {
                    let v = [0i8, 1, -1][idx % 3];
                    idx /= 3;
                    v
                })
                .collect()
        })
        .collect()
}

fn phi(omega: &[i8], x: &[f64]) -> f64 {
    omega
        .iter()
        .zip(x)
        .map(|(&w, &v)| match w {
            1 => v.cos(),
            -1 => v.sin(),
            _ => 1.0,
        })
        .product()
}

fn random_points(seed: u64, n: usize, d: usize) -> Vec<Vec<f64>> {
    let mut r = szne::rng::stream(seed, &[3]);
    (0..n)
        .map(|_| (0..d).map(|_| r.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn frequency_set_size_by_enumeration(d in 1usize..7, lam in 0usize..7) {
        let lam = lam.min(d);
        let brute = all_frequencies(d)
            .iter()
            .filter(|w| w.iter().filter(|v| **v != 0).count() <= lam)
            .count();
        prop_assert_eq!(frequency_set_size(d, lam), brute as u128);
        let set = frequency_set(d, lam, 1 << 20, 0, &mut szne::rng::stream(0, &[])).unwrap();
        prop_assert_eq!(set.members.len(), brute);
        let unique: std::collections::HashSet<_> = set.members.iter().collect();
        prop_assert_eq!(unique.len(), brute);
    }

    #[test]
    fn sampled_frequency_set_is_distinct_and_truncated(d in 6usize..20, lam in 1usize..4, n_f in 1usize..60, seed in any::<u64>()) {
        prop_assume!(frequency_set_size(d, lam) > n_f as u128);
        let set = frequency_set(d, lam, 10, n_f, &mut szne::rng::stream(seed, &[])).unwrap();
        prop_assert!(set.sampled);
        prop_assert_eq!(set.members.len(), n_f);
        let unique: std::collections::HashSet<_> = set.members.iter().collect();
        prop_assert_eq!(unique.len(), n_f);
        prop_assert!(set.members.iter().all(|w| w.iter().filter(|v| **v != 0).count() <= lam));
    }

    #[test]
    fn kernel_factorizes(d in 1usize..6, lam in 0usize..6, seed in any::<u64>()) {
        let lam = lam.min(d);
        let pts = random_points(seed, 2, d);
        let direct: f64 = all_frequencies(d)
            .iter()
            .filter(|w| w.iter().filter(|v| **v != 0).count() <= lam)
            .map(|w| {
                let k = w.iter().filter(|v| **v != 0).count();
                (1u64 << k) as f64 * phi(w, &pts[0]) * phi(w, &pts[1])
            })
            .sum();
        let k = kernel_eval(&pts[0], &pts[1], lam).unwrap();
        prop_assert!((k - direct).abs() < 1e-9 * direct.abs().max(1.0));
    }

    #[test]
    fn oracle_reconstructs_circuit(n in 1usize..4, raw in common::raw_gates(16), terms in common::raw_terms(), seed in any::<u64>()) {
        let c = common::circuit_from(n, &raw, 4);
        let o = common::observable_from(n, &terms);
        let e = trig_coeff_oracle(&c, &o).unwrap();
        for x in random_points(seed, 10, c.slot_count()) {
            let direct = ideal_expectation(&c, &ParamAssignment::new(x.clone()), &o).unwrap();
            prop_assert!((e.evaluate(&x) - direct).abs() < 1e-8);
        }
    }

    #[test]
    fn ridge_recovers_oracle_coefficients(n in 1usize..4, raw in common::raw_gates(16), terms in common::raw_terms(), seed in any::<u64>()) {
        let c = common::circuit_from(n, &raw, 3);
        let o = common::observable_from(n, &terms);
        let d = c.slot_count();
        let oracle = trig_coeff_oracle(&c, &o).unwrap();
        let data: Vec<(Vec<f64>, f64)> = random_points(seed, 12 * 3usize.pow(d as u32), d)
            .into_iter()
            .map(|x| {
                let y = ideal_expectation(&c, &ParamAssignment::new(x.clone()), &o).unwrap();
                (x, y)
            })
            .collect();
        let set = frequency_set(d, d, 1 << 20, 0, &mut szne::rng::stream(0, &[])).unwrap();
        let dict = FeatureDictionary::independent(&set);
        let s = fit_ridge_surrogate(&data, &dict, 0.0, 1, meta(data.len())).unwrap();
        let SurrogateModel::Linear { weights, .. } = &s.model else { unreachable!() };
        for (w, omega) in weights.iter().zip(&set.members) {
            prop_assert!((w - oracle.get(omega)).abs() < 1e-6, "ω {omega:?}: {w} vs {}", oracle.get(omega));
        }
    }

    #[test]
    fn ridge_recovers_band_limited_target(d in 2usize..6, lam in 1usize..3, seed in any::<u64>()) {
        let lam = lam.min(d);
        let set = frequency_set(d, lam, 1 << 20, 0, &mut szne::rng::stream(0, &[])).unwrap();
        let mut r = szne::rng::stream(seed, &[4]);
        let coeffs: Vec<f64> = set.members.iter().map(|_| r.random_range(-1.0..1.0)).collect();
        let target = |x: &[f64]| -> f64 { set.members.iter().zip(&coeffs).map(|(w, c)| c * phi(w, x)).sum() };
        let data: Vec<(Vec<f64>, f64)> = random_points(seed, 8 * set.members.len(), d)
            .into_iter()
            .map(|x| {
                let y = target(&x);
                (x, y)
            })
            .collect();
        let dict = FeatureDictionary::independent(&set);
        let s = fit_ridge_surrogate(&data, &dict, 0.0, 1, meta(data.len())).unwrap();
        let mse: f64 = random_points(seed ^ 1, 200, d)
            .iter()
            .map(|x| (s.predict(x).unwrap() - target(x)).powi(2))
            .sum::<f64>()
            / 200.0;
        prop_assert!(mse < 1e-6, "mse {mse}");
    }
}

/// Per-group monomial options `(a, b)` with `a + b ≤ m`, counted directly.
fn options(m: usize) -> Vec<usize> {
    let mut degs = Vec::new();
    for a in 0..=m {
        for b in 0..=m - a {
            degs.push(a + b);
        }
    }
    degs
}

#[test]
fn grouped_monomial_sizes() {
    for sizes in [vec![3usize, 4], vec![99, 100], vec![1, 2, 2], vec![5]] {
        for lam in 0..=3usize.min(sizes.iter().sum()) {
            let per_group: Vec<Vec<usize>> = sizes.iter().map(|&ds| options(ds.min(lam))).collect();
            let mut total_count = 0usize;
            let mut per_group_count = 1usize;
            // enumerate the product of per-group options
            let mut idx = vec![0usize; sizes.len()];
            loop {
                let deg: usize = idx.iter().zip(&per_group).map(|(&i, g)| g[i]).sum();
                if deg <= lam {
                    total_count += 1;
                }
                let mut k = 0;
                while k < idx.len() {
                    idx[k] += 1;
                    if idx[k] < per_group[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == idx.len() {
                    break;
                }
            }
            for g in &per_group {
                per_group_count *= g.len();
            }
            let t = FeatureDictionary::grouped_monomial(&sizes, lam, Truncation::Total).unwrap();
            let p = FeatureDictionary::grouped_monomial(&sizes, lam, Truncation::PerGroup).unwrap();
            assert_eq!(t.len(), total_count, "{sizes:?} Λ={lam}");
            assert_eq!(p.len(), per_group_count, "{sizes:?} Λ={lam}");
        }
    }
    let vqa = FeatureDictionary::grouped_monomial(&[99, 100], 2, Truncation::PerGroup).unwrap();
    assert_eq!(vqa.len(), 36);
}
