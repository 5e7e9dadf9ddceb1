use proptest::prelude::*;
use szne::experiments::{
    build_hamiltonian, exact_ground_energy, matrix_ground_energy, metrology_sweep, residual_report,
    residual_stats, tfim_free_fermion_energy, HamiltonianModel, MetrologyConfig, KDE_GRID_POINTS,
};
use szne::mitigation::{EntryTag, MitigationRun, ZEntry};

#[test]
fn free_fermion_matches_matrix_up_to_fourteen() {
    let (j, h) = (0.1, 0.5);
    for n in 2..=14 {
        let ham = build_hamiltonian(HamiltonianModel::Tfim { j, h }, n).unwrap();
        let a = matrix_ground_energy(&ham.observable, n).unwrap();
        let b = tfim_free_fermion_energy(n, j, h);
        assert!((a - b).abs() < 1e-8, "N={n}: matrix {a} free fermion {b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn free_fermion_matches_matrix_random_couplings(n in 2usize..8, j in -2.0f64..2.0, h in -2.0f64..2.0) {
        let ham = build_hamiltonian(HamiltonianModel::Tfim { j, h }, n).unwrap();
        let a = matrix_ground_energy(&ham.observable, n).unwrap();
        let b = tfim_free_fermion_energy(n, j, h);
        prop_assert!((a - b).abs() < 1e-8, "matrix {a} free fermion {b}");
    }

    #[test]
    fn residual_mse_is_mean_square(res in prop::collection::vec(-1.0f64..1.0, 2..40)) {
        let r = residual_stats(&res, KDE_GRID_POINTS).unwrap();
        let mse = res.iter().map(|v| v * v).sum::<f64>() / res.len() as f64;
        prop_assert!((r.mse - mse).abs() < 1e-12);
        prop_assert_eq!(r.grid.len(), KDE_GRID_POINTS);
        prop_assert!(r.density.iter().all(|d| *d >= 0.0));
    }
}

#[test]
fn exact_energy_examples() {
    let two = build_hamiltonian(HamiltonianModel::Tfim { j: 0.1, h: 0.5 }, 2).unwrap();
    let expect = -(0.1f64 * 0.1 + 4.0 * 0.25).sqrt();
    assert!((exact_ground_energy(&two).unwrap() - expect).abs() < 1e-12);
    for n in [3, 10, 60] {
        let free = build_hamiltonian(HamiltonianModel::Tfim { j: 0.0, h: 0.5 }, n).unwrap();
        assert!((exact_ground_energy(&free).unwrap() + 0.5 * n as f64).abs() < 1e-9);
    }
    let big = build_hamiltonian(HamiltonianModel::Tfim { j: 0.1, h: 0.5 }, 100).unwrap();
    assert!((exact_ground_energy(&big).unwrap() + 50.50).abs() < 0.01);
}

#[test]
fn residual_report_examples() {
    let run = |residual: f64| {
        MitigationRun {
            x: vec![0.0],
            levels: vec![1],
            z: vec![ZEntry {
                value: residual,
                tag: EntryTag::Measured,
            }],
            estimate: residual,
            ideal: None,
            residual: None,
            cost: 0,
        }
    };
    let hand: Vec<MitigationRun> = [0.1, -0.1].iter().map(|&r| run(r).with_ideal(0.0)).collect();
    assert!((residual_report(&hand).unwrap().mse - 0.01).abs() < 1e-15);
    let zeros: Vec<MitigationRun> = (0..10).map(|_| run(0.0).with_ideal(0.0)).collect();
    let r = residual_report(&zeros).unwrap();
    assert_eq!(r.mse, 0.0);
    assert!(r.peak().abs() < 1e-6);
    assert!(residual_report(&[run(0.3)]).is_err());
}

#[test]
fn metrology_mitigation_beats_unmitigated_over_seeds() {
    let (mut raw, mut zne, mut szne) = (0.0, 0.0, 0.0);
    let seeds = 5;
    for seed in 0..seeds {
        let cfg = MetrologyConfig {
            qubits: 20,
            phases: 100,
            seed,
            ..MetrologyConfig::default()
        };
        let r = metrology_sweep(&cfg).unwrap();
        raw += r.unmitigated_summary.mse;
        zne += r.zne_summary.mse;
        szne += r.szne_summary.mse;
    }
    assert!(zne < raw && szne < raw, "raw {raw} zne {zne} szne {szne}");
}

#[test]
fn noiseless_sweep_sits_at_shot_floor() {
    let cfg = MetrologyConfig {
        qubits: 10,
        p_g: 0.0,
        phases: 100,
        ..MetrologyConfig::default()
    };
    let r = metrology_sweep(&cfg).unwrap();
    // shot-noise floor 2B²ln(40)/M with B = 1
    let floor = 2.0 / cfg.shots as f64 * 40f64.ln();
    assert!(r.unmitigated_summary.mse <= floor);
    assert!(r.szne_summary.mse <= floor);
    assert!(r.zne_summary.mse <= floor);
}
