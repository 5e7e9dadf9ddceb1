use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuits::{build_ghz_probe, ParamAssignment};
use crate::error::Result;
use crate::extrapolation::{uniform_levels, ExtrapolationKind, ExtrapolationScheme};
use crate::mitigation::{
    build_training_datasets, measure_level, run_conventional_zne, run_szne, train_surrogates, EntryTag,
    LabelMode, LedgerSummary, MeasurementLedger, MitigationRun, Phase, Sampler, SurrogateSpec, ZEntry,
};
use crate::noise::NoiseModel;
use crate::observable::Observable;
use crate::rng::{self, tag};
use crate::sim::{Backend, Device};
use crate::surrogates::{FeatureDictionary, DEFAULT_GAMMA};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetrologyConfig {
    pub qubits: usize,
    pub p_g: f64,
    /// Number of amplified levels `u` (levels are `1..=u`).
    pub levels: u32,
    pub shots: u64,
    pub train_samples: usize,
    pub train_budget: u64,
    pub phases: usize,
    /// Width of the phase window starting at 0; `None` means two signal periods.
    pub phase_span: Option<f64>,
    pub truncation: usize,
    pub gamma: f64,
    pub scheme: ExtrapolationKind,
    pub seed: u64,
}

impl Default for MetrologyConfig {
    fn default() -> Self {
        Self {
            qubits: 100,
            p_g: 0.1,
            levels: 5,
            shots: 20_000,
            train_samples: 100,
            train_budget: 20_000,
            phases: 500,
            phase_span: None,
            truncation: 2,
            gamma: DEFAULT_GAMMA,
            scheme: ExtrapolationKind::Linear,
            seed: 0,
        }
    }
}

impl MetrologyConfig {
    pub fn device(&self) -> Result<Device> {
        Device::new(
            build_ghz_probe(self.qubits)?,
            Observable::z_parity(self.qubits),
            NoiseModel::global_depolarizing(self.p_g)?,
            Backend::Analytic,
        )
    }

    pub fn phase_grid(&self) -> Vec<f64> {
        let span = self
            .phase_span
            .unwrap_or(4.0 * std::f64::consts::PI / self.qubits as f64);
        (0..self.phases).map(|k| span * k as f64 / self.phases as f64).collect()
    }

    /// Ridge surrogates over the harmonic dictionary of the single phase group.
    pub fn surrogate_spec(&self, device: &Device) -> Result<SurrogateSpec> {
        Ok(SurrogateSpec::Ridge {
            dictionary: FeatureDictionary::grouped_harmonic(&device.circuit().group_sizes(), self.truncation)?,
            gamma: self.gamma,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub mse: f64,
    pub ledger: LedgerSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetrologyResult {
    pub unmitigated: Vec<MitigationRun>,
    pub zne: Vec<MitigationRun>,
    pub szne: Vec<MitigationRun>,
    pub unmitigated_summary: MethodSummary,
    pub zne_summary: MethodSummary,
    pub szne_summary: MethodSummary,
}

pub(crate) fn mse(runs: &[MitigationRun]) -> f64 {
    runs.iter().map(|r| r.residual.unwrap_or(f64::NAN).powi(2)).sum::<f64>() / runs.len() as f64
}

/// Unmitigated, ZNE and S-ZNE estimates of the GHZ parity signal over the
/// phase grid, each scored against `cos(Nx)`.
pub fn metrology_sweep(cfg: &MetrologyConfig) -> Result<MetrologyResult> {
    let device = cfg.device()?;
    let levels = uniform_levels(cfg.levels);
    let scheme = ExtrapolationScheme::new(cfg.scheme, &levels)?;
    let grid = cfg.phase_grid();

    let raw_ledger = MeasurementLedger::new();
    let unmitigated = grid
        .par_iter()
        .enumerate()
        .map(|(i, &phi)| {
            let x = ParamAssignment::new(vec![phi]);
            let mut r = rng::stream(cfg.seed, &[tag::TEST, i as u64]);
            let v = measure_level(&device, &x, 1, cfg.shots, Phase::Inference, &raw_ledger, &mut r)?;
            Ok(MitigationRun {
                x: x.values.clone(),
                levels: vec![1],
                z: vec![ZEntry {
                    value: v,
                    tag: EntryTag::Measured,
                }],
                estimate: v,
                ideal: None,
                residual: None,
                cost: cfg.shots,
            }
            .with_ideal(device.ideal(&x)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let zne_ledger = MeasurementLedger::new();
    let zne = grid
        .par_iter()
        .enumerate()
        .map(|(i, &phi)| {
            let x = ParamAssignment::new(vec![phi]);
            let mut r = rng::stream(cfg.seed, &[tag::INFERENCE, i as u64]);
            Ok(run_conventional_zne(&device, &x, &scheme, cfg.shots, &zne_ledger, &mut r)?.with_ideal(device.ideal(&x)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let s_ledger = MeasurementLedger::new();
    let datasets = build_training_datasets(
        &device,
        &levels,
        cfg.train_samples,
        cfg.train_budget,
        LabelMode::Shots,
        &Sampler::default(),
        cfg.seed,
        &s_ledger,
    )?;
    let surrogates = train_surrogates(&datasets, &cfg.surrogate_spec(&device)?, cfg.seed)?;
    let szne = grid
        .par_iter()
        .map(|&phi| {
            let x = ParamAssignment::new(vec![phi]);
            Ok(run_szne(&surrogates, &x, &scheme, &s_ledger)?.with_ideal(device.ideal(&x)?))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(MetrologyResult {
        unmitigated_summary: MethodSummary {
            mse: mse(&unmitigated),
            ledger: raw_ledger.summary(),
        },
        zne_summary: MethodSummary {
            mse: mse(&zne),
            ledger: zne_ledger.summary(),
        },
        szne_summary: MethodSummary {
            mse: mse(&szne),
            ledger: s_ledger.summary(),
        },
        unmitigated,
        zne,
        szne,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DataEfficiencyConfig {
    pub base: MetrologyConfig,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub test_points: usize,
}

impl Default for DataEfficiencyConfig {
    fn default() -> Self {
        Self {
            base: MetrologyConfig::default(),
            sizes: vec![4, 8, 16, 32],
            trials: 10,
            test_points: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataEfficiencyRow {
    pub samples: usize,
    pub level: u32,
    /// Test MSE against the exact noisy signal, averaged over trials.
    pub mse: f64,
}

/// Surrogate test error versus training-set size, per level.
pub fn data_efficiency(cfg: &DataEfficiencyConfig) -> Result<Vec<DataEfficiencyRow>> {
    let base = &cfg.base;
    let device = base.device()?;
    let levels = uniform_levels(base.levels);
    let spec = base.surrogate_spec(&device)?;
    let sampler = Sampler::default();
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        let per_trial = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let seed = rng::derive_seed(base.seed, &[tag::TRAINING, n as u64, t as u64]);
                let ledger = MeasurementLedger::new();
                let ds = build_training_datasets(
                    &device,
                    &levels,
                    n,
                    base.train_budget,
                    LabelMode::Shots,
                    &sampler,
                    seed,
                    &ledger,
                )?;
                let surrogates = train_surrogates(&ds, &spec, seed)?;
                let mut r = rng::stream(seed, &[tag::TEST]);
                let tests: Vec<ParamAssignment> = (0..cfg.test_points)
                    .map(|_| sampler.sample(device.dimension(), &mut r))
                    .collect();
                surrogates
                    .iter()
                    .map(|s| {
                        let mut acc = 0.0;
                        for x in &tests {
                            let truth = device.noisy(x, s.level, &mut r)?;
                            acc += (s.predict(&x.values)? - truth).powi(2);
                        }
                        Ok(acc / tests.len() as f64)
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        for (j, &lvl) in levels.iter().enumerate() {
            let avg = per_trial.iter().map(|v| v[j]).sum::<f64>() / cfg.trials as f64;
            rows.push(DataEfficiencyRow {
                samples: n,
                level: lvl,
                mse: avg,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_ledgers() {
        let cfg = MetrologyConfig {
            qubits: 8,
            phases: 20,
            shots: 1000,
            train_samples: 10,
            train_budget: 1000,
            ..Default::default()
        };
        let r = metrology_sweep(&cfg).unwrap();
        assert_eq!(r.zne_summary.ledger.inference, 20 * 5 * 1000);
        assert_eq!(r.szne_summary.ledger.training, 10 * 5 * 1000);
        assert_eq!(r.szne_summary.ledger.inference, 0);
        assert!(r.zne.iter().all(|run| run.residual.is_some()));
    }

    #[test]
    fn noiseless_sweep_hits_shot_floor() {
        let cfg = MetrologyConfig {
            qubits: 6,
            p_g: 0.0,
            phases: 50,
            shots: 4000,
            train_samples: 20,
            train_budget: 4000,
            ..Default::default()
        };
        let r = metrology_sweep(&cfg).unwrap();
        let floor = 2.0 * 40f64.ln() / 4000.0;
        for s in [r.unmitigated_summary, r.zne_summary, r.szne_summary] {
            assert!(s.mse <= floor, "{} > {floor}", s.mse);
        }
    }
}
