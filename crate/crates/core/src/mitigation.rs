//! Conventional ZNE, S-ZNE and hybrid S-ZNE, with exact shot accounting.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuits::ParamAssignment;
use crate::error::{Result, SzneError};
use crate::estimation::{collect_shadows, estimate_from_shadows, estimate_with_shots};
use crate::extrapolation::ExtrapolationScheme;
use crate::rng::{self, tag, Stream};
use crate::sim::Device;
use crate::surrogates::{
    fit_kernel_surrogate, fit_ridge_surrogate, predict, FeatureDictionary, Surrogate, TrainingMeta,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Training,
    Validation,
    Inference,
}

/// Running totals of shots/snapshots per phase. Counters only grow.
#[derive(Debug, Default)]
pub struct MeasurementLedger {
    training: AtomicU64,
    validation: AtomicU64,
    inference: AtomicU64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LedgerSummary {
    pub training: u64,
    pub validation: u64,
    pub inference: u64,
    pub total: u64,
}

impl LedgerSummary {
    pub fn since(&self, earlier: &LedgerSummary) -> LedgerSummary {
        LedgerSummary {
            training: self.training - earlier.training,
            validation: self.validation - earlier.validation,
            inference: self.inference - earlier.inference,
            total: self.total - earlier.total,
        }
    }
}

impl MeasurementLedger {
    pub fn new() -> Self {
        Self::default()
    }

    fn counter(&self, phase: Phase) -> &AtomicU64 {
        match phase {
            Phase::Training => &self.training,
            Phase::Validation => &self.validation,
            Phase::Inference => &self.inference,
        }
    }

    pub fn record(&self, phase: Phase, amount: u64) {
        self.counter(phase).fetch_add(amount, Ordering::Relaxed);
    }

    pub fn get(&self, phase: Phase) -> u64 {
        self.counter(phase).load(Ordering::Relaxed)
    }

    pub fn summary(&self) -> LedgerSummary {
        let training = self.get(Phase::Training);
        let validation = self.get(Phase::Validation);
        let inference = self.get(Phase::Inference);
        LedgerSummary {
            training,
            validation,
            inference,
            total: training + validation + inference,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryTag {
    Measured,
    Predicted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZEntry {
    pub value: f64,
    pub tag: EntryTag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MitigationRun {
    pub x: Vec<f64>,
    pub levels: Vec<u32>,
    pub z: Vec<ZEntry>,
    pub estimate: f64,
    pub ideal: Option<f64>,
    pub residual: Option<f64>,
    /// Shots consumed by this run.
    pub cost: u64,
}

impl MitigationRun {
    pub fn with_ideal(mut self, ideal: f64) -> Self {
        self.ideal = Some(ideal);
        self.residual = Some(self.estimate - ideal);
        self
    }

    pub fn values(&self) -> Vec<f64> {
        self.z.iter().map(|e| e.value).collect()
    }
}

/// `M`-shot estimate of the noisy expectation at one level; books `M` shots.
pub fn measure_level<R: Rng + ?Sized>(
    device: &Device,
    x: &ParamAssignment,
    level: u32,
    shots: u64,
    phase: Phase,
    ledger: &MeasurementLedger,
    rng: &mut R,
) -> Result<f64> {
    let terms = device.noisy_terms(x, level, rng)?;
    let est = estimate_with_shots(&terms, device.observable(), shots, rng)?;
    ledger.record(phase, shots);
    Ok(est.value)
}

fn finish(x: &ParamAssignment, scheme: &ExtrapolationScheme, z: Vec<ZEntry>, cost: u64) -> Result<MitigationRun> {
    let values: Vec<f64> = z.iter().map(|e| e.value).collect();
    Ok(MitigationRun {
        x: x.values.clone(),
        levels: scheme.levels.clone(),
        estimate: scheme.extrapolate(&values)?,
        z,
        ideal: None,
        residual: None,
        cost,
    })
}

/// Measures every level with `M` shots and extrapolates.
pub fn run_conventional_zne<R: Rng + ?Sized>(
    device: &Device,
    x: &ParamAssignment,
    scheme: &ExtrapolationScheme,
    shots: u64,
    ledger: &MeasurementLedger,
    rng: &mut R,
) -> Result<MitigationRun> {
    run_hybrid(&[], &[], device, x, scheme, shots, ledger, rng)
}

fn surrogate_for(surrogates: &[Surrogate], level: u32) -> Result<&Surrogate> {
    surrogates
        .iter()
        .find(|s| s.level == level)
        .ok_or(SzneError::MissingSurrogate(level))
}

/// Purely classical S-ZNE: every entry of `z` is a surrogate prediction.
pub fn run_szne(
    surrogates: &[Surrogate],
    x: &ParamAssignment,
    scheme: &ExtrapolationScheme,
    ledger: &MeasurementLedger,
) -> Result<MitigationRun> {
    let before = ledger.summary();
    let mut z = Vec::with_capacity(scheme.len());
    for &lvl in &scheme.levels {
        let s = surrogate_for(surrogates, lvl)?;
        z.push(ZEntry {
            value: predict(s, &x.values)?,
            tag: EntryTag::Predicted,
        });
    }
    assert_eq!(ledger.summary(), before, "surrogate inference must not consume shots");
    finish(x, scheme, z, 0)
}

/// Hybrid data vector: levels in `selected` are predicted, the others measured
/// with `M` shots each.
#[allow(clippy::too_many_arguments)]
pub fn run_hybrid<R: Rng + ?Sized>(
    surrogates: &[Surrogate],
    selected: &[u32],
    device: &Device,
    x: &ParamAssignment,
    scheme: &ExtrapolationScheme,
    shots: u64,
    ledger: &MeasurementLedger,
    rng: &mut R,
) -> Result<MitigationRun> {
    if let Some(&bad) = selected.iter().find(|l| !scheme.levels.contains(l)) {
        return Err(SzneError::UnknownLevel(bad));
    }
    let mut z = Vec::with_capacity(scheme.len());
    let mut cost = 0;
    for &lvl in &scheme.levels {
        if selected.contains(&lvl) {
            let s = surrogate_for(surrogates, lvl)?;
            z.push(ZEntry {
                value: predict(s, &x.values)?,
                tag: EntryTag::Predicted,
            });
        } else {
            let v = measure_level(device, x, lvl, shots, Phase::Inference, ledger, rng)?;
            cost += shots;
            z.push(ZEntry {
                value: v,
                tag: EntryTag::Measured,
            });
        }
    }
    finish(x, scheme, z, cost)
}

/// Uniform sampling over `[-R, R]^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sampler {
    pub radius: f64,
}

impl Default for Sampler {
    fn default() -> Self {
        Self {
            radius: std::f64::consts::PI,
        }
    }
}

impl Sampler {
    pub fn sample<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> ParamAssignment {
        ParamAssignment::new((0..d).map(|_| rng.random_range(-self.radius..=self.radius)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelMode {
    /// `T`-shot estimates (ridge path).
    Shots,
    /// `T`-snapshot Pauli shadows (kernel path).
    Shadows,
}

/// One labelled training example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingRecord {
    pub x: Vec<f64>,
    pub y: f64,
    pub lambda: u32,
    pub shots: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub level: u32,
    pub records: Vec<TrainingRecord>,
}

impl Dataset {
    pub fn pairs(&self) -> Vec<(Vec<f64>, f64)> {
        self.records.iter().map(|r| (r.x.clone(), r.y)).collect()
    }
}

/// Label one input. The stream is derived from `(master, TRAINING, level, index)`.
#[allow(clippy::too_many_arguments)]
fn label_input(
    device: &Device,
    level: u32,
    index: usize,
    budget: u64,
    mode: LabelMode,
    sampler: &Sampler,
    master_seed: u64,
) -> Result<TrainingRecord> {
    let seed = rng::derive_seed(master_seed, &[tag::TRAINING, level as u64, index as u64]);
    let mut r = Stream::seed_from_u64(seed);
    let x = sampler.sample(device.dimension(), &mut r);
    let y = match mode {
        LabelMode::Shots => {
            let terms = device.noisy_terms(&x, level, &mut r)?;
            estimate_with_shots(&terms, device.observable(), budget, &mut r)?.value
        }
        LabelMode::Shadows => {
            let s = collect_shadows(device, &x, level, budget as usize, &mut r)?;
            estimate_from_shadows(&s, device.observable())?
        }
    };
    Ok(TrainingRecord {
        x: x.values,
        y,
        lambda: level,
        shots: budget,
        seed,
    })
}

/// `n` labelled inputs per level, each label using `budget` shots or
/// snapshots. Books `Σ_j n·budget` training shots.
#[allow(clippy::too_many_arguments)]
pub fn build_training_datasets(
    device: &Device,
    levels: &[u32],
    n: usize,
    budget: u64,
    mode: LabelMode,
    sampler: &Sampler,
    master_seed: u64,
    ledger: &MeasurementLedger,
) -> Result<Vec<Dataset>> {
    if n == 0 || budget == 0 || levels.is_empty() {
        return Err(SzneError::EmptyBudget);
    }
    levels
        .iter()
        .map(|&lvl| {
            let records = (0..n)
                .into_par_iter()
                .map(|i| label_input(device, lvl, i, budget, mode, sampler, master_seed))
                .collect::<Result<Vec<_>>>()?;
            ledger.record(Phase::Training, n as u64 * budget);
            Ok(Dataset { level: lvl, records })
        })
        .collect()
}

/// Learner configuration for [`train_surrogates`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "learner", rename_all = "snake_case")]
pub enum SurrogateSpec {
    Ridge { dictionary: FeatureDictionary, gamma: f64 },
    Kernel { truncation: usize, expand_cap: usize },
}

/// Fits one surrogate per dataset, in parallel over levels.
pub fn train_surrogates(datasets: &[Dataset], spec: &SurrogateSpec, master_seed: u64) -> Result<Vec<Surrogate>> {
    datasets
        .par_iter()
        .map(|ds| {
            let pairs = ds.pairs();
            let meta = TrainingMeta {
                samples: pairs.len(),
                budget: ds.records.first().map_or(0, |r| r.shots),
                seed: master_seed,
            };
            match spec {
                SurrogateSpec::Ridge { dictionary, gamma } => {
                    fit_ridge_surrogate(&pairs, dictionary, *gamma, ds.level, meta)
                }
                SurrogateSpec::Kernel {
                    truncation,
                    expand_cap,
                } => fit_kernel_surrogate(&pairs, *truncation, ds.level, meta, *expand_cap),
            }
        })
        .collect()
}

/// Per-level validation MSE and the levels that pass the threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub levels: Vec<u32>,
    pub mse: Vec<f64>,
    pub threshold: f64,
    pub selected: Vec<u32>,
}

/// Compares predictions with `M_val`-shot measurements on the validation
/// inputs and keeps `J_S = {λ_j : MSE(λ_j) ≤ η}`. Books `|val|·u·M_val`.
#[allow(clippy::too_many_arguments)]
pub fn validate_and_select(
    surrogates: &[Surrogate],
    device: &Device,
    inputs: &[ParamAssignment],
    levels: &[u32],
    shots: u64,
    threshold: f64,
    master_seed: u64,
    ledger: &MeasurementLedger,
) -> Result<Selection> {
    if inputs.is_empty() {
        return Err(SzneError::EmptyValidationSet);
    }
    let mut mse = Vec::with_capacity(levels.len());
    for &lvl in levels {
        let s = surrogate_for(surrogates, lvl)?;
        let errs = inputs
            .par_iter()
            .enumerate()
            .map(|(i, x)| {
                let mut r = rng::stream(master_seed, &[tag::VALIDATION, lvl as u64, i as u64]);
                let measured = measure_level(device, x, lvl, shots, Phase::Validation, ledger, &mut r)?;
                let e = predict(s, &x.values)? - measured;
                Ok(e * e)
            })
            .collect::<Result<Vec<f64>>>()?;
        mse.push(errs.iter().sum::<f64>() / errs.len() as f64);
    }
    let selected = levels
        .iter()
        .zip(&mse)
        .filter(|(_, m)| **m <= threshold)
        .map(|(l, _)| *l)
        .collect();
    Ok(Selection {
        levels: levels.to_vec(),
        mse,
        threshold,
        selected,
    })
}
