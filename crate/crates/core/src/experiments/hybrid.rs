use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hamiltonian::{build_hamiltonian, HamiltonianModel};
use super::metrology::mse;
use crate::circuits::{build_hea, ParamAssignment};
use crate::error::{Result, SzneError};
use crate::extrapolation::{uniform_levels, ExtrapolationKind, ExtrapolationScheme};
use crate::mitigation::{
    build_training_datasets, run_conventional_zne, run_hybrid, train_surrogates, validate_and_select, LabelMode,
    LedgerSummary, MeasurementLedger, MitigationRun, Sampler, Selection, SurrogateSpec,
};
use crate::noise::NoiseModel;
use crate::rng::{self, tag};
use crate::sim::{Backend, Device};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HybridConfig {
    pub qubits: usize,
    pub layers: usize,
    pub model: HamiltonianModel,
    pub noise: NoiseModel,
    pub levels: u32,
    pub train_samples: usize,
    pub train_budget: u64,
    pub truncation: usize,
    /// Expand the kernel into explicit weights when `|C(Λ)|` is at most this.
    pub expand_cap: usize,
    pub validation_samples: usize,
    pub validation_shots: u64,
    pub threshold: f64,
    pub test_samples: usize,
    /// Test inputs must satisfy `|ideal| > test_cut`.
    pub test_cut: f64,
    pub shots: u64,
    pub scheme: ExtrapolationKind,
    pub seed: u64,
}

impl Default for HybridConfig {
    fn default() -> Self {
        Self {
            qubits: 6,
            layers: 2,
            model: HamiltonianModel::TFIM_DEFAULT,
            noise: NoiseModel::table1(),
            levels: 5,
            train_samples: 3000,
            train_budget: 500,
            truncation: 2,
            expand_cap: 100_000,
            validation_samples: 500,
            validation_shots: 40_000,
            threshold: 0.1,
            test_samples: 500,
            test_cut: 0.5,
            shots: 40_000,
            scheme: ExtrapolationKind::Linear,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridResult {
    pub selection: Selection,
    pub conventional: Vec<MitigationRun>,
    pub hybrid: Vec<MitigationRun>,
    pub mse_conventional: f64,
    pub mse_hybrid: f64,
    /// Training + validation + hybrid inference.
    pub hybrid_ledger: LedgerSummary,
    pub conventional_ledger: LedgerSummary,
}

impl HybridConfig {
    pub fn device(&self) -> Result<Device> {
        let h = build_hamiltonian(self.model, self.qubits)?;
        Device::new(
            build_hea(self.qubits, self.layers)?,
            h.observable,
            self.noise.clone(),
            Backend::Dense,
        )
    }
}

/// Draws inputs whose ideal value clears `cut` in magnitude.
pub fn filtered_inputs(device: &Device, count: usize, cut: f64, seed: u64) -> Result<Vec<ParamAssignment>> {
    let sampler = Sampler::default();
    let mut r = rng::stream(seed, &[tag::TEST]);
    let mut out = Vec::with_capacity(count);
    let max_draws = 1000 * count.max(1);
    for _ in 0..max_draws {
        if out.len() == count {
            break;
        }
        let x = sampler.sample(device.dimension(), &mut r);
        if device.ideal(&x)?.abs() > cut {
            out.push(x);
        }
    }
    if out.len() < count {
        return Err(SzneError::InvalidInput(format!(
            "only {} of {count} inputs satisfy |ideal| > {cut}",
            out.len()
        )));
    }
    Ok(out)
}

/// Shadow-trained kernel surrogates, threshold selection on a validation set,
/// then hybrid and conventional ZNE on filtered test inputs. Both pipelines
/// share the per-input stream, so measured low-noise entries coincide.
pub fn hybrid_study(cfg: &HybridConfig) -> Result<HybridResult> {
    let device = cfg.device()?;
    let levels = uniform_levels(cfg.levels);
    let scheme = ExtrapolationScheme::new(cfg.scheme, &levels)?;
    let sampler = Sampler::default();
    let ledger = MeasurementLedger::new();

    let datasets = build_training_datasets(
        &device,
        &levels,
        cfg.train_samples,
        cfg.train_budget,
        LabelMode::Shadows,
        &sampler,
        cfg.seed,
        &ledger,
    )?;
    let spec = SurrogateSpec::Kernel {
        truncation: cfg.truncation,
        expand_cap: cfg.expand_cap,
    };
    let surrogates = train_surrogates(&datasets, &spec, cfg.seed)?;

    let mut vr = rng::stream(cfg.seed, &[tag::VALIDATION]);
    let validation: Vec<ParamAssignment> = (0..cfg.validation_samples)
        .map(|_| sampler.sample(device.dimension(), &mut vr))
        .collect();
    let selection = validate_and_select(
        &surrogates,
        &device,
        &validation,
        &levels,
        cfg.validation_shots,
        cfg.threshold,
        cfg.seed,
        &ledger,
    )?;

    let tests = filtered_inputs(&device, cfg.test_samples, cfg.test_cut, cfg.seed)?;
    let conv_ledger = MeasurementLedger::new();
    let pairs = tests
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let ideal = device.ideal(x)?;
            let mut r = rng::stream(cfg.seed, &[tag::INFERENCE, i as u64]);
            let h = run_hybrid(
                &surrogates,
                &selection.selected,
                &device,
                x,
                &scheme,
                cfg.shots,
                &ledger,
                &mut r,
            )?
            .with_ideal(ideal);
            let mut r = rng::stream(cfg.seed, &[tag::INFERENCE, i as u64]);
            let c = run_conventional_zne(&device, x, &scheme, cfg.shots, &conv_ledger, &mut r)?.with_ideal(ideal);
            Ok((h, c))
        })
        .collect::<Result<Vec<_>>>()?;
    let (hybrid, conventional): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    Ok(HybridResult {
        selection,
        mse_conventional: mse(&conventional),
        mse_hybrid: mse(&hybrid),
        conventional,
        hybrid,
        hybrid_ledger: ledger.summary(),
        conventional_ledger: conv_ledger.summary(),
    })
}
