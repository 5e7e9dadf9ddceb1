use serde::{Deserialize, Serialize};

use super::exact::exact_ground_energy;
use super::hamiltonian::{build_hamiltonian, Hamiltonian, HamiltonianModel};
use crate::circuits::{build_hva, ParamAssignment};
use crate::error::{Result, SzneError};
use crate::extrapolation::{uniform_levels, ExtrapolationKind, ExtrapolationScheme};
use crate::mitigation::{
    build_training_datasets, measure_level, run_conventional_zne, run_szne, train_surrogates, LabelMode,
    LedgerSummary, MeasurementLedger, Phase, Sampler, SurrogateSpec,
};
use crate::noise::{Amplification, NoiseComponent, NoiseModel};
use crate::rng::{self, tag, Stream};
use crate::sim::{Backend, Device};
use crate::surrogates::{FeatureDictionary, Surrogate, Truncation, DEFAULT_GAMMA};

/// Energy oracle driving the optimizer.
#[derive(Debug, Clone, Copy)]
pub enum EnergyEstimator<'a> {
    /// Noise-free, shot-free expectation.
    Ideal(&'a Device),
    /// Base noise level; `None` shots means the exact noisy value.
    Unmitigated { device: &'a Device, shots: Option<u64> },
    /// Conventional ZNE; `None` shots extrapolates exact noisy values.
    Zne {
        device: &'a Device,
        scheme: &'a ExtrapolationScheme,
        shots: Option<u64>,
    },
    Szne {
        surrogates: &'a [Surrogate],
        scheme: &'a ExtrapolationScheme,
    },
}

impl EnergyEstimator<'_> {
    pub fn energy(&self, x: &ParamAssignment, ledger: &MeasurementLedger, rng: &mut Stream) -> Result<f64> {
        match *self {
            Self::Ideal(d) => d.ideal(x),
            Self::Unmitigated { device, shots } => match shots {
                Some(m) => measure_level(device, x, 1, m, Phase::Inference, ledger, rng),
                None => device.noisy(x, 1, rng),
            },
            Self::Zne { device, scheme, shots } => match shots {
                Some(m) => Ok(run_conventional_zne(device, x, scheme, m, ledger, rng)?.estimate),
                None => {
                    let z = scheme
                        .levels
                        .iter()
                        .map(|&l| device.noisy(x, l, rng))
                        .collect::<Result<Vec<_>>>()?;
                    scheme.extrapolate(&z)
                }
            },
            Self::Szne { surrogates, scheme } => Ok(run_szne(surrogates, x, scheme, ledger)?.estimate),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VqaSettings {
    pub iterations: usize,
    pub learning_rate: f64,
    pub fd_step: f64,
    /// Starting point; zeros when empty.
    pub initial: Vec<f64>,
}

impl Default for VqaSettings {
    fn default() -> Self {
        Self {
            iterations: 1500,
            learning_rate: 0.1,
            fd_step: 0.01,
            initial: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqaStep {
    pub iteration: usize,
    pub x: Vec<f64>,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqaTrajectory {
    pub steps: Vec<VqaStep>,
    pub final_x: Vec<f64>,
    /// Estimator value at the last iterate.
    pub final_energy: f64,
}

/// Gradient descent on `E(x)/B` with central differences: one baseline and
/// `2d` shifted evaluations per iteration.
pub fn vqa_optimize(
    estimator: &EnergyEstimator<'_>,
    dimension: usize,
    norm_bound: f64,
    settings: &VqaSettings,
    ledger: &MeasurementLedger,
    seed: u64,
) -> Result<VqaTrajectory> {
    let mut x = if settings.initial.is_empty() {
        vec![0.0; dimension]
    } else if settings.initial.len() == dimension {
        settings.initial.clone()
    } else {
        return Err(SzneError::DimensionMismatch {
            expected: dimension,
            got: settings.initial.len(),
        });
    };
    let mut steps = Vec::with_capacity(settings.iterations);
    let h = settings.fd_step;
    for it in 0..settings.iterations {
        let mut r = rng::stream(seed, &[tag::INFERENCE, it as u64]);
        let energy = estimator.energy(&ParamAssignment::new(x.clone()), ledger, &mut r)?;
        if energy < -norm_bound {
            return Err(SzneError::EstimatorInconsistency {
                energy,
                bound: norm_bound,
            });
        }
        steps.push(VqaStep {
            iteration: it,
            x: x.clone(),
            energy,
        });
        let mut grad = vec![0.0; dimension];
        for (k, g) in grad.iter_mut().enumerate() {
            let mut plus = x.clone();
            plus[k] += h;
            let mut minus = x.clone();
            minus[k] -= h;
            let ep = estimator.energy(&ParamAssignment::new(plus), ledger, &mut r)?;
            let em = estimator.energy(&ParamAssignment::new(minus), ledger, &mut r)?;
            *g = (ep - em) / (2.0 * h);
        }
        for (xi, g) in x.iter_mut().zip(&grad) {
            *xi -= settings.learning_rate * g / norm_bound;
        }
    }
    let final_energy = steps.last().map_or(f64::NAN, |s| s.energy);
    let final_x = steps.last().map_or(x, |s| s.x.clone());
    Ok(VqaTrajectory {
        steps,
        final_x,
        final_energy,
    })
}

/// Which estimator drives a VQA study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    Ideal,
    Unmitigated,
    Zne,
    #[default]
    Szne,
}

impl std::str::FromStr for EstimatorKind {
    type Err = SzneError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ideal" => Ok(Self::Ideal),
            "unmitigated" => Ok(Self::Unmitigated),
            "zne" => Ok(Self::Zne),
            "szne" | "s-zne" => Ok(Self::Szne),
            other => Err(SzneError::InvalidInput(format!("unknown estimator {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VqaStudyConfig {
    pub model: HamiltonianModel,
    pub qubits: usize,
    pub layers: usize,
    pub p_g: f64,
    /// Half-width `a` of per-group offsets drawn from `[-aλ, aλ]`; zero disables.
    pub coherent: f64,
    pub backend: Backend,
    pub levels: u32,
    pub scheme: ExtrapolationKind,
    pub estimator: EstimatorKind,
    /// Shots per level; `None` uses exact expectations.
    pub shots: Option<u64>,
    pub train_samples: usize,
    pub train_budget: u64,
    pub truncation: usize,
    pub rule: Truncation,
    pub n_f: usize,
    pub gamma: f64,
    pub optimizer: VqaSettings,
    pub seed: u64,
}

impl Default for VqaStudyConfig {
    fn default() -> Self {
        Self {
            model: HamiltonianModel::TFIM_DEFAULT,
            qubits: 100,
            layers: 1,
            p_g: 0.05,
            coherent: 0.0,
            backend: Backend::Lightcone,
            levels: 5,
            scheme: ExtrapolationKind::Linear,
            estimator: EstimatorKind::Szne,
            shots: Some(1_000_000),
            train_samples: 200,
            train_budget: 1_000_000,
            truncation: 2,
            rule: Truncation::PerGroup,
            n_f: 1000,
            gamma: DEFAULT_GAMMA,
            optimizer: VqaSettings {
                initial: vec![0.3, 0.3],
                ..VqaSettings::default()
            },
            seed: 0,
        }
    }
}

impl VqaStudyConfig {
    pub fn hamiltonian(&self) -> Result<Hamiltonian> {
        build_hamiltonian(self.model, self.qubits)
    }

    pub fn device(&self) -> Result<Device> {
        let mut components = vec![NoiseComponent::GlobalDepolarizing { p_g: self.p_g }];
        if self.coherent > 0.0 {
            components.push(NoiseComponent::Coherent {
                offset_bounds: [-self.coherent, self.coherent],
            });
        }
        Device::new(
            build_hva(self.model.ansatz(), self.qubits, self.layers)?,
            self.hamiltonian()?.observable,
            NoiseModel::new(components, Amplification::RateFormula)?,
            self.backend,
        )
    }

    /// Grouped-monomial dictionary, subsampled to `n_f` features.
    pub fn dictionary(&self, device: &Device) -> Result<FeatureDictionary> {
        let mut r = rng::stream(self.seed, &[tag::FEATURES]);
        Ok(
            FeatureDictionary::grouped_monomial(&device.circuit().group_sizes(), self.truncation, self.rule)?
                .subsample(self.n_f, &mut r),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqaStudyResult {
    pub estimator: EstimatorKind,
    pub trajectory: VqaTrajectory,
    /// Ideal energy at the final iterate.
    pub final_ideal: f64,
    pub exact: Option<f64>,
    pub ledger: LedgerSummary,
}

/// Trains surrogates if needed, then runs the optimizer with the configured estimator.
pub fn run_vqa_study(cfg: &VqaStudyConfig) -> Result<VqaStudyResult> {
    let h = cfg.hamiltonian()?;
    let device = cfg.device()?;
    let levels = uniform_levels(cfg.levels);
    let scheme = ExtrapolationScheme::new(cfg.scheme, &levels)?;
    let ledger = MeasurementLedger::new();
    let surrogates;
    let estimator = match cfg.estimator {
        EstimatorKind::Ideal => EnergyEstimator::Ideal(&device),
        EstimatorKind::Unmitigated => EnergyEstimator::Unmitigated {
            device: &device,
            shots: cfg.shots,
        },
        EstimatorKind::Zne => EnergyEstimator::Zne {
            device: &device,
            scheme: &scheme,
            shots: cfg.shots,
        },
        EstimatorKind::Szne => {
            let datasets = build_training_datasets(
                &device,
                &levels,
                cfg.train_samples,
                cfg.train_budget,
                LabelMode::Shots,
                &Sampler::default(),
                cfg.seed,
                &ledger,
            )?;
            let spec = SurrogateSpec::Ridge {
                dictionary: cfg.dictionary(&device)?,
                gamma: cfg.gamma,
            };
            surrogates = train_surrogates(&datasets, &spec, cfg.seed)?;
            EnergyEstimator::Szne {
                surrogates: &surrogates,
                scheme: &scheme,
            }
        }
    };
    let trajectory = vqa_optimize(
        &estimator,
        device.dimension(),
        h.norm_bound(),
        &cfg.optimizer,
        &ledger,
        cfg.seed,
    )?;
    let final_ideal = device.ideal(&ParamAssignment::new(trajectory.final_x.clone()))?;
    let exact = exact_ground_energy(&h).ok();
    Ok(VqaStudyResult {
        estimator: cfg.estimator,
        trajectory,
        final_ideal,
        exact,
        ledger: ledger.summary(),
    })
}
