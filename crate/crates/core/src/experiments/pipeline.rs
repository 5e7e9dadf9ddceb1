use serde::{Deserialize, Serialize};

use super::hamiltonian::{build_hamiltonian, HamiltonianModel};
use crate::circuits::{CircuitTask, HvaModel};
use crate::error::Result;
use crate::extrapolation::{uniform_levels, ExtrapolationKind, ExtrapolationScheme};
use crate::mitigation::{LabelMode, Sampler, SurrogateSpec};
use crate::noise::NoiseModel;
use crate::observable::{Observable, PauliString};
use crate::rng::{self, tag};
use crate::sim::{Backend, Device};
use crate::surrogates::{frequency_set, DictionaryMode, FeatureDictionary, Truncation, DEFAULT_GAMMA};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObservableSpec {
    Hamiltonian {
        #[serde(flatten)]
        model: HamiltonianModel,
    },
    ZParity,
    /// Explicit `(coefficient, "X0 Z1")` pairs.
    Terms {
        terms: Vec<(f64, String)>,
    },
}

impl ObservableSpec {
    pub fn build(&self, qubits: usize) -> Result<Observable> {
        match self {
            Self::Hamiltonian { model } => Ok(build_hamiltonian(*model, qubits)?.observable),
            Self::ZParity => Ok(Observable::z_parity(qubits)),
            Self::Terms { terms } => Observable::new(
                terms
                    .iter()
                    .map(|(c, s)| Ok((*c, PauliString::parse(s)?)))
                    .collect::<Result<Vec<_>>>()?,
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Learner {
    #[default]
    Ridge,
    Kernel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SurrogateSettings {
    pub learner: Learner,
    pub dictionary: DictionaryMode,
    pub truncation: usize,
    pub rule: Truncation,
    pub n_f: usize,
    pub gamma: f64,
    /// Independent-mode cap on the enumerated frequency set.
    pub enumerate_cap: usize,
    pub expand_cap: usize,
}

impl Default for SurrogateSettings {
    fn default() -> Self {
        Self {
            learner: Learner::Ridge,
            dictionary: DictionaryMode::GroupedMonomial,
            truncation: 2,
            rule: Truncation::PerGroup,
            n_f: 1000,
            gamma: DEFAULT_GAMMA,
            enumerate_cap: 20_000,
            expand_cap: 100_000,
        }
    }
}

/// Settings for the stand-alone `collect`/`train`/`zne`/`szne`/`hybrid` steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub circuit: CircuitTask,
    pub observable: ObservableSpec,
    pub noise: NoiseModel,
    pub backend: Backend,
    pub levels: u32,
    pub scheme: ExtrapolationKind,
    pub shots: u64,
    pub train_samples: usize,
    pub train_budget: u64,
    pub surrogate: SurrogateSettings,
    pub validation_samples: usize,
    pub validation_shots: u64,
    pub threshold: f64,
    /// Number of random inference inputs.
    pub inputs: usize,
    pub radius: f64,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            circuit: CircuitTask::Hva {
                model: HvaModel::Tfim,
                qubits: 4,
                layers: 1,
            },
            observable: ObservableSpec::Hamiltonian {
                model: HamiltonianModel::TFIM_DEFAULT,
            },
            noise: NoiseModel::global_depolarizing(0.05).expect("valid rate"),
            backend: Backend::Dense,
            levels: 5,
            scheme: ExtrapolationKind::Linear,
            shots: 10_000,
            train_samples: 200,
            train_budget: 10_000,
            surrogate: SurrogateSettings::default(),
            validation_samples: 100,
            validation_shots: 40_000,
            threshold: 0.1,
            inputs: 100,
            radius: std::f64::consts::PI,
            seed: 0,
        }
    }
}

impl PipelineConfig {
    pub fn device(&self) -> Result<Device> {
        let c = self.circuit.build()?;
        let o = self.observable.build(c.qubits())?;
        Device::new(c, o, self.noise.clone(), self.backend)
    }

    pub fn levels(&self) -> Vec<u32> {
        uniform_levels(self.levels)
    }

    pub fn scheme(&self) -> Result<ExtrapolationScheme> {
        ExtrapolationScheme::new(self.scheme, &self.levels())
    }

    pub fn sampler(&self) -> Sampler {
        Sampler { radius: self.radius }
    }

    pub fn label_mode(&self) -> LabelMode {
        match self.surrogate.learner {
            Learner::Ridge => LabelMode::Shots,
            Learner::Kernel => LabelMode::Shadows,
        }
    }

    pub fn surrogate_spec(&self, device: &Device) -> Result<SurrogateSpec> {
        let s = &self.surrogate;
        if s.learner == Learner::Kernel {
            return Ok(SurrogateSpec::Kernel {
                truncation: s.truncation,
                expand_cap: s.expand_cap,
            });
        }
        let mut r = rng::stream(self.seed, &[tag::FEATURES]);
        let groups = device.circuit().group_sizes();
        let dictionary = match s.dictionary {
            DictionaryMode::Independent => FeatureDictionary::independent(&frequency_set(
                device.dimension(),
                s.truncation,
                s.enumerate_cap,
                s.n_f,
                &mut r,
            )?),
            DictionaryMode::GroupedMonomial => {
                FeatureDictionary::grouped_monomial(&groups, s.truncation, s.rule)?.subsample(s.n_f, &mut r)
            }
            DictionaryMode::GroupedHarmonic => {
                FeatureDictionary::grouped_harmonic(&groups, s.truncation)?.subsample(s.n_f, &mut r)
            }
        };
        Ok(SurrogateSpec::Ridge {
            dictionary,
            gamma: s.gamma,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_pipeline_builds() {
        let p = PipelineConfig::default();
        let d = p.device().unwrap();
        assert_eq!(d.dimension(), 2);
        assert!(matches!(p.surrogate_spec(&d).unwrap(), SurrogateSpec::Ridge { .. }));
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<PipelineConfig>(&json).unwrap(), p);
    }
}
