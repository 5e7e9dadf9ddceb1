//! Exact expectation-value backends.
//!
//! - dense statevector for ideal values,
//! - density matrix with per-gate channels for noisy values at small `N`,
//! - light-cone reduction for shallow circuits at large `N`,
//! - the closed-form GHZ phase signal.
//!
//! [`Device`] bundles a circuit, an observable and a noise model behind one
//! backend and is what the estimators and pipelines query.

mod density;
mod kernels;
mod lightcone;
mod statevector;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use density::{simulate_noisy, DensityOperator};
pub use lightcone::LightconeEvaluator;
pub use statevector::{ideal_term_values, simulate, StateVector};

use crate::circuits::{fold_circuit, FoldMode, ParamAssignment, ParamCircuit};
use crate::error::{Result, SzneError};
use crate::noise::{sample_coherent_offsets, Amplification, GateNoise, NoiseModel};
use crate::observable::Observable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    #[default]
    Dense,
    Lightcone,
    Analytic,
}

impl std::str::FromStr for Backend {
    type Err = SzneError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Backend::Dense),
            "lightcone" => Ok(Backend::Lightcone),
            "analytic" => Ok(Backend::Analytic),
            other => Err(SzneError::BackendUnavailable(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimLimits {
    pub dense_ideal: usize,
    pub dense_noisy: usize,
}

impl Default for SimLimits {
    fn default() -> Self {
        Self {
            dense_ideal: 20,
            dense_noisy: 10,
        }
    }
}

/// `Tr(ρ(x) O)` on the dense statevector backend.
pub fn ideal_expectation(c: &ParamCircuit, x: &ParamAssignment, o: &Observable) -> Result<f64> {
    let angles = c.slot_angles(x)?;
    Ok(o.combine(&ideal_term_values(c, &angles, o, SimLimits::default().dense_ideal)?))
}

/// `Tr(N_λ(ρ(x)) O)` on the density-matrix backend. Coherent components are
/// ignored here; shift `x` with sampled offsets first if they matter.
pub fn noisy_expectation(
    c: &ParamCircuit,
    x: &ParamAssignment,
    o: &Observable,
    noise: &NoiseModel,
    level: u32,
) -> Result<f64> {
    let dev = Device::new(c.clone(), o.clone(), noise.clone(), Backend::Dense)?;
    Ok(o.combine(&dev.noisy_terms_with_offsets(x, level, None)?))
}

/// Sum of light-cone term values.
pub fn lightcone_expectation(c: &ParamCircuit, x: &ParamAssignment, o: &Observable) -> Result<f64> {
    let ev = LightconeEvaluator::new(c, o, SimLimits::default().dense_ideal)?;
    Ok(o.combine(&ev.term_values(&c.slot_angles(x)?)))
}

/// `(1 - p_eff) cos(N x)`.
pub fn ghz_analytic(qubits: usize, x: f64, p_eff: f64) -> f64 {
    (1.0 - p_eff) * (qubits as f64 * x).cos()
}

/// A simulated noisy processor for one circuit/observable pair.
#[derive(Debug)]
pub struct Device {
    circuit: ParamCircuit,
    observable: Observable,
    noise: NoiseModel,
    backend: Backend,
    limits: SimLimits,
    lightcone: Option<LightconeEvaluator>,
    gate_noise: Mutex<HashMap<u32, Arc<GateNoise>>>,
}

impl Clone for Device {
    fn clone(&self) -> Self {
        Self {
            circuit: self.circuit.clone(),
            observable: self.observable.clone(),
            noise: self.noise.clone(),
            backend: self.backend,
            limits: self.limits,
            lightcone: self.lightcone.clone(),
            gate_noise: Mutex::new(HashMap::new()),
        }
    }
}

impl Device {
    pub fn new(circuit: ParamCircuit, observable: Observable, noise: NoiseModel, backend: Backend) -> Result<Self> {
        Self::with_limits(circuit, observable, noise, backend, SimLimits::default())
    }

    pub fn with_limits(
        circuit: ParamCircuit,
        observable: Observable,
        noise: NoiseModel,
        backend: Backend,
        limits: SimLimits,
    ) -> Result<Self> {
        noise.validate()?;
        if observable.min_qubits() > circuit.qubits() {
            return Err(SzneError::QubitOutOfRange {
                index: observable.min_qubits() - 1,
                qubits: circuit.qubits(),
            });
        }
        let mut lightcone = None;
        match backend {
            Backend::Dense => {
                if circuit.qubits() > limits.dense_ideal {
                    return Err(SzneError::DenseLimitExceeded {
                        qubits: circuit.qubits(),
                        limit: limits.dense_ideal,
                    });
                }
            }
            Backend::Lightcone => {
                Self::require_scalar(&noise, &observable)?;
                lightcone = Some(LightconeEvaluator::new(&circuit, &observable, limits.dense_ideal)?);
            }
            Backend::Analytic => {
                Self::require_scalar(&noise, &observable)?;
                let n = circuit.qubits();
                if circuit.group_count() != 1 || observable != Observable::z_parity(n) {
                    return Err(SzneError::BackendUnavailable(
                        "analytic backend covers the GHZ probe with Z-parity readout only".into(),
                    ));
                }
            }
        }
        Ok(Self {
            circuit,
            observable,
            noise,
            backend,
            limits,
            lightcone,
            gate_noise: Mutex::new(HashMap::new()),
        })
    }

    fn require_scalar(noise: &NoiseModel, o: &Observable) -> Result<()> {
        if !noise.is_scalar() || noise.amplification == Amplification::StructuralFold {
            return Err(SzneError::BackendUnavailable(
                "large-N backends support global depolarizing noise with channel-level amplification only"
                    .into(),
            ));
        }
        if !o.is_traceless() {
            return Err(SzneError::NonTracelessObservable);
        }
        Ok(())
    }

    pub fn circuit(&self) -> &ParamCircuit {
        &self.circuit
    }

    pub fn observable(&self) -> &Observable {
        &self.observable
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn dimension(&self) -> usize {
        self.circuit.group_count()
    }

    pub fn qubits(&self) -> usize {
        self.circuit.qubits()
    }

    fn ideal_terms_at(&self, angles: &[f64]) -> Result<Vec<f64>> {
        match self.backend {
            Backend::Dense => ideal_term_values(&self.circuit, angles, &self.observable, self.limits.dense_ideal),
            Backend::Lightcone => Ok(self.lightcone.as_ref().expect("built in new").term_values(angles)),
            Backend::Analytic => Ok(vec![ghz_analytic(self.circuit.qubits(), angles[0], 0.0)]),
        }
    }

    /// Exact per-term values `⟨P_i⟩` of the noiseless circuit.
    pub fn ideal_terms(&self, x: &ParamAssignment) -> Result<Vec<f64>> {
        let angles = self.circuit.slot_angles(x)?;
        self.ideal_terms_at(&angles)
    }

    pub fn ideal(&self, x: &ParamAssignment) -> Result<f64> {
        Ok(self.observable.combine(&self.ideal_terms(x)?))
    }

    fn cached_gate_noise(&self, level: u32) -> Result<Arc<GateNoise>> {
        let mut cache = self.gate_noise.lock().expect("gate noise cache poisoned");
        if let Some(g) = cache.get(&level) {
            return Ok(g.clone());
        }
        let g = Arc::new(self.noise.gate_superops(level)?);
        cache.insert(level, g.clone());
        Ok(g)
    }

    /// Draws coherent offsets for `level` if the model has a coherent component.
    pub fn sample_offsets<R: Rng + ?Sized>(&self, level: u32, rng: &mut R) -> Option<Vec<f64>> {
        self.noise
            .coherent_bounds()
            .map(|b| sample_coherent_offsets(b, self.dimension(), level, rng))
    }

    /// Per-term noisy values at `level`, with coherent offsets drawn from `rng`.
    pub fn noisy_terms<R: Rng + ?Sized>(&self, x: &ParamAssignment, level: u32, rng: &mut R) -> Result<Vec<f64>> {
        let offsets = self.sample_offsets(level, rng);
        self.noisy_terms_with_offsets(x, level, offsets.as_deref())
    }

    pub fn noisy<R: Rng + ?Sized>(&self, x: &ParamAssignment, level: u32, rng: &mut R) -> Result<f64> {
        Ok(self.observable.combine(&self.noisy_terms(x, level, rng)?))
    }

    /// Per-term noisy values at `level` with explicit per-group offsets.
    pub fn noisy_terms_with_offsets(
        &self,
        x: &ParamAssignment,
        level: u32,
        offsets: Option<&[f64]>,
    ) -> Result<Vec<f64>> {
        if level < 1 {
            return Err(SzneError::InvalidFoldFactor(level));
        }
        let shifted;
        let x = match offsets {
            Some(o) => {
                self.circuit.check_assignment(x)?;
                shifted = x.shifted(o);
                &shifted
            }
            None => x,
        };
        let p = self.noise.effective_global_rate(level);
        let scalar = self.noise.is_scalar() && self.noise.amplification != Amplification::StructuralFold;
        if scalar {
            let ideal = self.ideal_terms(x)?;
            return Ok(ideal
                .into_iter()
                .zip(self.observable.terms())
                .map(|(v, t)| if t.string.is_identity() { v } else { (1.0 - p) * v })
                .collect());
        }
        let rho = self.noisy_state_with_offsets(x, level)?;
        Ok(self
            .observable
            .terms()
            .iter()
            .map(|t| rho.pauli_expectation(&t.string))
            .collect())
    }

    fn noisy_state_with_offsets(&self, x: &ParamAssignment, level: u32) -> Result<DensityOperator> {
        if self.backend != Backend::Dense {
            return Err(SzneError::BackendUnavailable(
                "gate-level noise needs the dense backend".into(),
            ));
        }
        if self.circuit.qubits() > self.limits.dense_noisy {
            return Err(SzneError::DenseLimitExceeded {
                qubits: self.circuit.qubits(),
                limit: self.limits.dense_noisy,
            });
        }
        let p = self.noise.effective_global_rate(level);
        let gate_noise = self.cached_gate_noise(level)?;
        if self.noise.amplification == Amplification::StructuralFold && level > 1 {
            let folded = fold_circuit(&self.circuit, level, FoldMode::Correlated)?;
            let angles = folded.slot_angles(x)?;
            return Ok(simulate_noisy(&folded, &angles, &gate_noise, p));
        }
        let angles = self.circuit.slot_angles(x)?;
        Ok(simulate_noisy(&self.circuit, &angles, &gate_noise, p))
    }

    /// The noisy output state (dense backend only), coherent offsets drawn from `rng`.
    pub fn noisy_state<R: Rng + ?Sized>(&self, x: &ParamAssignment, level: u32, rng: &mut R) -> Result<DensityOperator> {
        let offsets = self.sample_offsets(level, rng);
        match offsets {
            Some(o) => {
                self.circuit.check_assignment(x)?;
                self.noisy_state_with_offsets(&x.shifted(&o), level)
            }
            None => self.noisy_state_with_offsets(x, level),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{build_ghz_probe, build_hva, CircuitSpec, GateSpec, HvaModel};
    use crate::observable::{Pauli, PauliString};
    use std::f64::consts::PI;

    fn tfim2() -> Observable {
        Observable::new([
            (-0.1, PauliString::pair(0, 1, Pauli::Z)),
            (-0.5, PauliString::single(0, Pauli::X)),
            (-0.5, PauliString::single(1, Pauli::X)),
        ])
        .unwrap()
    }

    #[test]
    fn identity_circuit_reads_z() {
        let c = crate::circuits::build_circuit(&CircuitSpec {
            qubits: 1,
            gates: vec![GateSpec::rz(0, 0)],
            groups: None,
        })
        .unwrap();
        let o = Observable::single(PauliString::single(0, Pauli::Z));
        let v = ideal_expectation(&c, &ParamAssignment::new(vec![0.7]), &o).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ghz_two_qubits_quarter_pi() {
        let c = build_ghz_probe(2).unwrap();
        let v = ideal_expectation(&c, &ParamAssignment::new(vec![PI / 4.0]), &Observable::z_parity(2)).unwrap();
        assert!(v.abs() < 1e-12);
        let c1 = build_ghz_probe(1).unwrap();
        for x in [0.0, 0.3, 2.0] {
            let v = ideal_expectation(&c1, &ParamAssignment::new(vec![x]), &Observable::z_parity(1)).unwrap();
            assert!((v - x.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn hva_at_zero_is_plus_state() {
        let c = build_hva(HvaModel::Tfim, 2, 1).unwrap();
        let v = ideal_expectation(&c, &ParamAssignment::zeros(2), &tfim2()).unwrap();
        assert!((v + 1.0).abs() < 1e-12);
    }

    #[test]
    fn dense_limit_enforced() {
        let c = build_ghz_probe(21).unwrap();
        let e = ideal_expectation(&c, &ParamAssignment::zeros(1), &Observable::z_parity(21)).unwrap_err();
        assert!(e.to_string().contains("use light-cone or analytic backend"));
    }

    #[test]
    fn global_depolarizing_scaling_and_analytic_agreement() {
        let c = build_ghz_probe(3).unwrap();
        let o = Observable::z_parity(3);
        let noise = NoiseModel::global_depolarizing(0.1).unwrap();
        let x = ParamAssignment::new(vec![0.2]);
        let dense = noisy_expectation(&c, &x, &o, &noise, 1).unwrap();
        assert!((dense - ghz_analytic(3, 0.2, 0.1)).abs() < 1e-10);
        // the density-matrix path gives the same number
        let dev = Device::new(c.clone(), o.clone(), noise.clone(), Backend::Dense).unwrap();
        let rho = simulate_noisy(&c, &c.slot_angles(&x).unwrap(), &GateNoise::default(), 0.1);
        assert!((rho.pauli_expectation(&o.terms()[0].string) - dense).abs() < 1e-10);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        let an = Device::new(c, o, noise, Backend::Analytic).unwrap();
        let mut rng = crate::rng::stream(1, &[]);
        assert!((an.noisy(&x, 1, &mut rng).unwrap() - dev.noisy(&x, 1, &mut rng).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn analytic_path_rejects_identity_terms() {
        let c = build_ghz_probe(2).unwrap();
        let o = Observable::new([(1.0, PauliString::identity()), (1.0, PauliString::pair(0, 1, Pauli::Z))]).unwrap();
        let noise = NoiseModel::global_depolarizing(0.1).unwrap();
        assert_eq!(
            Device::new(c, o, noise, Backend::Lightcone).unwrap_err(),
            SzneError::NonTracelessObservable
        );
    }

    #[test]
    fn lightcone_at_zero_on_hundred_qubits() {
        let c = build_hva(HvaModel::Tfim, 100, 1).unwrap();
        let mut terms = Vec::new();
        for i in 0..99 {
            terms.push((-0.1, PauliString::pair(i, i + 1, Pauli::Z)));
        }
        for i in 0..100 {
            terms.push((-0.5, PauliString::single(i, Pauli::X)));
        }
        let o = Observable::new(terms).unwrap();
        let ev = LightconeEvaluator::new(&c, &o, 20).unwrap();
        assert!(ev.max_width() <= 6, "width {}", ev.max_width());
        let v = lightcone_expectation(&c, &ParamAssignment::zeros(2), &o).unwrap();
        assert!((v + 50.0).abs() < 1e-10);
    }
}
