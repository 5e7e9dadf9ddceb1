//! Finite-shot estimators and Pauli classical shadows.
//!
//! Estimators are pure functions of their inputs and a random stream; the
//! pipelines in [`crate::mitigation`] book their cost on the ledger.

use std::collections::HashMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::circuits::ParamAssignment;
use crate::error::{Result, SzneError};
use crate::observable::{Observable, Pauli};
use crate::sim::{DensityOperator, Device};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotEstimate {
    pub value: f64,
    pub shots: u64,
    pub norm_bound: f64,
}

fn binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n, p).expect("valid binomial").sample(rng)
}

/// ℓ1-importance-sampled shot estimator.
///
/// Each shot picks term `i` with probability `|c_i|/B`, draws a ±1 outcome
/// with mean `⟨P_i⟩` and records `B·sign(c_i)·outcome`; the estimate is the
/// shot average. Term and outcome counts are drawn as a multinomial split
/// followed by one binomial per term, which is the same distribution.
pub fn estimate_with_shots<R: Rng + ?Sized>(
    term_values: &[f64],
    o: &Observable,
    shots: u64,
    rng: &mut R,
) -> Result<ShotEstimate> {
    if shots < 1 {
        return Err(SzneError::InvalidShotCount(shots));
    }
    if term_values.len() != o.len() {
        return Err(SzneError::DimensionMismatch {
            expected: o.len(),
            got: term_values.len(),
        });
    }
    let b = o.norm_bound();
    let mut remaining = shots;
    let mut mass_left = 1.0;
    let mut signed: i128 = 0;
    let last = o.len() - 1;
    for (i, (t, &v)) in o.terms().iter().zip(term_values).enumerate() {
        let w = t.coeff.abs() / b;
        let m_i = if i == last {
            remaining
        } else if mass_left <= 0.0 {
            0
        } else {
            binomial(remaining, (w / mass_left).min(1.0), rng)
        };
        remaining -= m_i;
        mass_left -= w;
        if m_i == 0 {
            continue;
        }
        let k = binomial(m_i, (0.5 * (1.0 + v.clamp(-1.0, 1.0))).clamp(0.0, 1.0), rng);
        let sum = 2 * k as i128 - m_i as i128;
        signed += if t.coeff < 0.0 { -sum } else { sum };
    }
    Ok(ShotEstimate {
        value: b * signed as f64 / shots as f64,
        shots,
        norm_bound: b,
    })
}

/// Half-width of the Hoeffding interval at confidence `1-δ` for an average of
/// `shots` samples in `[-B, B]`: `sqrt(2B² ln(2/δ) / M)`.
pub fn hoeffding_radius(norm_bound: f64, shots: u64, delta: f64) -> f64 {
    (2.0 * norm_bound * norm_bound * (2.0 / delta).ln() / shots as f64).sqrt()
}

/// One randomized Pauli measurement: a basis per qubit and the outcome bits
/// (bit `q` set means outcome −1 on qubit `q`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub bases: Vec<Pauli>,
    pub outcomes: u64,
}

impl Snapshot {
    pub fn outcome(&self, qubit: usize) -> i8 {
        if self.outcomes >> qubit & 1 == 1 {
            -1
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowSet {
    pub qubits: usize,
    pub level: u32,
    pub snapshots: Vec<Snapshot>,
}

impl ShadowSet {
    pub fn count(&self) -> usize {
        self.snapshots.len()
    }
}

fn digit(p: Pauli) -> usize {
    match p {
        Pauli::X => 1,
        Pauli::Y => 2,
        Pauli::Z => 3,
    }
}

/// Outcome distribution of measuring every qubit in `bases`, from the Pauli
/// table of the state: `p(s) = 2^{-N} Σ_A (-1)^{|s∧A|} ⟨⊗_{q∈A} P_q⟩`.
fn basis_distribution(table: &[f64], bases: &[Pauli]) -> Vec<f64> {
    let n = bases.len();
    let dim = 1usize << n;
    let mut e = vec![0.0; dim];
    for (a, slot) in e.iter_mut().enumerate() {
        let mut idx = 0;
        for (q, &p) in bases.iter().enumerate() {
            if a >> q & 1 == 1 {
                idx |= digit(p) << (2 * q);
            }
        }
        *slot = table[idx];
    }
    // Walsh–Hadamard transform
    let mut h = 1;
    while h < dim {
        for i in (0..dim).step_by(2 * h) {
            for j in i..i + h {
                let (u, v) = (e[j], e[j + h]);
                e[j] = u + v;
                e[j + h] = u - v;
            }
        }
        h *= 2;
    }
    let norm = 1.0 / dim as f64;
    e.iter().map(|v| (v * norm).max(0.0)).collect()
}

fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let total: f64 = probs.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, p) in probs.iter().enumerate() {
        if u < *p {
            return i;
        }
        u -= p;
    }
    probs.iter().rposition(|p| *p > 0.0).unwrap_or(0)
}

/// `T` Pauli-shadow snapshots of a given state.
pub fn shadows_of_state<R: Rng + ?Sized>(rho: &DensityOperator, level: u32, count: usize, rng: &mut R) -> ShadowSet {
    let n = rho.qubits();
    let table = rho.pauli_table();
    let mut cache: HashMap<Vec<Pauli>, Vec<f64>> = HashMap::new();
    let mut snapshots = Vec::with_capacity(count);
    for _ in 0..count {
        let bases: Vec<Pauli> = (0..n)
            .map(|_| match rng.random_range(0..3) {
                0 => Pauli::X,
                1 => Pauli::Y,
                _ => Pauli::Z,
            })
            .collect();
        let dist = cache
            .entry(bases.clone())
            .or_insert_with(|| basis_distribution(&table, &bases));
        let s = sample_index(dist, rng);
        snapshots.push(Snapshot {
            bases,
            outcomes: s as u64,
        });
    }
    ShadowSet {
        qubits: n,
        level,
        snapshots,
    }
}

/// Snapshots of the device's noisy state at `level`.
pub fn collect_shadows<R: Rng + ?Sized>(
    device: &Device,
    x: &ParamAssignment,
    level: u32,
    count: usize,
    rng: &mut R,
) -> Result<ShadowSet> {
    if count < 1 {
        return Err(SzneError::InvalidShotCount(count as u64));
    }
    let n = device.qubits();
    let limit = crate::sim::SimLimits::default().dense_noisy;
    if n > limit || device.backend() != crate::sim::Backend::Dense {
        return Err(SzneError::ShadowNeedsDense { qubits: n, limit });
    }
    let rho = device.noisy_state(x, level, rng)?;
    Ok(shadows_of_state(&rho, level, count, rng))
}

/// Plain-mean shadow estimate of `Σ c_i ⟨P_i⟩`: a snapshot contributes
/// `Π_{q∈supp P} 3·outcome_q` when its bases match `P` on the support, else 0.
pub fn estimate_from_shadows(s: &ShadowSet, o: &Observable) -> Result<f64> {
    if o.locality() > s.qubits || o.min_qubits() > s.qubits {
        return Err(SzneError::DimensionMismatch {
            expected: s.qubits,
            got: o.min_qubits(),
        });
    }
    if s.snapshots.is_empty() {
        return Err(SzneError::InvalidShotCount(0));
    }
    let mut total = 0.0;
    for t in o.terms() {
        if t.string.is_identity() {
            total += t.coeff;
            continue;
        }
        let scale = 3f64.powi(t.string.weight() as i32);
        let mut sum = 0.0;
        for snap in &s.snapshots {
            let mut sign = 1i8;
            let mut hit = true;
            for &(q, p) in t.string.ops() {
                if snap.bases[q] != p {
                    hit = false;
                    break;
                }
                sign *= snap.outcome(q);
            }
            if hit {
                sum += sign as f64;
            }
        }
        total += t.coeff * scale * sum / s.snapshots.len() as f64;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observable::PauliString;
    use crate::rng::stream;

    #[test]
    fn eigenstate_gives_exact_estimate() {
        let o = Observable::single(PauliString::single(0, Pauli::Z));
        let mut rng = stream(1, &[]);
        let e = estimate_with_shots(&[1.0], &o, 1000, &mut rng).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.shots, 1000);
        assert!(estimate_with_shots(&[1.0], &o, 0, &mut rng).is_err());
    }

    #[test]
    fn estimate_respects_bound() {
        let o = Observable::new([
            (-0.3, PauliString::single(0, Pauli::Z)),
            (0.7, PauliString::single(1, Pauli::X)),
        ])
        .unwrap();
        let mut rng = stream(2, &[]);
        for _ in 0..200 {
            let e = estimate_with_shots(&[0.2, -0.9], &o, 7, &mut rng).unwrap();
            assert!(e.value.abs() <= o.norm_bound() + 1e-12);
        }
    }

    #[test]
    fn zero_state_z_basis_shadows() {
        let rho = DensityOperator::zero(1);
        let mut rng = stream(3, &[]);
        let s = shadows_of_state(&rho, 1, 2000, &mut rng);
        for snap in &s.snapshots {
            if snap.bases[0] == Pauli::Z {
                assert_eq!(snap.outcome(0), 1);
            }
        }
        let z = estimate_from_shadows(&s, &Observable::single(PauliString::single(0, Pauli::Z))).unwrap();
        assert!((z - 1.0).abs() < 0.15, "{z}");
        let id = Observable::single(PauliString::identity());
        assert_eq!(estimate_from_shadows(&s, &(id)).unwrap(), 1.0);
    }
}
