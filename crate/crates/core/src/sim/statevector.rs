use num_complex::Complex64 as C64;

use super::kernels::{self, apply_1q, apply_cnot, apply_diag, clifford_matrix, rz_phases};
use crate::circuits::{Clifford, Op, ParamCircuit};
use crate::error::{Result, SzneError};
use crate::observable::{Observable, PauliString};

/// Pure state on `n` qubits, qubit `q` is bit `q` of the amplitude index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn zero(qubits: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << qubits];
        amps[0] = C64::new(1.0, 0.0);
        Self { qubits, amps }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_clifford(&mut self, g: &Clifford) {
        match (g, clifford_matrix(g)) {
            (Clifford::Cnot { control, target }, _) => apply_cnot(&mut self.amps, *control, *target),
            (other, Some(m)) => apply_1q(&mut self.amps, other.qubits()[0], &m),
            _ => unreachable!(),
        }
    }

    pub fn apply_rz(&mut self, qubit: usize, theta: f64) {
        let (a, b) = rz_phases(theta);
        apply_diag(&mut self.amps, qubit, a, b);
    }

    /// Runs `ops` with per-slot angles.
    pub fn run(&mut self, ops: impl IntoIterator<Item = Op>, angles: &[f64]) {
        for op in ops {
            match op {
                Op::Clifford(g) => self.apply_clifford(&g),
                Op::Rz(r) => self.apply_rz(r.qubit, angles[r.slot]),
            }
        }
    }

    pub fn pauli_expectation(&self, p: &PauliString) -> f64 {
        kernels::pauli_expectation_pure(&self.amps, p)
    }
}

/// Final state of `c` at per-slot `angles`.
pub fn simulate(c: &ParamCircuit, angles: &[f64]) -> StateVector {
    let mut psi = StateVector::zero(c.qubits());
    psi.run(c.ops(), angles);
    psi
}

pub(crate) fn check_dense(c: &ParamCircuit, o: &Observable, limit: usize) -> Result<()> {
    if c.qubits() > limit {
        return Err(SzneError::DenseLimitExceeded {
            qubits: c.qubits(),
            limit,
        });
    }
    if o.min_qubits() > c.qubits() {
        return Err(SzneError::QubitOutOfRange {
            index: o.min_qubits() - 1,
            qubits: c.qubits(),
        });
    }
    Ok(())
}

/// Exact `⟨P_i⟩` for every term of `o`.
pub fn ideal_term_values(c: &ParamCircuit, angles: &[f64], o: &Observable, limit: usize) -> Result<Vec<f64>> {
    check_dense(c, o, limit)?;
    let psi = simulate(c, angles);
    Ok(o.terms().iter().map(|t| psi.pauli_expectation(&t.string)).collect())
}
