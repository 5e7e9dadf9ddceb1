use num_complex::Complex64 as C64;

use super::kernels::{apply_1q, apply_cnot, apply_diag, clifford_matrix, conj2, pauli_phase, rz_phases};
use crate::circuits::{Clifford, Op, ParamCircuit};
use crate::noise::{GateNoise, Superop};
use crate::observable::PauliString;

/// `2^N × 2^N` density operator stored row-major; entry `(r, c)` sits at
/// `r·2^N + c`, so column bits are the low `N` bits of the flat index.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    qubits: usize,
    data: Vec<C64>,
}

impl DensityOperator {
    pub fn zero(qubits: usize) -> Self {
        let mut data = vec![C64::new(0.0, 0.0); 1 << (2 * qubits)];
        data[0] = C64::new(1.0, 0.0);
        Self { qubits, data }
    }

    pub fn from_pure(amps: &[C64]) -> Self {
        let dim = amps.len();
        let qubits = dim.trailing_zeros() as usize;
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[r * dim + c] = amps[r] * amps[c].conj();
            }
        }
        Self { qubits, data }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn entry(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim() + c]
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    /// Largest `|ρ - ρ†|` entry.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.entry(r, c) - self.entry(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Diagonal in the computational basis.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entry(i, i).re).collect()
    }

    pub fn apply_clifford(&mut self, g: &Clifford) {
        let n = self.qubits;
        match (g, clifford_matrix(g)) {
            (Clifford::Cnot { control, target }, _) => {
                apply_cnot(&mut self.data, control + n, target + n);
                apply_cnot(&mut self.data, *control, *target);
            }
            (other, Some(m)) => {
                let q = other.qubits()[0];
                apply_1q(&mut self.data, q + n, &m);
                apply_1q(&mut self.data, q, &conj2(&m));
            }
            _ => unreachable!(),
        }
    }

    pub fn apply_rz(&mut self, qubit: usize, theta: f64) {
        let (a, b) = rz_phases(theta);
        apply_diag(&mut self.data, qubit + self.qubits, a, b);
        apply_diag(&mut self.data, qubit, a.conj(), b.conj());
    }

    /// Applies a 1- or 2-qubit superoperator on `support` (first entry = low local bit).
    pub fn apply_superop(&mut self, s: &Superop, support: &[usize]) {
        let k = s.qubits;
        debug_assert_eq!(support.len(), k);
        let n = self.qubits;
        let ld = 1usize << k;
        let m = ld * ld;
        // flat offset of each local (row, col) pair
        let mut offs = vec![0usize; m];
        for rl in 0..ld {
            for cl in 0..ld {
                let mut off = 0;
                for (b, &q) in support.iter().enumerate() {
                    if rl >> b & 1 == 1 {
                        off |= 1 << (q + n);
                    }
                    if cl >> b & 1 == 1 {
                        off |= 1 << q;
                    }
                }
                offs[rl * ld + cl] = off;
            }
        }
        let mut mask = 0usize;
        for &q in support {
            mask |= (1 << (q + n)) | (1 << q);
        }
        let mat = &s.matrix;
        let mut inb = vec![C64::new(0.0, 0.0); m];
        for base in 0..self.data.len() {
            if base & mask != 0 {
                continue;
            }
            for (slot, &o) in inb.iter_mut().zip(&offs) {
                *slot = self.data[base | o];
            }
            for (row, &o) in offs.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (col, v) in inb.iter().enumerate() {
                    acc += mat[(row, col)] * v;
                }
                self.data[base | o] = acc;
            }
        }
    }

    /// `ρ ↦ (1-p)ρ + p·I/2^N`.
    pub fn depolarize_global(&mut self, p: f64) {
        let d = self.dim();
        let tr = self.trace();
        for v in self.data.iter_mut() {
            *v *= 1.0 - p;
        }
        for i in 0..d {
            self.data[i * d + i] += tr * (p / d as f64);
        }
    }

    /// Runs `ops`, applying the arity-matched gate channel after every gate.
    pub fn run(&mut self, ops: impl IntoIterator<Item = Op>, angles: &[f64], noise: &GateNoise) {
        for op in ops {
            match op {
                Op::Clifford(g) => self.apply_clifford(&g),
                Op::Rz(r) => self.apply_rz(r.qubit, angles[r.slot]),
            }
            if let Some(s) = noise.for_arity(op.arity()) {
                self.apply_superop(s, &op.qubits());
            }
        }
    }

    /// `Tr(ρP) = Σ_i ρ[i][i⊕x]·phase(i)`.
    pub fn pauli_expectation(&self, p: &PauliString) -> f64 {
        let (x, z, ny) = p.masks();
        self.expectation_masks(x, z, ny)
    }

    fn expectation_masks(&self, x: usize, z: usize, ny: u32) -> f64 {
        let d = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            acc += self.data[i * d + (i ^ x)] * pauli_phase(i, z, ny);
        }
        acc.re
    }

    /// `⟨P⟩` for every Pauli `P ∈ {I,X,Y,Z}^N`, indexed by base-4 digits
    /// (digit of qubit `q` at position `q`: 0=I, 1=X, 2=Y, 3=Z).
    pub fn pauli_table(&self) -> Vec<f64> {
        let n = self.qubits;
        (0..1usize << (2 * n))
            .map(|idx| {
                let (mut x, mut z, mut ny) = (0, 0, 0);
                for q in 0..n {
                    match (idx >> (2 * q)) & 3 {
                        1 => x |= 1 << q,
                        2 => {
                            x |= 1 << q;
                            z |= 1 << q;
                            ny += 1;
                        }
                        3 => z |= 1 << q,
                        _ => {}
                    }
                }
                self.expectation_masks(x, z, ny)
            })
            .collect()
    }
}

/// Noisy final state: gate channels after every gate, then global depolarizing.
pub fn simulate_noisy(c: &ParamCircuit, angles: &[f64], gate_noise: &GateNoise, p_global: f64) -> DensityOperator {
    let mut rho = DensityOperator::zero(c.qubits());
    rho.run(c.ops(), angles, gate_noise);
    if p_global > 0.0 {
        rho.depolarize_global(p_global);
    }
    rho
}
