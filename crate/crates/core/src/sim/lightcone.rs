use super::statevector::StateVector;
use crate::circuits::{Clifford, Op, ParamCircuit, Rotation};
use crate::error::{Result, SzneError};
use crate::observable::{Observable, PauliString};

/// Reduced circuit for one observable term: the gates inside its backward
/// light cone, relabelled onto `width` qubits.
#[derive(Debug, Clone)]
struct TermPlan {
    width: usize,
    ops: Vec<Op>,
    string: PauliString,
}

/// Evaluates `⟨P_i⟩` for every term by simulating only its light cone.
///
/// Plans depend on the circuit and observable only, so one evaluator serves
/// any number of parameter assignments.
#[derive(Debug, Clone)]
pub struct LightconeEvaluator {
    plans: Vec<TermPlan>,
}

fn remap(op: Op, map: &[usize]) -> Op {
    match op {
        Op::Rz(r) => Op::Rz(Rotation {
            qubit: map[r.qubit],
            slot: r.slot,
        }),
        Op::Clifford(g) => Op::Clifford(match g {
            Clifford::H(q) => Clifford::H(map[q]),
            Clifford::S(q) => Clifford::S(map[q]),
            Clifford::X(q) => Clifford::X(map[q]),
            Clifford::Y(q) => Clifford::Y(map[q]),
            Clifford::Z(q) => Clifford::Z(map[q]),
            Clifford::Cnot { control, target } => Clifford::Cnot {
                control: map[control],
                target: map[target],
            },
        }),
    }
}

impl LightconeEvaluator {
    pub fn new(c: &ParamCircuit, o: &Observable, limit: usize) -> Result<Self> {
        if o.min_qubits() > c.qubits() {
            return Err(SzneError::QubitOutOfRange {
                index: o.min_qubits() - 1,
                qubits: c.qubits(),
            });
        }
        let ops: Vec<Op> = c.ops().collect();
        let mut plans = Vec::with_capacity(o.len());
        for term in o.terms() {
            let mut in_cone = vec![false; c.qubits()];
            for q in term.string.support() {
                in_cone[q] = true;
            }
            let mut keep = Vec::new();
            for (i, op) in ops.iter().enumerate().rev() {
                let qs = op.qubits();
                if qs.iter().any(|&q| in_cone[q]) {
                    for &q in &qs {
                        in_cone[q] = true;
                    }
                    keep.push(i);
                }
            }
            keep.reverse();
            let mut map = vec![usize::MAX; c.qubits()];
            let mut width = 0;
            for (q, inside) in in_cone.iter().enumerate() {
                if *inside {
                    map[q] = width;
                    width += 1;
                }
            }
            if width > limit {
                return Err(SzneError::LightConeTooWide { width, limit });
            }
            plans.push(TermPlan {
                width,
                ops: keep.into_iter().map(|i| remap(ops[i], &map)).collect(),
                string: term.string.relabel(|q| map[q]),
            });
        }
        Ok(Self { plans })
    }

    /// Widest light cone over all terms.
    pub fn max_width(&self) -> usize {
        self.plans.iter().map(|p| p.width).max().unwrap_or(0)
    }

    /// Per-term ideal expectations at per-slot `angles`.
    pub fn term_values(&self, angles: &[f64]) -> Vec<f64> {
        self.plans
            .iter()
            .map(|p| {
                if p.string.is_identity() {
                    return 1.0;
                }
                let mut psi = StateVector::zero(p.width);
                psi.run(p.ops.iter().copied(), angles);
                psi.pauli_expectation(&p.string)
            })
            .collect()
    }
}
