#![allow(dead_code)]

use proptest::prelude::*;
use szne::circuits::{build_circuit, CircuitSpec, GateSpec, ParamCircuit};
use szne::observable::{Observable, Pauli, PauliString};

/// Raw random gate: `(kind, a, b)`; kinds 0..=5 are Cliffords, 6+ are RZ.
pub type RawGate = (u8, usize, usize);

pub fn raw_gates(max_len: usize) -> impl Strategy<Value = Vec<RawGate>> {
    prop::collection::vec((0u8..9, 0usize..64, 0usize..64), 1..max_len)
}

/// Builds a valid circuit on `n` qubits from raw gates, each RZ taking a
/// fresh slot. An H layer up front keeps the state away from a Z eigenstate.
pub fn circuit_from(n: usize, raw: &[RawGate], max_slots: usize) -> ParamCircuit {
    let mut gates: Vec<GateSpec> = (0..n).map(|q| GateSpec::new("H", &[q])).collect();
    let mut slot = 0;
    for &(kind, a, b) in raw {
        let q = a % n;
        match kind {
            0 => gates.push(GateSpec::new("H", &[q])),
            1 => gates.push(GateSpec::new("S", &[q])),
            2 => gates.push(GateSpec::new("X", &[q])),
            3 => gates.push(GateSpec::new("Y", &[q])),
            4 => gates.push(GateSpec::new("Z", &[q])),
            5 if n > 1 => {
                let t = (q + 1 + b % (n - 1)) % n;
                gates.push(GateSpec::new("CNOT", &[q, t]));
            }
            _ if slot < max_slots => {
                gates.push(GateSpec::rz(q, slot));
                slot += 1;
            }
            _ => gates.push(GateSpec::new("H", &[q])),
        }
    }
    if slot == 0 {
        gates.push(GateSpec::rz(0, 0));
    }
    build_circuit(&CircuitSpec {
        qubits: n,
        gates,
        groups: None,
    })
    .expect("generated circuit is valid")
}

fn pauli(i: u8) -> Pauli {
    match i % 3 {
        0 => Pauli::X,
        1 => Pauli::Y,
        _ => Pauli::Z,
    }
}

/// Traceless observable from raw `(coeff, qubit, pauli, second qubit, second pauli, weight2)` terms.
pub fn observable_from(n: usize, raw: &[(f64, usize, u8, usize, u8, bool)]) -> Observable {
    let mut seen = std::collections::HashSet::new();
    let mut terms = Vec::new();
    for &(c, a, p, b, p2, two) in raw {
        let qa = a % n;
        let s = if two && n > 1 {
            let qb = (qa + 1 + b % (n - 1)) % n;
            PauliString::new([(qa, pauli(p)), (qb, pauli(p2))]).unwrap()
        } else {
            PauliString::single(qa, pauli(p))
        };
        if seen.insert(s.clone()) {
            terms.push((c, s));
        }
    }
    Observable::new(terms).expect("nonzero observable")
}

pub fn raw_terms() -> impl Strategy<Value = Vec<(f64, usize, u8, usize, u8, bool)>> {
    prop::collection::vec(
        (0.1f64..2.0, 0usize..64, 0u8..3, 0usize..64, 0u8..3, any::<bool>()),
        1..5,
    )
}

pub fn angles(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-std::f64::consts::PI..std::f64::consts::PI, d)
}
