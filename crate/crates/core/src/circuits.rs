//! Clifford + RZ parametrized circuits.
//!
//! A [`ParamCircuit`] is a sequence of layers, each a Clifford block followed
//! by a set of `RZ` rotations. Every rotation owns a parameter *slot*; slots
//! are mapped onto parameter *groups*, and all slots of a group share one
//! angle. A [`ParamAssignment`] gives one angle per group.
//!
//! Angles are RZ angles, `RZ(θ) = exp(-iθZ/2)`. A task exponential such as
//! `exp(-i a Σ Z_i Z_{i+1})` is therefore parametrized by `θ = 2a`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SzneError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Clifford {
    H(usize),
    S(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cnot { control: usize, target: usize },
}

impl Clifford {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Clifford::H(q) | Clifford::S(q) | Clifford::X(q) | Clifford::Y(q) | Clifford::Z(q) => {
                vec![q]
            }
            Clifford::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Clifford::Cnot { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rotation {
    pub qubit: usize,
    pub slot: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layer {
    pub clifford: Vec<Clifford>,
    pub rotations: Vec<Rotation>,
}

/// One gate of the flattened circuit, in time order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Clifford(Clifford),
    Rz(Rotation),
}

impl Op {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Op::Clifford(c) => c.qubits(),
            Op::Rz(r) => vec![r.qubit],
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Op::Clifford(c) => c.arity(),
            Op::Rz(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FoldMode {
    /// Every repetition gets fresh slots *and* fresh groups.
    Independent,
    /// Repetitions get fresh slots that reuse the original groups.
    Correlated,
}

/// An immutable, validated Clifford + RZ circuit acting on `|0…0⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamCircuit {
    qubits: usize,
    layers: Vec<Layer>,
    group_map: Vec<usize>,
    group_count: usize,
    fold_factor: u32,
}

/// One angle per parameter group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamAssignment {
    pub values: Vec<f64>,
}

impl ParamAssignment {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn zeros(groups: usize) -> Self {
        Self {
            values: vec![0.0; groups],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Elementwise sum with per-group offsets (coherent miscalibration).
    pub fn shifted(&self, offsets: &[f64]) -> Self {
        debug_assert_eq!(offsets.len(), self.values.len());
        Self {
            values: self
                .values
                .iter()
                .zip(offsets)
                .map(|(v, o)| v + o)
                .collect(),
        }
    }
}

impl From<Vec<f64>> for ParamAssignment {
    fn from(values: Vec<f64>) -> Self {
        Self { values }
    }
}

impl ParamCircuit {
    fn from_parts(qubits: usize, layers: Vec<Layer>, group_map: Vec<usize>, fold_factor: u32) -> Result<Self> {
        if qubits == 0 {
            return Err(SzneError::InvalidCircuit("circuit needs at least one qubit".into()));
        }
        let mut seen = HashSet::new();
        for layer in &layers {
            for g in &layer.clifford {
                let qs = g.qubits();
                for &q in &qs {
                    if q >= qubits {
                        return Err(SzneError::QubitOutOfRange { index: q, qubits });
                    }
                }
                if qs.len() == 2 && qs[0] == qs[1] {
                    return Err(SzneError::InvalidCircuit("CNOT control equals target".into()));
                }
            }
            for r in &layer.rotations {
                if r.qubit >= qubits {
                    return Err(SzneError::QubitOutOfRange { index: r.qubit, qubits });
                }
                if !seen.insert(r.slot) {
                    return Err(SzneError::SlotCollision(r.slot));
                }
            }
        }
        let slot_count = seen.len();
        if let Some(missing) = (0..slot_count).find(|s| !seen.contains(s)) {
            return Err(SzneError::InvalidCircuit(format!(
                "slot ids must be contiguous from 0; slot {missing} is missing"
            )));
        }
        if group_map.len() != slot_count {
            return Err(SzneError::InvalidCircuit(format!(
                "group map covers {} slots, circuit has {slot_count}",
                group_map.len()
            )));
        }
        let group_count = group_map.iter().max().map_or(0, |g| g + 1);
        let used: HashSet<_> = group_map.iter().copied().collect();
        if used.len() != group_count {
            return Err(SzneError::InvalidCircuit("group ids must be contiguous from 0".into()));
        }
        Ok(Self {
            qubits,
            layers,
            group_map,
            group_count,
            fold_factor,
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn slot_count(&self) -> usize {
        self.group_map.len()
    }

    pub fn group_count(&self) -> usize {
        self.group_count
    }

    pub fn group_map(&self) -> &[usize] {
        &self.group_map
    }

    pub fn fold_factor(&self) -> u32 {
        self.fold_factor
    }

    /// Number of slots in each group (`d_s`).
    pub fn group_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.group_count];
        for &g in &self.group_map {
            sizes[g] += 1;
        }
        sizes
    }

    /// Flattened gates in time order.
    pub fn ops(&self) -> impl Iterator<Item = Op> + '_ {
        self.layers.iter().flat_map(|l| {
            l.clifford
                .iter()
                .map(|&c| Op::Clifford(c))
                .chain(l.rotations.iter().map(|&r| Op::Rz(r)))
        })
    }

    pub fn op_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.clifford.len() + l.rotations.len())
            .sum()
    }

    pub fn check_assignment(&self, x: &ParamAssignment) -> Result<()> {
        if x.len() != self.group_count {
            return Err(SzneError::DimensionMismatch {
                expected: self.group_count,
                got: x.len(),
            });
        }
        if let Some(v) = x.values.iter().find(|v| !v.is_finite()) {
            return Err(SzneError::InvalidInput(format!("non-finite parameter {v}")));
        }
        Ok(())
    }

    /// Per-slot RZ angles for an assignment.
    pub fn slot_angles(&self, x: &ParamAssignment) -> Result<Vec<f64>> {
        self.check_assignment(x)?;
        Ok(self.group_map.iter().map(|&g| x.values[g]).collect())
    }

    /// The same circuit with every slot in its own group.
    pub fn ungrouped(&self) -> Self {
        Self {
            group_map: (0..self.slot_count()).collect(),
            group_count: self.slot_count(),
            ..self.clone()
        }
    }

    /// Expands a group assignment into the slot-level assignment of [`Self::ungrouped`].
    pub fn expand_to_slots(&self, x: &ParamAssignment) -> Result<ParamAssignment> {
        Ok(ParamAssignment::new(self.slot_angles(x)?))
    }
}

/// Accumulates gates into layers, opening a new layer whenever a Clifford gate
/// follows a rotation.
#[derive(Debug)]
pub struct CircuitBuilder {
    qubits: usize,
    layers: Vec<Layer>,
    current: Layer,
    group_map: Vec<usize>,
}

impl CircuitBuilder {
    pub fn new(qubits: usize) -> Self {
        Self {
            qubits,
            layers: Vec::new(),
            current: Layer::default(),
            group_map: Vec::new(),
        }
    }

    pub fn clifford(&mut self, gate: Clifford) -> &mut Self {
        if !self.current.rotations.is_empty() {
            self.layers.push(std::mem::take(&mut self.current));
        }
        self.current.clifford.push(gate);
        self
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.clifford(Clifford::H(q))
    }

    pub fn s(&mut self, q: usize) -> &mut Self {
        self.clifford(Clifford::S(q))
    }

    pub fn z(&mut self, q: usize) -> &mut Self {
        self.clifford(Clifford::Z(q))
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> &mut Self {
        self.clifford(Clifford::Cnot { control, target })
    }

    /// Appends `RZ` on a fresh slot belonging to `group`.
    pub fn rz(&mut self, qubit: usize, group: usize) -> &mut Self {
        let slot = self.group_map.len();
        self.group_map.push(group);
        self.current.rotations.push(Rotation { qubit, slot });
        self
    }

    /// `RX(θ) = H RZ(θ) H`.
    pub fn rx(&mut self, qubit: usize, group: usize) -> &mut Self {
        self.h(qubit).rz(qubit, group).h(qubit)
    }

    /// `RY(θ) = S H RZ(θ) H S†`, with `S† = Z S`.
    pub fn ry(&mut self, qubit: usize, group: usize) -> &mut Self {
        self.s(qubit).z(qubit).h(qubit).rz(qubit, group).h(qubit).s(qubit)
    }

    /// `exp(-iθ/2 Z_a Z_b)` as CNOT · RZ(θ) · CNOT.
    pub fn zz(&mut self, a: usize, b: usize, group: usize) -> &mut Self {
        self.cnot(a, b).rz(b, group).cnot(a, b)
    }

    /// `exp(-iθ/2 X_a X_b)`.
    pub fn xx(&mut self, a: usize, b: usize, group: usize) -> &mut Self {
        self.h(a).h(b).zz(a, b, group).h(a).h(b)
    }

    /// `exp(-iθ/2 Y_a Y_b)`.
    pub fn yy(&mut self, a: usize, b: usize, group: usize) -> &mut Self {
        for q in [a, b] {
            self.s(q).z(q).h(q);
        }
        self.zz(a, b, group);
        for q in [a, b] {
            self.h(q).s(q);
        }
        self
    }

    pub fn build(mut self) -> Result<ParamCircuit> {
        if !self.current.clifford.is_empty() || !self.current.rotations.is_empty() {
            self.layers.push(self.current);
        }
        ParamCircuit::from_parts(self.qubits, self.layers, self.group_map, 1)
    }
}

/// One entry of a declarative gate list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateSpec {
    pub name: String,
    pub qubits: Vec<usize>,
    #[serde(default)]
    pub slot: Option<usize>,
}

impl GateSpec {
    pub fn new(name: &str, qubits: &[usize]) -> Self {
        Self {
            name: name.to_string(),
            qubits: qubits.to_vec(),
            slot: None,
        }
    }

    pub fn rz(qubit: usize, slot: usize) -> Self {
        Self {
            name: "RZ".into(),
            qubits: vec![qubit],
            slot: Some(slot),
        }
    }
}

/// A gate-list circuit description. `groups[s]` is the group of slot `s`;
/// when absent every slot is its own group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub qubits: usize,
    pub gates: Vec<GateSpec>,
    #[serde(default)]
    pub groups: Option<Vec<usize>>,
}

/// Validates a gate list into a circuit with fold factor 1.
pub fn build_circuit(spec: &CircuitSpec) -> Result<ParamCircuit> {
    let mut layers: Vec<Layer> = Vec::new();
    let mut current = Layer::default();
    let mut slots = HashSet::new();
    for g in &spec.gates {
        let arity = |n: usize| -> Result<()> {
            if g.qubits.len() != n {
                return Err(SzneError::InvalidCircuit(format!(
                    "{} expects {n} qubit(s), got {}",
                    g.name,
                    g.qubits.len()
                )));
            }
            Ok(())
        };
        let name = g.name.to_ascii_uppercase();
        let clifford = match name.as_str() {
            "H" | "S" | "X" | "Y" | "Z" => {
                arity(1)?;
                let q = g.qubits[0];
                Some(match name.as_str() {
                    "H" => Clifford::H(q),
                    "S" => Clifford::S(q),
                    "X" => Clifford::X(q),
                    "Y" => Clifford::Y(q),
                    _ => Clifford::Z(q),
                })
            }
            "CNOT" | "CX" => {
                arity(2)?;
                Some(Clifford::Cnot {
                    control: g.qubits[0],
                    target: g.qubits[1],
                })
            }
            "RZ" => {
                arity(1)?;
                None
            }
            _ => return Err(SzneError::UnsupportedGate(g.name.clone())),
        };
        match clifford {
            Some(c) => {
                if !current.rotations.is_empty() {
                    layers.push(std::mem::take(&mut current));
                }
                current.clifford.push(c);
            }
            None => {
                let slot = g.slot.ok_or_else(|| {
                    SzneError::InvalidCircuit("RZ gate must reference a slot".into())
                })?;
                if !slots.insert(slot) {
                    return Err(SzneError::SlotCollision(slot));
                }
                current.rotations.push(Rotation {
                    qubit: g.qubits[0],
                    slot,
                });
            }
        }
    }
    if !current.clifford.is_empty() || !current.rotations.is_empty() {
        layers.push(current);
    }
    let group_map = spec
        .groups
        .clone()
        .unwrap_or_else(|| (0..slots.len()).collect());
    ParamCircuit::from_parts(spec.qubits, layers, group_map, 1)
}

/// Left ends of the open-chain bonds, even bonds first. Bond exponentials
/// within a block commute, so this order keeps light cones narrow without
/// changing the unitary.
fn brickwork(qubits: usize) -> impl Iterator<Item = usize> {
    (0..qubits - 1).step_by(2).chain((1..qubits - 1).step_by(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HvaModel {
    Tfim,
    Heisenberg,
}

/// Trotterized Hamiltonian variational ansatz on an open chain.
///
/// After `H^{⊗N}`, each of the `l` layers applies two grouped blocks. TFIM:
/// the ZZ block (group `2k`) then the X block (group `2k+1`). Heisenberg: the
/// YY block (group `2k+1`) then the XX block (group `2k`). In both models the
/// block acting first does not stabilise `|+⟩^{⊗N}`.
pub fn build_hva(model: HvaModel, qubits: usize, layers: usize) -> Result<ParamCircuit> {
    if qubits < 2 {
        return Err(SzneError::ChainTooShort(qubits));
    }
    if layers == 0 {
        return Err(SzneError::InvalidCircuit("HVA needs at least one layer".into()));
    }
    let mut b = CircuitBuilder::new(qubits);
    for q in 0..qubits {
        b.h(q);
    }
    for k in 0..layers {
        let (g0, g1) = (2 * k, 2 * k + 1);
        match model {
            HvaModel::Tfim => {
                for i in brickwork(qubits) {
                    b.zz(i, i + 1, g0);
                }
                for q in 0..qubits {
                    b.rx(q, g1);
                }
            }
            HvaModel::Heisenberg => {
                for i in brickwork(qubits) {
                    b.yy(i, i + 1, g1);
                }
                for i in brickwork(qubits) {
                    b.xx(i, i + 1, g0);
                }
            }
        }
    }
    b.build()
}

/// GHZ phase probe: `H_0`, CNOT chain, `RZ(x)` on every qubit (one group),
/// then `H^{⊗N}` so that `Z^{⊗N}` reads `cos(N x)`.
pub fn build_ghz_probe(qubits: usize) -> Result<ParamCircuit> {
    if qubits == 0 {
        return Err(SzneError::InvalidCircuit("GHZ probe needs at least one qubit".into()));
    }
    let mut b = CircuitBuilder::new(qubits);
    b.h(0);
    for i in 0..qubits.saturating_sub(1) {
        b.cnot(i, i + 1);
    }
    for q in 0..qubits {
        b.rz(q, 0);
    }
    for q in 0..qubits {
        b.h(q);
    }
    b.build()
}

/// Hardware-efficient ansatz: each layer applies independent `RY` then `RZ`
/// on every qubit followed by a CNOT chain. `2·N·l` independent groups.
pub fn build_hea(qubits: usize, layers: usize) -> Result<ParamCircuit> {
    if qubits < 2 {
        return Err(SzneError::ChainTooShort(qubits));
    }
    let mut b = CircuitBuilder::new(qubits);
    let mut group = 0;
    for _ in 0..layers {
        for q in 0..qubits {
            b.ry(q, group);
            group += 1;
        }
        for q in 0..qubits {
            b.rz(q, group);
            group += 1;
        }
        for i in 0..qubits - 1 {
            b.cnot(i, i + 1);
        }
    }
    b.build()
}

/// Repeats the circuit body `level` times.
pub fn fold_circuit(c: &ParamCircuit, level: u32, mode: FoldMode) -> Result<ParamCircuit> {
    if level < 1 {
        return Err(SzneError::InvalidFoldFactor(level));
    }
    if c.fold_factor != 1 {
        return Err(SzneError::InvalidCircuit(format!(
            "circuit is already folded (factor {})",
            c.fold_factor
        )));
    }
    if level == 1 {
        return Ok(c.clone());
    }
    let d = c.slot_count();
    let g = c.group_count();
    let mut layers = Vec::with_capacity(c.layers.len() * level as usize);
    let mut group_map = Vec::with_capacity(d * level as usize);
    for k in 0..level as usize {
        for layer in &c.layers {
            layers.push(Layer {
                clifford: layer.clifford.clone(),
                rotations: layer
                    .rotations
                    .iter()
                    .map(|r| Rotation {
                        qubit: r.qubit,
                        slot: k * d + r.slot,
                    })
                    .collect(),
            });
        }
        group_map.extend(c.group_map.iter().map(|&grp| match mode {
            FoldMode::Independent => k * g + grp,
            FoldMode::Correlated => grp,
        }));
    }
    ParamCircuit::from_parts(c.qubits, layers, group_map, level)
}

/// Declarative circuit selection used by experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case")]
pub enum CircuitTask {
    Hva {
        model: HvaModel,
        qubits: usize,
        #[serde(default = "one")]
        layers: usize,
    },
    Ghz {
        qubits: usize,
    },
    Hea {
        qubits: usize,
        layers: usize,
    },
    Custom(CircuitSpec),
}

fn one() -> usize {
    1
}

impl CircuitTask {
    pub fn build(&self) -> Result<ParamCircuit> {
        match self {
            CircuitTask::Hva {
                model,
                qubits,
                layers,
            } => build_hva(*model, *qubits, *layers),
            CircuitTask::Ghz { qubits } => build_ghz_probe(*qubits),
            CircuitTask::Hea { qubits, layers } => build_hea(*qubits, *layers),
            CircuitTask::Custom(spec) => build_circuit(spec),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_rz_circuit() {
        let c = build_circuit(&CircuitSpec {
            qubits: 1,
            gates: vec![GateSpec::rz(0, 0)],
            groups: None,
        })
        .unwrap();
        assert_eq!(c.qubits(), 1);
        assert_eq!(c.slot_count(), 1);
        assert_eq!(c.layers().len(), 1);
        assert_eq!(c.fold_factor(), 1);
    }

    #[test]
    fn unsupported_gate_and_slot_collision() {
        let t = CircuitSpec {
            qubits: 1,
            gates: vec![GateSpec::new("T", &[0])],
            groups: None,
        };
        assert_eq!(
            build_circuit(&t).unwrap_err(),
            SzneError::UnsupportedGate("T".into())
        );
        let dup = CircuitSpec {
            qubits: 2,
            gates: vec![GateSpec::rz(0, 0), GateSpec::new("H", &[1]), GateSpec::rz(1, 0)],
            groups: None,
        };
        assert_eq!(build_circuit(&dup).unwrap_err(), SzneError::SlotCollision(0));
        let oob = CircuitSpec {
            qubits: 2,
            gates: vec![GateSpec::new("CNOT", &[0, 2])],
            groups: None,
        };
        assert!(matches!(
            build_circuit(&oob).unwrap_err(),
            SzneError::QubitOutOfRange { index: 2, qubits: 2 }
        ));
    }

    #[test]
    fn gate_list_splits_into_layers() {
        let spec = CircuitSpec {
            qubits: 2,
            gates: vec![
                GateSpec::new("H", &[0]),
                GateSpec::new("CX", &[0, 1]),
                GateSpec::rz(1, 0),
                GateSpec::rz(0, 1),
                GateSpec::new("H", &[1]),
            ],
            groups: Some(vec![0, 0]),
        };
        let c = build_circuit(&spec).unwrap();
        assert_eq!(c.layers().len(), 2);
        assert_eq!(c.layers()[0].clifford.len(), 2);
        assert_eq!(c.layers()[0].rotations.len(), 2);
        assert_eq!(c.group_count(), 1);
        assert_eq!(c.group_sizes(), vec![2]);
    }

    #[test]
    fn hva_group_sizes() {
        let t2 = build_hva(HvaModel::Tfim, 2, 1).unwrap();
        assert_eq!(t2.group_count(), 2);
        assert_eq!(t2.group_sizes(), vec![1, 2]);
        assert_eq!(t2.layers()[0].clifford.len(), 2 + 1, "H layer then first CNOT");

        let h3 = build_hva(HvaModel::Heisenberg, 3, 1).unwrap();
        assert_eq!(h3.group_sizes(), vec![2, 2]);

        let t100 = build_hva(HvaModel::Tfim, 100, 1).unwrap();
        assert_eq!(t100.group_sizes(), vec![99, 100]);

        let t2l2 = build_hva(HvaModel::Tfim, 4, 2).unwrap();
        assert_eq!(t2l2.group_sizes(), vec![3, 4, 3, 4]);

        assert_eq!(build_hva(HvaModel::Tfim, 1, 1).unwrap_err(), SzneError::ChainTooShort(1));
    }

    #[test]
    fn ghz_and_hea_shapes() {
        let g = build_ghz_probe(5).unwrap();
        assert_eq!(g.group_sizes(), vec![5]);
        let hea = build_hea(6, 2).unwrap();
        assert_eq!(hea.group_count(), 24);
        assert_eq!(hea.slot_count(), 24);
    }

    #[test]
    fn fold_modes() {
        let c = build_hva(HvaModel::Tfim, 2, 1).unwrap();
        let g2 = build_circuit(&CircuitSpec {
            qubits: 1,
            gates: vec![GateSpec::rz(0, 0), GateSpec::new("H", &[0]), GateSpec::rz(0, 1)],
            groups: None,
        })
        .unwrap();

        assert_eq!(fold_circuit(&c, 1, FoldMode::Independent).unwrap(), c);

        let ind = fold_circuit(&g2, 3, FoldMode::Independent).unwrap();
        assert_eq!(ind.slot_count(), 6);
        assert_eq!(ind.group_count(), 6);
        assert_eq!(ind.fold_factor(), 3);

        let cor = fold_circuit(&g2, 3, FoldMode::Correlated).unwrap();
        assert_eq!(cor.slot_count(), 6);
        assert_eq!(cor.group_count(), 2);
        assert_eq!(cor.group_sizes(), vec![3, 3]);

        let hva3 = fold_circuit(&c, 3, FoldMode::Correlated).unwrap();
        assert_eq!(hva3.group_sizes(), vec![3, 6]);

        assert_eq!(
            fold_circuit(&c, 0, FoldMode::Independent).unwrap_err(),
            SzneError::InvalidFoldFactor(0)
        );
        assert!(fold_circuit(&ind, 2, FoldMode::Independent).is_err());
    }

    #[test]
    fn task_config_round_trip() {
        let t: CircuitTask =
            serde_json::from_str(r#"{"task":"hva","model":"tfim","qubits":4}"#).unwrap();
        assert_eq!(t.build().unwrap().group_sizes(), vec![3, 4]);
    }
}
