//! Noise channels, their Pauli-transfer diagonals and the amplification rules.
//!
//! Incoherent per-gate noise is compiled once into Liouville superoperators
//! ([`Superop`]) for each gate arity; the density-matrix backend applies them
//! after every gate. Global depolarizing noise is kept as a scalar rate and
//! applied once per circuit. Coherent miscalibration is not a channel at all:
//! it shifts the parameter assignment before simulation.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SzneError};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Eigencomponents of a Choi matrix below this are treated as zero.
pub const CHOI_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateRates {
    pub single: f64,
    pub two: f64,
}

impl GateRates {
    pub fn for_arity(&self, arity: usize) -> f64 {
        if arity == 2 {
            self.two
        } else {
            self.single
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseComponent {
    LocalDepolarizing {
        p_d: GateRates,
    },
    GlobalDepolarizing {
        p_g: f64,
    },
    /// Times in microseconds.
    Thermal {
        #[serde(rename = "T1")]
        t1: f64,
        #[serde(rename = "T2")]
        t2: f64,
        t_g: GateRates,
        p_e: f64,
    },
    /// Per-group angle offsets drawn from `[lo·λ, hi·λ]`.
    Coherent {
        offset_bounds: [f64; 2],
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Amplification {
    /// Depolarizing rates become `1-(1-p)^λ`; thermal channels repeat `λ` times.
    RateFormula,
    /// Every per-gate channel (and the global channel) is applied `λ` times.
    #[default]
    ChannelRepetition,
    /// The circuit body is repeated `λ` times (correlated folding) at base noise.
    StructuralFold,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub components: Vec<NoiseComponent>,
    #[serde(default)]
    pub amplification: Amplification,
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(SzneError::InvalidNoise(format!("{name} = {p} is not a probability")));
    }
    Ok(())
}

impl NoiseModel {
    pub fn new(components: Vec<NoiseComponent>, amplification: Amplification) -> Result<Self> {
        let m = Self {
            components,
            amplification,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn noiseless() -> Self {
        Self {
            components: Vec::new(),
            amplification: Amplification::default(),
        }
    }

    pub fn global_depolarizing(p_g: f64) -> Result<Self> {
        Self::new(
            vec![NoiseComponent::GlobalDepolarizing { p_g }],
            Amplification::RateFormula,
        )
    }

    /// The noise settings used by the hybrid study.
    pub fn table1() -> Self {
        Self {
            components: vec![
                NoiseComponent::LocalDepolarizing {
                    p_d: GateRates {
                        single: 0.001,
                        two: 0.005,
                    },
                },
                NoiseComponent::Thermal {
                    t1: 100_000.0,
                    t2: 30_000.0,
                    t_g: GateRates {
                        single: 15.0,
                        two: 20.0,
                    },
                    p_e: 0.01,
                },
                NoiseComponent::Coherent {
                    offset_bounds: [-0.01 * std::f64::consts::PI, 0.02 * std::f64::consts::PI],
                },
            ],
            amplification: Amplification::ChannelRepetition,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for c in &self.components {
            match *c {
                NoiseComponent::LocalDepolarizing { p_d } => {
                    check_prob("p_d.single", p_d.single)?;
                    check_prob("p_d.two", p_d.two)?;
                }
                NoiseComponent::GlobalDepolarizing { p_g } => check_prob("p_g", p_g)?,
                NoiseComponent::Thermal { t1, t2, t_g, p_e } => {
                    check_prob("p_e", p_e)?;
                    for (name, v) in [("T1", t1), ("T2", t2), ("t_g.single", t_g.single), ("t_g.two", t_g.two)] {
                        if !(v > 0.0 && v.is_finite()) {
                            return Err(SzneError::InvalidNoise(format!("{name} must be positive")));
                        }
                    }
                    if t2 > 2.0 * t1 {
                        return Err(SzneError::InconsistentRelaxation { t1, t2 });
                    }
                }
                NoiseComponent::Coherent { offset_bounds: [lo, hi] } => {
                    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                        return Err(SzneError::InvalidNoise(format!(
                            "offset bounds [{lo}, {hi}] are not an interval"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Base global rate `p_g` (0 when absent; several components compose).
    pub fn global_rate(&self) -> f64 {
        let keep: f64 = self
            .components
            .iter()
            .map(|c| match c {
                NoiseComponent::GlobalDepolarizing { p_g } => 1.0 - p_g,
                _ => 1.0,
            })
            .product();
        1.0 - keep
    }

    /// Global rate after amplification to `level`.
    pub fn effective_global_rate(&self, level: u32) -> f64 {
        match self.amplification {
            Amplification::StructuralFold => self.global_rate(),
            _ => amplified_rate(self.global_rate(), level),
        }
    }

    pub fn has_gate_noise(&self) -> bool {
        self.components.iter().any(|c| {
            matches!(
                c,
                NoiseComponent::LocalDepolarizing { .. } | NoiseComponent::Thermal { .. }
            )
        })
    }

    pub fn coherent_bounds(&self) -> Option<[f64; 2]> {
        self.components.iter().find_map(|c| match c {
            NoiseComponent::Coherent { offset_bounds } => Some(*offset_bounds),
            _ => None,
        })
    }

    /// True when the only incoherent noise is global depolarizing, so that
    /// noisy values are `(1-p_eff)` times ideal ones.
    pub fn is_scalar(&self) -> bool {
        !self.has_gate_noise()
    }

    /// Per-arity superoperators at `level` (`None` when the gate is noiseless).
    pub fn gate_superops(&self, level: u32) -> Result<GateNoise> {
        self.validate()?;
        if !self.has_gate_noise() {
            return Ok(GateNoise::default());
        }
        let reps = match self.amplification {
            Amplification::StructuralFold => 1,
            _ => level,
        };
        let build = |arity: usize| -> Result<Superop> {
            match self.amplification {
                Amplification::RateFormula => {
                    let mut s = Superop::identity(arity);
                    for c in &self.components {
                        let step = match *c {
                            NoiseComponent::LocalDepolarizing { p_d } => depolarizing_kraus(
                                arity,
                                amplified_rate(p_d.for_arity(arity), level),
                            )
                            .superop(),
                            NoiseComponent::Thermal { .. } => {
                                single_component(c, arity)?.superop().power(level)
                            }
                            _ => continue,
                        };
                        s = step.after(&s);
                    }
                    Ok(s)
                }
                _ => Ok(make_channel(self, arity)?.superop().power(reps)),
            }
        };
        Ok(GateNoise {
            single: Some(build(1)?),
            two: Some(build(2)?),
        })
    }
}

/// Gate-attached noise, compiled per arity.
#[derive(Debug, Clone, Default)]
pub struct GateNoise {
    pub single: Option<Superop>,
    pub two: Option<Superop>,
}

impl GateNoise {
    pub fn for_arity(&self, arity: usize) -> Option<&Superop> {
        if arity == 2 {
            self.two.as_ref()
        } else {
            self.single.as_ref()
        }
    }
}

/// Kraus operators on one or two qubits. For two qubits the local basis
/// index is `b0 + 2·b1` with `b0` the first qubit the channel acts on.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    pub qubits: usize,
    pub operators: Vec<DMatrix<C64>>,
}

impl KrausChannel {
    pub fn identity(qubits: usize) -> Self {
        let dim = 1 << qubits;
        Self {
            qubits,
            operators: vec![DMatrix::identity(dim, dim)],
        }
    }

    /// `max |Σ K†K − I|`.
    pub fn completeness_error(&self) -> f64 {
        let dim = 1 << self.qubits;
        let mut acc = DMatrix::<C64>::zeros(dim, dim);
        for k in &self.operators {
            acc += k.adjoint() * k;
        }
        acc -= DMatrix::<C64>::identity(dim, dim);
        acc.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn superop(&self) -> Superop {
        let dim = 1 << self.qubits;
        let mut m = DMatrix::<C64>::zeros(dim * dim, dim * dim);
        for k in &self.operators {
            for r in 0..dim {
                for c in 0..dim {
                    for a in 0..dim {
                        let kra = k[(r, a)];
                        if kra == ZERO {
                            continue;
                        }
                        for b in 0..dim {
                            m[(r * dim + c, a * dim + b)] += kra * k[(c, b)].conj();
                        }
                    }
                }
            }
        }
        Superop {
            qubits: self.qubits,
            matrix: m,
        }
    }

    /// Channel `self ∘ first`.
    pub fn after(&self, first: &KrausChannel) -> KrausChannel {
        assert_eq!(self.qubits, first.qubits);
        let mut ops = Vec::with_capacity(self.operators.len() * first.operators.len());
        for a in &self.operators {
            for b in &first.operators {
                let p = a * b;
                if p.iter().any(|z| z.norm() > 0.0) {
                    ops.push(p);
                }
            }
        }
        KrausChannel {
            qubits: self.qubits,
            operators: ops,
        }
    }

    /// Independent single-qubit channels on the two qubits of a pair.
    pub fn tensor(first: &KrausChannel, second: &KrausChannel) -> KrausChannel {
        assert!(first.qubits == 1 && second.qubits == 1);
        let mut ops = Vec::new();
        for a in &first.operators {
            for b in &second.operators {
                ops.push(local_kron(a, b));
            }
        }
        KrausChannel {
            qubits: 2,
            operators: ops,
        }
    }
}

/// `a` on the first (low) qubit, `b` on the second.
fn local_kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    b.kronecker(a)
}

/// Liouville matrix acting on `vec(ρ)` with index `row·D + col`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superop {
    pub qubits: usize,
    pub matrix: DMatrix<C64>,
}

impl Superop {
    pub fn identity(qubits: usize) -> Self {
        let n = 1 << (2 * qubits);
        Self {
            qubits,
            matrix: DMatrix::identity(n, n),
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Superop) -> Superop {
        Superop {
            qubits: self.qubits,
            matrix: &self.matrix * &first.matrix,
        }
    }

    pub fn power(&self, k: u32) -> Superop {
        let mut out = Superop::identity(self.qubits);
        for _ in 0..k {
            out = self.after(&out);
        }
        out
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        let id = Superop::identity(self.qubits);
        (&self.matrix - &id.matrix).iter().all(|z| z.norm() <= tol)
    }
}

fn pauli_1q(k: usize) -> DMatrix<C64> {
    match k {
        0 => DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]),
        1 => DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        2 => DMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        _ => DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    }
}

/// `(1-p)ρ + p·I/D` on `arity` qubits, as Pauli Kraus operators.
pub fn depolarizing_kraus(arity: usize, p: f64) -> KrausChannel {
    let count = 1usize << (2 * arity);
    let mut ops = Vec::with_capacity(count);
    for idx in 0..count {
        let w = if idx == 0 {
            1.0 - p + p / count as f64
        } else {
            p / count as f64
        };
        if w <= 0.0 {
            continue;
        }
        let op = if arity == 1 {
            pauli_1q(idx)
        } else {
            local_kron(&pauli_1q(idx & 3), &pauli_1q(idx >> 2))
        };
        ops.push(op * C64::from(w.sqrt()));
    }
    KrausChannel {
        qubits: arity,
        operators: ops,
    }
}

/// `(p_r, p_z)` for a thermal relaxation step of duration `t_g`.
pub fn thermal_probabilities(t1: f64, t2: f64, t_g: f64) -> Result<(f64, f64)> {
    let inv_tphi = 1.0 / t2 - 1.0 / (2.0 * t1);
    if inv_tphi < 0.0 {
        return Err(SzneError::InconsistentRelaxation { t1, t2 });
    }
    let p_r = 1.0 - (-t_g / t1).exp();
    let p_z = 0.5 * (1.0 - (-t_g * inv_tphi).exp());
    Ok((p_r, p_z))
}

/// Single-qubit thermal relaxation channel.
pub fn thermal_kraus(t1: f64, t2: f64, t_g: f64, p_e: f64) -> Result<KrausChannel> {
    check_prob("p_e", p_e)?;
    let (p_r, p_z) = thermal_probabilities(t1, t2, t_g)?;
    if t2 <= t1 {
        let k0 = 1.0 - p_z - p_r;
        if k0 < 0.0 {
            return Err(SzneError::InvalidNoise(format!(
                "thermal step too long: p_z + p_r = {} > 1",
                p_z + p_r
            )));
        }
        let m = |v: [f64; 4]| DMatrix::from_row_slice(2, 2, &v.map(C64::from));
        let ops = vec![
            m([1.0, 0.0, 0.0, 1.0]) * C64::from(k0.sqrt()),
            m([1.0, 0.0, 0.0, -1.0]) * C64::from(p_z.sqrt()),
            m([1.0, 0.0, 0.0, 0.0]) * C64::from((p_r * (1.0 - p_e)).sqrt()),
            m([0.0, 1.0, 0.0, 0.0]) * C64::from((p_r * (1.0 - p_e)).sqrt()),
            m([0.0, 0.0, 1.0, 0.0]) * C64::from((p_r * p_e).sqrt()),
            m([0.0, 0.0, 0.0, 1.0]) * C64::from((p_r * p_e).sqrt()),
        ];
        let operators = ops
            .into_iter()
            .filter(|k| k.iter().any(|z| z.norm() > 0.0))
            .collect();
        return Ok(KrausChannel {
            qubits: 1,
            operators,
        });
    }
    let coh = (-t_g / t2).exp();
    let choi = DMatrix::from_row_slice(
        4,
        4,
        &[
            1.0 - p_e * p_r, 0.0, 0.0, coh,
            0.0, p_e * p_r, 0.0, 0.0,
            0.0, 0.0, (1.0 - p_e) * p_r, 0.0,
            coh, 0.0, 0.0, 1.0 - (1.0 - p_e) * p_r,
        ],
    );
    choi_to_kraus(&choi)
}

/// Kraus operators of a single-qubit channel from its Choi matrix
/// `Σ_ij |i⟩⟨j| ⊗ E(|i⟩⟨j|)` (row index `2·i + a`).
pub fn choi_to_kraus(choi: &DMatrix<f64>) -> Result<KrausChannel> {
    let eig = SymmetricEigen::new(choi.clone());
    let mut ops = Vec::new();
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam < -1e-9 {
            return Err(SzneError::InvalidNoise(format!(
                "Choi matrix is not positive (eigenvalue {lam})"
            )));
        }
        if lam < CHOI_CUTOFF {
            continue;
        }
        let v = eig.eigenvectors.column(k);
        let mut op = DMatrix::<C64>::zeros(2, 2);
        for a in 0..2 {
            for i in 0..2 {
                op[(a, i)] = C64::from(lam.sqrt() * v[2 * i + a]);
            }
        }
        ops.push(op);
    }
    Ok(KrausChannel {
        qubits: 1,
        operators: ops,
    })
}

fn single_component(c: &NoiseComponent, arity: usize) -> Result<KrausChannel> {
    Ok(match *c {
        NoiseComponent::LocalDepolarizing { p_d } => depolarizing_kraus(arity, p_d.for_arity(arity)),
        NoiseComponent::Thermal { t1, t2, t_g, p_e } => {
            let k = thermal_kraus(t1, t2, t_g.for_arity(arity), p_e)?;
            if arity == 2 {
                KrausChannel::tensor(&k, &k)
            } else {
                k
            }
        }
        _ => KrausChannel::identity(arity),
    })
}

/// The per-gate channel for a gate of the given arity at base noise: the
/// gate-attached components composed in declaration order. Global
/// depolarizing and coherent components are not gate channels and are
/// skipped.
pub fn make_channel(noise: &NoiseModel, arity: usize) -> Result<KrausChannel> {
    if !(1..=2).contains(&arity) {
        return Err(SzneError::InvalidNoise(format!("unsupported gate arity {arity}")));
    }
    noise.validate()?;
    let mut ch = KrausChannel::identity(arity);
    for c in &noise.components {
        if matches!(
            c,
            NoiseComponent::LocalDepolarizing { .. } | NoiseComponent::Thermal { .. }
        ) {
            ch = single_component(c, arity)?.after(&ch);
        }
    }
    Ok(ch)
}

/// Pauli-transfer diagonal `(q_X, q_Y, q_Z)` of a Pauli channel.
pub fn ptm_diagonal(p_x: f64, p_y: f64, p_z: f64) -> Result<(f64, f64, f64)> {
    let total = p_x + p_y + p_z;
    if [p_x, p_y, p_z].iter().any(|p| !(0.0..=1.0).contains(p)) || total > 1.0 + 1e-15 {
        return Err(SzneError::InvalidPauliChannel(total));
    }
    Ok((
        1.0 - 2.0 * (p_z + p_y),
        1.0 - 2.0 * (p_z + p_x),
        1.0 - 2.0 * (p_x + p_y),
    ))
}

/// `1 - (1 - p)^λ`.
pub fn amplified_rate(p: f64, level: u32) -> f64 {
    match level {
        0 => 0.0,
        1 => p,
        _ => -((-p).ln_1p() * level as f64).exp_m1(),
    }
}

/// One offset per group, uniform in `[lo·λ, hi·λ]`.
pub fn sample_coherent_offsets<R: Rng + ?Sized>(
    bounds: [f64; 2],
    groups: usize,
    level: u32,
    rng: &mut R,
) -> Vec<f64> {
    let lo = bounds[0] * level as f64;
    let hi = bounds[1] * level as f64;
    (0..groups)
        .map(|_| if hi > lo { rng.random_range(lo..=hi) } else { lo })
        .collect()
}
