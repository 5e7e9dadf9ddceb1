use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuits::HvaModel;
use crate::error::{Result, SzneError};
use crate::observable::{Observable, Pauli, PauliString};

/// Open-chain spin models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum HamiltonianModel {
    /// `-Σ J Z_i Z_{i+1} - Σ h X_i`
    Tfim { j: f64, h: f64 },
    /// `Σ (J_x X_i X_{i+1} + J_y Y_i Y_{i+1} + J_z Z_i Z_{i+1})`
    Heisenberg { jx: f64, jy: f64, jz: f64 },
}

impl HamiltonianModel {
    pub const TFIM_DEFAULT: Self = Self::Tfim { j: 0.1, h: 0.5 };
    pub const HEISENBERG_DEFAULT: Self = Self::Heisenberg {
        jx: 0.1,
        jy: 0.5,
        jz: 0.0,
    };

    /// Builds a model from its name and coupling list (`[J, h]` or `[J_x, J_y, J_z]`).
    pub fn from_name(name: &str, couplings: &[f64]) -> Result<Self> {
        let bad = || SzneError::InvalidInput(format!("wrong number of couplings for {name}: {}", couplings.len()));
        match name.to_ascii_lowercase().as_str() {
            "tfim" | "ising" => match couplings {
                [] => Ok(Self::TFIM_DEFAULT),
                [j, h] => Ok(Self::Tfim { j: *j, h: *h }),
                _ => Err(bad()),
            },
            "hm" | "heisenberg" => match couplings {
                [] => Ok(Self::HEISENBERG_DEFAULT),
                [jx, jy, jz] => Ok(Self::Heisenberg {
                    jx: *jx,
                    jy: *jy,
                    jz: *jz,
                }),
                _ => Err(bad()),
            },
            _ => Err(SzneError::UnknownModel(name.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Tfim { .. } => "tfim",
            Self::Heisenberg { .. } => "heisenberg",
        }
    }

    /// The matching variational ansatz family.
    pub fn ansatz(&self) -> HvaModel {
        match self {
            Self::Tfim { .. } => HvaModel::Tfim,
            Self::Heisenberg { .. } => HvaModel::Heisenberg,
        }
    }
}

impl FromStr for HamiltonianModel {
    type Err = SzneError;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_name(s, &[])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hamiltonian {
    pub model: HamiltonianModel,
    pub qubits: usize,
    pub observable: Observable,
}

impl Hamiltonian {
    pub fn norm_bound(&self) -> f64 {
        self.observable.norm_bound()
    }
}

pub fn build_hamiltonian(model: HamiltonianModel, qubits: usize) -> Result<Hamiltonian> {
    if qubits < 2 {
        return Err(SzneError::ChainTooShort(qubits));
    }
    let bonds = |p: Pauli, c: f64| (0..qubits - 1).map(move |i| (c, PauliString::pair(i, i + 1, p)));
    let terms: Vec<(f64, PauliString)> = match model {
        HamiltonianModel::Tfim { j, h } => bonds(Pauli::Z, -j)
            .chain((0..qubits).map(|i| (-h, PauliString::single(i, Pauli::X))))
            .collect(),
        HamiltonianModel::Heisenberg { jx, jy, jz } => [(Pauli::X, jx), (Pauli::Y, jy), (Pauli::Z, jz)]
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .flat_map(|(p, c)| bonds(p, c))
            .collect(),
    };
    Ok(Hamiltonian {
        model,
        qubits,
        observable: Observable::new(terms)?,
    })
}
