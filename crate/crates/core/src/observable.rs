//! Observables as weighted sums of Pauli strings.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SzneError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// A tensor product of single-qubit Paulis; qubits not listed carry the identity.
///
/// Entries are kept sorted by qubit with no repeats, so two strings are equal
/// exactly when they denote the same operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct PauliString {
    ops: Vec<(usize, Pauli)>,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(ops: impl IntoIterator<Item = (usize, Pauli)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (q, p) in ops {
            if map.insert(q, p).is_some() {
                return Err(SzneError::InvalidInput(format!(
                    "qubit {q} appears twice in a Pauli string"
                )));
            }
        }
        Ok(Self {
            ops: map.into_iter().collect(),
        })
    }

    pub fn single(qubit: usize, pauli: Pauli) -> Self {
        Self {
            ops: vec![(qubit, pauli)],
        }
    }

    pub fn pair(a: usize, b: usize, pauli: Pauli) -> Self {
        Self::new([(a, pauli), (b, pauli)]).expect("distinct qubits")
    }

    /// Parses strings such as `"X0 Z3"` or `"ZZZ"` (dense form, qubit = position).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "I" {
            return Ok(Self::identity());
        }
        if s.split_whitespace().count() == 1 && s.chars().all(|c| "IXYZixyz".contains(c)) {
            let ops = s
                .chars()
                .enumerate()
                .filter_map(|(q, c)| Pauli::from_char(c).map(|p| (q, p)));
            return Self::new(ops);
        }
        let mut ops = Vec::new();
        for tok in s.split_whitespace() {
            let mut chars = tok.chars();
            let p = chars
                .next()
                .and_then(Pauli::from_char)
                .ok_or_else(|| SzneError::InvalidInput(format!("bad Pauli token {tok:?}")))?;
            let q: usize = chars
                .as_str()
                .parse()
                .map_err(|_| SzneError::InvalidInput(format!("bad Pauli token {tok:?}")))?;
            ops.push((q, p));
        }
        Self::new(ops)
    }

    pub fn ops(&self) -> &[(usize, Pauli)] {
        &self.ops
    }

    pub fn weight(&self) -> usize {
        self.ops.len()
    }

    pub fn is_identity(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops.iter().map(|&(q, _)| q)
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.ops.last().map(|&(q, _)| q)
    }

    pub fn get(&self, qubit: usize) -> Option<Pauli> {
        self.ops
            .binary_search_by_key(&qubit, |&(q, _)| q)
            .ok()
            .map(|i| self.ops[i].1)
    }

    /// Bit masks `(x, z, y_count)` in the symplectic convention: X sets x, Z sets z,
    /// Y sets both. Requires all qubits < 64.
    pub fn masks(&self) -> (usize, usize, u32) {
        let mut x = 0usize;
        let mut z = 0usize;
        let mut ny = 0;
        for &(q, p) in &self.ops {
            match p {
                Pauli::X => x |= 1 << q,
                Pauli::Z => z |= 1 << q,
                Pauli::Y => {
                    x |= 1 << q;
                    z |= 1 << q;
                    ny += 1;
                }
            }
        }
        (x, z, ny)
    }

    /// Same string with qubits renamed through `map`.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Self {
        Self::new(self.ops.iter().map(|&(q, p)| (map(q), p))).expect("relabel must be injective")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ops.is_empty() {
            return write!(f, "I");
        }
        let parts: Vec<String> = self.ops.iter().map(|(q, p)| format!("{p:?}{q}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: f64,
    pub string: PauliString,
}

/// `O = Σ_i c_i P_i` with finite coefficients and no duplicate strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observable {
    terms: Vec<Term>,
}

impl Observable {
    pub fn new(terms: impl IntoIterator<Item = (f64, PauliString)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for (coeff, string) in terms {
            if !coeff.is_finite() {
                return Err(SzneError::InvalidInput(format!(
                    "non-finite coefficient on {string}"
                )));
            }
            if !seen.insert(string.clone()) {
                return Err(SzneError::InvalidInput(format!(
                    "duplicate Pauli string {string}"
                )));
            }
            out.push(Term { coeff, string });
        }
        let obs = Self { terms: out };
        if obs.norm_bound() <= 0.0 {
            return Err(SzneError::InvalidInput(
                "observable must have a nonzero coefficient".into(),
            ));
        }
        Ok(obs)
    }

    pub fn single(string: PauliString) -> Self {
        Self::new([(1.0, string)]).expect("unit coefficient")
    }

    /// `Z^{⊗n}` on qubits `0..n`.
    pub fn z_parity(n: usize) -> Self {
        Self::single(PauliString::new((0..n).map(|q| (q, Pauli::Z))).expect("distinct"))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `B = Σ |c_i|`.
    pub fn norm_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    /// `K = max string weight`.
    pub fn locality(&self) -> usize {
        self.terms.iter().map(|t| t.string.weight()).max().unwrap_or(0)
    }

    pub fn is_traceless(&self) -> bool {
        self.terms.iter().all(|t| !t.string.is_identity())
    }

    /// Number of qubits the observable touches, i.e. `max qubit + 1`.
    pub fn min_qubits(&self) -> usize {
        self.terms
            .iter()
            .filter_map(|t| t.string.max_qubit())
            .max()
            .map_or(0, |q| q + 1)
    }

    /// Combines per-term expectations `⟨P_i⟩` into `Σ c_i ⟨P_i⟩`.
    pub fn combine(&self, term_values: &[f64]) -> f64 {
        debug_assert_eq!(term_values.len(), self.terms.len());
        self.terms
            .iter()
            .zip(term_values)
            .map(|(t, v)| t.coeff * v)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms_agree() {
        let a = PauliString::parse("X0 Z2").unwrap();
        let b = PauliString::parse("XIZ").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.weight(), 2);
        assert_eq!(a.get(2), Some(Pauli::Z));
        assert_eq!(a.get(1), None);
        assert!(PauliString::parse("I").unwrap().is_identity());
        assert!(PauliString::parse("T0").is_err());
    }

    #[test]
    fn norm_bound_and_locality() {
        let o = Observable::new([
            (-0.1, PauliString::pair(0, 1, Pauli::Z)),
            (-0.5, PauliString::single(0, Pauli::X)),
            (-0.5, PauliString::single(1, Pauli::X)),
        ])
        .unwrap();
        assert!((o.norm_bound() - 1.1).abs() < 1e-15);
        assert_eq!(o.locality(), 2);
        assert!(o.is_traceless());
        assert_eq!(o.min_qubits(), 2);
    }

    #[test]
    fn rejects_duplicates_and_zero() {
        let z = PauliString::single(0, Pauli::Z);
        assert!(Observable::new([(1.0, z.clone()), (2.0, z.clone())]).is_err());
        assert!(Observable::new([(0.0, z)]).is_err());
        assert!(PauliString::new([(0, Pauli::X), (0, Pauli::Z)]).is_err());
    }

    #[test]
    fn masks_follow_symplectic_convention() {
        let p = PauliString::parse("X0 Y1 Z2").unwrap();
        assert_eq!(p.masks(), (0b011, 0b110, 1));
    }
}
