use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use super::hamiltonian::{Hamiltonian, HamiltonianModel};
use crate::error::{Result, SzneError};
use crate::observable::Observable;
use crate::rng;

/// Largest chain handled by matrix-based diagonalization.
pub const EXACT_MAX_QUBITS: usize = 14;
/// Up to this size the full matrix is diagonalized; above it, Lanczos.
pub const DENSE_MAX_QUBITS: usize = 10;

/// Ground-state energy: free fermions for TFIM, matrix methods otherwise.
pub fn exact_ground_energy(h: &Hamiltonian) -> Result<f64> {
    match h.model {
        HamiltonianModel::Tfim { j, h: field } => Ok(tfim_free_fermion_energy(h.qubits, j, field)),
        HamiltonianModel::Heisenberg { .. } => matrix_ground_energy(&h.observable, h.qubits),
    }
}

/// Open-chain TFIM `-J Σ ZZ - h Σ X` through Jordan-Wigner: the Majorana
/// coupling matrix is a bidiagonal chain `(-2h, -2J, -2h, …)` and
/// `E_0 = -¼ Σ σ_k` over its singular values.
pub fn tfim_free_fermion_energy(qubits: usize, j: f64, h: f64) -> f64 {
    let n = 2 * qubits;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for a in 0..n - 1 {
        let v = if a % 2 == 0 { -2.0 * h } else { -2.0 * j };
        m[(a, a + 1)] = v;
        m[(a + 1, a)] = -v;
    }
    -m.singular_values().sum() / 4.0
}

fn real_terms(o: &Observable) -> Result<Vec<(f64, usize, usize, f64)>> {
    o.terms()
        .iter()
        .map(|t| {
            let (x, z, ny) = t.string.masks();
            if ny % 2 == 1 {
                return Err(SzneError::ExactSolverUnavailable(format!(
                    "{} is not a real matrix",
                    t.string
                )));
            }
            let sign = if ny % 4 == 2 { -1.0 } else { 1.0 };
            Ok((t.coeff, x, z, sign))
        })
        .collect()
}

fn apply(terms: &[(f64, usize, usize, f64)], v: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|o| *o = 0.0);
    for &(c, x, z, sign) in terms {
        for (i, vi) in v.iter().enumerate() {
            let s = if (i & z).count_ones() % 2 == 1 { -sign } else { sign };
            out[i ^ x] += c * s * vi;
        }
    }
}

/// Lowest eigenvalue of a real Pauli-sum Hamiltonian on `qubits` qubits.
pub fn matrix_ground_energy(o: &Observable, qubits: usize) -> Result<f64> {
    if qubits > EXACT_MAX_QUBITS {
        return Err(SzneError::ExactSolverUnavailable(format!(
            "{qubits} qubits exceeds the {EXACT_MAX_QUBITS}-qubit matrix limit"
        )));
    }
    let terms = real_terms(o)?;
    let dim = 1usize << qubits;
    if qubits <= DENSE_MAX_QUBITS {
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        let mut e = vec![0.0; dim];
        let mut col = vec![0.0; dim];
        for c in 0..dim {
            e[c] = 1.0;
            apply(&terms, &e, &mut col);
            e[c] = 0.0;
            m.set_column(c, &nalgebra::DVector::from_column_slice(&col));
        }
        return Ok(SymmetricEigen::new(m).eigenvalues.min());
    }
    Ok(lanczos_ground(&terms, dim))
}

/// Lanczos with full reorthogonalization.
fn lanczos_ground(terms: &[(f64, usize, usize, f64)], dim: usize) -> f64 {
    let mut r = rng::stream(0x6c61_6e63, &[dim as u64]);
    let mut v: Vec<f64> = (0..dim).map(|_| r.random_range(-1.0..1.0)).collect();
    normalize(&mut v);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    let mut w = vec![0.0; dim];
    let mut last = f64::INFINITY;
    let max_iter = dim.min(400);
    for k in 0..max_iter {
        apply(terms, &v, &mut w);
        let a = dot(&w, &v);
        alpha.push(a);
        basis.push(v.clone());
        for b in &basis {
            let c = dot(&w, b);
            w.iter_mut().zip(b).for_each(|(wi, bi)| *wi -= c * bi);
        }
        let nb = dot(&w, &w).sqrt();
        let ground = tridiagonal_min(&alpha, &beta);
        if nb < 1e-12 || (k % 5 == 4 && (last - ground).abs() < 1e-13) {
            return ground;
        }
        last = ground;
        beta.push(nb);
        v = w.iter().map(|x| x / nb).collect();
    }
    tridiagonal_min(&alpha, &beta)
}

fn tridiagonal_min(alpha: &[f64], beta: &[f64]) -> f64 {
    let k = alpha.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    SymmetricEigen::new(t).eigenvalues.min()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::hamiltonian::build_hamiltonian;

    #[test]
    fn two_site_closed_form() {
        let e = tfim_free_fermion_energy(2, 0.1, 0.5);
        assert!((e + (0.01f64 + 1.0).sqrt()).abs() < 1e-12);
        assert!((tfim_free_fermion_energy(7, 0.0, 0.5) + 3.5).abs() < 1e-12);
    }

    #[test]
    fn dense_matches_free_fermion() {
        for n in [2, 3, 5] {
            let h = build_hamiltonian(HamiltonianModel::Tfim { j: 0.7, h: 0.4 }, n).unwrap();
            let a = matrix_ground_energy(&h.observable, n).unwrap();
            let b = tfim_free_fermion_energy(n, 0.7, 0.4);
            assert!((a - b).abs() < 1e-9, "{n}: {a} vs {b}");
        }
    }

    #[test]
    fn heisenberg_limit() {
        let h = build_hamiltonian(HamiltonianModel::HEISENBERG_DEFAULT, 15).unwrap();
        assert!(matches!(
            exact_ground_energy(&h).unwrap_err(),
            SzneError::ExactSolverUnavailable(_)
        ));
        let small = build_hamiltonian(HamiltonianModel::Heisenberg { jx: 1.0, jy: 1.0, jz: 1.0 }, 2).unwrap();
        // XX+YY+ZZ on two spins: singlet at -3
        assert!((exact_ground_energy(&small).unwrap() + 3.0).abs() < 1e-10);
    }
}
