//! In-place gate kernels on flat amplitude buffers (little-endian qubit bits).

use num_complex::Complex64 as C64;

use crate::circuits::Clifford;
use crate::observable::PauliString;

pub type Mat2 = [[C64; 2]; 2];

const Z0: C64 = C64::new(0.0, 0.0);
const O1: C64 = C64::new(1.0, 0.0);
const IM: C64 = C64::new(0.0, 1.0);

pub fn clifford_matrix(g: &Clifford) -> Option<Mat2> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Some(match g {
        Clifford::H(_) => [[C64::from(h), C64::from(h)], [C64::from(h), C64::from(-h)]],
        Clifford::S(_) => [[O1, Z0], [Z0, IM]],
        Clifford::X(_) => [[Z0, O1], [O1, Z0]],
        Clifford::Y(_) => [[Z0, -IM], [IM, Z0]],
        Clifford::Z(_) => [[O1, Z0], [Z0, -O1]],
        Clifford::Cnot { .. } => return None,
    })
}

pub fn conj2(m: &Mat2) -> Mat2 {
    [
        [m[0][0].conj(), m[0][1].conj()],
        [m[1][0].conj(), m[1][1].conj()],
    ]
}

pub fn apply_1q(buf: &mut [C64], bit: usize, m: &Mat2) {
    let stride = 1usize << bit;
    let len = buf.len();
    let mut base = 0;
    while base < len {
        for i in base..base + stride {
            let j = i + stride;
            let a = buf[i];
            let b = buf[j];
            buf[i] = m[0][0] * a + m[0][1] * b;
            buf[j] = m[1][0] * a + m[1][1] * b;
        }
        base += stride << 1;
    }
}

/// Diagonal single-qubit gate `diag(d0, d1)`.
pub fn apply_diag(buf: &mut [C64], bit: usize, d0: C64, d1: C64) {
    let mask = 1usize << bit;
    for (i, v) in buf.iter_mut().enumerate() {
        *v *= if i & mask == 0 { d0 } else { d1 };
    }
}

pub fn apply_cnot(buf: &mut [C64], control: usize, target: usize) {
    let c = 1usize << control;
    let t = 1usize << target;
    for i in 0..buf.len() {
        if i & c != 0 && i & t == 0 {
            buf.swap(i, i | t);
        }
    }
}

/// `RZ(θ) = diag(e^{-iθ/2}, e^{iθ/2})`.
pub fn rz_phases(theta: f64) -> (C64, C64) {
    let h = 0.5 * theta;
    (C64::new(h.cos(), -h.sin()), C64::new(h.cos(), h.sin()))
}

/// `i^{ny} (-1)^{popcount(i & z)}` as a complex phase, so `P|i⟩ = phase(i)|i ⊕ x⟩`.
#[inline]
pub fn pauli_phase(i: usize, z: usize, ny: u32) -> C64 {
    let sign = if (i & z).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
    match ny % 4 {
        0 => C64::new(sign, 0.0),
        1 => C64::new(0.0, sign),
        2 => C64::new(-sign, 0.0),
        _ => C64::new(0.0, -sign),
    }
}

/// `⟨ψ|P|ψ⟩` for a pure state.
pub fn pauli_expectation_pure(amps: &[C64], p: &PauliString) -> f64 {
    let (x, z, ny) = p.masks();
    let mut acc = C64::new(0.0, 0.0);
    for (i, a) in amps.iter().enumerate() {
        acc += amps[i ^ x].conj() * pauli_phase(i, z, ny) * a;
    }
    acc.re
}
