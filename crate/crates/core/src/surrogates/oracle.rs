use crate::circuits::{ParamAssignment, ParamCircuit};
use crate::error::{Result, SzneError};
use crate::observable::Observable;
use crate::sim::ideal_expectation;

pub const ORACLE_MAX_DIMENSION: usize = 6;

/// Exact expansion `f(x) = Σ_ω c_ω Φ_ω(x)` over `ω ∈ {0,±1}^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigExpansion {
    pub dimension: usize,
    /// All `3^d` frequencies with their coefficients (zeros included).
    pub coefficients: Vec<(Vec<i8>, f64)>,
}

impl TrigExpansion {
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.coefficients
            .iter()
            .map(|(w, c)| {
                c * w
                    .iter()
                    .zip(x)
                    .map(|(&wj, &xj)| match wj {
                        1 => xj.cos(),
                        -1 => xj.sin(),
                        _ => 1.0,
                    })
                    .product::<f64>()
            })
            .sum()
    }

    pub fn get(&self, omega: &[i8]) -> f64 {
        self.coefficients
            .iter()
            .find(|(w, _)| w.as_slice() == omega)
            .map_or(0.0, |(_, c)| *c)
    }

    /// Frequencies with `|c_ω| > tol`.
    pub fn support(&self, tol: f64) -> Vec<(Vec<i8>, f64)> {
        self.coefficients
            .iter()
            .filter(|(_, c)| c.abs() > tol)
            .cloned()
            .collect()
    }
}

/// Grid `{0, π/2, π}` per coordinate; the per-coordinate evaluation matrix
/// in the basis `(1, cos, sin)` is `[[1,1,0],[1,0,1],[1,-1,0]]`, whose
/// inverse is applied along every axis.
const GRID: [f64; 3] = [0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI];
const INV: [[f64; 3]; 3] = [[0.5, 0.0, 0.5], [0.5, 0.0, -0.5], [-0.5, 1.0, -0.5]];

/// Coefficients of any function that is multilinear in `(cos x_j, sin x_j)`.
pub fn trig_coeff_oracle_fn(d: usize, f: impl Fn(&[f64]) -> Result<f64>) -> Result<TrigExpansion> {
    if d > ORACLE_MAX_DIMENSION {
        return Err(SzneError::OracleLimited(d));
    }
    let total = 3usize.pow(d as u32);
    let digits = |mut idx: usize| -> Vec<usize> {
        (0..d)
            .map(|_| {
                let r = idx % 3;
                idx /= 3;
                r
            })
            .collect()
    };
    let mut vals = Vec::with_capacity(total);
    for idx in 0..total {
        let x: Vec<f64> = digits(idx).into_iter().map(|g| GRID[g]).collect();
        vals.push(f(&x)?);
    }
    // apply INV along each axis
    let mut stride = 1;
    for _ in 0..d {
        let mut out = vals.clone();
        for idx in 0..total {
            let g = (idx / stride) % 3;
            if g != 0 {
                continue;
            }
            let v = [vals[idx], vals[idx + stride], vals[idx + 2 * stride]];
            for (b, row) in INV.iter().enumerate() {
                out[idx + b * stride] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
            }
        }
        vals = out;
        stride *= 3;
    }
    let coefficients = (0..total)
        .map(|idx| {
            let w = digits(idx)
                .into_iter()
                .map(|b| match b {
                    1 => 1i8,
                    2 => -1,
                    _ => 0,
                })
                .collect();
            (w, vals[idx])
        })
        .collect();
    Ok(TrigExpansion {
        dimension: d,
        coefficients,
    })
}

/// Exact slot-level expansion of the ideal expectation `Tr(ρ(x)O)`.
/// The circuit is treated as ungrouped, so `d` is its slot count.
pub fn trig_coeff_oracle(c: &ParamCircuit, o: &Observable) -> Result<TrigExpansion> {
    let flat = c.ungrouped();
    let d = flat.slot_count();
    if d > ORACLE_MAX_DIMENSION {
        return Err(SzneError::OracleLimited(d));
    }
    trig_coeff_oracle_fn(d, |x| ideal_expectation(&flat, &ParamAssignment::new(x.to_vec()), o))
}
