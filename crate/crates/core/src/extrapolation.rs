//! Zero-noise extrapolation as a fixed linear functional `g(z) = ⟨s, z⟩`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SzneError};

/// Richardson coefficients blow up quickly; more levels than this are truncated.
pub const RICHARDSON_MAX_LEVELS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtrapolationKind {
    Linear,
    Quadratic,
    Richardson,
}

impl FromStr for ExtrapolationKind {
    type Err = SzneError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(Self::Linear),
            "quadratic" => Ok(Self::Quadratic),
            "richardson" => Ok(Self::Richardson),
            other => Err(SzneError::InvalidInput(format!("unknown extrapolation {other:?}"))),
        }
    }
}

impl fmt::Display for ExtrapolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Linear => "linear",
            Self::Quadratic => "quadratic",
            Self::Richardson => "richardson",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolationScheme {
    pub kind: ExtrapolationKind,
    pub levels: Vec<u32>,
    pub coefficients: Vec<f64>,
}

impl ExtrapolationScheme {
    pub fn new(kind: ExtrapolationKind, levels: &[u32]) -> Result<Self> {
        Ok(Self {
            kind,
            levels: levels.to_vec(),
            coefficients: coefficients(kind, levels)?,
        })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn extrapolate(&self, z: &[f64]) -> Result<f64> {
        extrapolate(self, z)
    }

    pub fn lipschitz(&self) -> f64 {
        lipschitz_constant(self)
    }
}

fn check_levels(levels: &[u32]) -> Result<()> {
    for w in levels.windows(2) {
        if w[0] == w[1] {
            return Err(SzneError::DegenerateDesign);
        }
        if w[0] > w[1] {
            return Err(SzneError::InvalidInput("levels must be increasing".into()));
        }
    }
    if levels.first() == Some(&0) {
        return Err(SzneError::InvalidFoldFactor(0));
    }
    Ok(())
}

/// Intercept row of the least-squares polynomial fit of the given degree.
fn polyfit_intercept(levels: &[u32], degree: usize) -> Result<Vec<f64>> {
    let u = levels.len();
    // The intercept is invariant under rescaling λ, which tames the Vandermonde.
    let scale = *levels.last().expect("non-empty") as f64;
    let v = DMatrix::from_fn(u, degree + 1, |i, k| (levels[i] as f64 / scale).powi(k as i32));
    let gram = v.transpose() * &v;
    let mut e0 = DVector::zeros(degree + 1);
    e0[0] = 1.0;
    let a = gram
        .cholesky()
        .ok_or(SzneError::DegenerateDesign)?
        .solve(&e0);
    Ok((v * a).iter().copied().collect())
}

/// Lagrange weights of the interpolant evaluated at zero.
fn richardson(levels: &[u32]) -> Vec<f64> {
    levels
        .iter()
        .enumerate()
        .map(|(j, &lj)| {
            levels
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &lk)| lk as f64 / (lk as f64 - lj as f64))
                .product()
        })
        .collect()
}

/// Coefficient vector `s` with `g(z) = ⟨s, z⟩`.
pub fn coefficients(kind: ExtrapolationKind, levels: &[u32]) -> Result<Vec<f64>> {
    let needed = match kind {
        ExtrapolationKind::Linear => 2,
        ExtrapolationKind::Quadratic => 3,
        ExtrapolationKind::Richardson => 1,
    };
    if levels.len() < needed {
        return Err(SzneError::InsufficientPoints {
            kind: match kind {
                ExtrapolationKind::Linear => "linear",
                ExtrapolationKind::Quadratic => "quadratic",
                ExtrapolationKind::Richardson => "richardson",
            },
            needed,
            got: levels.len(),
        });
    }
    check_levels(levels)?;
    match kind {
        ExtrapolationKind::Linear => polyfit_intercept(levels, 1),
        ExtrapolationKind::Quadratic => polyfit_intercept(levels, 2),
        ExtrapolationKind::Richardson => {
            if levels.len() > RICHARDSON_MAX_LEVELS {
                log::warn!(
                    "richardson extrapolation capped at {RICHARDSON_MAX_LEVELS} of {} levels",
                    levels.len()
                );
                let mut s = richardson(&levels[..RICHARDSON_MAX_LEVELS]);
                s.resize(levels.len(), 0.0);
                Ok(s)
            } else {
                Ok(richardson(levels))
            }
        }
    }
}

pub fn extrapolate(scheme: &ExtrapolationScheme, z: &[f64]) -> Result<f64> {
    if z.len() != scheme.coefficients.len() {
        return Err(SzneError::LengthMismatch {
            expected: scheme.coefficients.len(),
            got: z.len(),
        });
    }
    if let Some(v) = z.iter().find(|v| !v.is_finite()) {
        return Err(SzneError::InvalidInput(format!("non-finite value {v} in z")));
    }
    Ok(scheme.coefficients.iter().zip(z).map(|(s, v)| s * v).sum())
}

/// `‖s‖₂`.
pub fn lipschitz_constant(scheme: &ExtrapolationScheme) -> f64 {
    scheme.coefficients.iter().map(|s| s * s).sum::<f64>().sqrt()
}

/// Levels `1..=u`.
pub fn uniform_levels(u: u32) -> Vec<u32> {
    (1..=u).collect()
}
