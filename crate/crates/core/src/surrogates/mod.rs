//! Classical trigonometric surrogates of noisy expectation values.
//!
//! Two learners are provided:
//!
//! - the kernel surrogate `h_cs(x) = (1/n) Σ_i κ_Λ(x, x_i) y_i` built from
//!   shadow labels, and
//! - the ridge surrogate `h_qs(x) = ⟨Φ(x), w⟩` fitted by regularized least
//!   squares over a (possibly grouped or subsampled) feature dictionary.
//!
//! Both predict without touching any quantum resource.

mod bounds;
mod features;
mod oracle;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub use bounds::{
    lemma1_cutoffs, lemma1_training_size, lemma2_error, lemma2_training_size, theorem1_bound,
    theorem1_training_size, theory_bounds, TheoryBounds, TheoryParams,
};
pub use features::{
    binomial_coeff, frequency_set, frequency_set_size, DictionaryMode, Factor, Feature, FeatureDictionary,
    FrequencySet, Truncation,
};
pub use oracle::{trig_coeff_oracle, trig_coeff_oracle_fn, TrigExpansion, ORACLE_MAX_DIMENSION};

use crate::error::{Result, SzneError};

/// Default ridge regularization.
pub const DEFAULT_GAMMA: f64 = 1e-6;

/// `κ_Λ(x, x') = Σ_{ω∈C(Λ)} 2^{‖ω‖₀} Φ_ω(x) Φ_ω(x')`, computed as the
/// elementary symmetric polynomials `e_0 + … + e_Λ` of `2cos(x_j − x'_j)`.
pub fn kernel_eval(x: &[f64], xp: &[f64], truncation: usize) -> Result<f64> {
    if x.len() != xp.len() {
        return Err(SzneError::DimensionMismatch {
            expected: x.len(),
            got: xp.len(),
        });
    }
    let mut e = vec![0.0; truncation + 1];
    e[0] = 1.0;
    for (a, b) in x.iter().zip(xp) {
        let t = 2.0 * (a - b).cos();
        for k in (1..=truncation).rev() {
            e[k] += t * e[k - 1];
        }
    }
    Ok(e.iter().sum())
}

/// Provenance of a fitted surrogate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    /// Number of training inputs `n_j`.
    pub samples: usize,
    /// Shots (`M`) or snapshots (`T`) per label.
    pub budget: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum SurrogateModel {
    Linear {
        dictionary: FeatureDictionary,
        weights: Vec<f64>,
    },
    /// Kernel sum over stored training pairs (used when `C(Λ)` is too large
    /// to expand into weights).
    Kernel {
        inputs: Vec<Vec<f64>>,
        labels: Vec<f64>,
    },
}

/// A trained surrogate for one noise level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Surrogate {
    pub model: SurrogateModel,
    pub gamma: f64,
    pub truncation: usize,
    pub level: u32,
    pub meta: TrainingMeta,
}

impl Surrogate {
    pub fn dimension(&self) -> usize {
        match &self.model {
            SurrogateModel::Linear { dictionary, .. } => dictionary.dimension,
            SurrogateModel::Kernel { inputs, .. } => inputs.first().map_or(0, |v| v.len()),
        }
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        predict(self, x)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("surrogate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| SzneError::InvalidInput(format!("surrogate record: {e}")))
    }
}

/// `⟨Φ(x), w⟩` (or the kernel sum). Purely classical.
pub fn predict(s: &Surrogate, x: &[f64]) -> Result<f64> {
    match &s.model {
        SurrogateModel::Linear { dictionary, weights } => {
            let phi = dictionary.features_at(x)?;
            Ok(phi.iter().zip(weights).map(|(a, b)| a * b).sum())
        }
        SurrogateModel::Kernel { inputs, labels } => {
            let mut acc = 0.0;
            for (xi, yi) in inputs.iter().zip(labels) {
                acc += kernel_eval(x, xi, s.truncation)? * yi;
            }
            Ok(acc / inputs.len() as f64)
        }
    }
}

/// Solves `(ΦᵀΦ/n + γI) w = Φᵀy/n`.
pub fn fit_ridge_surrogate(
    data: &[(Vec<f64>, f64)],
    dictionary: &FeatureDictionary,
    gamma: f64,
    level: u32,
    meta: TrainingMeta,
) -> Result<Surrogate> {
    if data.is_empty() {
        return Err(SzneError::EmptyTrainingSet);
    }
    if !(gamma >= 0.0) {
        return Err(SzneError::InvalidInput(format!("regularization must be non-negative, got {gamma}")));
    }
    let n = data.len();
    let p = dictionary.len();
    let mut phi = DMatrix::<f64>::zeros(n, p);
    let mut y = DVector::<f64>::zeros(n);
    for (i, (x, label)) in data.iter().enumerate() {
        let row = dictionary.features_at(x)?;
        for (j, v) in row.into_iter().enumerate() {
            phi[(i, j)] = v;
        }
        y[i] = *label;
    }
    let inv_n = 1.0 / n as f64;
    let mut gram = phi.tr_mul(&phi) * inv_n;
    for j in 0..p {
        gram[(j, j)] += gamma;
    }
    let rhs = phi.tr_mul(&y) * inv_n;
    let chol = gram.clone().cholesky().ok_or(SzneError::RegularizationRequired)?;
    if gamma == 0.0 {
        let l = chol.l_dirty();
        let diag: Vec<f64> = (0..p).map(|j| l[(j, j)].abs()).collect();
        let max = diag.iter().cloned().fold(0.0, f64::max);
        if diag.iter().any(|d| *d <= max * 1e-7) {
            return Err(SzneError::RegularizationRequired);
        }
    }
    let w = chol.solve(&rhs);
    Ok(Surrogate {
        model: SurrogateModel::Linear {
            dictionary: dictionary.clone(),
            weights: w.iter().copied().collect(),
        },
        gamma,
        truncation: dictionary.truncation,
        level,
        meta,
    })
}

/// Kernel surrogate from `(x_i, y_i)` pairs, with `y_i` the shadow estimate
/// `Tr(ρ̃_T(x_i) O)`.
///
/// When `|C(Λ)| ≤ expand_cap` the kernel sum is expanded into the equivalent
/// weights `w_ω = 2^{‖ω‖₀} (1/n) Σ_i Φ_ω(x_i) y_i` over the full frequency set.
pub fn fit_kernel_surrogate(
    data: &[(Vec<f64>, f64)],
    truncation: usize,
    level: u32,
    meta: TrainingMeta,
    expand_cap: usize,
) -> Result<Surrogate> {
    let first = data.first().ok_or(SzneError::EmptyTrainingSet)?;
    let d = first.0.len();
    if truncation > d {
        return Err(SzneError::TruncationExceedsDimension {
            truncation,
            dimension: d,
        });
    }
    if let Some((x, _)) = data.iter().find(|(x, _)| x.len() != d) {
        return Err(SzneError::DimensionMismatch {
            expected: d,
            got: x.len(),
        });
    }
    let model = if frequency_set_size(d, truncation) <= expand_cap as u128 {
        let mut rng = crate::rng::stream(0, &[]);
        let set = frequency_set(d, truncation, expand_cap, 0, &mut rng)?;
        let dictionary = FeatureDictionary::independent(&set);
        let mut weights = vec![0.0; dictionary.len()];
        for (x, y) in data {
            let phi = dictionary.features_at(x)?;
            for (w, v) in weights.iter_mut().zip(phi) {
                *w += v * y;
            }
        }
        for (w, f) in weights.iter_mut().zip(&dictionary.features) {
            *w *= (1u64 << f.support()) as f64 / data.len() as f64;
        }
        SurrogateModel::Linear { dictionary, weights }
    } else {
        SurrogateModel::Kernel {
            inputs: data.iter().map(|(x, _)| x.clone()).collect(),
            labels: data.iter().map(|(_, y)| *y).collect(),
        }
    };
    Ok(Surrogate {
        model,
        gamma: 0.0,
        truncation,
        level,
        meta,
    })
}
