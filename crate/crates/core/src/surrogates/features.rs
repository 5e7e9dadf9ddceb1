use std::collections::HashSet;

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SzneError};

/// `C(n, k)` in `u128` (exact for the sizes used here).
pub fn binomial_coeff(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `|C(Λ)| = Σ_{k≤Λ} C(d,k)·2^k`.
pub fn frequency_set_size(d: usize, truncation: usize) -> u128 {
    (0..=truncation.min(d))
        .map(|k| binomial_coeff(d, k) << k)
        .sum()
}

fn saturate(v: u128) -> u64 {
    u64::try_from(v).unwrap_or(u64::MAX)
}

/// Truncated frequency vectors `ω ∈ {0,±1}^d`, `‖ω‖₀ ≤ Λ`.
/// Entry `+1` selects `cos(x_j)`, `-1` selects `sin(x_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencySet {
    pub dimension: usize,
    pub truncation: usize,
    pub members: Vec<Vec<i8>>,
    pub full_size: u64,
    pub sampled: bool,
}

fn enumerate_frequencies(d: usize, truncation: usize) -> Vec<Vec<i8>> {
    let mut out = vec![vec![0i8; d]];
    // grow by weight: every member of weight k extends with a new nonzero
    // entry placed after its last nonzero, so each vector appears once
    let mut frontier: Vec<(Vec<i8>, usize)> = vec![(vec![0i8; d], 0)];
    for _ in 0..truncation {
        let mut next = Vec::new();
        for (w, start) in &frontier {
            for j in *start..d {
                for s in [1i8, -1] {
                    let mut v = w.clone();
                    v[j] = s;
                    out.push(v.clone());
                    next.push((v, j + 1));
                }
            }
        }
        frontier = next;
    }
    out
}

fn sample_frequency<R: Rng + ?Sized>(d: usize, truncation: usize, total: u128, rng: &mut R) -> Vec<i8> {
    let mut r = rng.random_range(0..total);
    let mut k = 0;
    for kk in 0..=truncation {
        let c = binomial_coeff(d, kk) << kk;
        if r < c {
            k = kk;
            break;
        }
        r -= c;
    }
    let mut v = vec![0i8; d];
    for j in sample_indices(rng, d, k) {
        v[j] = if rng.random::<bool>() { 1 } else { -1 };
    }
    v
}

/// Enumerates `C(Λ)` when it has at most `cap` members, otherwise draws
/// `n_f` distinct members uniformly.
pub fn frequency_set<R: Rng + ?Sized>(
    d: usize,
    truncation: usize,
    cap: usize,
    n_f: usize,
    rng: &mut R,
) -> Result<FrequencySet> {
    if truncation > d {
        return Err(SzneError::TruncationExceedsDimension {
            truncation,
            dimension: d,
        });
    }
    let full = frequency_set_size(d, truncation);
    if full <= cap as u128 || full <= n_f as u128 {
        return Ok(FrequencySet {
            dimension: d,
            truncation,
            members: enumerate_frequencies(d, truncation),
            full_size: saturate(full),
            sampled: false,
        });
    }
    let mut seen = HashSet::new();
    let mut members = Vec::with_capacity(n_f);
    while members.len() < n_f {
        let v = sample_frequency(d, truncation, full, rng);
        if seen.insert(v.clone()) {
            members.push(v);
        }
    }
    Ok(FrequencySet {
        dimension: d,
        truncation,
        members,
        full_size: saturate(full),
        sampled: true,
    })
}

/// One factor of a feature, acting on a single input coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    /// `cos(x)^a · sin(x)^b`
    Monomial { cos: u16, sin: u16 },
    /// `cos(k x)` or `sin(k x)`
    Harmonic { k: u32, sin: bool },
}

impl Factor {
    fn eval(&self, c: f64, s: f64, x: f64) -> f64 {
        match *self {
            Factor::Monomial { cos, sin } => c.powi(cos as i32) * s.powi(sin as i32),
            Factor::Harmonic { k, sin } => {
                if sin {
                    (k as f64 * x).sin()
                } else {
                    (k as f64 * x).cos()
                }
            }
        }
    }
}

/// A product of factors on distinct coordinates; empty means the constant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Feature {
    pub factors: Vec<(usize, Factor)>,
}

impl Feature {
    pub fn constant() -> Self {
        Self::default()
    }

    /// The trigonometric monomial `Φ_ω`.
    pub fn from_frequency(omega: &[i8]) -> Self {
        Self {
            factors: omega
                .iter()
                .enumerate()
                .filter(|(_, &w)| w != 0)
                .map(|(j, &w)| {
                    let f = if w > 0 {
                        Factor::Monomial { cos: 1, sin: 0 }
                    } else {
                        Factor::Monomial { cos: 0, sin: 1 }
                    };
                    (j, f)
                })
                .collect(),
        }
    }

    /// Number of coordinates the feature depends on.
    pub fn support(&self) -> usize {
        self.factors.len()
    }

    fn eval_cached(&self, cos: &[f64], sin: &[f64], x: &[f64]) -> f64 {
        self.factors
            .iter()
            .map(|&(j, f)| f.eval(cos[j], sin[j], x[j]))
            .product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DictionaryMode {
    Independent,
    GroupedMonomial,
    GroupedHarmonic,
}

/// How the monomial degree bound `Λ` is applied across groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    /// `Σ_s (N_s⁺ + N_s⁻) ≤ Λ`.
    #[default]
    Total,
    /// `N_s⁺ + N_s⁻ ≤ Λ` for every group separately.
    PerGroup,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureDictionary {
    pub mode: DictionaryMode,
    /// Number of input coordinates (slots or groups).
    pub dimension: usize,
    /// Slots per group (`d_s`); all ones in independent mode.
    pub group_sizes: Vec<usize>,
    pub truncation: usize,
    #[serde(default)]
    pub rule: Truncation,
    pub features: Vec<Feature>,
    /// Size of the dictionary before subsampling (saturating).
    pub full_size: u64,
}

/// Per-group monomial exponents `(a, b)` with `a + b ≤ m`.
fn monomial_options(m: usize) -> Vec<(u16, u16)> {
    let mut v = Vec::new();
    for deg in 0..=m {
        for b in 0..=deg {
            v.push(((deg - b) as u16, b as u16));
        }
    }
    v
}

impl FeatureDictionary {
    pub fn independent(set: &FrequencySet) -> Self {
        Self {
            mode: DictionaryMode::Independent,
            dimension: set.dimension,
            group_sizes: vec![1; set.dimension],
            truncation: set.truncation,
            rule: Truncation::Total,
            features: set.members.iter().map(|w| Feature::from_frequency(w)).collect(),
            full_size: set.full_size,
        }
    }

    /// Monomials `Π_s cos(x_s)^{N_s⁺} sin(x_s)^{N_s⁻}` with `N_s⁺ + N_s⁻ ≤ d_s`
    /// and the degree bound applied according to `rule`.
    pub fn grouped_monomial(group_sizes: &[usize], truncation: usize, rule: Truncation) -> Result<Self> {
        let total_slots: usize = group_sizes.iter().sum();
        if truncation > total_slots {
            return Err(SzneError::TruncationExceedsDimension {
                truncation,
                dimension: total_slots,
            });
        }
        // (feature so far, degree used) extended group by group
        let mut partial: Vec<(Vec<(usize, Factor)>, usize)> = vec![(Vec::new(), 0)];
        for (s, &ds) in group_sizes.iter().enumerate() {
            let cap = ds.min(truncation);
            let mut next = Vec::new();
            for (fac, used) in &partial {
                for (a, b) in monomial_options(cap) {
                    let deg = (a + b) as usize;
                    let new_used = match rule {
                        Truncation::Total => used + deg,
                        Truncation::PerGroup => *used,
                    };
                    if new_used > truncation {
                        continue;
                    }
                    let mut f = fac.clone();
                    if deg > 0 {
                        f.push((s, Factor::Monomial { cos: a, sin: b }));
                    }
                    next.push((f, new_used));
                }
            }
            partial = next;
        }
        let features: Vec<Feature> = partial.into_iter().map(|(factors, _)| Feature { factors }).collect();
        let full = features.len() as u64;
        Ok(Self {
            mode: DictionaryMode::GroupedMonomial,
            dimension: group_sizes.len(),
            group_sizes: group_sizes.to_vec(),
            truncation,
            rule,
            features,
            full_size: full,
        })
    }

    /// Constant plus `cos(kx_s)`, `sin(kx_s)` for the top `Λ` harmonics
    /// `k ∈ {d_s-Λ+1, …, d_s}` of each group, as single-group factors.
    pub fn grouped_harmonic(group_sizes: &[usize], truncation: usize) -> Result<Self> {
        let mut features = vec![Feature::constant()];
        for (s, &ds) in group_sizes.iter().enumerate() {
            if truncation > ds {
                return Err(SzneError::TruncationExceedsDimension {
                    truncation,
                    dimension: ds,
                });
            }
            for k in (ds + 1 - truncation.max(1))..=ds {
                if truncation == 0 {
                    break;
                }
                for sin in [false, true] {
                    features.push(Feature {
                        factors: vec![(s, Factor::Harmonic { k: k as u32, sin })],
                    });
                }
            }
        }
        let full = features.len() as u64;
        Ok(Self {
            mode: DictionaryMode::GroupedHarmonic,
            dimension: group_sizes.len(),
            group_sizes: group_sizes.to_vec(),
            truncation,
            rule: Truncation::Total,
            features,
            full_size: full,
        })
    }

    /// Keeps `n_f` features chosen uniformly without replacement (no-op when
    /// the dictionary is already that small).
    pub fn subsample<R: Rng + ?Sized>(mut self, n_f: usize, rng: &mut R) -> Self {
        if self.features.len() <= n_f {
            return self;
        }
        let mut idx: Vec<usize> = sample_indices(rng, self.features.len(), n_f).into_vec();
        idx.sort_unstable();
        self.features = idx.into_iter().map(|i| self.features[i].clone()).collect();
        self
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension {
            return Err(SzneError::DimensionMismatch {
                expected: self.dimension,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn feature_value(&self, index: usize, x: &[f64]) -> Result<f64> {
        self.check_input(x)?;
        let f = self.features.get(index).ok_or(SzneError::UnknownFeature(index))?;
        Ok(f
            .factors
            .iter()
            .map(|&(j, fac)| fac.eval(x[j].cos(), x[j].sin(), x[j]))
            .product())
    }

    /// Full feature vector `Φ(x)`.
    pub fn features_at(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let cos: Vec<f64> = x.iter().map(|v| v.cos()).collect();
        let sin: Vec<f64> = x.iter().map(|v| v.sin()).collect();
        Ok(self
            .features
            .iter()
            .map(|f| f.eval_cached(&cos, &sin, x))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use std::f64::consts::PI;

    #[test]
    fn frequency_set_examples() {
        let mut rng = stream(0, &[]);
        assert_eq!(frequency_set(2, 0, 1000, 1000, &mut rng).unwrap().members.len(), 1);
        assert_eq!(frequency_set(2, 2, 1000, 1000, &mut rng).unwrap().members.len(), 9);
        assert!(matches!(
            frequency_set(2, 3, 1000, 1000, &mut rng),
            Err(SzneError::TruncationExceedsDimension { .. })
        ));
        let big = frequency_set(100, 2, 10_000, 1000, &mut rng).unwrap();
        assert!(big.sampled);
        assert_eq!(big.members.len(), 1000);
        assert_eq!(big.full_size, 1 + 200 + 4950 * 4);
        let uniq: HashSet<_> = big.members.iter().collect();
        assert_eq!(uniq.len(), 1000);
        assert!(big.members.iter().all(|w| w.iter().filter(|&&v| v != 0).count() <= 2));
    }

    #[test]
    fn feature_value_examples() {
        let set = FrequencySet {
            dimension: 2,
            truncation: 1,
            members: vec![vec![0, 0], vec![-1, 0]],
            full_size: 5,
            sampled: true,
        };
        let d = FeatureDictionary::independent(&set);
        assert_eq!(d.feature_value(0, &[0.3, 0.4]).unwrap(), 1.0);
        assert!((d.feature_value(1, &[PI / 2.0, 1.3]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(d.feature_value(2, &[0.0, 0.0]).unwrap_err(), SzneError::UnknownFeature(2));

        let g = FeatureDictionary {
            mode: DictionaryMode::GroupedMonomial,
            dimension: 1,
            group_sizes: vec![2],
            truncation: 2,
            rule: Truncation::Total,
            features: vec![Feature {
                factors: vec![(0, Factor::Monomial { cos: 1, sin: 1 })],
            }],
            full_size: 1,
        };
        assert!((g.feature_value(0, &[PI / 4.0]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn grouped_dictionary_sizes() {
        let total = FeatureDictionary::grouped_monomial(&[99, 100], 2, Truncation::Total).unwrap();
        // degree 0: 1, degree 1: 2 groups × 2, degree 2: per group 3, cross 4
        assert_eq!(total.len(), 1 + 4 + 6 + 4);
        let per = FeatureDictionary::grouped_monomial(&[99, 100], 2, Truncation::PerGroup).unwrap();
        assert_eq!(per.len(), 36);
        let small = FeatureDictionary::grouped_monomial(&[1, 2], 2, Truncation::PerGroup).unwrap();
        assert_eq!(small.len(), 3 * 6);
        let h = FeatureDictionary::grouped_harmonic(&[100], 2).unwrap();
        assert_eq!(h.len(), 5);
        let x = [0.01];
        let v = h.features_at(&x).unwrap();
        assert!((v[3] - (100.0f64 * 0.01).cos()).abs() < 1e-15);
    }
}
