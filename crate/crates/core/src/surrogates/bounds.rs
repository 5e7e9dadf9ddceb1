//! Closed-form sample-size and error bounds. These are calculators only;
//! the constants are far too loose to check empirically.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SzneError};

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(SzneError::InvalidInput(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

fn probability(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(SzneError::InvalidInput(format!("{name} must lie in (0, 1), got {v}")));
    }
    Ok(())
}

/// `n_j ≥ (64 B² M² / 3) (d e / Λ)^{4Λ} ln(1/δ) / 9`.
pub fn theorem1_training_size(b: f64, m: f64, d: usize, truncation: usize, delta: f64) -> Result<f64> {
    positive("B", b)?;
    positive("M", m)?;
    probability("delta", delta)?;
    if truncation == 0 || d == 0 {
        return Err(SzneError::InvalidInput("d and truncation must be positive".into()));
    }
    let ratio = d as f64 * E / truncation as f64;
    Ok(64.0 * b * b * m * m / 3.0 * ratio.powi(4 * truncation as i32) * (1.0 / delta).ln() / 9.0)
}

/// `ζ² + 4 L² u B² ln(40) / M`.
pub fn theorem1_bound(zeta_sq: f64, lipschitz: f64, u: usize, b: f64, m: f64) -> Result<f64> {
    positive("M", m)?;
    Ok(zeta_sq + 4.0 * lipschitz * lipschitz * u as f64 * b * b * 40f64.ln() / m)
}

/// `n_j ≥ |C| (2 B² 9^K / ε) ln(2|C| / δ)`.
pub fn lemma1_training_size(c_size: f64, b: f64, locality: usize, eps: f64, delta: f64) -> Result<f64> {
    positive("|C|", c_size)?;
    positive("epsilon", eps)?;
    probability("delta", delta)?;
    Ok(c_size * (2.0 * b * b * 9f64.powi(locality as i32) / eps) * (2.0 * c_size / delta).ln())
}

/// `(Λ_C, Λ_p) = (4C/ε, ln(2B/√ε) / (2(p + p_Z)))`.
pub fn lemma1_cutoffs(gradient_bound: f64, b: f64, p: f64, p_z: f64, eps: f64) -> Result<(f64, f64)> {
    positive("epsilon", eps)?;
    positive("p + p_Z", p + p_z)?;
    Ok((
        4.0 * gradient_bound / eps,
        (2.0 * b / eps.sqrt()).ln() / (2.0 * (p + p_z)),
    ))
}

fn check_lemma2(q: f64, r: f64) -> Result<f64> {
    let qr = q * (1.0 + r);
    if !(qr > 0.0) {
        return Err(SzneError::InvalidInput(format!("q(1+R) must be positive, got {qr}")));
    }
    if qr >= 1.0 / E {
        return Err(SzneError::AssumptionViolated(format!("q(1+R) = {qr} ≥ 1/e")));
    }
    Ok(qr)
}

/// `n_j = (1/(q(1+R)))^{4Λ} ln(1/δ) / 9`.
pub fn lemma2_training_size(q: f64, r: f64, truncation: usize, delta: f64) -> Result<f64> {
    probability("delta", delta)?;
    let qr = check_lemma2(q, r)?;
    Ok((1.0 / qr).powi(4 * truncation as i32) * (1.0 / delta).ln() / 9.0)
}

/// `ε = 16 B² (d e q (1+R) / Λ)^{2Λ}`.
pub fn lemma2_error(b: f64, d: usize, q: f64, r: f64, truncation: usize) -> Result<f64> {
    let qr = check_lemma2(q, r)?;
    if truncation == 0 {
        return Err(SzneError::InvalidInput("truncation must be positive".into()));
    }
    Ok(16.0 * b * b * (d as f64 * E * qr / truncation as f64).powi(2 * truncation as i32))
}

/// Inputs for [`theory_bounds`]; each bound is computed when its inputs are present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TheoryParams {
    pub b: f64,
    pub m: Option<f64>,
    pub d: Option<usize>,
    pub truncation: Option<usize>,
    pub delta: Option<f64>,
    pub u: Option<usize>,
    pub lipschitz: Option<f64>,
    pub zeta_sq: Option<f64>,
    pub q: Option<f64>,
    pub r: Option<f64>,
    pub gradient_bound: Option<f64>,
    pub eps: Option<f64>,
    pub locality: Option<usize>,
    pub frequency_count: Option<f64>,
    pub p: Option<f64>,
    pub p_z: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TheoryBounds {
    pub theorem1_training_size: Option<f64>,
    pub theorem1_shot_term: Option<f64>,
    pub theorem1_bound: Option<f64>,
    pub lemma1_training_size: Option<f64>,
    pub lambda_c: Option<f64>,
    pub lambda_p: Option<f64>,
    pub lemma2_training_size: Option<f64>,
    pub lemma2_error: Option<f64>,
}

pub fn theory_bounds(p: &TheoryParams) -> Result<TheoryBounds> {
    positive("B", p.b)?;
    if p.eps == Some(0.0) {
        return Err(SzneError::InvalidInput("epsilon = 0 demands infinitely many samples".into()));
    }
    let mut out = TheoryBounds::default();
    if let (Some(m), Some(d), Some(l), Some(delta)) = (p.m, p.d, p.truncation, p.delta) {
        out.theorem1_training_size = Some(theorem1_training_size(p.b, m, d, l, delta)?);
    }
    if let (Some(m), Some(u), Some(lip)) = (p.m, p.u, p.lipschitz) {
        out.theorem1_shot_term = Some(theorem1_bound(0.0, lip, u, p.b, m)?);
        out.theorem1_bound = Some(theorem1_bound(p.zeta_sq.unwrap_or(0.0), lip, u, p.b, m)?);
    }
    if let (Some(c), Some(k), Some(eps), Some(delta)) = (p.frequency_count, p.locality, p.eps, p.delta) {
        out.lemma1_training_size = Some(lemma1_training_size(c, p.b, k, eps, delta)?);
    }
    if let (Some(g), Some(pp), Some(pz), Some(eps)) = (p.gradient_bound, p.p, p.p_z, p.eps) {
        let (lc, lp) = lemma1_cutoffs(g, p.b, pp, pz, eps)?;
        out.lambda_c = Some(lc);
        out.lambda_p = Some(lp);
    }
    if let (Some(q), Some(r), Some(l)) = (p.q, p.r, p.truncation) {
        if let Some(delta) = p.delta {
            out.lemma2_training_size = Some(lemma2_training_size(q, r, l, delta)?);
        }
        if let Some(d) = p.d {
            out.lemma2_error = Some(lemma2_error(p.b, d, q, r, l)?);
        }
    }
    Ok(out)
}
