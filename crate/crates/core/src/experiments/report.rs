use serde::{Deserialize, Serialize};

use crate::error::{Result, SzneError};
use crate::mitigation::MitigationRun;

/// Residual statistics with a Gaussian kernel density estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub count: usize,
    pub mse: f64,
    pub mean: f64,
    pub bandwidth: f64,
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
}

impl ResidualReport {
    /// Grid location of the density maximum.
    pub fn peak(&self) -> f64 {
        self.grid
            .iter()
            .zip(&self.density)
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map_or(f64::NAN, |(g, _)| *g)
    }
}

pub const KDE_GRID_POINTS: usize = 256;

pub fn residual_report(runs: &[MitigationRun]) -> Result<ResidualReport> {
    let residuals = runs
        .iter()
        .map(|r| r.residual.ok_or(SzneError::NoIdealReference))
        .collect::<Result<Vec<f64>>>()?;
    residual_stats(&residuals, KDE_GRID_POINTS)
}

/// Scott's rule bandwidth `σ n^{-1/5}`; a degenerate sample gets a tiny
/// bandwidth so the curve is a spike at the common value.
pub fn residual_stats(residuals: &[f64], grid_points: usize) -> Result<ResidualReport> {
    if residuals.is_empty() {
        return Err(SzneError::NoIdealReference);
    }
    let n = residuals.len() as f64;
    let mean = residuals.iter().sum::<f64>() / n;
    let mse = residuals.iter().map(|r| r * r).sum::<f64>() / n;
    let var = if residuals.len() > 1 {
        residuals.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let sigma = var.sqrt();
    let bandwidth = if sigma > 0.0 {
        sigma * n.powf(-0.2)
    } else {
        1e-6 * mean.abs().max(1.0)
    };
    let lo = residuals.iter().cloned().fold(f64::INFINITY, f64::min) - 3.0 * bandwidth;
    let hi = residuals.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 3.0 * bandwidth;
    let pts = grid_points.max(2);
    let grid: Vec<f64> = (0..pts).map(|k| lo + (hi - lo) * k as f64 / (pts - 1) as f64).collect();
    let norm = 1.0 / (n * bandwidth * (2.0 * std::f64::consts::PI).sqrt());
    let density = grid
        .iter()
        .map(|g| {
            norm * residuals
                .iter()
                .map(|r| (-0.5 * ((g - r) / bandwidth).powi(2)).exp())
                .sum::<f64>()
        })
        .collect();
    Ok(ResidualReport {
        count: residuals.len(),
        mse,
        mean,
        bandwidth,
        grid,
        density,
    })
}
