//! Deviation measures between two path-loss models on a distance grid.

use crate::synthesis::{evaluate_ci, CiModel};
use crate::{Error, Result};

/// RMSE/MAE between two models over `M` grid distances.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub rmse_db: f64,
    pub mae_db: f64,
    /// The distances the models were evaluated at.
    pub grid: Vec<f64>,
    /// Sample count, `grid.len()`.
    pub m: usize,
}

fn report_from_residuals(residuals: Vec<f64>, grid: Vec<f64>) -> ErrorReport {
    let m = residuals.len();
    let mae_db = residuals.iter().map(|r| r.abs()).sum::<f64>() / m as f64;
    let rmse_db = (residuals.iter().map(|r| r * r).sum::<f64>() / m as f64).sqrt();
    ErrorReport { rmse_db, mae_db, grid, m }
}

/// Evaluates both models on the grid and reports
/// `RMSE = sqrt(mean((PL_ref - PL_cand)^2))` and `MAE = mean(|PL_ref - PL_cand|)`.
pub fn compare_models(
    reference: &CiModel,
    candidate: &CiModel,
    grid: &[f64],
) -> Result<ErrorReport> {
    if grid.is_empty() {
        return Err(Error::EmptyDistanceGrid);
    }
    let residuals = grid
        .iter()
        .map(|&d| Ok(evaluate_ci(reference, d)? - evaluate_ci(candidate, d)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(report_from_residuals(residuals, grid.to_vec()))
}

/// Diagnostic variant: compares a model against raw `(distance, pl_db)`
/// points instead of a second fitted model.
pub fn compare_points(reference: &CiModel, points: &[(f64, f64)]) -> Result<ErrorReport> {
    if points.is_empty() {
        return Err(Error::EmptyDistanceGrid);
    }
    let residuals = points
        .iter()
        .map(|&(d, pl)| Ok(evaluate_ci(reference, d)? - pl))
        .collect::<Result<Vec<f64>>>()?;
    Ok(report_from_residuals(
        residuals,
        points.iter().map(|p| p.0).collect(),
    ))
}
