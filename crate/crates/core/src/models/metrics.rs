//! Regression quality metrics.

use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Root-mean-square error (eV).
    pub rmse: f64,
    /// Mean error, prediction minus target (eV).
    pub me: f64,
    /// Coefficient of determination; NaN when the targets have no variance.
    pub r2: f64,
    pub n: usize,
}

pub fn evaluate_metrics(predictions: &[f64], targets: &[f64]) -> Result<Metrics> {
    if predictions.len() != targets.len() {
        return Err(CoreError::InvalidArgument(format!(
            "prediction/target length mismatch: {} vs {}",
            predictions.len(),
            targets.len()
        )));
    }
    if predictions.is_empty() {
        return Err(CoreError::InvalidArgument(
            "metrics need at least one point".into(),
        ));
    }
    let n = predictions.len() as f64;
    let me = predictions
        .iter()
        .zip(targets)
        .map(|(p, t)| p - t)
        .sum::<f64>()
        / n;
    let ss_res: f64 = predictions
        .iter()
        .zip(targets)
        .map(|(p, t)| (p - t) * (p - t))
        .sum();
    let rmse = (ss_res / n).sqrt();
    let mean_t = targets.iter().sum::<f64>() / n;
    let ss_tot: f64 = targets.iter().map(|t| (t - mean_t) * (t - mean_t)).sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        f64::NAN
    };
    Ok(Metrics {
        rmse,
        me,
        r2,
        n: predictions.len(),
    })
}
