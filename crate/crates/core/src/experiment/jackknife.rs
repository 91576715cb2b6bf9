use crate::error::{Error, Result};

/// Leave-one-out jackknife over equally sized batch estimates. Returns the
/// mean and its standard error.
pub fn jackknife(batch_rates: &[f64]) -> Result<(f64, f64)> {
    let b = batch_rates.len();
    if b < 2 {
        return Err(Error::Parameter(format!("jackknife needs at least 2 batches, got {b}")));
    }
    let total: f64 = batch_rates.iter().sum();
    let mean = total / b as f64;
    let loo: Vec<f64> = batch_rates
        .iter()
        .map(|r| (total - r) / (b - 1) as f64)
        .collect();
    let loo_mean = loo.iter().sum::<f64>() / b as f64;
    let ss: f64 = loo.iter().map(|t| (t - loo_mean).powi(2)).sum();
    Ok((mean, ((b - 1) as f64 / b as f64 * ss).sqrt()))
}

/// Jackknife standard error of a general estimator from its `b`
/// leave-one-out values.
pub fn jackknife_se(leave_one_out: &[f64]) -> f64 {
    let b = leave_one_out.len() as f64;
    let mean = leave_one_out.iter().sum::<f64>() / b;
    let ss: f64 = leave_one_out.iter().map(|t| (t - mean).powi(2)).sum();
    ((b - 1.0) / b * ss).sqrt()
}
