use crate::error::{Error, Result};

/// Least-squares slope of `ln value` against `ln n`.
pub fn fit_growth(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 4 {
        return Err(Error::Degenerate(format!("need at least 4 points, got {}", points.len())));
    }
    if let Some(&(n, v)) = points.iter().find(|&&(n, v)| !(n > 0.0 && v > 0.0) || !n.is_finite() || !v.is_finite()) {
        return Err(Error::Degenerate(format!("non-positive point ({n}, {v})")));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, v)| (n.ln(), v.ln())).collect();
    let count = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx <= f64::EPSILON {
        return Err(Error::Degenerate("all points share the same n".into()));
    }
    Ok(sxy / sxx)
}
