use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailBounds {
    pub mu: f64,
    pub a: f64,
    /// Bound on `P(X > μ + a)`: `exp(-a²/2μ + a³/2μ²)`.
    pub upper_general: f64,
    /// `exp(-a²/4μ)`, only when `a < μ/2`.
    pub upper_small_a: Option<f64>,
    /// Bound on `P(X < μ - a)`: `exp(-a²/2μ)`.
    pub lower: f64,
}

/// Chernoff bounds for a sum of independent indicators with mean `mu`.
pub fn chernoff_tails(mu: f64, a: f64) -> Result<TailBounds> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::invalid(format!("mu = {mu} must be positive")));
    }
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::invalid(format!("a = {a} must be nonnegative")));
    }
    Ok(TailBounds {
        mu,
        a,
        upper_general: (-a * a / (2.0 * mu) + a.powi(3) / (2.0 * mu * mu)).exp(),
        upper_small_a: (a < mu / 2.0).then(|| (-a * a / (4.0 * mu)).exp()),
        lower: (-a * a / (2.0 * mu)).exp(),
    })
}
