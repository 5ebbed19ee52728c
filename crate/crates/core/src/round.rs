//! Rounding that snaps values within float noise of an integer.

const ROUND_TOL: f64 = 1e-9;

pub(crate) fn near_int(x: f64) -> Option<f64> {
    let r = x.round();
    ((x - r).abs() <= ROUND_TOL * x.abs().max(1.0)).then_some(r)
}

pub(crate) fn floor_tol(x: f64) -> f64 {
    near_int(x).unwrap_or(x.floor())
}

pub(crate) fn ceil_tol(x: f64) -> f64 {
    near_int(x).unwrap_or(x.ceil())
}
