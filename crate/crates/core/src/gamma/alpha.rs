use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Alpha {
    pub alpha: f64,
    pub p_star: f64,
}

/// `p / (2 sqrt(ln(1/(1-p))))`, extended by 0 at the endpoints.
pub fn alpha_objective(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    p / (2.0 * (-(-p).ln_1p()).sqrt())
}

/// Maximiser of [`alpha_objective`] on `(0, 1)`: best point of a 10^4 grid,
/// refined by golden-section search between its neighbours.
pub fn alpha() -> Alpha {
    const N: usize = 10_000;
    let grid = |i: usize| i as f64 / N as f64;
    let best = (1..N)
        .max_by(|&a, &b| alpha_objective(grid(a)).total_cmp(&alpha_objective(grid(b))))
        .expect("nonempty grid");
    let (mut lo, mut hi) = (grid(best - 1), grid(best + 1));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (alpha_objective(x1), alpha_objective(x2));
    while hi - lo > 1e-13 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = alpha_objective(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = alpha_objective(x1);
        }
    }
    let p_star = (lo + hi) / 2.0;
    Alpha {
        alpha: alpha_objective(p_star),
        p_star,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digits() {
        let a = alpha();
        assert!((a.alpha - 0.319).abs() < 1e-3, "{a:?}");
        assert!((a.p_star - 0.715).abs() < 5e-3, "{a:?}");
        assert!((alpha_objective(0.5) - 0.5 / (2.0 * 2f64.ln().sqrt())).abs() < 1e-15);
        assert!(alpha_objective(1e-12) < 1e-5);
        assert!(alpha_objective(1.0 - 1e-12) < 0.1);
    }
}
