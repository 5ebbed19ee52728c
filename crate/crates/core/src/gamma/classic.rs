use super::solver::Inner;
use crate::error::{Error, Result};
use crate::graphcore::Graph;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicWitness {
    pub value: f64,
    pub weights: Vec<f64>,
    /// `Σ_{uv ∈ E} t^{−w(u)w(v)}`, to be compared with `t`.
    pub lhs: f64,
    pub slack: f64,
}

/// Per-vertex `γ(H)`: minimise `(1/t) Σ w(v)` subject to
/// `Σ_{uv ∈ E(H)} t^{−w(u)w(v)} <= t`. Meant for `t` up to about 30.
pub fn gamma_classic(h: &Graph, tol: f64) -> Result<ClassicWitness> {
    let t = h.n();
    if t < 2 {
        return Err(Error::invalid(format!("need |H| >= 2, got {t}")));
    }
    let tf = t as f64;
    let ln_t = tf.ln();
    let touched: Vec<usize> = (0..t).filter(|&v| h.degree(v) > 0).collect();
    let mut index = vec![usize::MAX; t];
    for (k, &v) in touched.iter().enumerate() {
        index[v] = k;
    }
    let inner = Inner {
        costs: vec![1.0 / tf; touched.len()],
        terms: h
            .edges()
            .into_iter()
            .map(|(u, v)| (index[u], index[v], 1.0 / tf))
            .collect(),
        ln_base: ln_t,
    };
    let sol = inner.solve();
    let mut weights = vec![0.0; t];
    for (k, &v) in touched.iter().enumerate() {
        weights[v] = sol.w[k];
    }
    let lhs: f64 = h
        .edges()
        .into_iter()
        .map(|(u, v)| (-ln_t * weights[u] * weights[v]).exp())
        .sum();
    if lhs > tf * (1.0 + tol) {
        return Err(Error::Convergence {
            iterations: 0,
            best: sol.value,
        });
    }
    Ok(ClassicWitness {
        value: weights.iter().sum::<f64>() / tf,
        weights,
        lhs,
        slack: tf - lhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_matches_symmetric_optimum() {
        let w = gamma_classic(&Graph::complete(4), 1e-9).unwrap();
        // 6 · 4^{−w²} = 4.
        let exact = (1.5f64.ln() / 4f64.ln()).sqrt();
        assert!((w.value - exact).abs() < 1e-9, "{w:?}");
        assert!(w.slack >= 0.0);
    }

    #[test]
    fn edgeless_and_constant_bound() {
        assert_eq!(gamma_classic(&Graph::empty(5), 1e-9).unwrap().value, 0.0);
        let g = Graph::petersen();
        let (t, d) = (10f64, 1.5f64);
        let w = gamma_classic(&g, 1e-9).unwrap();
        assert!(w.value <= (d.ln() / t.ln()).sqrt() + 1e-9);
        assert!(gamma_classic(&Graph::empty(1), 1e-9).is_err());
    }
}
