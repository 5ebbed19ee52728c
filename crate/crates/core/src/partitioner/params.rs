use super::BlockedPartitionParams;
use crate::error::{Error, Result};
use crate::gamma::{gamma_inequality_lhs, WeightedPartition, SLACK_TOL};
use crate::graphcore::Graph;
use crate::round::{ceil_tol, floor_tol};
use serde::Serialize;

/// Candidate values for `δ` and `η`, largest first.
const GRID: [f64; 12] = [
    0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.01, 0.005, 0.0025, 0.001, 0.0005, 0.0001,
];

/// Parameters for the book `K*_{ft/ln t, t}`. Counts are kept as floats
/// because `t` may be astronomically large.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BipartiteParams {
    pub t: f64,
    pub f: f64,
    pub p: f64,
    pub epsilon: f64,
    pub q: f64,
    pub delta: f64,
    pub eta: f64,
    pub omega: f64,
    pub m: f64,
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub l: f64,
    /// `l (a_1 b_1 + a_2 b_2)`.
    pub vertices_needed: f64,
    /// `2 t sqrt(f / ln(1/q))`.
    pub vertex_budget: f64,
}

impl BipartiteParams {
    pub fn blocked(&self) -> Result<BlockedPartitionParams> {
        let conv = |name: &str, x: f64| {
            if x > 1e9 {
                Err(Error::Capacity(format!("{name} = {x} is too large to build")))
            } else {
                Ok(x as usize)
            }
        };
        Ok(BlockedPartitionParams {
            a: vec![conv("a1", self.a1)?, conv("a2", self.a2)?],
            b: vec![conv("b1", self.b1)?, conv("b2", self.b2)?],
            l: conv("l", self.l)?,
            omega: self.omega,
            eta: self.eta,
        })
    }
}

/// Instantiates the blocked partition for a book with `t` large vertices
/// and `ft / ln t` small ones.
pub fn bipartite_params(t: f64, f: f64, p: f64, epsilon: f64) -> Result<BipartiteParams> {
    let ln_t = t.ln();
    if !(f > 1.0 && f < ln_t) {
        return Err(Error::invalid(format!("need 1 < f < ln t, got f = {f}, ln t = {ln_t}")));
    }
    if !(epsilon > 0.0 && epsilon < p && p < 1.0 - epsilon) {
        return Err(Error::invalid(format!("need epsilon < p < 1 - epsilon, got p = {p}")));
    }
    let q = 1.0 - p;
    let eta_ok = |eta: f64| ((q - epsilon).ln() - (1.0 - eta).ln()) / q.ln() > 1.0 / (1.0 - epsilon);
    let target = (1.0 + epsilon / 2.0) * (1.0 - epsilon);
    // Largest eta (then largest delta) meeting both inequalities.
    let (eta, delta) = GRID
        .iter()
        .copied()
        .filter(|&e| eta_ok(e))
        .find_map(|e| {
            GRID.iter()
                .copied()
                .find(|&d| (1.0 - e) * (1.0 - d).powi(3) >= target)
                .map(|d| (e, d))
        })
        .ok_or_else(|| {
            Error::RegimeTooSmall("no grid values of eta and delta satisfy both inequalities".into())
        })?;
    let shrink = (1.0 + delta) * (1.0 - delta / 2.0);
    // Least integer omega with shrink * (1 - 4 / (omega eta)) > 1.
    let omega_min = 4.0 / (eta * (1.0 - 1.0 / shrink));
    let omega = (omega_min.floor() + 1.0).max(2.0);
    let m = f.powf(0.75);
    let a1 = floor_tol((1.0 + delta) * f * t / ln_t);
    let a2 = floor_tol((1.0 + delta) * t);
    let b1 = floor_tol(ln_t / m);
    let b2 = floor_tol(f / m);
    let l = floor_tol((1.0 - delta) * m / (f * (1.0 / q).ln()).sqrt());
    for (name, v) in [("a1", a1), ("a2", a2), ("b1", b1), ("b2", b2), ("l", l)] {
        if v < 1.0 {
            return Err(Error::RegimeTooSmall(format!("{name} = {v} after flooring")));
        }
    }
    Ok(BipartiteParams {
        t,
        f,
        p,
        epsilon,
        q,
        delta,
        eta,
        omega,
        m,
        a1,
        a2,
        b1,
        b2,
        l,
        vertices_needed: l * (a1 * b1 + a2 * b2),
        vertex_budget: 2.0 * t * (f / (1.0 / q).ln()).sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedParams {
    /// Blocked-partition parameters over the non-terrible parts only.
    pub params: BlockedPartitionParams,
    /// Index into the weighted partition for each entry of `params`.
    pub used_parts: Vec<usize>,
    pub terrible: Vec<usize>,
    pub delta: f64,
    pub l: usize,
    /// `sqrt(log_{1/q} d)`.
    pub scale: f64,
    pub w_total: f64,
    pub rounded_weights: Vec<f64>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub lhs_original: f64,
    pub lhs_rounded: f64,
    /// `Σ l a_i b_i` against `w sqrt(log_{1/q} d)`.
    pub vertices_needed: usize,
    pub vertex_budget: f64,
}

/// Instantiates the blocked partition for a weighted partition of `h`
/// satisfying the Gamma inequality with base `d`.
pub fn weighted_params(
    h: &Graph,
    wp: &WeightedPartition,
    d: f64,
    p: f64,
    epsilon: f64,
) -> Result<WeightedParams> {
    let t = h.n();
    wp.validate(t)?;
    if !(epsilon > 0.0 && epsilon < p && p < 1.0 - epsilon) {
        return Err(Error::invalid(format!("need epsilon < p < 1 - epsilon, got p = {p}")));
    }
    if wp.weights.iter().all(|&w| w == 0.0) {
        return Err(Error::Degenerate("all weights are zero; no parts to build".into()));
    }
    let lhs_original = gamma_inequality_lhs(h, wp, d)?;
    if lhs_original > 1.0 + SLACK_TOL {
        return Err(Error::invalid(format!(
            "weighted partition violates the Gamma inequality (lhs {lhs_original})"
        )));
    }
    let q = 1.0 - p;
    let delta = epsilon / 8.0;
    let scale = (d.ln() / (1.0 / q).ln()).sqrt();
    let w_total: f64 = wp.parts.iter().zip(&wp.weights).map(|(s, w)| s.len() as f64 * w).sum();
    let l = ceil_tol(delta * delta / 8.0 * w_total * scale / t as f64).max(1.0) as usize;
    let r = wp.r();
    let mut b = vec![0usize; r];
    let mut rounded = vec![0.0; r];
    let mut terrible = Vec::new();
    for i in 0..r {
        let bi = ceil_tol((1.0 - delta) * wp.weights[i] * scale / l as f64);
        rounded[i] = bi * l as f64 / ((1.0 - delta) * scale);
        b[i] = bi as usize;
        if (wp.parts[i].len() as f64) < 4.0 / delta {
            terrible.push(i);
            rounded[i] = 0.0;
            b[i] = 0;
        }
    }
    // Raising weights keeps the inequality; terrible parts are dropped from it.
    let check = WeightedPartition::new(
        wp.parts.clone(),
        (0..r).map(|i| if terrible.contains(&i) { wp.weights[i] } else { rounded[i] }).collect(),
    );
    let lhs_rounded = gamma_inequality_lhs(h, &check, d)?;
    if lhs_rounded > lhs_original + SLACK_TOL {
        return Err(Error::Internal(format!(
            "rounding raised the Gamma inequality from {lhs_original} to {lhs_rounded}"
        )));
    }
    let a: Vec<usize> = wp
        .parts
        .iter()
        .map(|s| ceil_tol(s.len() as f64 * (1.0 + delta / 4.0)) as usize)
        .collect();
    let used_parts: Vec<usize> = (0..r).filter(|&i| b[i] > 0).collect();
    if used_parts.is_empty() {
        return Err(Error::RegimeTooSmall(format!(
            "every part is terrible (fewer than {} vertices) or has b_i = 0",
            4.0 / delta
        )));
    }
    let vertices_needed: usize = used_parts.iter().map(|&i| l * a[i] * b[i]).sum();
    let vertex_budget = w_total * scale;
    if vertices_needed as f64 > vertex_budget * (1.0 + 1e-12) {
        return Err(Error::RegimeTooSmall(format!(
            "l * sum a_i b_i = {vertices_needed} exceeds w * sqrt(log d) = {vertex_budget}"
        )));
    }
    let eta = epsilon * epsilon / 4.0;
    Ok(WeightedParams {
        params: BlockedPartitionParams {
            a: used_parts.iter().map(|&i| a[i].max(2)).collect(),
            b: used_parts.iter().map(|&i| b[i]).collect(),
            l,
            omega: 8.0 * r as f64 / (eta * delta),
            eta,
        },
        used_parts,
        terrible,
        delta,
        l,
        scale,
        w_total,
        rounded_weights: rounded,
        a,
        b,
        lhs_original,
        lhs_rounded,
        vertices_needed,
        vertex_budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn bipartite_huge_t() {
        let t = 100f64.exp();
        let bp = bipartite_params(t, 16.0, 0.715, 0.05).unwrap();
        assert!(bp.l >= 1.0 && bp.b1 >= 1.0 && bp.b2 >= 1.0);
        assert_eq!(bp.b2, 2.0);
        let slack = (1.0 + bp.delta).powi(2);
        assert!(bp.vertices_needed <= bp.vertex_budget * slack);
        assert!((1.0 + bp.delta) * (1.0 - bp.delta / 2.0) * (1.0 - 4.0 / (bp.omega * bp.eta)) > 1.0);
    }

    #[test]
    fn bipartite_rejects_large_f() {
        assert!(matches!(
            bipartite_params(1000.0, 7.0, 0.715, 0.05),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn b2_is_fourth_root() {
        let t = 1e30f64;
        for f in [2.0, 5.0, 16.0, 30.0, 60.0] {
            if let Ok(bp) = bipartite_params(t, f, 0.715, 0.05) {
                assert_eq!(bp.b2, floor_tol(f64::powf(f, 0.25)));
            }
        }
    }

    #[test]
    fn weighted_degenerate_and_terrible() {
        let h = Graph::empty(5);
        let wp = WeightedPartition::single(5, 0.0);
        assert!(matches!(weighted_params(&h, &wp, 2.0, 0.715, 0.08), Err(Error::Degenerate(_))));

        let h = Graph::gnp(200, 0.3, &mut rng_from_seed(1));
        let wp = WeightedPartition::single(200, 1.0);
        let d = 9f64.exp();
        let out = weighted_params(&h, &wp, d, 0.715, 0.08);
        // 200 < 4 / delta = 400 vertices, so the only part is terrible.
        assert!(matches!(out, Err(Error::RegimeTooSmall(_))));
    }
}
