use crate::error::{Error, Result};
use crate::graphcore::{Graph, VertexSet};
use serde::{Deserialize, Serialize};

/// Partition of `V(H)` into parts with nonnegative weights. Empty parts are
/// allowed and contribute nothing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedPartition {
    pub parts: Vec<VertexSet>,
    pub weights: Vec<f64>,
}

impl WeightedPartition {
    pub fn new(parts: Vec<VertexSet>, weights: Vec<f64>) -> Self {
        WeightedPartition { parts, weights }
    }

    /// Part index of every vertex, from a label vector.
    pub fn from_labels(labels: &[usize], weights: Vec<f64>) -> Self {
        let mut parts = vec![VertexSet::new(); weights.len()];
        for (v, &p) in labels.iter().enumerate() {
            parts[p].insert(v);
        }
        WeightedPartition { parts, weights }
    }

    pub fn single(t: usize, weight: f64) -> Self {
        WeightedPartition {
            parts: vec![(0..t).collect()],
            weights: vec![weight],
        }
    }

    pub fn r(&self) -> usize {
        self.parts.len()
    }

    pub fn validate(&self, t: usize) -> Result<()> {
        if self.parts.len() != self.weights.len() {
            return Err(Error::MalformedPartition("one weight per part required".into()));
        }
        if self.weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::MalformedPartition("weights must be nonnegative reals".into()));
        }
        let mut seen = vec![false; t];
        for p in &self.parts {
            for v in p.iter() {
                if v >= t || seen[v] {
                    return Err(Error::MalformedPartition(format!(
                        "vertex {v} out of range or in two parts"
                    )));
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::MalformedPartition("parts do not cover V(H)".into()));
        }
        Ok(())
    }

    /// `w = Σ |P_i| w_i`.
    pub fn total_weight(&self) -> f64 {
        self.parts
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| p.len() as f64 * w)
            .sum()
    }

    /// Average weight `w / t`.
    pub fn average(&self, t: usize) -> f64 {
        self.total_weight() / t as f64
    }

    /// Edge counts `e(P_i, P_j)` for `i <= j`, as a full symmetric matrix.
    pub fn edge_matrix(&self, h: &Graph) -> Vec<Vec<usize>> {
        let r = self.r();
        let mut part = vec![0; h.n()];
        for (i, p) in self.parts.iter().enumerate() {
            for v in p.iter() {
                part[v] = i;
            }
        }
        let mut e = vec![vec![0; r]; r];
        for (u, v) in h.edges() {
            let (a, b) = (part[u].min(part[v]), part[u].max(part[v]));
            e[a][b] += 1;
            if a != b {
                e[b][a] += 1;
            }
        }
        e
    }
}

/// `Σ_{i<=j} d^{−w_i w_j} e(P_i, P_j) / t`, the Gamma inequality in edge-count
/// form. Requires `d > 1`.
pub fn gamma_inequality_lhs(h: &Graph, wp: &WeightedPartition, d: f64) -> Result<f64> {
    if !(d > 1.0) {
        return Err(Error::invalid(format!("Gamma inequality needs d > 1, got {d}")));
    }
    wp.validate(h.n())?;
    let t = h.n() as f64;
    let e = wp.edge_matrix(h);
    let ln_d = d.ln();
    let mut sum = 0.0;
    for i in 0..wp.r() {
        for j in i..wp.r() {
            if e[i][j] > 0 {
                sum += e[i][j] as f64 * (-ln_d * wp.weights[i] * wp.weights[j]).exp();
            }
        }
    }
    Ok(sum / t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let wp = WeightedPartition::single(5, 0.7);
        assert_eq!(gamma_inequality_lhs(&Graph::empty(5), &wp, 2.0).unwrap(), 0.0);

        // C_6: t = 6, e = 6 = t·d with d = 1 is rejected; use K_4 with d = 3/2.
        let k4 = Graph::complete(4);
        let wp = WeightedPartition::single(4, 1.0);
        assert!((gamma_inequality_lhs(&k4, &wp, 1.5).unwrap() - 1.0).abs() < 1e-15);
        let wp = WeightedPartition::new(vec![vec![0, 1].into(), vec![2, 3].into()], vec![1.0, 1.0]);
        assert!((gamma_inequality_lhs(&k4, &wp, 1.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(gamma_inequality_lhs(&k4, &wp, 1.0).is_err());

        let overlap = WeightedPartition::new(vec![vec![0, 1].into(), vec![1, 2, 3].into()], vec![1.0, 1.0]);
        assert!(gamma_inequality_lhs(&k4, &overlap, 2.0).is_err());
    }
}
