use super::{connectivity, edge_triangle_count, Graph};
use crate::error::{Error, Result};
use num_rational::Ratio;
use serde::Serialize;

type Q = Ratio<i64>;

/// Membership in the class `E(m, k)` (graphs with `|G| >= m` and
/// `e(G) >= m|G| - km`) plus the necessary properties of its minor-minimal
/// members, each reported on its own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnkReport {
    pub member: bool,
    pub order_at_least_m_plus_1: bool,
    pub edges_at_most_m_n_minus_mk_plus_1: bool,
    pub min_degree_above_m: bool,
    pub min_degree_below_2m: bool,
    pub connectivity_above_k: bool,
    /// Every edge in more than `m - 1` triangles.
    pub triangles_more_than_m_minus_1: bool,
    /// Every edge in at least `m - 1` triangles (the weaker reading).
    pub triangles_at_least_m_minus_1: bool,
    pub min_degree: usize,
    pub connectivity: usize,
    pub min_edge_triangles: Option<usize>,
}

impl EnkReport {
    pub fn minimality_properties_hold(&self) -> bool {
        self.order_at_least_m_plus_1
            && self.edges_at_most_m_n_minus_mk_plus_1
            && self.min_degree_above_m
            && self.min_degree_below_2m
            && self.connectivity_above_k
            && self.triangles_more_than_m_minus_1
    }
}

pub fn enk_check(g: &Graph, m: Q, k: Q) -> Result<EnkReport> {
    let one = Q::from_integer(1);
    if !(Q::from_integer(2) * m > k && k > one) {
        return Err(Error::invalid(format!("need 2m > k > 1, got m = {m}, k = {k}")));
    }
    let n = Q::from_integer(g.n() as i64);
    let e = Q::from_integer(g.m() as i64);
    let delta = g.min_degree();
    let kappa = connectivity(g);
    let min_tri = g
        .edges()
        .into_iter()
        .map(|(u, v)| edge_triangle_count(g, u, v).expect("edge"))
        .min();
    let dq = Q::from_integer(delta as i64);
    let tri_ok = |strict: bool| {
        min_tri.is_none_or(|c| {
            let c = Q::from_integer(c as i64);
            if strict {
                c > m - one
            } else {
                c >= m - one
            }
        })
    };
    Ok(EnkReport {
        member: n >= m && e >= m * n - k * m,
        order_at_least_m_plus_1: n >= m + one,
        edges_at_most_m_n_minus_mk_plus_1: e <= m * n - m * k + one,
        min_degree_above_m: g.n() > 0 && dq > m,
        min_degree_below_2m: g.n() > 0 && dq < Q::from_integer(2) * m,
        connectivity_above_k: Q::from_integer(kappa as i64) > k,
        triangles_more_than_m_minus_1: tri_ok(true),
        triangles_at_least_m_minus_1: tri_ok(false),
        min_degree: delta,
        connectivity: kappa,
        min_edge_triangles: min_tri,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = enk_check(&Graph::complete(10), Q::from_integer(4), Q::from_integer(2)).unwrap();
        assert!(r.member);
        let r = enk_check(&Graph::empty(5), Q::from_integer(1), Q::new(3, 2)).unwrap();
        assert!(!r.member);
        let r = enk_check(&Graph::cycle(5), Q::from_integer(2), Q::new(3, 2)).unwrap();
        assert!(!r.min_degree_above_m);
        assert!(!r.minimality_properties_hold());
        assert!(enk_check(&Graph::cycle(5), Q::from_integer(1), Q::from_integer(3)).is_err());
        assert!(enk_check(&Graph::cycle(5), Q::from_integer(2), Q::from_integer(1)).is_err());
    }
}
