use crate::error::{Error, Result};
use crate::graphcore::{contract, ContractionTrace, Graph, VertexSet};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionMinor {
    #[serde(skip)]
    pub minor: Graph,
    pub trace: ContractionTrace,
    /// Source vertices behind each vertex of `minor`.
    pub branch_sets: Vec<VertexSet>,
    /// Source label of the `A`-vertex whose neighbourhood was returned.
    pub stopped_at: usize,
    /// `e(G_i[B])` before each step.
    pub b_edges: Vec<usize>,
    /// `A`-vertices with fewer than `ηm` neighbours in `B`.
    pub below_eta_m: usize,
}

/// Contracts `A`-vertices into minimum-degree vertices of their
/// neighbourhoods in `B` until some neighbourhood is nearly complete:
/// `δ(G_i[N(a)]) >= (1 − ε − 1/m) d(a)`. The returned minor is that
/// neighbourhood.
pub fn bipartite_contraction_minor(
    g: &Graph,
    part_a: &VertexSet,
    part_b: &VertexSet,
    m: f64,
    eta: f64,
    epsilon: f64,
) -> Result<ContractionMinor> {
    if !part_a.is_disjoint(part_b) {
        return Err(Error::invalid("A and B must be disjoint"));
    }
    if part_a.iter().chain(part_b.iter()).any(|v| v >= g.n()) {
        return Err(Error::invalid("A or B has a vertex out of range"));
    }
    let below_eta_m = part_a
        .iter()
        .filter(|&a| (g.degree_into(a, part_b) as f64) < eta * m)
        .count();
    let factor = 1.0 - epsilon - 1.0 / m;
    let mut cur = g.clone();
    // Current label -> source label.
    let mut label: Vec<usize> = (0..g.n()).collect();
    let mut trace = ContractionTrace::new();
    let mut b_edges = Vec::new();
    let in_b = |lab: &[usize], x: usize| part_b.contains(lab[x]);
    for a_src in part_a.iter() {
        let a = label.iter().position(|&s| s == a_src).expect("A-vertices are never absorbed twice");
        let nb: VertexSet = cur.neighbors(a).iter().copied().filter(|&x| in_b(&label, x)).collect();
        let bset: VertexSet = (0..cur.n()).filter(|&x| in_b(&label, x)).collect();
        b_edges.push(cur.induced_edge_count(&bset));
        if nb.is_empty() {
            continue;
        }
        let local = cur.induced(&nb);
        let da = nb.len() as f64;
        if local.min_degree() as f64 >= factor * da {
            let keep = nb.clone();
            trace.deleted = (0..cur.n()).filter(|x| !keep.contains(*x)).collect();
            let sets = trace.branch_sets(g.n())?;
            return Ok(ContractionMinor {
                minor: local,
                branch_sets: sets.into_iter().map(VertexSet::from).collect(),
                trace,
                stopped_at: a_src,
                b_edges,
                below_eta_m,
            });
        }
        // Lowest-degree vertex of the neighbourhood, lowest label on ties.
        let (bi, _) = (0..local.n())
            .map(|i| (i, local.degree(i)))
            .min_by_key(|&(i, d)| (d, i))
            .expect("neighbourhood is nonempty");
        let b = nb.as_slice()[bi];
        cur = contract(&cur, b, a)?;
        trace.push_contraction(b, a);
        label.remove(a);
    }
    let bset: VertexSet = (0..cur.n()).filter(|&x| in_b(&label, x)).collect();
    Err(Error::ConstructionFailed {
        stage: "bipartite_contraction_minor".into(),
        attempts: part_a.len(),
        diagnostics: format!(
            "A exhausted without meeting the stopping rule; e(G_i[B]) = {}",
            cur.induced_edge_count(&bset)
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_bipartite_densifies() {
        let (na, nb) = (40, 8);
        let g = Graph::complete_bipartite(na, nb);
        let a: VertexSet = (0..na).collect();
        let b: VertexSet = (na..na + nb).collect();
        let out = bipartite_contraction_minor(&g, &a, &b, 8.0, 1.0, 0.1).unwrap();
        assert!(out.trace.certifies(&g, &out.minor));
        let n = out.minor.n();
        assert_eq!(n, nb);
        assert!(out.minor.min_degree() as f64 >= n as f64 - 1.0 - 0.1 * n as f64 - 1.0);
        assert!(out.b_edges.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn immediate_stop() {
        let mut edges = Graph::complete(5).edges();
        edges.extend((0..5).map(|b| (b, 5)));
        let g = Graph::from_edges(6, &edges).unwrap();
        let out = bipartite_contraction_minor(
            &g,
            &VertexSet::singleton(5),
            &(0..5).collect(),
            5.0,
            1.0,
            0.1,
        )
        .unwrap();
        assert!(out.trace.contractions.is_empty());
        assert_eq!(out.minor, Graph::complete(5));
        assert!(out.trace.certifies(&g, &out.minor));
    }
}
