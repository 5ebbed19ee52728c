use crate::graphcore::{connectivity, vertex_disjoint_paths, Graph, VertexSet};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShortPaths {
    /// Paths with both ends included, shortest first.
    pub paths: Vec<Vec<usize>>,
    /// Size of the maximum family before the length filter.
    pub max_family: usize,
    /// Paths must have fewer than this many edges.
    pub length_bound: f64,
    /// `⌈η|G|/2⌉` when `κ(G) >= η|G|`.
    pub guaranteed: Option<usize>,
    pub shortfall: usize,
}

/// Internally disjoint `u–v` paths inside `allowed` with fewer than
/// `2/η + 1` edges.
pub(crate) fn short_paths_within(
    g: &Graph,
    u: usize,
    v: usize,
    eta: f64,
    allowed: Option<&VertexSet>,
) -> (Vec<Vec<usize>>, usize) {
    let bound = 2.0 / eta + 1.0;
    let all = vertex_disjoint_paths(g, u, v, allowed);
    let total = all.len();
    let mut short: Vec<_> = all
        .into_iter()
        .filter(|p| ((p.len() - 1) as f64) < bound)
        .collect();
    short.sort_by_key(|p| p.len());
    (short, total)
}

/// Maximum family of internally disjoint `u–v` paths, keeping those with
/// fewer than `2/η + 1` edges.
pub fn short_disjoint_paths(g: &Graph, u: usize, v: usize, eta: f64) -> ShortPaths {
    let (paths, max_family) = if u == v {
        (Vec::new(), 0)
    } else {
        short_paths_within(g, u, v, eta, None)
    };
    let n = g.n() as f64;
    let guaranteed = (connectivity(g) as f64 >= eta * n).then(|| (eta * n / 2.0).ceil() as usize);
    let shortfall = guaranteed.map_or(0, |k| k.saturating_sub(paths.len()));
    ShortPaths {
        paths,
        max_family,
        length_bound: 2.0 / eta + 1.0,
        guaranteed,
        shortfall,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k5_paths() {
        let sp = short_disjoint_paths(&Graph::complete(5), 0, 3, 0.4);
        assert_eq!(sp.paths.len(), 4);
        assert_eq!(sp.paths[0], vec![0, 3]);
        assert!(sp.paths.iter().all(|p| p.len() - 1 < 6));
        assert_eq!(sp.shortfall, 0);
    }

    #[test]
    fn disconnected_and_cycle() {
        let g = Graph::path(2).disjoint_union(&Graph::path(2));
        assert!(short_disjoint_paths(&g, 0, 3, 0.5).paths.is_empty());
        let sp = short_disjoint_paths(&Graph::cycle(6), 0, 3, 1.0 / 3.0);
        assert_eq!(sp.paths.len(), 2);
        assert!(sp.paths.iter().all(|p| p.len() == 4));
    }
}
