use crate::error::{Error, Result};
use crate::gamma::WeightedPartition;
use crate::graphcore::{Graph, VertexSet};
use serde::{Deserialize, Serialize};

/// A subgraph of `H` in `H`-labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverPiece {
    pub vertices: VertexSet,
    pub edges: Vec<(usize, usize)>,
}

impl CoverPiece {
    /// Induced piece `H[vs]`.
    pub fn induced(h: &Graph, vs: VertexSet) -> Self {
        let edges = h
            .edges()
            .into_iter()
            .filter(|&(a, b)| vs.contains(a) && vs.contains(b))
            .collect();
        CoverPiece { vertices: vs, edges }
    }

    /// The piece relabelled to `0..|piece|` in increasing `H`-label order.
    pub fn graph(&self) -> Graph {
        let idx = |x: usize| self.vertices.as_slice().binary_search(&x).expect("edge inside piece");
        let e: Vec<_> = self.edges.iter().map(|&(a, b)| (idx(a), idx(b))).collect();
        Graph::from_edges(self.vertices.len(), &e).expect("piece edges are simple")
    }

    /// True when the pieces together contain every edge of `h`.
    pub fn covers(pieces: &[CoverPiece], h: &Graph) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        for p in pieces {
            for &(a, b) in &p.edges {
                seen.insert((a.min(b), a.max(b)));
            }
        }
        h.edges().iter().all(|e| seen.contains(e))
    }
}

/// Splits `0..len` (offset by `base`) into `n` near-equal consecutive runs.
fn near_equal(base: usize, len: usize, n: usize) -> Vec<Vec<usize>> {
    let (q, r) = (len / n, len % n);
    let mut out = Vec::with_capacity(n);
    let mut at = base;
    for i in 0..n {
        let size = q + usize::from(i < r);
        out.push((at..at + size).collect());
        at += size;
    }
    out
}

/// Pads each run to `size` with the lowest unused labels of its class.
fn pad(mut run: Vec<usize>, class: std::ops::Range<usize>, size: usize) -> Vec<usize> {
    for v in class {
        if run.len() >= size {
            break;
        }
        if !run.contains(&v) {
            run.push(v);
        }
    }
    run.sort_unstable();
    run
}

/// Cover of `K_{s,t}` (classes `0..s` and `s..s+t`) by `N²` copies of
/// `K_{⌈s/N⌉,⌈t/N⌉}`.
pub fn edge_cover_bipartite(s: usize, t: usize, n: usize) -> Result<Vec<CoverPiece>> {
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    let (ls, lt) = (s.div_ceil(n), t.div_ceil(n));
    let left: Vec<_> = near_equal(0, s, n).into_iter().map(|r| pad(r, 0..s, ls)).collect();
    let right: Vec<_> = near_equal(s, t, n).into_iter().map(|r| pad(r, s..s + t, lt)).collect();
    let mut out = Vec::with_capacity(n * n);
    for a in &left {
        for b in &right {
            let mut edges: Vec<_> = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect();
            edges.sort_unstable();
            out.push(CoverPiece {
                vertices: a.iter().chain(b.iter()).copied().collect(),
                edges,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedCover {
    /// Vertices of weight at least `2w/N`.
    pub heavy: VertexSet,
    /// Index of the largest part, spread evenly over the bags.
    pub largest_part: usize,
    pub bags: Vec<VertexSet>,
    pub bag_weights: Vec<f64>,
    /// Balanced partition of the non-heavy vertices.
    pub w_sets: Vec<VertexSet>,
    /// `H_{0,i}`: edges meeting the heavy set, inside `heavy ∪ W_i`.
    pub heavy_pieces: Vec<CoverPiece>,
    /// `H_{a,b} = H[V_a ∪ V_b]` for `a < b`.
    pub bag_pieces: Vec<((usize, usize), CoverPiece)>,
    pub total_weight: f64,
}

impl WeightedCover {
    pub fn pieces(&self) -> Vec<CoverPiece> {
        self.heavy_pieces
            .iter()
            .cloned()
            .chain(self.bag_pieces.iter().map(|(_, p)| p.clone()))
            .collect()
    }

    pub fn bag_bound_holds(&self) -> bool {
        let cap = 4.0 * self.total_weight / self.bags.len() as f64;
        self.bag_weights.iter().all(|&w| w <= cap * (1.0 + 1e-12))
    }
}

pub(crate) fn build_weighted_cover(h: &Graph, wp: &WeightedPartition, n: usize) -> Result<WeightedCover> {
    if n < 2 {
        return Err(Error::invalid("N must be at least 2"));
    }
    let t = h.n();
    wp.validate(t)?;
    let mut weight = vec![0.0; t];
    let mut part_of = vec![0; t];
    for (i, p) in wp.parts.iter().enumerate() {
        for v in p.iter() {
            weight[v] = wp.weights[i];
            part_of[v] = i;
        }
    }
    let w: f64 = weight.iter().sum();
    let heavy: VertexSet = (0..t).filter(|&v| weight[v] >= 2.0 * w / n as f64).collect();
    let largest_part = (0..wp.r())
        .max_by_key(|&i| (wp.parts[i].len(), std::cmp::Reverse(i)))
        .unwrap_or(0);
    let p1: Vec<usize> = (0..t)
        .filter(|&v| part_of[v] == largest_part && !heavy.contains(v))
        .collect();
    let mut rest: Vec<usize> = (0..t)
        .filter(|&v| part_of[v] != largest_part && !heavy.contains(v))
        .collect();
    rest.sort_by_key(|&v| (std::cmp::Reverse(h.degree(v)), v));
    let mut bags = vec![VertexSet::new(); n];
    let mut bag_weights = vec![0.0; n];
    for v in rest {
        let i = (0..n)
            .find(|&i| bag_weights[i] <= w / n as f64 * (1.0 + 1e-12))
            .ok_or_else(|| Error::Internal("no bag has weight at most w/N".into()))?;
        bags[i].insert(v);
        bag_weights[i] += weight[v];
    }
    let mut at = 0;
    for (i, size) in near_equal(0, p1.len(), n).into_iter().map(|r| r.len()).enumerate() {
        for &v in &p1[at..at + size] {
            bags[i].insert(v);
            bag_weights[i] += weight[v];
        }
        at += size;
    }
    let light: Vec<usize> = (0..t).filter(|&v| !heavy.contains(v)).collect();
    let w_sets: Vec<VertexSet> = near_equal(0, light.len(), n)
        .into_iter()
        .map(|r| r.into_iter().map(|i| light[i]).collect())
        .collect();
    let heavy_pieces = w_sets
        .iter()
        .map(|ws| {
            let vertices = heavy.union(ws);
            let edges = h
                .edges()
                .into_iter()
                .filter(|&(a, b)| {
                    (heavy.contains(a) || heavy.contains(b)) && vertices.contains(a) && vertices.contains(b)
                })
                .collect();
            CoverPiece { vertices, edges }
        })
        .collect();
    let mut bag_pieces = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            bag_pieces.push(((a, b), CoverPiece::induced(h, bags[a].union(&bags[b]))));
        }
    }
    Ok(WeightedCover {
        heavy,
        largest_part,
        bags,
        bag_weights,
        w_sets,
        heavy_pieces,
        bag_pieces,
        total_weight: w,
    })
}

/// Cover of `H` by `N` heavy pieces and `C(N, 2)` bag pieces. Fails when a
/// bag exceeds weight `4w/N` or the pieces miss an edge.
pub fn edge_cover_weighted(h: &Graph, wp: &WeightedPartition, n: usize) -> Result<WeightedCover> {
    let cover = build_weighted_cover(h, wp, n)?;
    if !cover.bag_bound_holds() {
        return Err(Error::Internal(format!(
            "bag weights {:?} exceed 4w/N = {}",
            cover.bag_weights,
            4.0 * cover.total_weight / n as f64
        )));
    }
    if !CoverPiece::covers(&cover.pieces(), h) {
        return Err(Error::Internal("weighted cover misses an edge".into()));
    }
    Ok(cover)
}
