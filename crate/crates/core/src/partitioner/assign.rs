use super::BlockedPartition;
use crate::error::{Error, Result};
use crate::graphcore::{Graph, VertexSet};
use crate::oracle::almost_compatibility_count;
use crate::par::Exec;
use crate::rng::derived_rng;
use rand::seq::SliceRandom;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairExpectation {
    pub i: usize,
    pub j: usize,
    pub h_edges: usize,
    /// Measured proportion of non-adjacent part pairs between the two
    /// subpartitions.
    pub density: f64,
    pub expected: f64,
    pub observed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssignmentResult {
    /// The part of `G` assigned to each vertex of `H`.
    pub vertex_to_part: Vec<VertexSet>,
    /// `(subpartition, index)` of each assigned part.
    pub part_index: Vec<(usize, usize)>,
    pub bad_edges: Vec<(usize, usize)>,
    pub pairs: Vec<PairExpectation>,
    /// Parts left without an `H`-vertex.
    pub unassigned: Vec<VertexSet>,
    pub attempts: usize,
}

fn nonadjacent_density(g: &Graph, a: &[VertexSet], b: &[VertexSet], same: bool) -> f64 {
    let (mut pairs, mut bad) = (0u64, 0u64);
    for (x, s) in a.iter().enumerate() {
        for (y, t) in b.iter().enumerate() {
            if same && y <= x {
                continue;
            }
            pairs += 1;
            if !g.sets_adjacent(s, t) {
                bad += 1;
            }
        }
    }
    if pairs == 0 {
        0.0
    } else {
        bad as f64 / pairs as f64
    }
}

/// Maps the vertices of each `h_parts[i]` injectively and at random onto
/// parts of subpartition `i`, retrying until no pair of subpartitions
/// exceeds `r^2` times its expected number of bad edges.
pub fn almost_compatible_partition(
    g: &Graph,
    h: &Graph,
    bp: &BlockedPartition,
    h_parts: &[VertexSet],
    seed: u64,
    retries: usize,
    exec: Exec,
) -> Result<AssignmentResult> {
    let r = bp.subpartitions.len();
    if h_parts.len() != r {
        return Err(Error::MalformedPartition(format!(
            "{} parts of H for {r} subpartitions",
            h_parts.len()
        )));
    }
    let mut label = vec![usize::MAX; h.n()];
    for (i, p) in h_parts.iter().enumerate() {
        if p.len() > bp.subpartitions[i].len() {
            return Err(Error::Capacity(format!(
                "part {i} of H has {} vertices but only {} parts are available",
                p.len(),
                bp.subpartitions[i].len()
            )));
        }
        for v in p.iter() {
            if v >= h.n() || label[v] != usize::MAX {
                return Err(Error::MalformedPartition(format!("vertex {v} misplaced")));
            }
            label[v] = i;
        }
    }
    if label.iter().any(|&l| l == usize::MAX) {
        return Err(Error::MalformedPartition("parts of H do not cover it".into()));
    }
    let mut h_edges = vec![vec![0usize; r]; r];
    for (u, v) in h.edges() {
        let (a, b) = (label[u].min(label[v]), label[u].max(label[v]));
        h_edges[a][b] += 1;
    }
    let mut density = vec![vec![0.0; r]; r];
    for i in 0..r {
        for j in i..r {
            density[i][j] =
                nonadjacent_density(g, &bp.subpartitions[i], &bp.subpartitions[j], i == j);
        }
    }
    let limit = (r * r) as f64;
    let run = |k: usize| -> Result<(bool, AssignmentResult)> {
        let mut rng = derived_rng(seed, k as u64);
        let mut vertex_to_part = vec![VertexSet::new(); h.n()];
        let mut part_index = vec![(0, 0); h.n()];
        let mut unassigned = Vec::new();
        for (i, p) in h_parts.iter().enumerate() {
            let mut order: Vec<usize> = (0..bp.subpartitions[i].len()).collect();
            order.shuffle(&mut rng);
            for (v, &k) in p.iter().zip(&order) {
                vertex_to_part[v] = bp.subpartitions[i][k].clone();
                part_index[v] = (i, k);
            }
            for &k in &order[p.len()..] {
                unassigned.push(bp.subpartitions[i][k].clone());
            }
        }
        let count = almost_compatibility_count(g, h, &vertex_to_part)?;
        let mut observed = vec![vec![0usize; r]; r];
        for &(u, v) in &count.bad_edges {
            let (a, b) = (label[u].min(label[v]), label[u].max(label[v]));
            observed[a][b] += 1;
        }
        let mut pairs = Vec::new();
        let mut ok = true;
        for i in 0..r {
            for j in i..r {
                let expected = h_edges[i][j] as f64 * density[i][j];
                ok &= observed[i][j] as f64 <= limit * expected + 1e-9;
                pairs.push(PairExpectation {
                    i,
                    j,
                    h_edges: h_edges[i][j],
                    density: density[i][j],
                    expected,
                    observed: observed[i][j],
                });
            }
        }
        Ok((
            ok,
            AssignmentResult {
                vertex_to_part,
                part_index,
                bad_edges: count.bad_edges,
                pairs,
                unassigned,
                attempts: k + 1,
            },
        ))
    };
    let batch = if exec.is_parallel() { 8 } else { 1 };
    let mut last = None;
    let mut start = 0;
    while start < retries {
        let end = (start + batch).min(retries);
        for res in exec.map(end - start, |i| run(start + i)) {
            let (ok, out) = res?;
            if ok {
                return Ok(out);
            }
            last = Some(out);
        }
        start = end;
    }
    let diagnostics = last
        .map(|o| {
            o.pairs
                .iter()
                .map(|p| format!("({},{}): {} bad vs {:.3} expected", p.i, p.j, p.observed, p.expected))
                .collect::<Vec<_>>()
                .join(", ")
        })
        .unwrap_or_default();
    Err(Error::ConstructionFailed {
        stage: "almost_compatible_partition".into(),
        attempts: retries,
        diagnostics,
    })
}
