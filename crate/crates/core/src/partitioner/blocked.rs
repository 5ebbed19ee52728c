use crate::error::{Error, Result};
use crate::graphcore::{Graph, VertexSet};
use crate::par::Exec;
use crate::rng::derived_rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockedPartitionParams {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub l: usize,
    pub omega: f64,
    pub eta: f64,
}

impl BlockedPartitionParams {
    pub fn r(&self) -> usize {
        self.a.len()
    }

    /// Block size `Σ a_i b_i`.
    pub fn x(&self) -> usize {
        self.a.iter().zip(&self.b).map(|(a, b)| a * b).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.r();
        if r == 0 || self.b.len() != r {
            return Err(Error::invalid("a and b must be nonempty and equally long"));
        }
        if self.a.iter().any(|&a| a < 2) {
            return Err(Error::invalid("every a_i must be at least 2"));
        }
        if self.b.iter().any(|&b| b == 0) {
            return Err(Error::invalid("every b_i must be positive"));
        }
        if self.l == 0 {
            return Err(Error::invalid("l must be positive"));
        }
        if !(self.omega >= 2.0) || !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::invalid("need omega >= 2 and eta in (0, 1)"));
        }
        if !(self.omega * self.eta > 2.0 * r as f64) {
            return Err(Error::invalid(format!(
                "omega * eta = {} must exceed 2r = {}",
                self.omega * self.eta,
                2 * r
            )));
        }
        Ok(())
    }

    /// Proportion of bad parts tolerated in each subpartition.
    pub fn bad_fraction_cap(&self) -> f64 {
        2.0 * self.r() as f64 / (self.omega * self.eta)
    }
}

/// `q_v^{l b}`: ceiling on the chance that `v` sees nothing of a random part.
pub fn bad_vertex_probability_bound(q_v: f64, l: usize, b: usize) -> f64 {
    q_v.powi((l * b) as i32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartRecord {
    pub sub: usize,
    /// Vertices drawn from each block, in block order.
    pub per_block: Vec<Vec<usize>>,
    /// Blocks among the first `l - 1` with too many bad vertices.
    pub rejected: Vec<usize>,
    pub good: bool,
}

impl PartRecord {
    pub fn vertices(&self) -> VertexSet {
        self.per_block.iter().flatten().copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairStat {
    pub i: usize,
    pub j: usize,
    /// Part pairs with at least one good member.
    pub pairs: u64,
    pub nonadjacent: u64,
    /// Natural log of the bound with exponent `ω^{l b_i}`.
    pub ln_bound_statement: f64,
    /// Natural log of the bound with exponent `ω^{l b_j}`.
    pub ln_bound_proof: f64,
    pub within_threshold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockedPartition {
    pub params: BlockedPartitionParams,
    pub seed: u64,
    pub attempts: usize,
    /// Density of the peeled subgraph the construction ran on.
    pub p: f64,
    /// Kept vertices in non-increasing degree order; blocks are consecutive
    /// runs of length `x`.
    pub degree_order: Vec<usize>,
    /// `q` for each entry of `degree_order`.
    pub q: Vec<f64>,
    pub blocks: Vec<Vec<usize>>,
    /// Rejection thresholds `ω x q_{jx}^{l b_i}` per subpartition and block.
    pub thresholds: Vec<Vec<f64>>,
    pub parts: Vec<PartRecord>,
    pub pair_stats: Vec<PairStat>,
    /// Good parts after redistribution, grouped by subpartition.
    pub subpartitions: Vec<Vec<VertexSet>>,
    /// Index into `parts` for every entry of `subpartitions`.
    pub origin: Vec<Vec<usize>>,
    /// `(vertex, subpartition, part)` for every redistributed vertex.
    pub redistribution_log: Vec<(usize, usize, usize)>,
}

impl BlockedPartition {
    pub fn rejected_log(&self) -> Vec<Vec<usize>> {
        self.parts.iter().map(|p| p.rejected.clone()).collect()
    }

    pub fn q_of(&self, v: usize) -> Option<f64> {
        self.degree_order.iter().position(|&u| u == v).map(|i| self.q[i])
    }
}

/// Deletes minimum-degree vertices (lowest label on ties) until `target`
/// remain. Returns the kept labels in increasing order.
pub fn peel_to(g: &Graph, target: usize) -> Vec<usize> {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    for _ in target..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("vertices remain");
        alive[v] = false;
        for &w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
            }
        }
    }
    (0..n).filter(|&v| alive[v]).collect()
}

struct Prepared {
    p: f64,
    order: Vec<usize>,
    q: Vec<f64>,
    blocks: Vec<Vec<usize>>,
    thresholds: Vec<Vec<f64>>,
}

fn prepare(g: &Graph, params: &BlockedPartitionParams) -> Result<Prepared> {
    let x = params.x();
    let total = params.l * x;
    let kept = peel_to(g, total);
    let keep_set: VertexSet = kept.iter().copied().collect();
    let sub = g.induced(&keep_set);
    let p = if total >= 2 {
        sub.m() as f64 / (total * (total - 1) / 2) as f64
    } else {
        1.0
    };
    let mut idx: Vec<usize> = (0..total).collect();
    idx.sort_by_key(|&i| (std::cmp::Reverse(sub.degree(i)), i));
    let order: Vec<usize> = idx.iter().map(|&i| kept[i]).collect();
    let q: Vec<f64> = idx
        .iter()
        .map(|&i| {
            if total < 2 {
                0.0
            } else {
                1.0 - sub.degree(i) as f64 / (total - 1) as f64
            }
        })
        .collect();
    let blocks: Vec<Vec<usize>> = order.chunks(x).map(|c| c.to_vec()).collect();
    let thresholds = params
        .b
        .iter()
        .map(|&b| {
            (0..params.l.saturating_sub(1))
                .map(|j| {
                    let qj = q[(j + 1) * x - 1];
                    params.omega * x as f64 * bad_vertex_probability_bound(qj, params.l, b)
                })
                .collect()
        })
        .collect();
    Ok(Prepared {
        p,
        order,
        q,
        blocks,
        thresholds,
    })
}

struct Attempt {
    parts: Vec<PartRecord>,
    pair_stats: Vec<PairStat>,
    bad_fractions: Vec<f64>,
}

impl Attempt {
    fn passes(&self, cap: f64) -> bool {
        self.bad_fractions.iter().all(|&f| f <= cap + 1e-12)
            && self.pair_stats.iter().all(|s| s.within_threshold)
    }

    fn diagnostics(&self) -> String {
        let worst = self
            .pair_stats
            .iter()
            .map(|s| format!("({},{}): {}/{}", s.i, s.j, s.nonadjacent, s.pairs))
            .collect::<Vec<_>>()
            .join(", ");
        format!(
            "bad part fractions {:?}; non-adjacent pairs {}",
            self.bad_fractions, worst
        )
    }
}

fn ln_pair_bound(params: &BlockedPartitionParams, q: f64, bi: usize, bj: usize, exp_b: usize) -> f64 {
    let l = params.l as f64;
    let bb = (bi * bj) as f64;
    let base = q / (1.0 - params.eta);
    let tail = if params.l <= 1 || q <= 0.0 {
        if params.l <= 1 {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    } else {
        (1.0 - params.eta) * l * (l - 1.0) * bb * base.ln()
    };
    l * bb * 6f64.ln() + l * exp_b as f64 * params.omega.ln() + tail
}

fn attempt(g: &Graph, params: &BlockedPartitionParams, prep: &Prepared, seed: u64, k: usize) -> Attempt {
    let mut rng = derived_rng(seed, k as u64);
    let r = params.r();
    let mut avail = prep.blocks.clone();
    let mut parts = Vec::new();
    for i in 0..r {
        for _ in 0..params.a[i] {
            let per_block = avail
                .iter_mut()
                .map(|pool| {
                    let mut pick: Vec<usize> = (0..params.b[i])
                        .map(|_| pool.swap_remove(rng.gen_range(0..pool.len())))
                        .collect();
                    pick.sort_unstable();
                    pick
                })
                .collect();
            parts.push(PartRecord {
                sub: i,
                per_block,
                rejected: Vec::new(),
                good: false,
            });
        }
    }
    let n = g.n();
    let mut mark = vec![false; n];
    let l = params.l;
    for part in &mut parts {
        for &v in part.per_block.iter().flatten() {
            mark[v] = true;
        }
        for (j, block) in prep.blocks.iter().enumerate().take(l.saturating_sub(1)) {
            let bad = block
                .iter()
                .filter(|&&v| !mark[v] && !g.neighbors(v).iter().any(|&w| mark[w]))
                .count();
            if bad as f64 > prep.thresholds[part.sub][j] {
                part.rejected.push(j);
            }
        }
        for &v in part.per_block.iter().flatten() {
            mark[v] = false;
        }
        // With l = 1 there are no blocks to reject, and a part rejecting
        // nothing is always good.
        part.good = part.rejected.is_empty()
            || (part.rejected.len() as f64) < params.eta * (l as f64 - 1.0);
    }
    let bad_fractions = (0..r)
        .map(|i| {
            let mine: Vec<_> = parts.iter().filter(|p| p.sub == i).collect();
            mine.iter().filter(|p| !p.good).count() as f64 / mine.len() as f64
        })
        .collect();
    let sets: Vec<VertexSet> = parts.iter().map(|p| p.vertices()).collect();
    let q = 1.0 - prep.p;
    let mut pair_stats = Vec::new();
    for i in 0..r {
        for j in i..r {
            let (mut pairs, mut nonadjacent) = (0u64, 0u64);
            for (x, px) in parts.iter().enumerate() {
                if px.sub != i {
                    continue;
                }
                for (y, py) in parts.iter().enumerate() {
                    if py.sub != j || (i == j && y <= x) || !(px.good || py.good) {
                        continue;
                    }
                    pairs += 1;
                    if !g.sets_adjacent(&sets[x], &sets[y]) {
                        nonadjacent += 1;
                    }
                }
            }
            let (bi, bj) = (params.b[i], params.b[j]);
            let ln_st = ln_pair_bound(params, q, bi, bj, bi);
            let ln_pf = ln_pair_bound(params, q, bi, bj, bj);
            let ln_cap = (2.0 * (r * r) as f64).ln() + ln_st.max(ln_pf);
            let within = nonadjacent == 0 || (nonadjacent as f64 / pairs as f64).ln() <= ln_cap;
            pair_stats.push(PairStat {
                i,
                j,
                pairs,
                nonadjacent,
                ln_bound_statement: ln_st,
                ln_bound_proof: ln_pf,
                within_threshold: within,
            });
        }
    }
    Attempt {
        parts,
        pair_stats,
        bad_fractions,
    }
}

/// Builds the blocked partition, retrying with fresh randomness until both
/// acceptance events hold. Attempts run in batches under `exec`; the lowest
/// successful attempt index wins.
pub fn blocked_partition(
    g: &Graph,
    params: &BlockedPartitionParams,
    seed: u64,
    retries: usize,
    exec: Exec,
) -> Result<BlockedPartition> {
    params.validate()?;
    let need = params.l * params.x();
    if g.n() < need {
        return Err(Error::Capacity(format!(
            "graph has {} vertices but l * x = {need}",
            g.n()
        )));
    }
    let prep = prepare(g, params)?;
    let cap = params.bad_fraction_cap();
    let batch = if exec.is_parallel() { 8 } else { 1 };
    let mut last = String::new();
    let mut start = 0;
    while start < retries {
        let end = (start + batch).min(retries);
        let tries = exec.map(end - start, |i| attempt(g, params, &prep, seed, start + i));
        for (i, a) in tries.into_iter().enumerate() {
            if a.passes(cap) {
                return Ok(finish(g, params, prep, a, seed, start + i + 1));
            }
            last = a.diagnostics();
        }
        start = end;
    }
    Err(Error::ConstructionFailed {
        stage: "blocked_partition".into(),
        attempts: retries,
        diagnostics: last,
    })
}

fn finish(
    g: &Graph,
    params: &BlockedPartitionParams,
    prep: Prepared,
    a: Attempt,
    seed: u64,
    attempts: usize,
) -> BlockedPartition {
    let r = params.r();
    let mut subpartitions: Vec<Vec<VertexSet>> = vec![Vec::new(); r];
    let mut origin: Vec<Vec<usize>> = vec![Vec::new(); r];
    let mut used = vec![false; g.n()];
    for (k, p) in a.parts.iter().enumerate() {
        if p.good {
            let vs = p.vertices();
            for v in vs.iter() {
                used[v] = true;
            }
            subpartitions[p.sub].push(vs);
            origin[p.sub].push(k);
        }
    }
    let slots: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| (0..subpartitions[i].len()).map(move |k| (i, k)))
        .collect();
    let mut redistribution_log = Vec::new();
    if !slots.is_empty() {
        for (c, v) in (0..g.n()).filter(|&v| !used[v]).enumerate() {
            let (i, k) = slots[c % slots.len()];
            subpartitions[i][k].insert(v);
            redistribution_log.push((v, i, k));
        }
    }
    BlockedPartition {
        params: params.clone(),
        seed,
        attempts,
        p: prep.p,
        degree_order: prep.order,
        q: prep.q,
        blocks: prep.blocks,
        thresholds: prep.thresholds,
        parts: a.parts,
        pair_stats: a.pair_stats,
        subpartitions,
        origin,
        redistribution_log,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    fn small() -> BlockedPartitionParams {
        BlockedPartitionParams {
            a: vec![6],
            b: vec![2],
            l: 5,
            omega: 8.0,
            eta: 0.5,
        }
    }

    #[test]
    fn bound_examples() {
        assert_eq!(bad_vertex_probability_bound(0.0, 3, 2), 0.0);
        assert_eq!(bad_vertex_probability_bound(1.0, 3, 2), 1.0);
        assert!((bad_vertex_probability_bound(0.5, 3, 2) - 0.015625).abs() < 1e-15);
    }

    #[test]
    fn complete_host_has_no_nonadjacent_pairs() {
        let g = Graph::complete(70);
        let bp = blocked_partition(&g, &small(), 3, 64, Exec::Sequential).unwrap();
        assert!(bp.pair_stats.iter().all(|s| s.nonadjacent == 0));
        let total: usize = bp.subpartitions.iter().flatten().map(|s| s.len()).sum();
        assert_eq!(total, 70);
        assert_eq!(bp.subpartitions[0].len(), 6);
    }

    #[test]
    fn shape_and_determinism() {
        let g = Graph::gnp(60, 0.7, &mut rng_from_seed(5));
        let a = blocked_partition(&g, &small(), 11, 64, Exec::Parallel).unwrap();
        let b = blocked_partition(&g, &small(), 11, 64, Exec::Sequential).unwrap();
        assert_eq!(a, b);
        for p in &a.parts {
            assert_eq!(p.per_block.len(), 5);
            assert!(p.per_block.iter().all(|blk| blk.len() == 2));
        }
        assert!(a.subpartitions[0].len() as f64 >= 6.0 * (1.0 - a.params.bad_fraction_cap()));
    }

    #[test]
    fn rejects_bad_params() {
        let mut p = small();
        p.eta = 0.2;
        assert!(p.validate().is_err());
        let g = Graph::complete(10);
        assert!(matches!(
            blocked_partition(&g, &small(), 0, 4, Exec::Sequential),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn peel_keeps_dense_core() {
        let g = Graph::complete(5).disjoint_union(&Graph::path(4));
        assert_eq!(peel_to(&g, 5), vec![0, 1, 2, 3, 4]);
    }
}
