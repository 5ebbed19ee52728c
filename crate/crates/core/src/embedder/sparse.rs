use super::contraction::bipartite_contraction_minor;
use super::cover::CoverPiece;
use super::dense::{embed_dense, DenseConfig, DenseSpec};
use super::paths::short_paths_within;
use super::report::{EmbeddingReport, StageLog};
use super::PATH_CAP;
use crate::graphcore::{
    bounded_min_vertex_cut, connectivity, edge_triangle_count, set_disjoint_paths, Graph, VertexSet,
};
use crate::oracle::{is_minor, is_rooted_minor, validate_model, MinorModel};
use crate::par::Exec;
use crate::rng::{derive_seed, rng_from_seed};
use rand::seq::SliceRandom;
use serde::Serialize;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparseConfig {
    pub m: f64,
    pub epsilon: f64,
    pub seed: u64,
    /// Oracle budget for direct minor searches.
    pub budget: u64,
    /// Reroute paths through `T_i` once they use more than this many of its
    /// vertices; `None` means `81 k |H|`.
    pub reroute_threshold: Option<usize>,
    pub dense: DenseConfig,
    pub exec: Exec,
}

impl SparseConfig {
    pub fn new(m: f64, seed: u64) -> Self {
        SparseConfig {
            m,
            epsilon: 0.1,
            seed,
            budget: 2_000_000,
            reroute_threshold: None,
            dense: DenseConfig::default(),
            exec: Exec::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparsePlan {
    pub cover: Vec<CoverPiece>,
    /// `S_0, .., S_k`.
    pub dense_sets: Vec<VertexSet>,
    /// `T_i ⊆ S_i` after cutset refinement.
    pub refined: Vec<VertexSet>,
    /// `R_i`: root in `T_i` of each vertex of piece `i`, in piece order.
    pub roots: Vec<Vec<usize>>,
    /// Path from `T_0` to each root, per piece.
    pub paths: Vec<Vec<Vec<usize>>>,
    pub rerouted: usize,
    pub stitch_paths: Vec<Vec<usize>>,
}

fn min_degree_within(g: &Graph, s: &VertexSet) -> usize {
    s.iter().map(|v| g.degree_into(v, s)).min().unwrap_or(0)
}

fn measure_hypotheses(g: &Graph, m: f64) -> serde_json::Value {
    let min_tri = g
        .edges()
        .into_iter()
        .map(|(u, v)| edge_triangle_count(g, u, v).unwrap_or(0))
        .min();
    json!({
        "edges_at_most_m_n": (g.m() as f64) <= m * g.n() as f64,
        "min_edge_triangles": min_tri,
        "triangles_at_least_m_minus_1": min_tri.is_none_or(|t| t as f64 >= m - 1.0),
        "triangles_more_than_m_minus_1": min_tri.is_none_or(|t| t as f64 > m - 1.0),
        "connectivity": connectivity(g),
        "n_over_m": g.n() as f64 / m,
    })
}

enum Stage1 {
    Sets(Vec<VertexSet>),
    Direct(MinorModel, serde_json::Value),
    Fail(String, String),
}

fn build_sets(g: &Graph, h: &Graph, k: usize, cfg: &SparseConfig) -> Stage1 {
    let m = cfg.m;
    let n = g.n();
    let mut in_b = vec![false; n];
    let mut sets: Vec<VertexSet> = Vec::new();
    while sets.len() <= k {
        let a_list: Vec<usize> = (0..n)
            .filter(|&v| !in_b[v] && g.degree(v) as f64 <= 6.0 * m)
            .collect();
        let pick = a_list.iter().copied().find(|&a| {
            let into_b = g.neighbors(a).iter().filter(|&&w| in_b[w]).count();
            (into_b as f64) < m / 6.0 - 1.0 && g.neighbors(a).iter().any(|&w| !in_b[w])
        });
        if let Some(a) = pick {
            let s: VertexSet = g.neighbors(a).iter().copied().filter(|&w| !in_b[w]).collect();
            for v in s.iter() {
                in_b[v] = true;
            }
            sets.push(s);
            continue;
        }
        if a_list.is_empty() {
            return Stage1::Fail("stage1".into(), "no vertex outside B has degree at most 6m".into());
        }
        let part_a: VertexSet = a_list.into_iter().collect();
        let part_b: VertexSet = (0..n).filter(|&v| in_b[v]).collect();
        let cm = match bipartite_contraction_minor(g, &part_a, &part_b, m, 1.0 / 7.0, cfg.epsilon) {
            Ok(cm) => cm,
            Err(e) => return Stage1::Fail("stage1_contraction".into(), e.to_string()),
        };
        let res = match is_minor(&cm.minor, h, cfg.budget) {
            Ok(r) => r,
            Err(e) => return Stage1::Fail("stage1_dense_minor".into(), e.to_string()),
        };
        let stats = json!({
            "sets_built": sets.len(),
            "dense_minor_order": cm.minor.n(),
            "dense_minor_min_degree": cm.minor.min_degree(),
            "contractions": cm.trace.contractions.len(),
            "outcome": res.outcome.label(),
        });
        return match res.outcome.model() {
            Some(model) => {
                let sets = h
                    .n()
                    .checked_sub(0)
                    .map(|hn| {
                        (0..hn)
                            .map(|x| {
                                model
                                    .set(x)
                                    .iter()
                                    .flat_map(|y| cm.branch_sets[y].iter())
                                    .collect::<VertexSet>()
                            })
                            .collect::<Vec<_>>()
                    })
                    .unwrap_or_default();
                Stage1::Direct(MinorModel::from_sets(sets), stats)
            }
            None => Stage1::Fail(
                "stage1_dense_minor".into(),
                format!("dense minor search returned {}", res.outcome.label()),
            ),
        };
    }
    Stage1::Sets(sets)
}

/// Up to three rounds of cutting `S` along a small cutset and keeping the
/// component with the largest minimum degree.
fn refine(g: &Graph, s: &VertexSet, m: f64) -> Result<(VertexSet, usize), String> {
    let bound = ((m / 40.0).ceil() as usize).saturating_sub(1);
    let mut cur = s.clone();
    for round in 0..=3 {
        let sub = g.induced(&cur);
        let Some(cut) = bounded_min_vertex_cut(&sub, bound) else {
            return Ok((cur, round));
        };
        if round == 3 {
            break;
        }
        let keep: VertexSet = (0..sub.n()).filter(|&x| !cut.contains(x)).collect();
        let comps = sub.components_within(&keep);
        let best = comps
            .iter()
            .filter(|c| c.len() as f64 <= 3.0 * m)
            .max_by_key(|c| (min_degree_within(&sub, c), std::cmp::Reverse(c.len())))
            .or_else(|| comps.iter().max_by_key(|c| min_degree_within(&sub, c)))
            .ok_or("cutset left nothing")?;
        let labels = cur.as_slice().to_vec();
        cur = best.iter().map(|x| labels[x]).collect();
    }
    Err(format!(
        "set still has a cut of size at most {bound} after three rounds"
    ))
}

/// Trims a walk so it meets `from` only at its start and `to` only at its end.
fn trim(path: &[usize], from: &VertexSet, to: &VertexSet) -> Vec<usize> {
    let end = path.iter().position(|&v| to.contains(v)).unwrap_or(path.len() - 1);
    let start = path[..=end].iter().rposition(|&v| from.contains(v)).unwrap_or(0);
    path[start..=end].to_vec()
}

fn build_paths(
    g: &Graph,
    refined: &[VertexSet],
    cover: &[CoverPiece],
) -> Result<Vec<Vec<Vec<usize>>>, String> {
    let n = g.n();
    let mut used = vec![false; n];
    let mut out = Vec::new();
    for (i, piece) in cover.iter().enumerate() {
        let ti = &refined[i + 1];
        let need = piece.vertices.len();
        let from: VertexSet = refined[0].iter().filter(|&v| !used[v]).collect();
        let to: VertexSet = ti.iter().filter(|&v| !used[v]).collect();
        let others: VertexSet = refined
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != 0 && j != i + 1)
            .flat_map(|(_, t)| t.iter())
            .collect();
        let strict: VertexSet = (0..n).filter(|&v| !used[v] && !others.contains(v)).collect();
        let mut paths = set_disjoint_paths(g, &from, &to, Some(&strict));
        if paths.len() < need {
            let loose: VertexSet = (0..n).filter(|&v| !used[v]).collect();
            paths = set_disjoint_paths(g, &from, &to, Some(&loose));
        }
        if paths.len() < need {
            return Err(format!(
                "piece {i}: found {} disjoint paths from T_0, need {need}",
                paths.len()
            ));
        }
        let mut paths: Vec<Vec<usize>> = paths.iter().map(|p| trim(p, &refined[0], ti)).collect();
        paths.sort_by_key(|p| (p.len(), p[0]));
        paths.truncate(need);
        for p in &paths {
            for &v in p {
                used[v] = true;
            }
        }
        out.push(paths);
    }
    Ok(out)
}

/// Replaces the stretch of each path inside an overloaded `T_j` by a short
/// path inside `T_j` that avoids every other path.
fn reroute(
    g: &Graph,
    refined: &[VertexSet],
    paths: &mut [Vec<Vec<usize>>],
    threshold: usize,
) -> Result<usize, String> {
    let mut count = 0;
    for (j, tj) in refined.iter().enumerate() {
        let usage = paths.iter().flatten().flatten().filter(|&&v| tj.contains(v)).count();
        if usage <= threshold {
            continue;
        }
        let keys: Vec<(usize, usize)> = (0..paths.len())
            .flat_map(|i| (0..paths[i].len()).map(move |q| (i, q)))
            .collect();
        for &(i, q) in &keys {
            let p = &paths[i][q];
            let (Some(x), Some(y)) = (
                p.iter().position(|&v| tj.contains(v)),
                p.iter().rposition(|&v| tj.contains(v)),
            ) else {
                continue;
            };
            if y <= x + 1 {
                continue;
            }
            let mut blocked: VertexSet = VertexSet::new();
            for (&(i2, q2), other) in keys.iter().map(|k| (k, &paths[k.0][k.1])) {
                if (i2, q2) != (i, q) {
                    blocked = blocked.union(&other.iter().copied().collect());
                }
            }
            let allowed: VertexSet = tj
                .iter()
                .filter(|&v| !blocked.contains(v) || v == p[x] || v == p[y])
                .collect();
            let (short, _) = short_paths_within(g, p[x], p[y], 1.0 / 40.0, Some(&allowed));
            let Some(new_mid) = short.into_iter().find(|s| s.len() - 1 <= PATH_CAP) else {
                return Err(format!("no short path inside T_{j} for path {q} of piece {i}"));
            };
            if new_mid.len() < y - x + 1 {
                let mut np = p[..x].to_vec();
                np.extend(new_mid);
                np.extend(&p[y + 1..]);
                paths[i][q] = np;
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Sparse pipeline: small dense sets, cutset refinement, path systems from
/// `T_0`, rooted dense embeddings of each cover piece, and stitching inside
/// `T_0`. Every returned model has been validated.
pub fn embed_sparse(g: &Graph, h: &Graph, cover: &[CoverPiece], cfg: &SparseConfig) -> EmbeddingReport {
    let seed = cfg.seed;
    let m = cfg.m;
    let mut log = StageLog::new();
    if cover.is_empty() || !CoverPiece::covers(cover, h) {
        return log.fail("precondition", "cover pieces do not cover H", seed);
    }
    if cover
        .iter()
        .any(|p| p.vertices.max_vertex().is_some_and(|x| x >= h.n()) || p.edges.iter().any(|&(a, b)| !h.has_edge(a, b)))
    {
        return log.fail("precondition", "a cover piece is not a subgraph of H", seed);
    }
    let k = cover.len();
    log.push("hypotheses", measure_hypotheses(g, m));

    let sets = match build_sets(g, h, k, cfg) {
        Stage1::Sets(s) => s,
        Stage1::Direct(model, stats) => {
            log.push("stage1_dense_minor", stats);
            return match validate_model(g, h, &model) {
                Ok(c) if c.valid => log.model(model, None, seed),
                _ => log.fail("validate", "dense-minor model failed validation", seed),
            };
        }
        Stage1::Fail(stage, msg) => return log.fail(&stage, msg, seed),
    };
    log.push(
        "stage1",
        json!(sets
            .iter()
            .map(|s| json!({
                "size": s.len(),
                "min_degree": min_degree_within(g, s),
                "min_degree_target": 5.0 * m / 6.0,
                "size_at_most_6m": s.len() as f64 <= 6.0 * m,
            }))
            .collect::<Vec<_>>()),
    );

    let mut refined = Vec::with_capacity(sets.len());
    let mut rounds = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        match refine(g, s, m) {
            Ok((t, r)) => {
                refined.push(t);
                rounds.push(r);
            }
            Err(e) => return log.fail("stage2", format!("S_{i}: {e}"), seed),
        }
    }
    log.push(
        "stage2",
        json!({ "rounds": rounds, "sizes": refined.iter().map(|t| t.len()).collect::<Vec<_>>() }),
    );

    let mut paths = match build_paths(g, &refined, cover) {
        Ok(p) => p,
        Err(e) => return log.fail("stage3_paths", e, seed),
    };
    let threshold = cfg.reroute_threshold.unwrap_or(81 * k * h.n());
    let rerouted = match reroute(g, &refined, &mut paths, threshold) {
        Ok(c) => c,
        Err(e) => return log.fail("stage3_reroute", e, seed),
    };
    let y: VertexSet = paths.iter().flatten().flatten().copied().collect();
    let roots: Vec<Vec<usize>> = paths.iter().map(|ps| ps.iter().map(|p| *p.last().unwrap()).collect()).collect();
    log.push(
        "stage3",
        json!({ "paths": y.len(), "rerouted": rerouted, "threshold": threshold }),
    );

    let dense_cfg = DenseConfig {
        exec: Exec::Sequential,
        ..cfg.dense
    };
    let pieces: Vec<Result<(Vec<VertexSet>, &'static str), String>> = cfg.exec.map(k, |i| {
        let ti = &refined[i + 1];
        let tprime: VertexSet = ti.iter().filter(|&v| !y.contains(v) || roots[i].contains(&v)).collect();
        let sub = g.induced(&tprime);
        let local = |v: usize| tprime.as_slice().binary_search(&v).expect("root inside T_i'");
        let local_roots: Vec<usize> = roots[i].iter().map(|&r| local(r)).collect();
        let hi = cover[i].graph();
        let cfg_i = DenseConfig {
            seed: derive_seed(seed, 100 + i as u64),
            ..dense_cfg
        };
        let rep = embed_dense(&sub, &hi, &DenseSpec::Generic, Some(&local_roots), &cfg_i);
        let (model, how) = match rep.model {
            Some(mdl) => (mdl, "embed_dense"),
            None => match is_rooted_minor(&sub, &hi, &local_roots, cfg.budget) {
                Ok(res) => match res.outcome.model() {
                    Some(mdl) => (mdl.clone(), "rooted_oracle"),
                    None => {
                        return Err(format!(
                            "piece {i}: dense embedding failed ({:?}) and rooted search returned {}",
                            rep.failure.map(|f| f.stage),
                            res.outcome.label()
                        ))
                    }
                },
                Err(e) => return Err(format!("piece {i}: {e}")),
            },
        };
        let labels = tprime.as_slice();
        Ok((
            (0..hi.n()).map(|x| model.set(x).iter().map(|v| labels[v]).collect()).collect(),
            how,
        ))
    });
    let mut vh = vec![VertexSet::new(); h.n()];
    let mut anchors: Vec<Vec<usize>> = vec![Vec::new(); h.n()];
    let mut how = Vec::new();
    for (i, res) in pieces.into_iter().enumerate() {
        let (sets, via) = match res {
            Ok(x) => x,
            Err(e) => return log.fail("stage4_embed", e, seed),
        };
        how.push(via);
        for (j, hv) in cover[i].vertices.iter().enumerate() {
            vh[hv] = vh[hv].union(&sets[j]).union(&paths[i][j].iter().copied().collect());
            anchors[hv].push(paths[i][j][0]);
        }
    }
    log.push("stage4", json!({ "pieces": how }));

    let mut used = vec![false; g.n()];
    for s in &vh {
        for v in s.iter() {
            used[v] = true;
        }
    }
    let t0 = &refined[0];
    let mut stitch_paths = Vec::new();
    for x in 0..h.n() {
        if vh[x].is_empty() {
            let Some(v) = (0..g.n()).find(|&v| !used[v]) else {
                return log.fail("assemble", format!("no free vertex for isolated {x}"), seed);
            };
            used[v] = true;
            vh[x].insert(v);
            continue;
        }
        loop {
            let comps = g.components_within(&vh[x]);
            if comps.len() <= 1 {
                break;
            }
            let rest: VertexSet = comps[1..].iter().flat_map(|c| c.iter()).collect();
            let Some(p) = g.shortest_path_between(&comps[0], &rest, |w| t0.contains(w) && !used[w]) else {
                return log.fail("assemble", format!("cannot stitch the branch set of {x} inside T_0"), seed);
            };
            if p.len() - 1 > PATH_CAP {
                return log.fail("assemble", format!("stitch path for {x} is longer than {PATH_CAP}"), seed);
            }
            for &w in &p[1..p.len() - 1] {
                used[w] = true;
                vh[x].insert(w);
            }
            stitch_paths.push(p);
        }
    }
    let plan = SparsePlan {
        cover: cover.to_vec(),
        dense_sets: sets,
        refined,
        roots,
        paths,
        rerouted,
        stitch_paths,
    };
    log.push("plan", serde_json::to_value(&plan).unwrap_or_default());
    let model = MinorModel::from_sets(vh);
    match validate_model(g, h, &model) {
        Ok(c) if c.valid => log.model(model, None, seed),
        Ok(c) => log.fail("validate", format!("{:?}", c.violation), seed),
        Err(e) => log.fail("validate", e.to_string(), seed),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineeredHost {
    pub graph: Graph,
    pub cliques: Vec<VertexSet>,
}

/// `k + 1` disjoint cliques of order `round(5m/6)`, every pair joined by
/// `paths_per_pair` vertex-disjoint paths with `path_len` interior vertices.
/// Path ends avoid the lowest vertex of each clique.
pub fn engineered_host(m: f64, k: usize, paths_per_pair: usize, path_len: usize, seed: u64) -> EngineeredHost {
    let c = (5.0 * m / 6.0).round() as usize;
    let q = k + 1;
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    let mut cliques = Vec::with_capacity(q);
    for i in 0..q {
        let base = i * c;
        for a in 0..c {
            for b in a + 1..c {
                edges.push((base + a, base + b));
            }
        }
        cliques.push((base..base + c).collect::<VertexSet>());
    }
    let mut ends: Vec<Vec<usize>> = (0..q)
        .map(|i| {
            let mut v: Vec<usize> = (i * c + 1..(i + 1) * c).collect();
            v.shuffle(&mut rng);
            v
        })
        .collect();
    let mut next = q * c;
    for i in 0..q {
        for j in i + 1..q {
            for _ in 0..paths_per_pair {
                let (Some(a), Some(b)) = (ends[i].pop(), ends[j].pop()) else {
                    continue;
                };
                let mut prev = a;
                for _ in 0..path_len {
                    edges.push((prev.min(next), prev.max(next)));
                    prev = next;
                    next += 1;
                }
                edges.push((prev.min(b), prev.max(b)));
            }
        }
    }
    EngineeredHost {
        graph: Graph::from_edges(next, &edges).expect("simple host"),
        cliques,
    }
}
