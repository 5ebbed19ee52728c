use super::connector::{fix_bad_pairs, reserve_connector};
use super::report::{EmbeddingReport, StageLog};
use crate::gamma::WeightedPartition;
use crate::graphcore::{Graph, VertexSet};
use crate::oracle::MinorModel;
use crate::par::Exec;
use crate::partitioner::{
    almost_compatible_partition, bipartite_params, blocked_partition, weighted_params,
    BlockedPartitionParams, DEFAULT_RETRIES,
};
use crate::rng::{derive_seed, derived_rng};
use rand::seq::index::sample;
use serde::{Deserialize, Serialize};
use serde_json::json;

/// How the vertices of `H` are grouped when choosing partition parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DenseSpec {
    /// `H` has classes `0..s` and `s..s+t`.
    Bipartite { s: usize, t: usize },
    /// A weighted partition of `H`; `d` defaults to `e(H)/|H|`.
    Weighted {
        partition: WeightedPartition,
        d: Option<f64>,
    },
    /// No structure: go straight to desk-scale parameters.
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseConfig {
    pub eta: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub retries: usize,
    pub exec: Exec,
}

impl Default for DenseConfig {
    fn default() -> Self {
        DenseConfig {
            eta: 0.05,
            epsilon: 0.1,
            seed: 0,
            retries: DEFAULT_RETRIES,
            exec: Exec::Parallel,
        }
    }
}

struct Chosen {
    params: BlockedPartitionParams,
    h_parts: Vec<VertexSet>,
    source: &'static str,
    theorem_error: Option<String>,
}

fn theorem_params(
    rest: &Graph,
    h: &Graph,
    spec: &DenseSpec,
    epsilon: f64,
) -> std::result::Result<(BlockedPartitionParams, Vec<VertexSet>), String> {
    let n = rest.n();
    if n < 2 {
        return Err("remaining graph has fewer than two vertices".into());
    }
    let p = rest.m() as f64 / (n * (n - 1) / 2) as f64 - epsilon;
    let (params, parts) = match spec {
        DenseSpec::Generic => return Err("no structure supplied".into()),
        DenseSpec::Bipartite { s, t } => {
            if s + t != h.n() {
                return Err(format!("classes {s} + {t} do not match |H| = {}", h.n()));
            }
            let tf = *t as f64;
            let f = *s as f64 * tf.ln() / tf;
            let bp = bipartite_params(tf, f, p, epsilon).map_err(|e| e.to_string())?;
            let parts = vec![(0..*s).collect(), (*s..s + t).collect()];
            (bp.blocked().map_err(|e| e.to_string())?, parts)
        }
        DenseSpec::Weighted { partition, d } => {
            let d = d.unwrap_or(h.m() as f64 / h.n().max(1) as f64);
            let wp = weighted_params(h, partition, d, p, epsilon).map_err(|e| e.to_string())?;
            if wp.used_parts.len() != partition.r() {
                return Err(format!("terrible parts {:?}", wp.terrible));
            }
            (wp.params, partition.parts.clone())
        }
    };
    if params.l * params.x() > n {
        return Err(format!(
            "l * x = {} exceeds the {n} available vertices",
            params.l * params.x()
        ));
    }
    Ok((params, parts))
}

fn choose(rest: &Graph, h: &Graph, spec: &DenseSpec, epsilon: f64) -> Option<Chosen> {
    let theorem_error = match theorem_params(rest, h, spec, epsilon) {
        Ok((params, h_parts)) => {
            return Some(Chosen {
                params,
                h_parts,
                source: "theorem",
                theorem_error: None,
            })
        }
        Err(e) => e,
    };
    // Desk fallback: one class, one block, every part as large as fits.
    let a = h.n().max(2);
    let b = rest.n() / a;
    (b > 0).then(|| Chosen {
        params: BlockedPartitionParams {
            a: vec![a],
            b: vec![b],
            l: 1,
            omega: 5.0,
            eta: 0.5,
        },
        h_parts: vec![(0..h.n()).collect()],
        source: "desk",
        theorem_error: Some(theorem_error),
    })
}

fn check_roots(g: &Graph, h: &Graph, roots: &[usize]) -> Result<(), String> {
    if roots.len() != h.n() {
        return Err(format!("{} roots for {} H-vertices", roots.len(), h.n()));
    }
    let set: VertexSet = roots.iter().copied().collect();
    if set.len() != roots.len() || set.max_vertex().is_some_and(|m| m >= g.n()) {
        return Err("roots must be distinct vertices of G".into());
    }
    Ok(())
}

/// Dense pipeline: roots, connector reservation, blocked partition on the
/// rest, random assignment of `H`, then repair of bad pairs through the
/// connector. Every stage is logged; a returned model has been validated.
pub fn embed_dense(
    g: &Graph,
    h: &Graph,
    spec: &DenseSpec,
    roots: Option<&[usize]>,
    cfg: &DenseConfig,
) -> EmbeddingReport {
    let seed = cfg.seed;
    let mut log = StageLog::new();
    if g.n() < h.n() {
        return log.fail("precondition", format!("|G| = {} < |H| = {}", g.n(), h.n()), seed);
    }
    if h.n() == 0 {
        return log.model(MinorModel::from_sets(Vec::new()), Some(Vec::new()), seed);
    }
    let given = roots.is_some();
    let roots: Vec<usize> = match roots {
        Some(r) => {
            if let Err(e) = check_roots(g, h, r) {
                return log.fail("precondition", e, seed);
            }
            r.to_vec()
        }
        None => sample(&mut derived_rng(seed, 0), g.n(), h.n()).into_vec(),
    };
    log.push("roots", json!({ "roots": roots, "given": given }));

    let cp = match reserve_connector(g, &roots, cfg.eta, derive_seed(seed, 1)) {
        Ok(cp) => cp,
        Err(e) => return log.fail("reserve_connector", e.to_string(), seed),
    };
    log.push(
        "reserve_connector",
        json!({ "size": cp.cp_set.len(), "budget": cp.budget, "within_budget": cp.within_budget }),
    );

    let removed: VertexSet = roots.iter().copied().chain(cp.cp_set.iter()).collect();
    let (rest, labels) = g.remove_vertices(&removed);
    let Some(chosen) = choose(&rest, h, spec, cfg.epsilon) else {
        return log.fail(
            "params",
            format!("{} vertices remain for {} parts", rest.n(), h.n().max(2)),
            seed,
        );
    };
    log.push(
        "params",
        json!({
            "source": chosen.source,
            "theorem_error": chosen.theorem_error,
            "params": chosen.params,
            "available": rest.n(),
        }),
    );

    let bp = match blocked_partition(&rest, &chosen.params, derive_seed(seed, 2), cfg.retries, cfg.exec) {
        Ok(bp) => bp,
        Err(e) => return log.fail("blocked_partition", e.to_string(), seed),
    };
    log.push(
        "blocked_partition",
        json!({
            "attempts": bp.attempts,
            "parts": bp.subpartitions.iter().map(|s| s.len()).collect::<Vec<_>>(),
            "density": bp.p,
            "redistributed": bp.redistribution_log.len(),
        }),
    );

    let asg = match almost_compatible_partition(
        &rest,
        h,
        &bp,
        &chosen.h_parts,
        derive_seed(seed, 3),
        cfg.retries,
        cfg.exec,
    ) {
        Ok(a) => a,
        Err(e) => return log.fail("almost_compatible_partition", e.to_string(), seed),
    };
    let to_g = |s: &VertexSet| -> VertexSet { s.iter().map(|v| labels[v]).collect() };
    let mut parts: Vec<VertexSet> = asg.vertex_to_part.iter().map(to_g).collect();
    let mut leftover: Vec<usize> = asg.unassigned.iter().flat_map(|s| to_g(s).into_vec()).collect();
    leftover.sort_unstable();
    let mut merged = 0;
    loop {
        let before = leftover.len();
        leftover.retain(|&v| {
            match parts.iter().position(|p| g.neighbors(v).iter().any(|&w| p.contains(w))) {
                Some(x) => {
                    parts[x].insert(v);
                    false
                }
                None => true,
            }
        });
        merged += before - leftover.len();
        if leftover.len() == before {
            break;
        }
    }
    log.push(
        "almost_compatible_partition",
        json!({
            "attempts": asg.attempts,
            "bad_edges": asg.bad_edges.len(),
            "merged_leftover": merged,
            "unused_leftover": leftover.len(),
        }),
    );

    match fix_bad_pairs(g, h, &parts, &roots, &cp, &asg.bad_edges) {
        Ok(model) => {
            log.push("fix_bad_pairs", json!({ "routed": asg.bad_edges.len(), "valid": true }));
            log.model(model, Some(roots), seed)
        }
        Err(e) => log.fail("fix_bad_pairs", e.to_string(), seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::validate_model;
    use crate::rng::rng_from_seed;

    #[test]
    fn complete_host_always_succeeds() {
        let g = Graph::complete(30);
        let h = Graph::petersen();
        for seed in 0..5 {
            let cfg = DenseConfig {
                seed,
                ..DenseConfig::default()
            };
            let rep = embed_dense(&g, &h, &DenseSpec::Generic, None, &cfg);
            let model = rep.model.expect("complete host");
            assert!(validate_model(&g, &h, &model).unwrap().valid);
        }
    }

    #[test]
    fn bipartite_in_random_host() {
        let g = Graph::gnp(120, 0.8, &mut rng_from_seed(9));
        let h = Graph::complete_bipartite(2, 8);
        let spec = DenseSpec::Bipartite { s: 2, t: 8 };
        let cfg = DenseConfig {
            seed: 3,
            exec: Exec::Sequential,
            ..DenseConfig::default()
        };
        let rep = embed_dense(&g, &h, &spec, None, &cfg);
        let model = rep.model.as_ref().expect("dense host");
        assert!(validate_model(&g, &h, model).unwrap().valid);
        let roots = rep.roots.unwrap();
        for (x, &r) in roots.iter().enumerate() {
            assert!(model.set(x).contains(r));
        }
    }

    #[test]
    fn too_small_host() {
        let rep = embed_dense(
            &Graph::complete(3),
            &Graph::complete(4),
            &DenseSpec::Generic,
            None,
            &DenseConfig::default(),
        );
        assert_eq!(rep.failure.unwrap().stage, "precondition");
    }
}
