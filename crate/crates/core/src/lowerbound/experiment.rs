use super::base::{base_l, sample_base_graph};
use super::blowup::{lowerbound_from_base, lowerbound_k, LowerBoundGraph, LowerBoundParams};
use super::certify::{certify_not_minor, Certification};
use crate::error::{Error, Result};
use crate::family::{sample_family, FamilySpec};
use crate::gamma::{gamma_vec, GammaInstance, OBJECTIVE_TOL};
use crate::graphcore::Graph;
use crate::par::Exec;
use crate::rng::derive_seed;
use crate::round::floor_tol;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub struct LbExperimentConfig {
    pub t: usize,
    pub d: usize,
    pub p: f64,
    pub epsilon: f64,
    pub samples: usize,
    pub seed: u64,
    pub budget: u64,
    /// Replaces `⌊(1-ε) γ t l / d⌋`.
    pub k_override: Option<usize>,
    /// Replaces the sampled base graph; must have `d` vertices.
    pub base: Option<Graph>,
    pub exec: Exec,
}

impl LbExperimentConfig {
    pub fn new(t: usize, d: usize, samples: usize, seed: u64) -> Self {
        LbExperimentConfig {
            t,
            d,
            p: 0.715,
            epsilon: 0.1,
            samples,
            seed,
            budget: 5_000_000,
            k_override: None,
            base: None,
            exec: Exec::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LbSample {
    pub index: usize,
    pub seed: u64,
    pub h_edges: usize,
    pub certification: Certification,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LbExperimentReport {
    pub lower_bound: LowerBoundGraph,
    pub gamma: f64,
    pub samples: Vec<LbSample>,
    pub not_minor: usize,
    pub minor: usize,
    pub inconclusive: usize,
    /// Over completed searches only.
    pub not_minor_fraction: Option<f64>,
    /// `1 - 2^{-t}`, asymptotic and not binding here.
    pub theorem_fraction: f64,
    /// Every sampled `H` is edgeless.
    pub degenerate: bool,
}

/// Builds the lower-bound graph at tiny scale and tries to certify that
/// sampled members of the family are not minors of it.
pub fn desk_scale_lowerbound_experiment(inst: &GammaInstance, cfg: &LbExperimentConfig) -> Result<LbExperimentReport> {
    if cfg.t > 6 {
        return Err(Error::invalid(format!("t = {} exceeds the desk limit 6", cfg.t)));
    }
    let gamma = gamma_vec(inst, OBJECTIVE_TOL)?.value;
    let l = base_l(cfg.d as f64, cfg.p);
    let k_real = lowerbound_k(gamma, cfg.t as f64, l, cfg.d as f64, cfg.epsilon);
    let k = cfg.k_override.unwrap_or(floor_tol(k_real) as usize);
    if k == 0 {
        return Err(Error::RegimeTooSmall(format!("k = floor({k_real}) = 0 and no override given")));
    }
    if k * cfg.d > 20 {
        return Err(Error::invalid(format!("|G| = {} exceeds the desk limit 20", k * cfg.d)));
    }
    let base = match &cfg.base {
        Some(b) if b.n() != cfg.d => {
            return Err(Error::invalid(format!("base has {} vertices, expected d = {}", b.n(), cfg.d)))
        }
        Some(b) => b.clone(),
        None => sample_base_graph(cfg.d, cfg.p, cfg.epsilon, cfg.seed, 0, Exec::Sequential)?.graph,
    };
    let params = LowerBoundParams {
        t: cfg.t as f64,
        d: cfg.d,
        p: cfg.p,
        epsilon: cfg.epsilon,
        l,
        gamma: Some(gamma),
        f: None,
        k_real,
    };
    let lb = lowerbound_from_base(base, k, params, cfg.seed)?;
    let spec = FamilySpec {
        inst: inst.clone(),
        t: cfg.t,
        d: cfg.d as f64,
    };
    let sample_seed = derive_seed(cfg.seed, 1);
    let samples = cfg
        .exec
        .map(cfg.samples, |i| -> Result<LbSample> {
            let seed = derive_seed(sample_seed, i as u64);
            let h = sample_family(&spec, seed)?.graph;
            Ok(LbSample {
                index: i,
                seed,
                h_edges: h.m(),
                certification: certify_not_minor(&lb.graph, &h, cfg.budget)?,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let count = |label: &str| samples.iter().filter(|s| s.certification.label() == label).count();
    let (not_minor, minor, inconclusive) = (count("not_minor"), count("minor"), count("inconclusive"));
    let completed = not_minor + minor;
    Ok(LbExperimentReport {
        gamma,
        not_minor,
        minor,
        inconclusive,
        not_minor_fraction: (completed > 0).then(|| not_minor as f64 / completed as f64),
        theorem_fraction: 1.0 - 0.5f64.powi(cfg.t as i32),
        degenerate: samples.iter().all(|s| s.h_edges == 0),
        samples,
        lower_bound: lb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::Exponent;

    #[test]
    fn edgeless_family_is_degenerate() {
        let inst = GammaInstance::new(vec![1.0], vec![vec![Exponent::NegInfinity]]).unwrap();
        let mut cfg = LbExperimentConfig::new(5, 5, 4, 1);
        cfg.k_override = Some(1);
        let rep = desk_scale_lowerbound_experiment(&inst, &cfg).unwrap();
        assert!(rep.degenerate);
        assert_eq!(rep.not_minor_fraction, Some(0.0));
    }

    #[test]
    fn empty_base_certifies_everything() {
        let inst = GammaInstance::from_pairs(vec![0.5, 0.5], &[(0, 1, 0.2)]).unwrap();
        let mut cfg = LbExperimentConfig::new(5, 4, 6, 2);
        cfg.base = Some(Graph::empty(4));
        cfg.k_override = Some(3);
        let rep = desk_scale_lowerbound_experiment(&inst, &cfg).unwrap();
        for s in &rep.samples {
            if s.h_edges > 0 {
                assert_eq!(s.certification.label(), "not_minor");
            }
        }
    }
}
