use super::base::{base_l, sample_base_graph};
use super::graph_text;
use crate::error::{Error, Result};
use crate::gamma::{alpha, gamma_vec, GammaInstance, OBJECTIVE_TOL};
use crate::graphcore::{balanced_blowup, Graph};
use crate::par::Exec;
use crate::round::{ceil_tol, floor_tol};
use serde::Serialize;

/// Largest base graph the builders will materialise.
pub const MAX_BASE_ORDER: usize = 5_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub name: String,
    pub target: f64,
    pub measured: f64,
    pub holds: bool,
}

impl Claim {
    fn at_least(name: &str, target: f64, measured: f64) -> Self {
        Claim {
            name: name.into(),
            target,
            measured,
            holds: measured >= target - 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundParams {
    pub t: f64,
    pub d: usize,
    pub p: f64,
    pub epsilon: f64,
    pub l: f64,
    pub gamma: Option<f64>,
    pub f: Option<f64>,
    /// `k` before flooring.
    pub k_real: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundGraph {
    #[serde(serialize_with = "graph_text")]
    pub graph: Graph,
    #[serde(serialize_with = "graph_text")]
    pub base: Graph,
    pub k: usize,
    pub params: LowerBoundParams,
    pub claims: Vec<Claim>,
    pub seed: u64,
}

impl LowerBoundGraph {
    /// True when `graph` is exactly the blowup of `base` by `k`.
    pub fn verify_blowup(&self) -> bool {
        balanced_blowup(&self.base, self.k).is_ok_and(|b| b == self.graph)
    }
}

fn density(g: &Graph) -> f64 {
    let n = g.n();
    if n < 2 {
        0.0
    } else {
        g.m() as f64 / (n * (n - 1) / 2) as f64
    }
}

/// `(1-ε) γ t l / d` before flooring.
pub fn lowerbound_k(gamma: f64, t: f64, l: f64, d: f64, epsilon: f64) -> f64 {
    (1.0 - epsilon) * gamma * t * l / d
}

/// `2 (1-ε) ln t sqrt(1 / (f ln(1/(1-p))))` at the optimal `p`, before flooring.
pub fn bipartite_k(t: f64, f: f64, epsilon: f64) -> f64 {
    let q = 1.0 - alpha().p_star;
    2.0 * (1.0 - epsilon) * t.ln() * (1.0 / (f * (1.0 / q).ln())).sqrt()
}

/// Blows up a given base graph by `k` and records the size and density
/// claims for the weighted construction.
pub fn lowerbound_from_base(base: Graph, k: usize, params: LowerBoundParams, seed: u64) -> Result<LowerBoundGraph> {
    let graph = balanced_blowup(&base, k)?;
    let mut claims = vec![Claim::at_least(
        "density >= p - 2 epsilon",
        params.p - 2.0 * params.epsilon,
        density(&graph),
    )];
    if let Some(gamma) = params.gamma {
        claims.push(Claim::at_least(
            "|G| >= (1 - 2 epsilon) gamma t l",
            (1.0 - 2.0 * params.epsilon) * gamma * params.t * params.l,
            graph.n() as f64,
        ));
    }
    if let Some(f) = params.f {
        let avg = if graph.n() == 0 { 0.0 } else { 2.0 * graph.m() as f64 / graph.n() as f64 };
        claims.push(Claim::at_least(
            "average degree >= 2 (alpha - 3 epsilon) t sqrt(f)",
            2.0 * (alpha().alpha - 3.0 * params.epsilon) * params.t * f.sqrt(),
            avg,
        ));
    }
    Ok(LowerBoundGraph {
        graph,
        base,
        k,
        params,
        claims,
        seed,
    })
}

fn check_base_order(d: usize) -> Result<()> {
    if d > MAX_BASE_ORDER {
        return Err(Error::Capacity(format!("base graph on {d} vertices exceeds {MAX_BASE_ORDER}")));
    }
    Ok(())
}

/// Base graph `G(d, p)` blown up by `k = ⌊(1-ε) γ t l / d⌋`.
pub fn build_lowerbound_graph(
    inst: &GammaInstance,
    t: usize,
    d: usize,
    p: f64,
    epsilon: f64,
    seed: u64,
) -> Result<LowerBoundGraph> {
    if !(epsilon >= 0.0 && epsilon < 0.5) {
        return Err(Error::invalid(format!("epsilon = {epsilon} must lie in [0, 1/2)")));
    }
    check_base_order(d)?;
    let gamma = gamma_vec(inst, OBJECTIVE_TOL)?.value;
    let l = base_l(d as f64, p);
    let k_real = lowerbound_k(gamma, t as f64, l, d as f64, epsilon);
    let k = floor_tol(k_real) as usize;
    if k == 0 {
        return Err(Error::RegimeTooSmall(format!(
            "k = floor((1 - {epsilon}) * {gamma} * {t} * {l} / {d}) = floor({k_real}) = 0"
        )));
    }
    let base = sample_base_graph(d, p, epsilon.max(f64::MIN_POSITIVE), seed, 0, Exec::Sequential)?.graph;
    let params = LowerBoundParams {
        t: t as f64,
        d,
        p,
        epsilon,
        l,
        gamma: Some(gamma),
        f: None,
        k_real,
    };
    lowerbound_from_base(base, k, params, seed)
}

/// Base graph `G(⌈f t / ln t⌉, 0.715..)` blown up by
/// `k = ⌊2(1-ε) ln t sqrt(1/(f ln(1/(1-p))))⌋`.
pub fn build_bipartite_lowerbound(t: usize, f: f64, epsilon: f64, seed: u64) -> Result<LowerBoundGraph> {
    let tf = t as f64;
    if t < 3 || !(f > 0.0 && f <= tf.ln()) {
        return Err(Error::invalid(format!("need 0 < f <= ln t, got f = {f}, ln t = {}", tf.ln())));
    }
    if !(epsilon >= 0.0 && epsilon < 0.5) {
        return Err(Error::invalid(format!("epsilon = {epsilon} must lie in [0, 1/2)")));
    }
    let p = alpha().p_star;
    let d = ceil_tol(f * tf / tf.ln()) as usize;
    check_base_order(d)?;
    let k_real = bipartite_k(tf, f, epsilon);
    let k = floor_tol(k_real) as usize;
    if k == 0 {
        return Err(Error::RegimeTooSmall(format!("k = floor({k_real}) = 0")));
    }
    let base = sample_base_graph(d.max(4), p, epsilon.max(f64::MIN_POSITIVE), seed, 0, Exec::Sequential)?.graph;
    let params = LowerBoundParams {
        t: tf,
        d: base.n(),
        p,
        epsilon,
        l: base_l(base.n() as f64, p),
        gamma: None,
        f: Some(f),
        k_real,
    };
    lowerbound_from_base(base, k, params, seed)
}
