//! The structured random family: `t` vertices split into consecutive parts
//! of sizes set by `σ`, with exactly `⌊t·d^{D_ij}⌋` edges between parts `i`
//! and `j`, plus the matching experiment between `γ(σ, D)` and `γ_r(H)`.

use crate::error::{Error, Result};
use crate::gamma::{
    gamma_classic, gamma_inequality_lhs, gamma_r, gamma_vec, GammaInstance, GammaRMode,
    WeightedPartition,
};
use crate::graphcore::{write_graph, Graph};
use crate::par::Exec;
use crate::rng::{derive_seed, rng_from_seed};
use crate::round::{ceil_tol, floor_tol};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(flatten)]
    pub inst: GammaInstance,
    pub t: usize,
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledH {
    #[serde(serialize_with = "graph_text")]
    pub graph: Graph,
    /// Prefix sums `0, s_1, s_1 + s_2, .., t`.
    pub part_boundaries: Vec<usize>,
    pub seed: u64,
}

fn graph_text<S: serde::Serializer>(g: &Graph, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&write_graph(g))
}

impl SampledH {
    pub fn part_of(&self, v: usize) -> usize {
        self.part_boundaries.partition_point(|&b| b <= v) - 1
    }

    pub fn part_labels(&self) -> Vec<usize> {
        (0..self.graph.n()).map(|v| self.part_of(v)).collect()
    }
}

/// `s_i = ⌊σ_i t⌋` for `i <= i_0` and `⌈σ_i t⌉` after, with the largest
/// cutoff `i_0` that makes the sizes sum to `t`.
pub fn part_sizes(sigma: &[f64], t: usize) -> Result<Vec<usize>> {
    let r = sigma.len();
    let floors: Vec<usize> = sigma.iter().map(|s| floor_tol(s * t as f64) as usize).collect();
    let ceils: Vec<usize> = sigma.iter().map(|s| ceil_tol(s * t as f64) as usize).collect();
    for i0 in (0..=r).rev() {
        let sizes: Vec<usize> = (0..r).map(|i| if i < i0 { floors[i] } else { ceils[i] }).collect();
        if sizes.iter().sum::<usize>() == t {
            return Ok(sizes);
        }
    }
    Err(Error::Internal(format!("no cutoff gives part sizes summing to {t}")))
}

/// `⌊t·d^{D}⌋`, zero for `D = −∞`.
pub fn target_edges(t: usize, d: f64, exp: crate::gamma::Exponent) -> u64 {
    match exp.finite() {
        None => 0,
        Some(x) => floor_tol(t as f64 * d.powf(x)).max(0.0) as u64,
    }
}

/// Draws a member of the family. Slots between distinct parts are listed
/// row-major, slots inside a part in lexicographic order; each pair `i <= j`
/// takes a partial Fisher–Yates prefix from one seeded stream.
pub fn sample_family(spec: &FamilySpec, seed: u64) -> Result<SampledH> {
    spec.inst.validate()?;
    let r = spec.inst.r();
    if spec.t < r {
        return Err(Error::invalid(format!("t = {} is below r = {r}", spec.t)));
    }
    if !(spec.d > 1.0) {
        return Err(Error::invalid(format!("d = {} must exceed 1", spec.d)));
    }
    let sizes = part_sizes(&spec.inst.sigma, spec.t)?;
    let mut bounds = vec![0];
    for s in &sizes {
        bounds.push(bounds.last().unwrap() + s);
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for i in 0..r {
        for j in i..r {
            let need = target_edges(spec.t, spec.d, spec.inst.d[i][j]);
            let (si, sj) = (sizes[i] as u64, sizes[j] as u64);
            let capacity = if i == j { si * si.saturating_sub(1) / 2 } else { si * sj };
            if need > capacity {
                return Err(Error::InfeasibleSpec {
                    i,
                    j,
                    needed: need,
                    capacity,
                });
            }
            if need == 0 {
                continue;
            }
            let slots: Vec<(usize, usize)> = if i == j {
                (bounds[i]..bounds[i + 1])
                    .flat_map(|u| (u + 1..bounds[i + 1]).map(move |v| (u, v)))
                    .collect()
            } else {
                (bounds[i]..bounds[i + 1])
                    .flat_map(|u| (bounds[j]..bounds[j + 1]).map(move |v| (u, v)))
                    .collect()
            };
            let mut idx: Vec<usize> = (0..slots.len()).collect();
            for k in 0..need as usize {
                let pick = rng.gen_range(k..idx.len());
                idx.swap(k, pick);
                edges.push(slots[idx[k]]);
            }
        }
    }
    Ok(SampledH {
        graph: Graph::from_edges(spec.t, &edges)?,
        part_boundaries: bounds,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchRow {
    pub index: usize,
    pub seed: u64,
    pub edges: usize,
    /// `e(H) / t`, the base used by the Gamma inequality.
    pub d_h: f64,
    /// Best of the annealing result and the explicit witness.
    pub gamma_r: f64,
    pub gamma_r_heuristic: f64,
    pub ratio: Option<f64>,
    /// Average weight of the family parts weighted by `c·β*`.
    pub witness_value: f64,
    pub witness_scale: f64,
    pub witness_lhs: f64,
    /// `witness_value / γ − 1`.
    pub eps_report: Option<f64>,
    /// Witness feasible and `γ_r(H) <= γ(σ,D)(1 + eps_report)`.
    pub certified: bool,
    pub gamma_h: Option<f64>,
    /// `γ(H) sqrt(ln t / ln d_h)`.
    pub gamma_h_scaled: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchSummary {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub frac_within_eps: f64,
    pub all_certified: bool,
    pub max_eps_report: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaMatchReport {
    pub gamma: f64,
    pub beta: Vec<f64>,
    pub degenerate: bool,
    pub r: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub rows: Vec<MatchRow>,
    pub summary: Option<MatchSummary>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchConfig {
    pub r: usize,
    pub samples: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub anneal_iterations: usize,
    pub exec: Exec,
}

/// Least `c >= 0` with the Gamma inequality holding at weights `c·β`.
fn witness_scale(h: &Graph, parts: &[crate::graphcore::VertexSet], beta: &[f64], d: f64) -> Result<(f64, f64)> {
    let lhs = |c: f64| {
        let wp = WeightedPartition::new(parts.to_vec(), beta.iter().map(|b| c * b).collect());
        gamma_inequality_lhs(h, &wp, d)
    };
    if lhs(0.0)? <= 1.0 {
        return Ok((0.0, lhs(0.0)?));
    }
    let mut hi = 1.0;
    while lhs(hi)? > 1.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Internal("witness scale diverged".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if lhs(mid)? > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok((hi, lhs(hi)?))
}

/// Samples `H` from the family and compares `γ_r(H)` with `γ(σ, D)`.
pub fn gamma_match_experiment(spec: &FamilySpec, cfg: &MatchConfig) -> Result<GammaMatchReport> {
    let gv = gamma_vec(&spec.inst, 1e-12)?;
    let gamma = gv.value;
    let degenerate = gamma <= 0.0;
    let rows: Vec<Result<MatchRow>> = cfg.exec.map(cfg.samples, |i| {
        let seed = derive_seed(cfg.seed, i as u64);
        let s = sample_family(spec, seed)?;
        let h = &s.graph;
        let t = h.n();
        let d_h = h.m() as f64 / t as f64;
        if h.m() == 0 {
            return Ok(MatchRow {
                index: i,
                seed,
                edges: 0,
                d_h,
                gamma_r: 0.0,
                gamma_r_heuristic: 0.0,
                ratio: None,
                witness_value: 0.0,
                witness_scale: 0.0,
                witness_lhs: 0.0,
                eps_report: None,
                certified: degenerate,
                gamma_h: None,
                gamma_h_scaled: None,
            });
        }
        let parts: Vec<_> = (0..spec.inst.r())
            .map(|p| (s.part_boundaries[p]..s.part_boundaries[p + 1]).collect())
            .collect();
        let (c, wlhs) = witness_scale(h, &parts, &gv.beta, d_h)?;
        let wp = WeightedPartition::new(parts, gv.beta.iter().map(|b| c * b).collect());
        let witness_value = wp.average(t);
        let feasible = gamma_inequality_lhs(h, &wp, d_h)? <= 1.0 + crate::gamma::SLACK_TOL;
        let labels = s.part_labels();
        let start = (spec.inst.r() <= cfg.r).then_some(labels);
        let heur = gamma_r(
            h,
            cfg.r,
            &GammaRMode::Heuristic {
                seed,
                iterations: cfg.anneal_iterations,
                start,
            },
            Exec::Sequential,
        )?;
        let gr = heur.value.min(witness_value);
        let eps_report = (!degenerate).then(|| witness_value / gamma - 1.0);
        let certified = feasible
            && eps_report.is_some_and(|e| gr <= gamma * (1.0 + e) * (1.0 + 1e-12));
        let gamma_h = if t <= 30 {
            Some(gamma_classic(h, crate::gamma::SLACK_TOL)?.value)
        } else {
            None
        };
        Ok(MatchRow {
            index: i,
            seed,
            edges: h.m(),
            d_h,
            gamma_r: gr,
            gamma_r_heuristic: heur.value,
            ratio: (!degenerate).then(|| gr / gamma),
            witness_value,
            witness_scale: c,
            witness_lhs: wlhs,
            eps_report,
            certified,
            gamma_h,
            gamma_h_scaled: gamma_h
                .filter(|_| d_h > 1.0)
                .map(|g| g * ((t as f64).ln() / d_h.ln()).sqrt()),
        })
    });
    let rows: Vec<MatchRow> = rows.into_iter().collect::<Result<_>>()?;
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let summary = (!ratios.is_empty()).then(|| MatchSummary {
        min: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        max: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean: ratios.iter().sum::<f64>() / ratios.len() as f64,
        frac_within_eps: ratios
            .iter()
            .filter(|&&x| (1.0 - cfg.epsilon..=1.0 + cfg.epsilon).contains(&x))
            .count() as f64
            / ratios.len() as f64,
        all_certified: rows.iter().all(|r| r.certified),
        max_eps_report: rows
            .iter()
            .filter_map(|r| r.eps_report)
            .fold(f64::NEG_INFINITY, f64::max),
    });
    Ok(GammaMatchReport {
        gamma,
        beta: gv.beta,
        degenerate,
        r: cfg.r,
        epsilon: cfg.epsilon,
        seed: cfg.seed,
        rows,
        summary,
    })
}
