use super::partition::{gamma_inequality_lhs, WeightedPartition};
use super::solver::Inner;
use crate::error::{Error, Result};
use crate::graphcore::Graph;
use crate::par::Exec;
use crate::rng::rng_from_seed;
use rand::Rng;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub enum GammaRMode {
    /// Every set partition into at most `r` parts; refused when
    /// `r^|H| > cap`.
    Exhaustive { cap: f64 },
    /// Simulated annealing over part labels, seeded, optionally started
    /// from a given labelling.
    Heuristic {
        seed: u64,
        iterations: usize,
        start: Option<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionWitness {
    pub value: f64,
    pub partition: WeightedPartition,
    /// `d = e(H) / t`.
    pub d: f64,
    /// Gamma-inequality left side at the witness.
    pub lhs: f64,
    pub partitions_examined: usize,
}

/// All set partitions of `0..n` into at most `max_parts` blocks, as
/// restricted growth strings (block labels in order of first appearance).
pub fn set_partitions(n: usize, max_parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    fn rec(i: usize, used: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..=used.min(max - 1) {
            cur[i] = b;
            rec(i + 1, used.max(b + 1), max, cur, out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    if max_parts > 0 {
        rec(0, 0, max_parts, &mut cur, &mut out);
    }
    out
}

/// Optimal weights for a fixed labelling; returns the average weight and
/// the weight of every label `0..parts`.
fn solve_labels(h: &Graph, labels: &[usize], parts: usize, ln_d: f64) -> (f64, Vec<f64>) {
    let t = h.n() as f64;
    let mut size = vec![0usize; parts];
    for &l in labels {
        size[l] += 1;
    }
    let mut e = vec![vec![0usize; parts]; parts];
    for (u, v) in h.edges() {
        let (a, b) = (labels[u].min(labels[v]), labels[u].max(labels[v]));
        e[a][b] += 1;
    }
    let mut index = vec![usize::MAX; parts];
    let mut active = Vec::new();
    for a in 0..parts {
        let touched = (0..parts).any(|b| e[a.min(b)][a.max(b)] > 0);
        if touched {
            index[a] = active.len();
            active.push(a);
        }
    }
    let mut terms = Vec::new();
    for a in 0..parts {
        for b in a..parts {
            if e[a][b] > 0 {
                terms.push((index[a], index[b], e[a][b] as f64 / t));
            }
        }
    }
    let inner = Inner {
        costs: active.iter().map(|&a| size[a] as f64 / t).collect(),
        terms,
        ln_base: ln_d,
    };
    let sol = inner.solve();
    let mut w = vec![0.0; parts];
    for (k, &a) in active.iter().enumerate() {
        w[a] = sol.w[k];
    }
    (sol.value, w)
}

/// `γ_r(H)`: least average weight of a weighted partition into at most `r`
/// parts satisfying the Gamma inequality, with `d = e(H) / |H|`.
pub fn gamma_r(h: &Graph, r: usize, mode: &GammaRMode, exec: Exec) -> Result<PartitionWitness> {
    if r == 0 {
        return Err(Error::invalid("r must be at least 1"));
    }
    let t = h.n();
    if t == 0 {
        return Err(Error::Degenerate("H has no vertices".into()));
    }
    if h.m() == 0 {
        let partition = WeightedPartition::single(t, 0.0);
        return Ok(PartitionWitness {
            value: 0.0,
            partition,
            d: 0.0,
            lhs: 0.0,
            partitions_examined: 0,
        });
    }
    let d = h.m() as f64 / t as f64;
    if d <= 1.0 {
        return Err(Error::invalid(format!(
            "d = e(H)/|H| = {d} must exceed 1 for the Gamma inequality"
        )));
    }
    let ln_d = d.ln();
    let (labels, weights, examined) = match mode {
        GammaRMode::Exhaustive { cap } => {
            let size = (r as f64).powi(t as i32);
            if size > *cap {
                return Err(Error::CapExceeded {
                    size,
                    cap: *cap,
                    hint: "use heuristic mode".into(),
                });
            }
            let all = set_partitions(t, r);
            let sols = exec.map_slice(&all, |l| solve_labels(h, l, r, ln_d));
            let (best, _) = sols
                .iter()
                .enumerate()
                .fold((0, f64::INFINITY), |(bi, bv), (i, s)| if s.0 < bv { (i, s.0) } else { (bi, bv) });
            (all[best].clone(), sols[best].1.clone(), all.len())
        }
        GammaRMode::Heuristic {
            seed,
            iterations,
            start,
        } => {
            let mut labels = match start {
                Some(s) if s.len() != t || s.iter().any(|&l| l >= r) => {
                    return Err(Error::MalformedPartition("start labelling does not fit".into()))
                }
                Some(s) => s.clone(),
                None => vec![0; t],
            };
            let mut rng = rng_from_seed(*seed);
            let (mut cur, w0) = solve_labels(h, &labels, r, ln_d);
            let (mut best, mut best_w, mut best_l) = (cur, w0, labels.clone());
            let (t0, t1) = (0.05f64, 1e-4f64);
            if r > 1 {
                for k in 0..*iterations {
                    let temp = t0 * (t1 / t0).powf(k as f64 / *iterations as f64);
                    let v = rng.gen_range(0..t);
                    let old = labels[v];
                    let mut new = rng.gen_range(0..r - 1);
                    if new >= old {
                        new += 1;
                    }
                    labels[v] = new;
                    let (val, w) = solve_labels(h, &labels, r, ln_d);
                    let accept = val <= cur || rng.gen::<f64>() < (-(val - cur) / temp).exp();
                    if accept {
                        cur = val;
                        if cur < best {
                            best = cur;
                            best_w = w;
                            best_l = labels.clone();
                        }
                    } else {
                        labels[v] = old;
                    }
                }
            }
            (best_l, best_w, iterations + 1)
        }
    };
    let partition = WeightedPartition::from_labels(&labels, weights);
    let lhs = gamma_inequality_lhs(h, &partition, d)?;
    Ok(PartitionWitness {
        value: partition.average(t),
        partition,
        d,
        lhs,
        partitions_examined: examined,
    })
}
