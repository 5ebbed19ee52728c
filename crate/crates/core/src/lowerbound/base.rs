use super::graph_text;
use crate::error::{Error, Result};
use crate::graphcore::{Graph, VertexSet};
use crate::par::Exec;
use crate::rng::{derive_seed, derived_rng};
use crate::round::{ceil_tol, floor_tol};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

/// Resamples allowed before giving up on density `>= p`.
pub const RESAMPLE_CAP: usize = 16;

/// `l = sqrt(log_{1/(1-p)} d)`.
pub fn base_l(d: f64, p: f64) -> f64 {
    (d.ln() / (-(-p).ln_1p())).sqrt()
}

/// `x = i / l^2` for `1 <= i <= ⌊l^3⌋`, capped at `x <= l`. The `x = 0`
/// row is vacuous and skipped.
pub fn x_grid(l: f64) -> Vec<f64> {
    let top = floor_tol(l.powi(3)) as usize;
    (1..=top)
        .map(|i| i as f64 / (l * l))
        .filter(|&x| x <= l + 1e-12)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub x: f64,
    pub s: usize,
    /// Largest allowed `|A_i||B_j|`, `⌊x l^2⌋`.
    pub cap: usize,
    pub families_tested: usize,
    pub failures: usize,
    pub min_nonadjacent: Option<usize>,
    /// `d^{-x} s^2 / 2`.
    pub threshold: f64,
    /// `2s > d`: no disjoint families exist.
    pub vacuous: bool,
    pub pass: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaseGraphCertificate {
    #[serde(serialize_with = "graph_text")]
    pub graph: Graph,
    pub d: usize,
    pub p: f64,
    pub epsilon: f64,
    pub l: f64,
    pub seed: u64,
    pub resamples: usize,
    pub density: f64,
    pub checks: Vec<CheckRow>,
}

impl BaseGraphCertificate {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Samples `trials` random families `A_1..A_s, B_1..B_s` of disjoint
/// non-empty sets with `|A_i||B_j| <= ⌊x l^2⌋` and counts non-adjacent pairs.
/// The row is reproducible from `seed`: trial `k` uses `derived_rng(seed, k)`.
pub fn check_row(g: &Graph, epsilon: f64, l: f64, x: f64, trials: usize, seed: u64) -> CheckRow {
    let d = g.n();
    let s = ceil_tol((d as f64).powf(epsilon + x)).max(1.0) as usize;
    let cap = (floor_tol(x * l * l) as usize).max(1);
    let threshold = 0.5 * (d as f64).powf(-x) * (s * s) as f64;
    let vacuous = 2 * s > d;
    let mut failures = 0;
    let mut min_nonadjacent: Option<usize> = None;
    if !vacuous {
        for k in 0..trials {
            let mut rng = derived_rng(seed, k as u64);
            let mut a = rng.gen_range(1..=cap);
            let mut b = rng.gen_range(1..=(cap / a).max(1));
            while s * (a + b) > d {
                if a >= b {
                    a -= 1;
                } else {
                    b -= 1;
                }
            }
            let mut order: Vec<usize> = (0..d).collect();
            order.shuffle(&mut rng);
            let chunk = |start: usize, size: usize| -> VertexSet { order[start..start + size].iter().copied().collect() };
            let sets_a: Vec<VertexSet> = (0..s).map(|i| chunk(i * a, a)).collect();
            let sets_b: Vec<VertexSet> = (0..s).map(|j| chunk(s * a + j * b, b)).collect();
            let non_adj = sets_a
                .iter()
                .map(|sa| sets_b.iter().filter(|sb| !g.sets_adjacent(sa, sb)).count())
                .sum::<usize>();
            min_nonadjacent = Some(min_nonadjacent.map_or(non_adj, |m| m.min(non_adj)));
            if (non_adj as f64) < threshold {
                failures += 1;
            }
        }
    }
    CheckRow {
        x,
        s,
        cap,
        families_tested: if vacuous { 0 } else { trials },
        failures,
        min_nonadjacent,
        threshold,
        vacuous,
        pass: failures == 0,
        seed,
    }
}

/// Samples `G(d, p)` until its density is at least `p`, then runs
/// `mc_trials` family checks on every `x` of the grid.
pub fn sample_base_graph(
    d: usize,
    p: f64,
    epsilon: f64,
    seed: u64,
    mc_trials: usize,
    exec: Exec,
) -> Result<BaseGraphCertificate> {
    if d < 4 {
        return Err(Error::invalid(format!("d = {d} must be at least 4")));
    }
    if !(p > 0.0 && p < 1.0) || !(epsilon > 0.0) {
        return Err(Error::invalid(format!("need 0 < p < 1 and epsilon > 0, got p = {p}, epsilon = {epsilon}")));
    }
    let pairs = (d * (d - 1) / 2) as f64;
    let mut found = None;
    for attempt in 0..RESAMPLE_CAP {
        let g = Graph::gnp(d, p, &mut derived_rng(seed, attempt as u64));
        if g.m() as f64 >= p * pairs {
            found = Some((g, attempt + 1));
            break;
        }
    }
    let Some((graph, resamples)) = found else {
        return Err(Error::SamplingFailed(format!(
            "G({d}, {p}) stayed below density {p} for {RESAMPLE_CAP} samples"
        )));
    };
    let l = base_l(d as f64, p);
    let grid = x_grid(l);
    let row_seed = derive_seed(seed, 1_000);
    let checks = exec.map(grid.len(), |i| {
        check_row(&graph, epsilon, l, grid[i], mc_trials, derive_seed(row_seed, i as u64))
    });
    Ok(BaseGraphCertificate {
        density: graph.m() as f64 / pairs,
        graph,
        d,
        p,
        epsilon,
        l,
        seed,
        resamples,
        checks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeFrequency {
    pub observed: f64,
    /// `(1-p)^{|A||B|}`.
    pub expected: f64,
    /// Standard deviation of the observed frequency.
    pub sigma: f64,
}

/// Frequency over `resamples` draws of `G(d, p)` that `A = {0..a}` and
/// `B = {a..a+b}` have no edge between them.
pub fn no_edge_frequency(d: usize, p: f64, a: usize, b: usize, resamples: usize, seed: u64) -> Result<EdgeFrequency> {
    if a + b > d || a == 0 || b == 0 || resamples == 0 {
        return Err(Error::invalid(format!("need 1 <= a, b, a + b <= d = {d}, resamples > 0")));
    }
    let sa: VertexSet = (0..a).collect();
    let sb: VertexSet = (a..a + b).collect();
    let hits = (0..resamples)
        .filter(|&k| !Graph::gnp(d, p, &mut derived_rng(seed, k as u64)).sets_adjacent(&sa, &sb))
        .count();
    let expected = (1.0 - p).powi((a * b) as i32);
    Ok(EdgeFrequency {
        observed: hits as f64 / resamples as f64,
        expected,
        sigma: (expected * (1.0 - expected) / resamples as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_d_rejected() {
        assert!(matches!(
            sample_base_graph(2, 0.5, 0.1, 0, 0, Exec::Sequential),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn density_and_reproducible_rows() {
        let c = sample_base_graph(40, 0.715, 0.1, 5, 20, Exec::Parallel).unwrap();
        assert!(c.density >= 0.715);
        for row in &c.checks {
            let again = check_row(&c.graph, c.epsilon, c.l, row.x, row.families_tested.max(20), row.seed);
            if !row.vacuous {
                assert_eq!(again, *row);
            }
        }
    }

    #[test]
    fn grid_starts_above_zero() {
        let g = x_grid(2.0);
        assert_eq!(g.len(), 8);
        assert!((g[0] - 0.25).abs() < 1e-12);
        assert!(g.iter().all(|&x| x <= 2.0));
    }
}
