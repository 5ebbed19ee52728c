use super::search::{is_rooted_minor, MinorOutcome};
use crate::error::{Error, Result};
use crate::graphcore::Graph;
use crate::par::Exec;
use crate::rng::derived_rng;
use rand::seq::SliceRandom;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrevalenceMode {
    /// Every root assignment up to automorphisms of H. Refuses when
    /// `C(|G|,|H|)·|H|!` exceeds `cap`.
    Exhaustive { cap: f64 },
    /// `trials` uniform root assignments, trial `i` seeded from `(seed, i)`.
    Sampled { trials: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum PrevalenceResult {
    Prevalent { checked: usize },
    NotPrevalent { checked: usize, roots: Vec<usize> },
    Inconclusive { checked: usize, timeouts: usize, first_timeout: Vec<usize> },
}

impl PrevalenceResult {
    pub fn is_prevalent(&self) -> bool {
        matches!(self, PrevalenceResult::Prevalent { .. })
    }
}

/// Automorphisms of `h` as permutations, found by backtracking.
pub fn automorphisms(h: &Graph) -> Vec<Vec<usize>> {
    fn rec(h: &Graph, perm: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let i = perm.len();
        if i == h.n() {
            out.push(perm.clone());
            return;
        }
        for c in 0..h.n() {
            if used[c] || h.degree(c) != h.degree(i) {
                continue;
            }
            if (0..i).all(|j| h.has_edge(i, j) == h.has_edge(c, perm[j])) {
                used[c] = true;
                perm.push(c);
                rec(h, perm, used, out);
                perm.pop();
                used[c] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(h, &mut Vec::new(), &mut vec![false; h.n()], &mut out);
    out
}

fn canonical_assignments(n: usize, k: usize, auts: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    let mut used = vec![false; n];
    fn rec(
        n: usize,
        k: usize,
        auts: &[Vec<usize>],
        cur: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == k {
            // roots∘σ for every automorphism σ; keep lexicographic minima.
            let is_min = auts.iter().all(|s| {
                let img: Vec<usize> = (0..k).map(|h| cur[s[h]]).collect();
                img >= *cur
            });
            if is_min {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, k, auts, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(n, k, auts, &mut cur, &mut used, &mut out);
    out
}

fn assignment_space(n: usize, k: usize) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

/// Whether `g` has a rooted `h` minor for every (or every sampled) choice of
/// distinct roots.
pub fn prevalence_check(
    g: &Graph,
    h: &Graph,
    mode: PrevalenceMode,
    budget: u64,
    exec: Exec,
) -> Result<PrevalenceResult> {
    if g.n() < h.n() {
        return Err(Error::invalid(format!(
            "prevalence needs |G| >= |H|, got {} < {}",
            g.n(),
            h.n()
        )));
    }
    let assignments: Vec<Vec<usize>> = match mode {
        PrevalenceMode::Exhaustive { cap } => {
            let size = assignment_space(g.n(), h.n());
            if size > cap {
                return Err(Error::CapExceeded {
                    size,
                    cap,
                    hint: "use sampled mode".into(),
                });
            }
            canonical_assignments(g.n(), h.n(), &automorphisms(h))
        }
        PrevalenceMode::Sampled { trials, seed } => (0..trials)
            .map(|i| {
                let mut rng = derived_rng(seed, i as u64);
                let mut all: Vec<usize> = (0..g.n()).collect();
                let (chosen, _) = all.partial_shuffle(&mut rng, h.n());
                chosen.to_vec()
            })
            .collect(),
    };
    let outcomes = exec.map_slice(&assignments, |r| {
        is_rooted_minor(g, h, r, budget).map(|s| s.outcome)
    });
    let checked = assignments.len();
    let mut first_timeout = None;
    let mut timeouts = 0;
    for (r, o) in assignments.iter().zip(outcomes) {
        match o? {
            MinorOutcome::No => {
                return Ok(PrevalenceResult::NotPrevalent {
                    checked,
                    roots: r.clone(),
                })
            }
            MinorOutcome::Timeout => {
                timeouts += 1;
                first_timeout.get_or_insert_with(|| r.clone());
            }
            MinorOutcome::Yes { .. } => {}
        }
    }
    Ok(match first_timeout {
        Some(first_timeout) => PrevalenceResult::Inconclusive {
            checked,
            timeouts,
            first_timeout,
        },
        None => PrevalenceResult::Prevalent { checked },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX: PrevalenceMode = PrevalenceMode::Exhaustive { cap: 1e6 };

    #[test]
    fn examples() {
        let r = prevalence_check(&Graph::complete(5), &Graph::complete(3), EX, 10_000, Exec::Parallel);
        assert!(r.unwrap().is_prevalent());
        let r = prevalence_check(&Graph::cycle(6), &Graph::complete(2), EX, 10_000, Exec::Sequential);
        assert!(r.unwrap().is_prevalent());
        // Any three roots on C_6 split it into three arcs.
        let r = prevalence_check(&Graph::cycle(6), &Graph::complete(3), EX, 10_000, Exec::Parallel);
        assert!(r.unwrap().is_prevalent());
        let r = prevalence_check(&Graph::cycle(6), &Graph::complete(4), EX, 10_000, Exec::Parallel);
        assert!(matches!(r.unwrap(), PrevalenceResult::NotPrevalent { .. }));
        // Trees have no triangle minor.
        let r = prevalence_check(&Graph::star(3), &Graph::complete(3), EX, 10_000, Exec::Parallel);
        assert!(matches!(r.unwrap(), PrevalenceResult::NotPrevalent { .. }));
    }

    #[test]
    fn cap_and_sampling() {
        let r = prevalence_check(
            &Graph::complete(20),
            &Graph::complete(6),
            PrevalenceMode::Exhaustive { cap: 1e3 },
            10,
            Exec::Parallel,
        );
        assert!(matches!(r, Err(Error::CapExceeded { .. })));
        let s = PrevalenceMode::Sampled { trials: 20, seed: 3 };
        let r = prevalence_check(&Graph::complete(20), &Graph::complete(6), s, 10_000, Exec::Parallel);
        assert_eq!(r.unwrap(), PrevalenceResult::Prevalent { checked: 20 });
    }

    #[test]
    fn orbit_reduction() {
        // K_2 has the swap automorphism: ordered pairs halve.
        let a = canonical_assignments(6, 2, &automorphisms(&Graph::complete(2)));
        assert_eq!(a.len(), 15);
        assert_eq!(automorphisms(&Graph::cycle(5)).len(), 10);
        assert_eq!(automorphisms(&Graph::petersen()).len(), 120);
    }
}
