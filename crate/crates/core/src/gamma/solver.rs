//! Shared inner problem for `γ_r` and the per-vertex `γ(H)`:
//!
//! minimise `Σ c_k w_k` over `w >= 0` subject to
//! `G(w) = Σ_p a_p exp(−L w_i w_j) <= 1`.
//!
//! Writing `w = s·u` with `u` on the simplex, `G(s·u)` is decreasing in `s`,
//! so each direction has a least feasible scale `s(u)` (Newton in `z = s²`,
//! where `G` is convex). The objective `s(u)·(c·u)` is then minimised over
//! `u` by sweeps of pairwise mass transfers, each a one-dimensional grid
//! search refined by golden section. The procedure is deterministic.

#[derive(Debug, Clone)]
pub(crate) struct Inner {
    pub costs: Vec<f64>,
    pub terms: Vec<(usize, usize, f64)>,
    pub ln_base: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct InnerSolution {
    pub value: f64,
    pub w: Vec<f64>,
}

const GRID: usize = 8;
const GOLDEN_STEPS: usize = 28;
const MAX_SWEEPS: usize = 200;

impl Inner {
    #[cfg(test)]
    pub fn lhs(&self, w: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|&(i, j, a)| a * (-self.ln_base * w[i] * w[j]).exp())
            .sum()
    }

    /// Least `s >= 0` with `G(s·u) <= 1`, or `None` if no scale works.
    pub fn scale(&self, u: &[f64]) -> Option<f64> {
        let mut a0 = 0.0;
        let mut total = 0.0;
        for &(i, j, a) in &self.terms {
            total += a;
            if u[i] * u[j] == 0.0 {
                a0 += a;
            }
        }
        if total <= 1.0 {
            return Some(0.0);
        }
        if a0 > 1.0 {
            return None;
        }
        let g = |z: f64| -> (f64, f64) {
            let mut v = 0.0;
            let mut dv = 0.0;
            for &(i, j, a) in &self.terms {
                let b = self.ln_base * u[i] * u[j];
                let e = a * (-b * z).exp();
                v += e;
                dv -= b * e;
            }
            (v, dv)
        };
        let mut z = 0.0;
        for _ in 0..200 {
            let (v, dv) = g(z);
            if v <= 1.0 || dv == 0.0 {
                break;
            }
            let step = (v - 1.0) / -dv;
            z += step;
            if step <= 1e-16 * z {
                break;
            }
        }
        let mut bump = z * 1e-15 + 1e-300;
        for _ in 0..2000 {
            if g(z).0 <= 1.0 {
                return Some(z.sqrt());
            }
            z += bump;
            bump *= 2.0;
        }
        None
    }

    fn objective(&self, u: &[f64]) -> f64 {
        match self.scale(u) {
            Some(s) => s * self.costs.iter().zip(u).map(|(c, x)| c * x).sum::<f64>(),
            None => f64::INFINITY,
        }
    }

    pub fn solve(&self) -> InnerSolution {
        let k = self.costs.len();
        if k == 0 {
            return InnerSolution {
                value: 0.0,
                w: Vec::new(),
            };
        }
        let mut starts = vec![vec![1.0 / k as f64; k]];
        let mut load = vec![0.0; k];
        for &(i, j, a) in &self.terms {
            load[i] += a;
            load[j] += a;
        }
        let guided: Vec<f64> = (0..k)
            .map(|i| if self.costs[i] > 0.0 { load[i] / self.costs[i] } else { load[i] })
            .collect();
        let sum: f64 = guided.iter().sum();
        if sum > 0.0 {
            starts.push(guided.iter().map(|g| g / sum).collect());
        }
        let mut best: Option<(f64, Vec<f64>)> = None;
        for u0 in starts {
            let (v, u) = self.descend(u0);
            if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                best = Some((v, u));
            }
        }
        let (_, u) = best.expect("at least one start");
        let s = self.scale(&u).expect("descent keeps feasibility");
        let w: Vec<f64> = u.iter().map(|x| s * x).collect();
        InnerSolution {
            value: self.costs.iter().zip(&w).map(|(c, x)| c * x).sum(),
            w,
        }
    }

    fn descend(&self, mut u: Vec<f64>) -> (f64, Vec<f64>) {
        let k = u.len();
        let mut val = self.objective(&u);
        if k == 1 {
            return (val, u);
        }
        let mut trial = u.clone();
        for _ in 0..MAX_SWEEPS {
            let mut improved = false;
            for i in 0..k {
                for j in i + 1..k {
                    let span = u[i] + u[j];
                    if span == 0.0 {
                        continue;
                    }
                    let mut eval = |x: f64| {
                        trial.copy_from_slice(&u);
                        trial[i] = x.clamp(0.0, span);
                        trial[j] = span - trial[i];
                        self.objective(&trial)
                    };
                    let grid: Vec<f64> = (0..=GRID).map(|g| span * g as f64 / GRID as f64).collect();
                    let vals: Vec<f64> = grid.iter().map(|&x| eval(x)).collect();
                    let kbest = (0..=GRID).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
                    let (mut lo, mut hi) = (grid[kbest.saturating_sub(1)], grid[(kbest + 1).min(GRID)]);
                    let mut cand = (vals[kbest], grid[kbest]);
                    let phi = (5f64.sqrt() - 1.0) / 2.0;
                    let mut x1 = hi - phi * (hi - lo);
                    let mut x2 = lo + phi * (hi - lo);
                    let (mut f1, mut f2) = (eval(x1), eval(x2));
                    for _ in 0..GOLDEN_STEPS {
                        if f1 <= f2 {
                            hi = x2;
                            x2 = x1;
                            f2 = f1;
                            x1 = hi - phi * (hi - lo);
                            f1 = eval(x1);
                        } else {
                            lo = x1;
                            x1 = x2;
                            f1 = f2;
                            x2 = lo + phi * (hi - lo);
                            f2 = eval(x2);
                        }
                    }
                    for (f, x) in [(f1, x1), (f2, x2)] {
                        if f < cand.0 {
                            cand = (f, x);
                        }
                    }
                    if cand.0 < val * (1.0 - 1e-14) {
                        let x = cand.1.clamp(0.0, span);
                        u[i] = x;
                        u[j] = span - x;
                        val = cand.0;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        (val, u)
    }
}
