use super::ITERATION_CAP;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Entry of the exponent matrix: a real at most 1, or the formal `−∞`
/// (JSON `null`) with `d^{−∞} = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "Option<f64>", into = "Option<f64>")]
pub enum Exponent {
    NegInfinity,
    Finite(f64),
}

impl From<Option<f64>> for Exponent {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Exponent::NegInfinity, Exponent::Finite)
    }
}

impl From<Exponent> for Option<f64> {
    fn from(e: Exponent) -> Self {
        e.finite()
    }
}

impl Exponent {
    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::NegInfinity => None,
            Exponent::Finite(x) => Some(x),
        }
    }

    /// `base^self`, with `base^{−∞} = 0`.
    pub fn pow(self, base: f64) -> f64 {
        self.finite().map_or(0.0, |x| base.powf(x))
    }

    pub fn is_positive(self) -> bool {
        self.finite().is_some_and(|x| x > 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaInstance {
    pub sigma: Vec<f64>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<Exponent>>,
}

impl GammaInstance {
    pub fn new(sigma: Vec<f64>, d: Vec<Vec<Exponent>>) -> Result<Self> {
        let inst = GammaInstance { sigma, d };
        inst.validate()?;
        Ok(inst)
    }

    /// Builds from an upper-triangular description; unspecified pairs are `−∞`.
    pub fn from_pairs(sigma: Vec<f64>, pairs: &[(usize, usize, f64)]) -> Result<Self> {
        let r = sigma.len();
        let mut d = vec![vec![Exponent::NegInfinity; r]; r];
        for &(i, j, x) in pairs {
            if i >= r || j >= r {
                return Err(Error::invalid(format!("pair ({i},{j}) out of range")));
            }
            d[i][j] = Exponent::Finite(x);
            d[j][i] = Exponent::Finite(x);
        }
        Self::new(sigma, d)
    }

    pub fn r(&self) -> usize {
        self.sigma.len()
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.sigma.len();
        if r == 0 {
            return Err(Error::invalid("empty weight vector"));
        }
        if self.sigma.iter().any(|&s| !(s >= 0.0) || !s.is_finite()) {
            return Err(Error::invalid("weights must be nonnegative reals"));
        }
        let total: f64 = self.sigma.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("weights sum to {total}, not 1")));
        }
        if self.d.len() != r || self.d.iter().any(|row| row.len() != r) {
            return Err(Error::invalid(format!("D must be {r}x{r}")));
        }
        for i in 0..r {
            for j in 0..r {
                if self.d[i][j] != self.d[j][i] {
                    return Err(Error::invalid(format!("D is not symmetric at ({i},{j})")));
                }
                if let Some(x) = self.d[i][j].finite() {
                    if !(x <= 1.0) {
                        return Err(Error::invalid(format!("D[{i}][{j}] = {x} exceeds 1")));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintSlack {
    pub i: usize,
    pub j: usize,
    /// `β_i β_j − D_ij`.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaWitness {
    pub value: f64,
    pub beta: Vec<f64>,
    /// Residuals of the kept constraints (`D_ij > 0`, `i <= j`).
    pub slack: Vec<ConstraintSlack>,
    pub newton_steps: usize,
}

/// `γ(σ, D) = min σ·β` over `β >= 0` with `β_i β_j >= D_ij`.
///
/// Constraints with `D_ij <= 0` are dropped. The rest is solved in
/// logarithmic coordinates `x = ln β`, where the constraints become linear
/// and the objective convex, by a log-barrier Newton method. Coordinates
/// with `σ_i = 0` cost nothing and are set large enough to satisfy their
/// constraints afterwards; untouched coordinates get `β_i = 0`.
pub fn gamma_vec(inst: &GammaInstance, tol: f64) -> Result<GammaWitness> {
    inst.validate()?;
    let r = inst.r();
    let kept: Vec<(usize, usize, f64)> = (0..r)
        .flat_map(|i| (i..r).map(move |j| (i, j)))
        .filter_map(|(i, j)| {
            inst.d[i][j]
                .finite()
                .filter(|&x| x > 0.0)
                .map(|x| (i, j, x))
        })
        .collect();
    let free = |i: usize| inst.sigma[i] == 0.0;
    let mut index = vec![usize::MAX; r];
    let mut vars = Vec::new();
    for &(i, j, _) in &kept {
        for k in [i, j] {
            if !free(i) && !free(j) && index[k] == usize::MAX {
                index[k] = vars.len();
                vars.push(k);
            }
        }
    }
    let cons: Vec<(usize, usize, f64)> = kept
        .iter()
        .filter(|&&(i, j, _)| !free(i) && !free(j))
        .map(|&(i, j, x)| (index[i], index[j], x.ln()))
        .collect();
    let costs: Vec<f64> = vars.iter().map(|&i| inst.sigma[i]).collect();
    let (x, steps) = barrier_solve(&costs, &cons, tol)?;

    let mut beta = vec![0.0; r];
    for (k, &i) in vars.iter().enumerate() {
        beta[i] = x[k].exp();
    }
    // Zero-cost coordinates: other partners may be untouched (β = 0), so give
    // those a negligible positive value first.
    const TINY: f64 = 1e-12;
    for &(i, j, _) in &kept {
        if free(i) != free(j) {
            let other = if free(i) { j } else { i };
            if beta[other] == 0.0 {
                beta[other] = TINY;
            }
        }
    }
    for i in (0..r).filter(|&i| free(i)) {
        let mut b: f64 = 0.0;
        for &(a, c, dv) in &kept {
            if a == i || c == i {
                let other = if a == i { c } else { a };
                b = b.max(1.0).max(dv.sqrt());
                if !free(other) {
                    b = b.max(dv / beta[other] * (1.0 + 1e-12));
                }
            }
        }
        beta[i] = b;
    }
    let value = inst.sigma.iter().zip(&beta).map(|(s, b)| s * b).sum();
    let slack = kept
        .iter()
        .map(|&(i, j, dv)| ConstraintSlack {
            i,
            j,
            slack: beta[i] * beta[j] - dv,
        })
        .collect();
    Ok(GammaWitness {
        value,
        beta,
        slack,
        newton_steps: steps,
    })
}

/// Minimises `Σ c_k e^{x_k}` subject to `x_i + x_j >= b` for each
/// `(i, j, b)`, following the central path until the duality gap is below
/// `tol`. Returns a strictly feasible point.
fn barrier_solve(c: &[f64], cons: &[(usize, usize, f64)], tol: f64) -> Result<(Vec<f64>, usize)> {
    let k = c.len();
    if k == 0 {
        return Ok((Vec::new(), 0));
    }
    let m = cons.len() as f64;
    let mut x = vec![1.0; k];
    let objective = |x: &[f64]| c.iter().zip(x).map(|(ci, xi)| ci * xi.exp()).sum::<f64>();
    let slacks = |x: &[f64]| -> Vec<f64> { cons.iter().map(|&(i, j, b)| x[i] + x[j] - b).collect() };
    let mut tau = 1.0;
    let mut steps = 0;
    loop {
        // Newton on tau·f(x) − Σ ln s.
        for _ in 0..200 {
            steps += 1;
            if steps > ITERATION_CAP {
                return Err(Error::Convergence {
                    iterations: steps,
                    best: objective(&x),
                });
            }
            let s = slacks(&x);
            let mut g: Vec<f64> = (0..k).map(|i| tau * c[i] * x[i].exp()).collect();
            let mut h = vec![vec![0.0; k]; k];
            for i in 0..k {
                h[i][i] = tau * c[i] * x[i].exp();
            }
            for (ci, &(i, j, _)) in cons.iter().enumerate() {
                let inv = 1.0 / s[ci];
                g[i] -= inv;
                g[j] -= inv;
                let q = inv * inv;
                h[i][i] += q;
                h[j][j] += q;
                h[i][j] += q;
                h[j][i] += q;
            }
            let dx = solve_spd(&h, &g.iter().map(|v| -v).collect::<Vec<_>>());
            let decrement: f64 = -g.iter().zip(&dx).map(|(a, b)| a * b).sum::<f64>();
            if decrement / 2.0 < 1e-10 {
                break;
            }
            let phi = |x: &[f64]| -> f64 {
                let s = slacks(x);
                if s.iter().any(|&v| v <= 0.0) {
                    return f64::INFINITY;
                }
                tau * objective(x) - s.iter().map(|v| v.ln()).sum::<f64>()
            };
            let f0 = phi(&x);
            let mut step = 1.0;
            loop {
                let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + step * b).collect();
                let f1 = phi(&trial);
                if f1 <= f0 - 0.25 * step * decrement {
                    x = trial;
                    break;
                }
                step *= 0.5;
                if step < 1e-16 {
                    break;
                }
            }
            if step < 1e-16 {
                break;
            }
        }
        let f = objective(&x);
        if m / tau <= tol * f.max(1e-300) {
            return Ok((x, steps));
        }
        tau *= 10.0;
        if tau > 1e300 {
            return Err(Error::Convergence {
                iterations: steps,
                best: f,
            });
        }
    }
}

/// Solves `A x = b` for small symmetric positive definite `A` (Cholesky).
pub(crate) fn solve_spd(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                l[i][i] = s.max(1e-300).sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i][k] * y[k];
        }
        y[i] = s / l[i][i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k][i] * x[k];
        }
        x[i] = s / l[i][i];
    }
    x
}
