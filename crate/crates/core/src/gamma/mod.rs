//! Solvers for the weight-optimisation parameters: `α`, `γ(σ, D)`, the
//! Gamma-inequality evaluator, `γ_r(H)` and the per-vertex `γ(H)`.
//!
//! Logarithms are natural throughout.

mod alpha;
mod classic;
mod gamma_r;
mod partition;
mod solver;
mod vec;

pub use alpha::{alpha, alpha_objective, Alpha};
pub use classic::{gamma_classic, ClassicWitness};
pub use gamma_r::{gamma_r, set_partitions, GammaRMode, PartitionWitness};
pub use partition::{gamma_inequality_lhs, WeightedPartition};
pub use vec::{gamma_vec, ConstraintSlack, Exponent, GammaInstance, GammaWitness};

/// Default tolerances.
pub const SLACK_TOL: f64 = 1e-9;
pub const OBJECTIVE_TOL: f64 = 1e-7;
pub const ITERATION_CAP: usize = 1_000_000;
