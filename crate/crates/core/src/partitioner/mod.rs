//! Blocked randomized partitions and the assignments of `H` built on them.

mod assign;
mod blocked;
mod params;

pub use assign::{almost_compatible_partition, AssignmentResult, PairExpectation};
pub use blocked::{
    bad_vertex_probability_bound, blocked_partition, peel_to, BlockedPartition,
    BlockedPartitionParams, PairStat, PartRecord,
};
pub use params::{bipartite_params, weighted_params, BipartiteParams, WeightedParams};

/// Retry cap shared by the construction and the assignment.
pub const DEFAULT_RETRIES: usize = 64;
