//! Exact minor and rooted-minor search, model validation and prevalence.

mod bits;
mod model;
mod prevalence;
mod search;

pub use model::{
    almost_compatibility_count, validate_model, CompatibilityCount, MinorModel, ModelCheck,
    Violation,
};
pub use prevalence::{automorphisms, prevalence_check, PrevalenceMode, PrevalenceResult};
pub use search::{is_minor, is_rooted_minor, MinorOutcome, SearchResult};

/// Roots indexed by H-vertex: `roots[h]` must lie in `V_h`.
pub type RootAssignment = Vec<usize>;
