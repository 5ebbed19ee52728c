//! Upper-bound pipelines: dense rooted embeddings through a blocked
//! partition and a connector reservation, the sparse decomposition into
//! small dense pieces joined by short paths, and the supporting lemmas.

mod connector;
mod contraction;
mod cover;
mod dense;
mod paths;
mod report;
mod sparse;

pub use connector::{fix_bad_pairs, reserve_connector, ConnectorReservation};
pub use contraction::{bipartite_contraction_minor, ContractionMinor};
pub use cover::{edge_cover_bipartite, edge_cover_weighted, CoverPiece, WeightedCover};
pub use dense::{embed_dense, DenseConfig, DenseSpec};
pub use paths::{short_disjoint_paths, ShortPaths};
pub use report::{EmbeddingReport, Failure, StageEntry};
pub use sparse::{embed_sparse, engineered_host, EngineeredHost, SparseConfig, SparsePlan};

/// Longest rerouting path allowed inside a dense piece, in edges.
pub const PATH_CAP: usize = 80;
