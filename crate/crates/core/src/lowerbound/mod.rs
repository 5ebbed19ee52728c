//! Lower-bound constructions: pseudorandom base graphs, blowups, blobbings,
//! non-minor certificates and tail bounds.

mod base;
mod blobbing;
mod blowup;
mod certify;
mod experiment;
mod tails;

pub use base::{
    base_l, check_row, no_edge_frequency, sample_base_graph, x_grid, BaseGraphCertificate, CheckRow,
    EdgeFrequency, RESAMPLE_CAP,
};
pub use blobbing::{blobbing_count_bound, blobbing_from_model, Blobbing};
pub use blowup::{
    bipartite_k, build_bipartite_lowerbound, build_lowerbound_graph, lowerbound_from_base, lowerbound_k,
    Claim, LowerBoundGraph, LowerBoundParams, MAX_BASE_ORDER,
};
pub use certify::{certify_not_minor, replay_certificate, Certification, NotMinorCertificate};
pub use experiment::{desk_scale_lowerbound_experiment, LbExperimentConfig, LbExperimentReport, LbSample};
pub use tails::{chernoff_tails, TailBounds};

use crate::graphcore::{write_graph, Graph};

pub(crate) fn graph_text<S: serde::Serializer>(g: &Graph, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&write_graph(g))
}
