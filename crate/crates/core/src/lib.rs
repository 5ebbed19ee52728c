//! Toolkit for extremal graph minor constructions.
//!
//! The crate is organised by subsystem:
//!
//! - [`graphcore`]: the graph type, contraction traces, blowups, flows and
//!   connectivity, plus the text graph format.
//! - [`oracle`]: exact minor and rooted-minor search, model validation and
//!   prevalence checks. Every other module certifies its output here.
//! - [`gamma`]: numeric solvers for the weight-optimisation parameters.
//! - [`family`]: the structured random graph family and the matching
//!   experiment between the vector and partition parameters.
//! - [`partitioner`]: the blocked randomized partition and the
//!   almost-compatible assignment built on top of it.
//! - [`embedder`]: dense and sparse embedding pipelines.
//! - [`lowerbound`]: pseudorandom base graphs, blowup extremal graphs,
//!   blobbings, non-minor certificates and tail bounds.
//!
//! Batch work (Monte Carlo rows, sampled prevalence, experiment samples,
//! partition retries) goes through [`par`], which runs on rayon when the
//! `parallel` feature is enabled and sequentially otherwise.

pub mod embedder;
pub mod error;
pub mod family;
pub mod gamma;
pub mod graphcore;
pub mod lowerbound;
pub mod oracle;
pub mod par;
pub mod partitioner;
pub mod rng;
mod round;

pub use error::{Error, Result};
pub use graphcore::{Graph, VertexSet};
pub use oracle::MinorModel;
