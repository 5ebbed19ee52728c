use crate::oracle::MinorModel;
use serde::Serialize;
use serde_json::Value;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageEntry {
    pub stage: String,
    pub ms: f64,
    pub stats: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub stage: String,
    pub diagnostics: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingReport {
    /// `"model"` or `"failure"`.
    pub outcome: String,
    pub stage_log: Vec<StageEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<MinorModel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
    /// Root of each `H`-vertex, when the run was rooted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<usize>>,
    pub seed: u64,
}

impl EmbeddingReport {
    pub fn is_model(&self) -> bool {
        self.model.is_some()
    }
}

/// Accumulates timed stage entries for a report.
pub(crate) struct StageLog {
    entries: Vec<StageEntry>,
    clock: Instant,
}

impl StageLog {
    pub fn new() -> Self {
        Self {
            entries: Vec::new(),
            clock: Instant::now(),
        }
    }

    pub fn push(&mut self, stage: &str, stats: Value) {
        let ms = self.clock.elapsed().as_secs_f64() * 1e3;
        self.clock = Instant::now();
        self.entries.push(StageEntry {
            stage: stage.to_string(),
            ms,
            stats,
        });
    }

    pub fn model(self, model: MinorModel, roots: Option<Vec<usize>>, seed: u64) -> EmbeddingReport {
        EmbeddingReport {
            outcome: "model".into(),
            stage_log: self.entries,
            model: Some(model),
            failure: None,
            roots,
            seed,
        }
    }

    pub fn fail(mut self, stage: &str, diagnostics: impl Into<String>, seed: u64) -> EmbeddingReport {
        let diagnostics = diagnostics.into();
        self.push(stage, serde_json::json!({ "error": diagnostics }));
        EmbeddingReport {
            outcome: "failure".into(),
            stage_log: self.entries,
            model: None,
            failure: Some(Failure {
                stage: stage.to_string(),
                diagnostics,
            }),
            roots: None,
            seed,
        }
    }
}
