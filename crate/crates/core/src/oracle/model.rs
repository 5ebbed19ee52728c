use crate::error::{Error, Result};
use crate::graphcore::{Graph, VertexSet};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Branch sets indexed by H-vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MinorModel {
    pub branch_sets: BTreeMap<usize, VertexSet>,
}

impl MinorModel {
    pub fn from_sets(sets: Vec<VertexSet>) -> Self {
        MinorModel {
            branch_sets: sets.into_iter().enumerate().collect(),
        }
    }

    pub fn set(&self, h: usize) -> &VertexSet {
        &self.branch_sets[&h]
    }

    pub fn total_size(&self) -> usize {
        self.branch_sets.values().map(VertexSet::len).sum()
    }

    /// Relabels G-vertices through `map` (e.g. back to a parent graph).
    pub fn map_vertices(&self, map: impl Fn(usize) -> usize) -> MinorModel {
        MinorModel {
            branch_sets: self
                .branch_sets
                .iter()
                .map(|(&h, s)| (h, s.iter().map(&map).collect()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum Violation {
    Nonempty { h: usize },
    InRange { h: usize, vertex: usize },
    Disjointness { h1: usize, h2: usize, vertex: usize },
    Connectivity { h: usize },
    Adjacency { h1: usize, h2: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelCheck {
    pub valid: bool,
    pub violation: Option<Violation>,
}

/// Checks the four model clauses in order: nonempty (and in range),
/// disjoint, connected, adjacency for every H-edge.
pub fn validate_model(g: &Graph, h: &Graph, model: &MinorModel) -> Result<ModelCheck> {
    let keys: Vec<usize> = model.branch_sets.keys().copied().collect();
    if keys != (0..h.n()).collect::<Vec<_>>() {
        return Err(Error::MalformedModel(format!(
            "model keys {keys:?} do not match the {} vertices of H",
            h.n()
        )));
    }
    let fail = |v| {
        Ok(ModelCheck {
            valid: false,
            violation: Some(v),
        })
    };
    for (&hv, s) in &model.branch_sets {
        if s.is_empty() {
            return fail(Violation::Nonempty { h: hv });
        }
        if let Some(x) = s.iter().find(|&x| x >= g.n()) {
            return fail(Violation::InRange { h: hv, vertex: x });
        }
    }
    let mut owner = vec![usize::MAX; g.n()];
    for (&hv, s) in &model.branch_sets {
        for x in s.iter() {
            if owner[x] != usize::MAX {
                return fail(Violation::Disjointness {
                    h1: owner[x],
                    h2: hv,
                    vertex: x,
                });
            }
            owner[x] = hv;
        }
    }
    for (&hv, s) in &model.branch_sets {
        if !g.is_connected_set(s) {
            return fail(Violation::Connectivity { h: hv });
        }
    }
    for (a, b) in h.edges() {
        if !g.sets_adjacent(model.set(a), model.set(b)) {
            return fail(Violation::Adjacency { h1: a, h2: b });
        }
    }
    Ok(ModelCheck {
        valid: true,
        violation: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompatibilityCount {
    pub bad: usize,
    pub bad_edges: Vec<(usize, usize)>,
}

/// Counts H-edges whose assigned sets have no G-edge between them. Sets
/// must be disjoint and nonempty; connectivity is not required.
pub fn almost_compatibility_count(
    g: &Graph,
    h: &Graph,
    assignment: &[VertexSet],
) -> Result<CompatibilityCount> {
    if assignment.len() != h.n() {
        return Err(Error::MalformedPartition(format!(
            "{} sets for {} H-vertices",
            assignment.len(),
            h.n()
        )));
    }
    let mut seen = vec![false; g.n()];
    for (i, s) in assignment.iter().enumerate() {
        if s.is_empty() {
            return Err(Error::MalformedPartition(format!("set {i} is empty")));
        }
        for x in s.iter() {
            if x >= g.n() || seen[x] {
                return Err(Error::MalformedPartition(format!(
                    "vertex {x} is out of range or shared"
                )));
            }
            seen[x] = true;
        }
    }
    let bad_edges: Vec<_> = h
        .edges()
        .into_iter()
        .filter(|&(a, b)| !g.sets_adjacent(&assignment[a], &assignment[b]))
        .collect();
    Ok(CompatibilityCount {
        bad: bad_edges.len(),
        bad_edges,
    })
}
