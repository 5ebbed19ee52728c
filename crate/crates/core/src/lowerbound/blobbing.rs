use crate::error::{Error, Result};
use crate::graphcore::{Graph, VertexSet};
use crate::oracle::MinorModel;
use num_bigint::BigUint;
use serde::Serialize;

/// Subsets of a base graph in which every vertex appears at most `k` times.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Blobbing {
    pub sets: Vec<VertexSet>,
    pub k: usize,
}

impl Blobbing {
    /// How many sets contain each base vertex.
    pub fn multiplicity(&self, n: usize) -> Vec<usize> {
        let mut m = vec![0; n];
        for s in &self.sets {
            for v in s.iter() {
                if v < n {
                    m[v] += 1;
                }
            }
        }
        m
    }

    pub fn is_valid(&self, n: usize) -> bool {
        self.sets.iter().all(|s| s.max_vertex().is_none_or(|v| v < n))
            && self.multiplicity(n).iter().all(|&c| c <= self.k)
    }
}

/// Projects each branch set of a model in `G0(k)` onto `G0`, in `H`-label
/// order. Copies of the same base vertex inside one branch set collapse.
pub fn blobbing_from_model(model: &MinorModel, base: &Graph, k: usize) -> Result<Blobbing> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let n = base.n() * k;
    let orig: Vec<&VertexSet> = model.branch_sets.values().collect();
    let mut sets = Vec::with_capacity(orig.len());
    for (&h, s) in &model.branch_sets {
        if s.max_vertex().is_some_and(|v| v >= n) {
            return Err(Error::MalformedModel(format!("branch set {h} leaves the blowup of order {n}")));
        }
        sets.push(s.iter().map(|v| v / k).collect::<VertexSet>());
    }
    let blob = Blobbing { sets, k };
    if let Some(v) = blob.multiplicity(base.n()).iter().position(|&c| c > k) {
        return Err(Error::MalformedModel(format!("base vertex {v} is used more than {k} times")));
    }
    let blown = crate::graphcore::balanced_blowup(base, k)?;
    for a in 0..orig.len() {
        for b in a + 1..orig.len() {
            let before = blown.sets_adjacent(orig[a], orig[b]);
            let after = blob.sets[a]
                .iter()
                .any(|u| base.neighbors(u).iter().any(|&w| blob.sets[b].contains(w)));
            if before != after {
                return Err(Error::Internal(format!("projection changed adjacency of sets {a} and {b}")));
            }
        }
    }
    Ok(blob)
}

/// `(2d)^{kd}`, the number of encodings of a `k`-blobbing of a `d`-vertex graph.
pub fn blobbing_count_bound(d: u64, k: u64) -> Result<BigUint> {
    if d == 0 || k == 0 {
        return Err(Error::invalid("d and k must be at least 1"));
    }
    let exp = u32::try_from(k * d).map_err(|_| Error::invalid(format!("exponent k d = {} is too large", k * d)))?;
    Ok(BigUint::from(2 * d).pow(exp))
}
