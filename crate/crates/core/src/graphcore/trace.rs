use super::{contract, Graph};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Record of how a minor was obtained from a source graph.
///
/// `contractions` are `(survivor, absorbed)` pairs in the labelling current
/// at each step (see [`contract`]). `deleted` lists vertices removed after
/// all contractions, in the labelling after the last contraction; survivors
/// are relabelled in increasing order. Edge deletions are implicit: a
/// claimed minor may be any spanning subgraph of the replayed graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionTrace {
    pub contractions: Vec<(usize, usize)>,
    pub deleted: Vec<usize>,
}

impl ContractionTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_contraction(&mut self, survivor: usize, absorbed: usize) {
        self.contractions.push((survivor, absorbed));
    }

    pub fn replay(&self, source: &Graph) -> Result<Graph> {
        let mut g = source.clone();
        for &(u, v) in &self.contractions {
            g = contract(&g, u, v)?;
        }
        let mut del = self.deleted.clone();
        del.sort_unstable();
        del.dedup();
        if del.last().is_some_and(|&x| x >= g.n()) {
            return Err(Error::invalid("deleted vertex out of range"));
        }
        Ok(g.remove_vertices(&del.into_iter().collect()).0)
    }

    /// True when replaying on `source` yields a supergraph of `claimed` on the
    /// same vertex labels.
    pub fn certifies(&self, source: &Graph, claimed: &Graph) -> bool {
        match self.replay(source) {
            Ok(r) => r.n() == claimed.n() && claimed.edges().iter().all(|&(u, v)| r.has_edge(u, v)),
            Err(_) => false,
        }
    }

    /// Source vertices merged into each vertex of the replayed minor.
    pub fn branch_sets(&self, source_n: usize) -> Result<Vec<Vec<usize>>> {
        let mut sets: Vec<Vec<usize>> = (0..source_n).map(|v| vec![v]).collect();
        for &(u, v) in &self.contractions {
            if u == v || u >= sets.len() || v >= sets.len() {
                return Err(Error::InvalidContraction { u, v });
            }
            let absorbed = sets.remove(v);
            let u = if u > v { u - 1 } else { u };
            sets[u].extend(absorbed);
        }
        let mut del = self.deleted.clone();
        del.sort_unstable();
        del.dedup();
        let out = sets
            .into_iter()
            .enumerate()
            .filter(|(i, _)| del.binary_search(i).is_err())
            .map(|(_, mut s)| {
                s.sort_unstable();
                s
            })
            .collect();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replay_and_branch_sets() {
        let c5 = Graph::cycle(5);
        let t = ContractionTrace {
            contractions: vec![(0, 1), (0, 1)],
            deleted: vec![],
        };
        let r = t.replay(&c5).unwrap();
        assert_eq!(r, Graph::cycle(3));
        assert_eq!(t.branch_sets(5).unwrap(), vec![vec![0, 1, 2], vec![3], vec![4]]);
        assert!(t.certifies(&c5, &Graph::path(3)));
        assert!(!t.certifies(&c5, &Graph::complete(4)));

        let d = ContractionTrace {
            contractions: vec![],
            deleted: vec![2],
        };
        assert_eq!(d.replay(&Graph::complete(3)).unwrap(), Graph::complete(2));
        assert_eq!(d.branch_sets(3).unwrap(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn bad_trace_fails() {
        let t = ContractionTrace {
            contractions: vec![(0, 2)],
            deleted: vec![],
        };
        assert!(!t.certifies(&Graph::cycle(4), &Graph::cycle(3)));
    }
}
