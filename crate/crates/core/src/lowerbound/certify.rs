use crate::error::{Error, Result};
use crate::graphcore::{parse_graph, write_graph, Graph};
use crate::oracle::{is_minor, MinorModel, MinorOutcome};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// A completed negative search, self-contained for replay.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotMinorCertificate {
    pub g: String,
    pub h: String,
    pub nodes: u64,
    pub budget: u64,
    /// sha256 over the two graph texts and the node count.
    pub digest: String,
}

fn digest(g: &str, h: &str, nodes: u64) -> String {
    let mut s = Sha256::new();
    s.update(g.as_bytes());
    s.update(b"\n--\n");
    s.update(h.as_bytes());
    s.update(b"\n--\n");
    s.update(nodes.to_string().as_bytes());
    hex::encode(s.finalize())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Certification {
    NotMinor(NotMinorCertificate),
    /// No certificate is possible: the oracle found a model.
    IsMinor { model: MinorModel, nodes: u64 },
    Inconclusive { nodes: u64, budget: u64 },
}

impl Certification {
    pub fn label(&self) -> &'static str {
        match self {
            Certification::NotMinor(_) => "not_minor",
            Certification::IsMinor { .. } => "minor",
            Certification::Inconclusive { .. } => "inconclusive",
        }
    }
}

pub fn certify_not_minor(g: &Graph, h: &Graph, budget: u64) -> Result<Certification> {
    let res = is_minor(g, h, budget)?;
    Ok(match res.outcome {
        MinorOutcome::No => {
            let (gt, ht) = (write_graph(g), write_graph(h));
            Certification::NotMinor(NotMinorCertificate {
                digest: digest(&gt, &ht, res.nodes),
                g: gt,
                h: ht,
                nodes: res.nodes,
                budget,
            })
        }
        MinorOutcome::Yes { model } => Certification::IsMinor { model, nodes: res.nodes },
        MinorOutcome::Timeout => Certification::Inconclusive { nodes: res.nodes, budget },
    })
}

/// Checks the digest and reruns the search with the recorded budget. The
/// replay must again be a completed negative after the same node count.
pub fn replay_certificate(cert: &NotMinorCertificate) -> Result<bool> {
    if digest(&cert.g, &cert.h, cert.nodes) != cert.digest {
        return Ok(false);
    }
    let g = parse_graph(&cert.g)?;
    let h = parse_graph(&cert.h)?;
    if write_graph(&g) != cert.g || write_graph(&h) != cert.h {
        return Err(Error::invalid("certificate graphs are not in canonical form"));
    }
    let res = is_minor(&g, &h, cert.budget)?;
    Ok(res.outcome == MinorOutcome::No && res.nodes == cert.nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_k5() {
        let c = certify_not_minor(&Graph::complete(4), &Graph::complete(5), 1_000_000).unwrap();
        let Certification::NotMinor(cert) = c else { panic!("{c:?}") };
        assert!(replay_certificate(&cert).unwrap());
        let mut bad = cert.clone();
        bad.nodes += 1;
        assert!(!replay_certificate(&bad).unwrap());
    }

    #[test]
    fn petersen_refused() {
        let c = certify_not_minor(&Graph::petersen(), &Graph::complete(5), 10_000_000).unwrap();
        assert_eq!(c.label(), "minor");
    }
}
