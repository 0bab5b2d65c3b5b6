//! Index coding problems: ingestion, validation, normalization and the
//! side-information graph of single-unicast instances.
//!
//! External JSON uses 1-based message indices; everything in memory is
//! 0-based. Conversion happens only here, at the ingestion boundary.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// One receiver: the messages it demands and the messages it already knows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Receiver {
    pub id: String,
    /// Demanded message indices, 0-based.
    pub wants: BTreeSet<usize>,
    /// Side-information message indices, 0-based.
    pub knows: BTreeSet<usize>,
}

/// A broadcast problem: `n` one-bit messages and a set of receivers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexCodingProblem {
    pub n: usize,
    pub receivers: Vec<Receiver>,
}

/// Directed side-information graph of a single-unicast problem. Vertex `i`
/// stands for the receiver demanding message `i`; an edge `(i, j)` records
/// that this receiver knows message `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideInfoGraph {
    pub n: usize,
    /// Out-neighbour sets, indexed by vertex.
    pub edges: Vec<BTreeSet<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawReceiver {
    id: String,
    wants: Vec<usize>,
    knows: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawProblem {
    n: usize,
    receivers: Vec<RawReceiver>,
}

impl IndexCodingProblem {
    pub fn new(n: usize, receivers: Vec<Receiver>) -> Result<Self> {
        let p = IndexCodingProblem { n, receivers };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > 16 {
            return Err(Error::InvalidProblem(format!(
                "message count {} outside supported range 1..=16",
                self.n
            )));
        }
        if self.receivers.is_empty() {
            return Err(Error::InvalidProblem("no receivers".into()));
        }
        for r in &self.receivers {
            if r.wants.is_empty() {
                return Err(Error::InvalidProblem(format!("receiver {} demands nothing", r.id)));
            }
            for &i in r.wants.iter().chain(r.knows.iter()) {
                if i >= self.n {
                    return Err(Error::InvalidProblem(format!(
                        "receiver {} references message {} beyond n={}",
                        r.id,
                        i + 1,
                        self.n
                    )));
                }
            }
            if !r.wants.is_disjoint(&r.knows) {
                return Err(Error::InvalidProblem(format!(
                    "receiver {} demands a message it already knows",
                    r.id
                )));
            }
            if r.knows.len() >= self.n {
                return Err(Error::InvalidProblem(format!(
                    "receiver {} knows every message",
                    r.id
                )));
            }
        }
        Ok(())
    }

    /// Parses the JSON ingestion format (1-based message indices).
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RawProblem = serde_json::from_str(s)?;
        let to_internal = |list: &[usize], what: &str, id: &str| -> Result<BTreeSet<usize>> {
            let mut set = BTreeSet::new();
            for &i in list {
                if i == 0 || i > raw.n {
                    return Err(Error::InvalidProblem(format!(
                        "receiver {id}: {what} index {i} outside 1..={}",
                        raw.n
                    )));
                }
                set.insert(i - 1);
            }
            Ok(set)
        };
        let receivers = raw
            .receivers
            .iter()
            .map(|r| {
                Ok(Receiver {
                    id: r.id.clone(),
                    wants: to_internal(&r.wants, "wants", &r.id)?,
                    knows: to_internal(&r.knows, "knows", &r.id)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        IndexCodingProblem::new(raw.n, receivers)
    }

    /// Serializes back to the ingestion format (1-based indices).
    pub fn to_json(&self) -> String {
        let raw = RawProblem {
            n: self.n,
            receivers: self
                .receivers
                .iter()
                .map(|r| RawReceiver {
                    id: r.id.clone(),
                    wants: r.wants.iter().map(|&i| i + 1).collect(),
                    knows: r.knows.iter().map(|&i| i + 1).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("serialization cannot fail")
    }

    /// Splits every multi-demand receiver into one receiver per demanded
    /// message, all sharing the original side-information set. Split
    /// receivers keep their id with a letter suffix (`R3.a`, `R3.b`, ...).
    pub fn normalize(&self) -> IndexCodingProblem {
        let mut receivers = Vec::new();
        for r in &self.receivers {
            if r.wants.len() == 1 {
                receivers.push(r.clone());
            } else {
                for (k, &w) in r.wants.iter().enumerate() {
                    let suffix = (b'a' + (k % 26) as u8) as char;
                    receivers.push(Receiver {
                        id: format!("{}.{}", r.id, suffix),
                        wants: BTreeSet::from([w]),
                        knows: r.knows.clone(),
                    });
                }
            }
        }
        IndexCodingProblem { n: self.n, receivers }
    }

    /// True when every receiver demands exactly one message.
    pub fn is_normalized(&self) -> bool {
        self.receivers.iter().all(|r| r.wants.len() == 1)
    }

    /// Builds the side-information graph. Requires a normalized problem with
    /// one receiver per message, receiver `i` demanding message `i`.
    pub fn build_side_info_graph(&self) -> Result<SideInfoGraph> {
        let p = self.normalize();
        if p.receivers.len() != p.n {
            return Err(Error::NotSingleUnicast(format!(
                "{} receivers for {} messages; supply an encoding matrix instead",
                p.receivers.len(),
                p.n
            )));
        }
        let mut edges = vec![None; p.n];
        for r in &p.receivers {
            let w = *r.wants.iter().next().expect("normalized receiver");
            if edges[w].is_some() {
                return Err(Error::NotSingleUnicast(format!(
                    "message {} demanded by more than one receiver; supply an encoding matrix instead",
                    w + 1
                )));
            }
            edges[w] = Some(r.knows.clone());
        }
        let edges = edges
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                e.ok_or_else(|| {
                    Error::NotSingleUnicast(format!("message {} demanded by no receiver", i + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SideInfoGraph { n: p.n, edges })
    }
}

impl SideInfoGraph {
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges[i].contains(&j)
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, nbrs) in self.edges.iter().enumerate() {
            for &j in nbrs {
                out.push((i, j));
            }
        }
        out
    }

    pub fn from_edge_list(n: usize, list: &[(usize, usize)]) -> Self {
        let mut edges = vec![BTreeSet::new(); n];
        for &(i, j) in list {
            assert!(i < n && j < n && i != j, "invalid edge ({i},{j})");
            edges[i].insert(j);
        }
        SideInfoGraph { n, edges }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1() -> IndexCodingProblem {
        let knows: [&[usize]; 7] = [
            &[2, 3, 4, 5, 6, 7],
            &[1, 3, 4, 5, 7],
            &[1, 4, 6, 7],
            &[2, 5, 6],
            &[1, 2],
            &[3],
            &[],
        ];
        IndexCodingProblem::new(
            7,
            knows
                .iter()
                .enumerate()
                .map(|(i, k)| Receiver {
                    id: format!("R{}", i + 1),
                    wants: BTreeSet::from([i]),
                    knows: k.iter().map(|&j| j - 1).collect(),
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn normalize_unicast_identity() {
        let p = example1();
        assert_eq!(p.normalize(), p);
    }

    #[test]
    fn normalize_splits_multi_demand() {
        let p = IndexCodingProblem::new(
            3,
            vec![
                Receiver {
                    id: "R1".into(),
                    wants: BTreeSet::from([0, 1]),
                    knows: BTreeSet::from([2]),
                },
                Receiver { id: "R2".into(), wants: BTreeSet::from([2]), knows: BTreeSet::new() },
            ],
        )
        .unwrap();
        let q = p.normalize();
        assert_eq!(q.receivers.len(), 3);
        assert_eq!(q.receivers[0].id, "R1.a");
        assert_eq!(q.receivers[0].wants, BTreeSet::from([0]));
        assert_eq!(q.receivers[1].id, "R1.b");
        assert_eq!(q.receivers[1].wants, BTreeSet::from([1]));
        assert_eq!(q.receivers[0].knows, q.receivers[1].knows);
        // Idempotent.
        assert_eq!(q.normalize(), q);
    }

    #[test]
    fn rejects_overlapping_wants_and_knows() {
        let r = Receiver {
            id: "R1".into(),
            wants: BTreeSet::from([0]),
            knows: BTreeSet::from([0, 1]),
        };
        assert!(IndexCodingProblem::new(3, vec![r]).is_err());
    }

    #[test]
    fn rejects_empty_demand() {
        let r = Receiver { id: "R1".into(), wants: BTreeSet::new(), knows: BTreeSet::new() };
        assert!(IndexCodingProblem::new(3, vec![r]).is_err());
    }

    #[test]
    fn graph_example1_degrees() {
        let g = example1().build_side_info_graph().unwrap();
        assert_eq!(g.edges[0].len(), 6);
        assert_eq!(g.edges[6].len(), 0);
        assert!(g.has_edge(0, 1));
        assert!(!g.has_edge(6, 0));
    }

    #[test]
    fn graph_empty_side_info() {
        let p = IndexCodingProblem::new(
            3,
            (0..3)
                .map(|i| Receiver {
                    id: format!("R{}", i + 1),
                    wants: BTreeSet::from([i]),
                    knows: BTreeSet::new(),
                })
                .collect(),
        )
        .unwrap();
        let g = p.build_side_info_graph().unwrap();
        assert!(g.edge_list().is_empty());
    }

    #[test]
    fn graph_rejects_duplicate_demand() {
        let p = IndexCodingProblem::new(
            2,
            vec![
                Receiver { id: "A".into(), wants: BTreeSet::from([0]), knows: BTreeSet::new() },
                Receiver { id: "B".into(), wants: BTreeSet::from([0]), knows: BTreeSet::new() },
            ],
        )
        .unwrap();
        assert!(matches!(p.build_side_info_graph(), Err(Error::NotSingleUnicast(_))));
    }

    #[test]
    fn graph_never_has_self_loops() {
        let g = example1().build_side_info_graph().unwrap();
        for (i, j) in g.edge_list() {
            assert_ne!(i, j);
        }
    }

    #[test]
    fn graph_edge_list_round_trip() {
        let g = example1().build_side_info_graph().unwrap();
        let rebuilt = SideInfoGraph::from_edge_list(g.n, &g.edge_list());
        assert_eq!(g, rebuilt);
    }

    #[test]
    fn json_round_trip() {
        let p = example1();
        let s = p.to_json();
        let q = IndexCodingProblem::from_json(&s).unwrap();
        assert_eq!(p, q);
        // Canonical form is a fixed point of parse -> serialize.
        assert_eq!(s, q.to_json());
    }

    #[test]
    fn json_rejects_out_of_range_index() {
        let s = r#"{"n": 2, "receivers": [{"id": "R1", "wants": [1], "knows": [3]}]}"#;
        assert!(IndexCodingProblem::from_json(s).is_err());
    }
}
