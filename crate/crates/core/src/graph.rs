//! Immutable topology with unique identifiers and the fixed underlying
//! maximal matching `M` (the `m` variables).
//!
//! Nodes are addressed internally by a dense [`NodeId`]. Every comparison the
//! algorithm makes ("lowest", "v < u") goes through [`Identifier`] instead.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense internal handle, `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// The user-visible, totally ordered node name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Identifier(pub u64);

impl fmt::Display for Identifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Membership of a node with respect to `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    /// `m_v = null`, the node is in σ(V).
    Single,
    /// `m_v ≠ null`, the node is in μ(V).
    Matched,
}

/// Undirected edge stored with the smaller [`NodeId`] first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(NodeId, NodeId);

impl Edge {
    pub fn new(a: NodeId, b: NodeId) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn endpoints(self) -> (NodeId, NodeId) {
        (self.0, self.1)
    }

    pub fn contains(self, v: NodeId) -> bool {
        self.0 == v || self.1 == v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    idents: Vec<Identifier>,
    by_ident: HashMap<Identifier, NodeId>,
    // sorted by ascending identifier
    adjacency: Vec<Vec<NodeId>>,
    mate: Vec<Option<NodeId>>,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds and validates a graph. Node `k` of `idents` gets `NodeId(k)`.
    /// Duplicate edges are merged.
    pub fn new(
        idents: Vec<Identifier>,
        edges: &[(NodeId, NodeId)],
        matching: &[(NodeId, NodeId)],
    ) -> Result<Self> {
        let n = idents.len();
        let mut by_ident = HashMap::with_capacity(n);
        for (k, &id) in idents.iter().enumerate() {
            if id.0 == 0 {
                return Err(Error::InvalidIdentifier(0));
            }
            if by_ident.insert(id, NodeId(k)).is_some() {
                return Err(Error::DuplicateIdentifier(id));
            }
        }

        let check = |v: NodeId| -> Result<()> {
            if v.0 < n {
                Ok(())
            } else {
                Err(Error::EdgeEndpointMissing(format!("node index {}", v.0)))
            }
        };

        let mut edge_set = BTreeSet::new();
        for &(a, b) in edges {
            check(a)?;
            check(b)?;
            if a == b {
                return Err(Error::SelfLoop(idents[a.0]));
            }
            edge_set.insert(Edge::new(a, b));
        }
        let mut adjacency = vec![Vec::new(); n];
        for e in &edge_set {
            let (a, b) = e.endpoints();
            adjacency[a.0].push(b);
            adjacency[b.0].push(a);
        }
        for list in &mut adjacency {
            list.sort_by_key(|v| idents[v.0]);
        }

        let mut mate = vec![None; n];
        for &(a, b) in matching {
            check(a)?;
            check(b)?;
            if !edge_set.contains(&Edge::new(a, b)) {
                return Err(Error::MatchingNotValid(format!(
                    "({}, {}) is not an edge",
                    idents[a.0], idents[b.0]
                )));
            }
            for v in [a, b] {
                if mate[v.0].is_some() {
                    return Err(Error::MatchingNotValid(format!(
                        "node {} is matched twice",
                        idents[v.0]
                    )));
                }
            }
            mate[a.0] = Some(b);
            mate[b.0] = Some(a);
        }
        for e in &edge_set {
            let (a, b) = e.endpoints();
            if mate[a.0].is_none() && mate[b.0].is_none() {
                let (x, y) = (idents[a.0], idents[b.0]);
                return Err(Error::MatchingNotMaximal(x.min(y), x.max(y)));
            }
        }

        Ok(Graph {
            idents,
            by_ident,
            adjacency,
            mate,
            edges: edge_set.into_iter().collect(),
        })
    }

    /// Same as [`Graph::new`] with edges and matching given by identifier.
    pub fn from_identifiers(
        idents: &[u64],
        edges: &[(u64, u64)],
        matching: &[(u64, u64)],
    ) -> Result<Self> {
        let ids: Vec<Identifier> = idents.iter().map(|&i| Identifier(i)).collect();
        let mut lookup = HashMap::new();
        for (k, &id) in idents.iter().enumerate() {
            lookup.entry(id).or_insert(NodeId(k));
        }
        let resolve = |pairs: &[(u64, u64)]| -> Result<Vec<(NodeId, NodeId)>> {
            pairs
                .iter()
                .map(|&(a, b)| {
                    let get = |x: u64| {
                        lookup
                            .get(&x)
                            .copied()
                            .ok_or_else(|| Error::EdgeEndpointMissing(format!("identifier {x}")))
                    };
                    Ok((get(a)?, get(b)?))
                })
                .collect()
        };
        let edges = resolve(edges)?;
        let matching = resolve(matching)?;
        Graph::new(ids, &edges, &matching)
    }

    pub fn len(&self) -> usize {
        self.idents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idents.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.idents.len()).map(NodeId)
    }

    /// Nodes in ascending identifier order.
    pub fn nodes_by_identifier(&self) -> Vec<NodeId> {
        let mut v: Vec<NodeId> = self.nodes().collect();
        v.sort_by_key(|&x| self.ident(x));
        v
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.0 < self.idents.len()
    }

    pub fn ident(&self, v: NodeId) -> Identifier {
        self.idents[v.0]
    }

    pub fn node(&self, id: Identifier) -> Option<NodeId> {
        self.by_ident.get(&id).copied()
    }

    /// Looks up a node by raw identifier value.
    pub fn node_by_value(&self, id: u64) -> Result<NodeId> {
        self.node(Identifier(id))
            .ok_or(Error::UnknownIdentifier(id))
    }

    /// Neighbors in ascending identifier order.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v.0]
    }

    pub fn is_neighbor(&self, v: NodeId, u: NodeId) -> bool {
        self.adjacency[v.0].contains(&u)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// `m_v`.
    pub fn mate(&self, v: NodeId) -> Option<NodeId> {
        self.mate[v.0]
    }

    pub fn is_single(&self, v: NodeId) -> bool {
        self.mate[v.0].is_none()
    }

    pub fn classify(&self, v: NodeId) -> Result<NodeClass> {
        if !self.contains(v) {
            return Err(Error::UnknownNode(v));
        }
        Ok(if self.is_single(v) {
            NodeClass::Single
        } else {
            NodeClass::Matched
        })
    }

    /// The edges of `M`, each once.
    pub fn matching(&self) -> Vec<Edge> {
        self.nodes()
            .filter_map(|v| self.mate(v).filter(|&u| v < u).map(|u| Edge::new(v, u)))
            .collect()
    }

    pub fn edge_identifiers(&self, e: Edge) -> (Identifier, Identifier) {
        let (a, b) = e.endpoints();
        let (x, y) = (self.ident(a), self.ident(b));
        (x.min(y), x.max(y))
    }
}

/// Greedy maximal matching that scans edges in ascending
/// `(min identifier, max identifier)` order.
pub fn greedy_maximal_matching(idents: &[u64], edges: &[(u64, u64)]) -> Vec<(u64, u64)> {
    let mut sorted: Vec<(u64, u64)> = edges
        .iter()
        .filter(|(a, b)| a != b)
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    sorted.sort_unstable();
    sorted.dedup();
    let known: BTreeSet<u64> = idents.iter().copied().collect();
    let mut used = BTreeSet::new();
    let mut out = Vec::new();
    for (a, b) in sorted {
        if !known.contains(&a) || !known.contains(&b) {
            continue;
        }
        if !used.contains(&a) && !used.contains(&b) {
            used.insert(a);
            used.insert(b);
            out.push((a, b));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p7() -> Graph {
        Graph::from_identifiers(
            &[7, 8, 9, 10, 2, 24, 15],
            &[(7, 8), (8, 9), (9, 10), (10, 2), (2, 24), (24, 15)],
            &[(8, 9), (2, 24)],
        )
        .unwrap()
    }

    #[test]
    fn p7_is_valid_and_classified() {
        let g = p7();
        assert_eq!(g.len(), 7);
        for single in [15, 10, 7] {
            let v = g.node_by_value(single).unwrap();
            assert_eq!(g.classify(v).unwrap(), NodeClass::Single);
        }
        for matched in [24, 2, 9, 8] {
            let v = g.node_by_value(matched).unwrap();
            assert_eq!(g.classify(v).unwrap(), NodeClass::Matched);
        }
        let v2 = g.node_by_value(2).unwrap();
        assert_eq!(g.mate(v2), g.node(Identifier(24)));
    }

    #[test]
    fn lone_edge_without_matching_is_not_maximal() {
        let err = Graph::from_identifiers(&[1, 2], &[(1, 2)], &[]).unwrap_err();
        assert_eq!(err, Error::MatchingNotMaximal(Identifier(1), Identifier(2)));
    }

    #[test]
    fn triangle_with_one_matched_edge() {
        let g = Graph::from_identifiers(&[1, 2, 3], &[(1, 2), (2, 3), (1, 3)], &[(1, 2)]).unwrap();
        let c = g.node_by_value(3).unwrap();
        assert_eq!(g.classify(c).unwrap(), NodeClass::Single);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Graph::from_identifiers(&[1, 1], &[], &[]).unwrap_err(),
            Error::DuplicateIdentifier(Identifier(1))
        );
        assert!(matches!(
            Graph::from_identifiers(&[1, 2], &[(1, 3)], &[]).unwrap_err(),
            Error::EdgeEndpointMissing(_)
        ));
        // non-edge pair
        assert!(matches!(
            Graph::from_identifiers(&[1, 2, 3], &[(1, 2)], &[(1, 3)]).unwrap_err(),
            Error::MatchingNotValid(_)
        ));
        // overlapping pairs
        assert!(matches!(
            Graph::from_identifiers(&[1, 2, 3], &[(1, 2), (2, 3)], &[(1, 2), (2, 3)]).unwrap_err(),
            Error::MatchingNotValid(_)
        ));
        assert_eq!(
            Graph::from_identifiers(&[1], &[(1, 1)], &[]).unwrap_err(),
            Error::SelfLoop(Identifier(1))
        );
        assert_eq!(
            Graph::from_identifiers(&[0], &[], &[]).unwrap_err(),
            Error::InvalidIdentifier(0)
        );
        let g = p7();
        assert_eq!(
            g.classify(NodeId(99)).unwrap_err(),
            Error::UnknownNode(NodeId(99))
        );
    }

    #[test]
    fn neighbors_sorted_by_identifier() {
        let g = p7();
        let v10 = g.node_by_value(10).unwrap();
        let ids: Vec<u64> = g.neighbors(v10).iter().map(|&u| g.ident(u).0).collect();
        assert_eq!(ids, vec![2, 9]);
    }

    #[test]
    fn greedy_matching_scans_in_identifier_order() {
        // path 1-2-3-4: greedy picks (1,2) then (3,4)
        let m = greedy_maximal_matching(&[1, 2, 3, 4], &[(3, 4), (2, 3), (2, 1)]);
        assert_eq!(m, vec![(1, 2), (3, 4)]);
        // star around 5: only one edge
        let m = greedy_maximal_matching(&[1, 2, 3, 5], &[(5, 1), (5, 2), (5, 3)]);
        assert_eq!(m, vec![(1, 5)]);
    }
}
