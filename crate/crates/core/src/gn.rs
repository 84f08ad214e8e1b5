//! The counter gadget graph `G_N`.
//!
//! Bit `i` is the path `b(i,1) - b(i,2) = b(i,3) - b(i,4)`; its value lives in
//! the state of the matched edge `(b(i,2), b(i,3))`. For every `j < i` the
//! square nodes `r1(i,j) = r2(i,j)` form a second matched edge hanging between
//! `b(i,1)` and `b(j,4)`; these carry the `+1` operation.
//!
//! Identifiers: with `s = N(N-1)/2`, the `r2` nodes are `1..=s`, `b(i,k)` is
//! `s + 4i + k` and the `r1` nodes are `s + 4N + 1 ..= 2s + 4N`, square nodes
//! numbered in lexicographic `(i, j)` order.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rules::Configuration;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeState {
    Off,
    On,
    AlmostOn,
    Other,
}

/// Roles around a matched edge `(u, v)`: `x` is the single neighbor of `v`,
/// `y` the single neighbor of `u`, and `ident(x) < ident(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeRoles {
    pub u: NodeId,
    pub v: NodeId,
    pub x: NodeId,
    pub y: NodeId,
}

fn only_single_neighbor(g: &Graph, w: NodeId) -> Result<NodeId> {
    let mut singles = g.neighbors(w).iter().copied().filter(|&z| g.is_single(z));
    match (singles.next(), singles.next()) {
        (Some(z), None) => Ok(z),
        _ => Err(Error::AmbiguousSingleNeighbor(g.ident(w))),
    }
}

/// Assigns the `u, v, x, y` roles to the matched edge `(a, b)`. Both
/// endpoints need exactly one single neighbor, and those must differ.
pub fn edge_roles(g: &Graph, a: NodeId, b: NodeId) -> Result<EdgeRoles> {
    if !g.contains(a) {
        return Err(Error::UnknownNode(a));
    }
    if !g.contains(b) {
        return Err(Error::UnknownNode(b));
    }
    if g.mate(a) != Some(b) {
        return Err(Error::NotMatchedEdge(g.ident(a), g.ident(b)));
    }
    let sa = only_single_neighbor(g, a)?;
    let sb = only_single_neighbor(g, b)?;
    if sa == sb {
        return Err(Error::AmbiguousSingleNeighbor(g.ident(b)));
    }
    Ok(if g.ident(sa) < g.ident(sb) {
        EdgeRoles {
            v: a,
            x: sa,
            u: b,
            y: sb,
        }
    } else {
        EdgeRoles {
            v: b,
            x: sb,
            u: a,
            y: sa,
        }
    })
}

pub fn classify_roles(c: &Configuration, r: &EdgeRoles) -> EdgeState {
    let (pu, pv, px, py) = (c.p(r.u), c.p(r.v), c.p(r.x), c.p(r.y));
    if pu.is_none() && pv.is_none() && px.is_none() && py.is_none() {
        EdgeState::Off
    } else if pu == Some(r.y) && px == Some(r.v) && pv == Some(r.x) {
        match py {
            None => EdgeState::On,
            Some(w) if w != r.u => EdgeState::AlmostOn,
            Some(_) => EdgeState::Other,
        }
    } else {
        EdgeState::Other
    }
}

pub fn edge_state(g: &Graph, c: &Configuration, a: NodeId, b: NodeId) -> Result<EdgeState> {
    let roles = edge_roles(g, a, b)?;
    Ok(classify_roles(c, &roles))
}

/// Off except for `y`, whose pointer may belong to a neighboring gadget.
pub fn is_locally_off(c: &Configuration, r: &EdgeRoles) -> bool {
    c.p(r.u).is_none() && c.p(r.v).is_none() && c.p(r.x).is_none()
}

#[derive(Debug, Clone)]
pub struct GnInstance {
    n_bits: usize,
    graph: Graph,
    // b[i][k - 1]
    b: Vec<[NodeId; 4]>,
    r1: Vec<NodeId>,
    r2: Vec<NodeId>,
}

/// Position of `(i, j)`, `j < i`, in lexicographic order.
fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(j < i);
    i * (i - 1) / 2 + j
}

impl GnInstance {
    pub fn build(n_bits: usize) -> Result<Self> {
        if n_bits < 1 {
            return Err(Error::InvalidN(n_bits));
        }
        let s = n_bits * (n_bits - 1) / 2;
        let c = 4 * n_bits;
        let total = 2 * s + c;
        // identifier t lives at NodeId(t - 1)
        let idents: Vec<u64> = (1..=total as u64).collect();
        let node = |ident: usize| NodeId(ident - 1);
        let b: Vec<[NodeId; 4]> = (0..n_bits)
            .map(|i| std::array::from_fn(|k| node(s + 4 * i + k + 1)))
            .collect();
        let r2: Vec<NodeId> = (0..s).map(|q| node(q + 1)).collect();
        let r1: Vec<NodeId> = (0..s).map(|q| node(s + c + q + 1)).collect();

        let mut edges = Vec::new();
        let mut matching = Vec::new();
        for block in &b {
            edges.push((block[0], block[1]));
            edges.push((block[1], block[2]));
            edges.push((block[2], block[3]));
            matching.push((block[1], block[2]));
        }
        for i in 0..n_bits {
            for j in 0..i {
                let q = pair_index(i, j);
                edges.push((b[i][0], r1[q]));
                edges.push((r1[q], r2[q]));
                edges.push((r2[q], b[j][3]));
                matching.push((r1[q], r2[q]));
            }
        }
        let graph = Graph::new(
            idents.into_iter().map(crate::graph::Identifier).collect(),
            &edges,
            &matching,
        )?;
        Ok(GnInstance {
            n_bits,
            graph,
            b,
            r1,
            r2,
        })
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// `b(i, k)` for `k` in `1..=4`.
    pub fn b(&self, i: usize, k: usize) -> NodeId {
        assert!((1..=4).contains(&k), "k must be in 1..=4");
        self.b[i][k - 1]
    }

    pub fn r1(&self, i: usize, j: usize) -> NodeId {
        self.r1[pair_index(i, j)]
    }

    pub fn r2(&self, i: usize, j: usize) -> NodeId {
        self.r2[pair_index(i, j)]
    }

    /// The matched edge `(b(i,2), b(i,3))` holding bit `i`.
    pub fn bit_edge(&self, i: usize) -> (NodeId, NodeId) {
        (self.b(i, 2), self.b(i, 3))
    }

    /// The matched edge `(r1(i,j), r2(i,j))`.
    pub fn square_edge(&self, i: usize, j: usize) -> (NodeId, NodeId) {
        (self.r1(i, j), self.r2(i, j))
    }

    /// Every pointer null, every flag false, no candidates.
    pub fn zero_configuration(&self) -> Configuration {
        Configuration::null(self.graph.len())
    }

    pub fn decode_bit(&self, c: &Configuration, i: usize) -> Result<Option<bool>> {
        if i >= self.n_bits {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.n_bits,
            });
        }
        let (a, b) = self.bit_edge(i);
        Ok(match edge_state(&self.graph, c, a, b)? {
            EdgeState::On => Some(true),
            EdgeState::Off => Some(false),
            _ => None,
        })
    }

    /// `Σ bit_i · 2^i` when every bit decodes.
    pub fn decode_omega(&self, c: &Configuration) -> Option<u64> {
        let mut omega = 0u64;
        for i in 0..self.n_bits {
            match self.decode_bit(c, i).ok()? {
                Some(true) => omega |= 1 << i,
                Some(false) => {}
                None => return None,
            }
        }
        Some(omega)
    }
}

pub fn build_gn(n_bits: usize) -> Result<GnInstance> {
    GnInstance::build(n_bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine;
    use crate::figure2;
    use crate::io::configuration_from_pointers;

    fn ident(gn: &GnInstance, v: NodeId) -> u64 {
        gn.graph().ident(v).0
    }

    #[test]
    fn g4_identifiers_match_the_figure_labels() {
        let gn = build_gn(4).unwrap();
        assert_eq!(ident(&gn, gn.r2(1, 0)), 1);
        assert_eq!(ident(&gn, gn.r2(3, 2)), 6);
        assert_eq!(ident(&gn, gn.b(0, 1)), 7);
        assert_eq!(ident(&gn, gn.b(1, 1)), 11);
        assert_eq!(ident(&gn, gn.b(1, 4)), 14);
        assert_eq!(ident(&gn, gn.b(3, 4)), 22);
        assert_eq!(ident(&gn, gn.r1(1, 0)), 23);
        assert_eq!(ident(&gn, gn.r1(2, 0)), 24);
        assert_eq!(ident(&gn, gn.r1(3, 2)), 28);
        assert_eq!(gn.graph().len(), 28);
    }

    #[test]
    fn g1_has_one_bit_block_only() {
        let gn = build_gn(1).unwrap();
        assert_eq!(gn.graph().len(), 4);
        assert_eq!(gn.graph().edges().len(), 3);
        let c = gn.zero_configuration();
        let (a, b) = gn.bit_edge(0);
        assert_eq!(edge_state(gn.graph(), &c, a, b).unwrap(), EdgeState::Off);
        assert_eq!(build_gn(0).unwrap_err(), Error::InvalidN(0));
    }

    #[test]
    fn sizes_and_topology() {
        for n in 1..=8 {
            let gn = build_gn(n).unwrap();
            let g = gn.graph();
            assert_eq!(g.len(), n * n + 3 * n);
            let pairs = n * (n - 1) / 2;
            assert_eq!(g.edges().len(), 3 * n + 3 * pairs);
            assert_eq!(g.matching().len(), n + pairs);
            for i in 0..n {
                for k in 1..=3 {
                    assert!(g.is_neighbor(gn.b(i, k), gn.b(i, k + 1)));
                }
                for j in 0..i {
                    assert!(g.is_neighbor(gn.b(i, 1), gn.r1(i, j)));
                    assert!(g.is_neighbor(gn.r1(i, j), gn.r2(i, j)));
                    assert!(g.is_neighbor(gn.r2(i, j), gn.b(j, 4)));
                    assert_eq!(g.mate(gn.r1(i, j)), Some(gn.r2(i, j)));
                }
                assert_eq!(g.mate(gn.b(i, 2)), Some(gn.b(i, 3)));
            }
            // σ(V) = {b(i,1), b(i,4)} and every matched node sees one single node
            for v in g.nodes() {
                if g.is_single(v) {
                    assert!((0..n).any(|i| v == gn.b(i, 1) || v == gn.b(i, 4)));
                } else {
                    let singles = g.neighbors(v).iter().filter(|&&w| g.is_single(w)).count();
                    assert_eq!(singles, 1);
                }
            }
        }
    }

    #[test]
    fn identifier_order_property_holds() {
        for n in 1..=8 {
            let gn = build_gn(n).unwrap();
            let id = |v| ident(&gn, v);
            let blocks: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (1..=4).map(move |k| (i, k))).collect();
            for &(i, k) in &blocks {
                for &(i2, k2) in &blocks {
                    if i > i2 || (i == i2 && k > k2) {
                        assert!(id(gn.b(i, k)) > id(gn.b(i2, k2)));
                    }
                }
            }
            for i in 0..n {
                for a in 0..n {
                    for b in 0..a {
                        assert!(id(gn.b(i, 2)) < id(gn.r1(a, b)));
                        assert!(id(gn.b(i, 3)) > id(gn.r2(a, b)));
                    }
                }
            }
        }
    }

    #[test]
    fn zero_configuration_decodes_to_zero() {
        for n in 1..=16 {
            let gn = build_gn(n).unwrap();
            assert_eq!(gn.decode_omega(&gn.zero_configuration()), Some(0));
        }
        let gn = build_gn(4).unwrap();
        assert!(!engine::is_stable(gn.graph(), &gn.zero_configuration()));
        assert_eq!(
            gn.decode_bit(&gn.zero_configuration(), 4).unwrap_err(),
            Error::IndexOutOfRange { index: 4, n: 4 }
        );
    }

    fn g4_with(pointers: &[(u64, u64)]) -> (GnInstance, Configuration) {
        let gn = build_gn(4).unwrap();
        let c = configuration_from_pointers(gn.graph(), pointers).unwrap();
        (gn, c)
    }

    #[test]
    fn figure_configurations_decode() {
        let (gn, c) = g4_with(&[(11, 12), (12, 11), (13, 14)]);
        let bits: Vec<_> = (0..4).map(|i| gn.decode_bit(&c, i).unwrap()).collect();
        assert_eq!(
            bits,
            vec![Some(false), Some(true), Some(false), Some(false)]
        );
        assert_eq!(gn.decode_omega(&c), Some(2));

        let (gn, c) = g4_with(&[(7, 8), (8, 7), (9, 10), (11, 12), (12, 11), (13, 14)]);
        assert_eq!(gn.decode_omega(&c), Some(3));

        let (gn, c) = g4_with(&[(15, 16), (16, 15), (17, 18)]);
        assert_eq!(gn.decode_omega(&c), Some(4));

        // square nodes of bit 2 switched on: bits 0 and 1 are Almost On
        let (gn, c) = g4_with(&[
            (7, 8),
            (8, 7),
            (9, 10),
            (11, 12),
            (12, 11),
            (13, 14),
            (10, 2),
            (2, 10),
            (24, 15),
            (14, 3),
            (3, 14),
            (25, 15),
        ]);
        assert_eq!(gn.decode_bit(&c, 0).unwrap(), None);
        assert_eq!(gn.decode_bit(&c, 1).unwrap(), None);
        assert_eq!(gn.decode_bit(&c, 2).unwrap(), Some(false));
        assert_eq!(gn.decode_omega(&c), None);
        let (a, b) = gn.bit_edge(0);
        assert_eq!(
            edge_state(gn.graph(), &c, a, b).unwrap(),
            EdgeState::AlmostOn
        );
        let (a, b) = gn.square_edge(2, 0);
        assert_eq!(edge_state(gn.graph(), &c, a, b).unwrap(), EdgeState::On);
    }

    #[test]
    fn edge_states_on_the_seven_node_path() {
        let g = figure2::graph();
        let n = |x| g.node_by_value(x).unwrap();
        let c = figure2::initial_configuration(&g);
        let roles = edge_roles(&g, n(9), n(8)).unwrap();
        assert_eq!(
            (roles.v, roles.x, roles.u, roles.y),
            (n(8), n(7), n(9), n(10))
        );
        assert_eq!(edge_state(&g, &c, n(9), n(8)).unwrap(), EdgeState::On);
        assert_eq!(edge_state(&g, &c, n(24), n(2)).unwrap(), EdgeState::Off);
        let e = figure2::expected_pointer_configuration(&g, 'e');
        assert_eq!(edge_state(&g, &e, n(9), n(8)).unwrap(), EdgeState::AlmostOn);
        assert_eq!(edge_state(&g, &e, n(24), n(2)).unwrap(), EdgeState::Other);
        assert_eq!(
            edge_state(&g, &c, n(9), n(10)).unwrap_err(),
            Error::NotMatchedEdge(crate::graph::Identifier(9), crate::graph::Identifier(10))
        );
    }

    #[test]
    fn shared_single_neighbor_is_ambiguous() {
        let g = Graph::from_identifiers(&[1, 2, 3], &[(1, 2), (2, 3), (1, 3)], &[(1, 2)]).unwrap();
        let c = Configuration::null(3);
        let (a, b) = (g.node_by_value(1).unwrap(), g.node_by_value(2).unwrap());
        assert!(matches!(
            edge_state(&g, &c, a, b).unwrap_err(),
            Error::AmbiguousSingleNeighbor(_)
        ));
    }
}
