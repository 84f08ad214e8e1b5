//! Brute-force checks of stabilized configurations. The matching oracles
//! only look at the topology; they never evaluate a rule.

use serde::Serialize;

use crate::engine;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::rules::{self, Configuration};

/// Edge budget of [`maximum_matching_size`].
pub const MAX_ORACLE_EDGES: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub matching_size: usize,
    pub maximum_size: usize,
    pub is_maximal: bool,
    pub has_3_aug_path: bool,
    pub ratio_ok: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.is_maximal && !self.has_3_aug_path && self.ratio_ok
    }
}

/// Exact maximum matching cardinality by exhaustive include/exclude
/// branching over the edge list.
pub fn maximum_matching_size(g: &Graph) -> Result<usize> {
    let edges = g.edges();
    if edges.len() > MAX_ORACLE_EDGES {
        return Err(Error::TooLarge(edges.len(), MAX_ORACLE_EDGES));
    }
    let mut used = vec![false; g.len()];
    let mut best = 0;
    branch(edges, 0, 0, g.len(), &mut used, &mut best);
    Ok(best)
}

fn branch(edges: &[Edge], k: usize, size: usize, n: usize, used: &mut [bool], best: &mut usize) {
    if size > *best {
        *best = size;
    }
    if k == edges.len() {
        return;
    }
    let bound = size + (edges.len() - k).min((n - 2 * size) / 2);
    if bound <= *best {
        return;
    }
    let (a, b) = edges[k].endpoints();
    if !used[a.0] && !used[b.0] {
        used[a.0] = true;
        used[b.0] = true;
        branch(edges, k + 1, size + 1, n, used, best);
        used[a.0] = false;
        used[b.0] = false;
    }
    branch(edges, k + 1, size, n, used, best);
}

/// Partner array of `mm`, or [`Error::NotAMatching`].
fn partners(g: &Graph, mm: &[Edge]) -> Result<Vec<bool>> {
    let mut covered = vec![false; g.len()];
    for &e in mm {
        let (a, b) = e.endpoints();
        if !g.contains(a) || !g.contains(b) || !g.is_neighbor(a, b) {
            return Err(Error::NotAMatching(format!("{e:?} is not an edge")));
        }
        for v in [a, b] {
            if std::mem::replace(&mut covered[v.0], true) {
                return Err(Error::NotAMatching(format!(
                    "node {} is covered twice",
                    g.ident(v)
                )));
            }
        }
    }
    Ok(covered)
}

/// Every edge of the graph has a covered endpoint.
pub fn is_maximal_matching(g: &Graph, mm: &[Edge]) -> Result<bool> {
    let covered = partners(g, mm)?;
    Ok(g.edges().iter().all(|e| {
        let (a, b) = e.endpoints();
        covered[a.0] || covered[b.0]
    }))
}

/// Looks for a path `y - u = v - x` with `(u, v)` in `mm` and `x ≠ y` both
/// uncovered.
pub fn has_3_augmenting_path(g: &Graph, mm: &[Edge]) -> Result<bool> {
    let covered = partners(g, mm)?;
    for &e in mm {
        let (u, v) = e.endpoints();
        let free_u: Vec<_> = g.neighbors(u).iter().filter(|w| !covered[w.0]).collect();
        let free_v: Vec<_> = g.neighbors(v).iter().filter(|w| !covered[w.0]).collect();
        for y in &free_u {
            if free_v.iter().any(|x| x != y) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Checks a stable configuration: its output matching must be maximal,
/// free of 3-augmenting paths and within 2/3 of a maximum matching.
pub fn verify_stable(g: &Graph, c: &Configuration) -> Result<VerificationReport> {
    c.check_against(g)?;
    if !engine::is_stable(g, c) {
        return Err(Error::NotStable);
    }
    let mm = rules::extract_matching(g, c);
    let maximum_size = maximum_matching_size(g)?;
    let is_maximal = is_maximal_matching(g, &mm)?;
    let has_3_aug_path = has_3_augmenting_path(g, &mm)?;
    Ok(VerificationReport {
        matching_size: mm.len(),
        maximum_size,
        is_maximal,
        has_3_aug_path,
        ratio_ok: 3 * mm.len() >= 2 * maximum_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figure2;

    fn path(k: u64) -> Graph {
        let ids: Vec<u64> = (1..=k).collect();
        let edges: Vec<(u64, u64)> = (1..k).map(|i| (i, i + 1)).collect();
        let m = crate::graph::greedy_maximal_matching(&ids, &edges);
        Graph::from_identifiers(&ids, &edges, &m).unwrap()
    }

    fn edges_by_id(g: &Graph, pairs: &[(u64, u64)]) -> Vec<Edge> {
        pairs
            .iter()
            .map(|&(a, b)| Edge::new(g.node_by_value(a).unwrap(), g.node_by_value(b).unwrap()))
            .collect()
    }

    #[test]
    fn small_maximum_matchings() {
        assert_eq!(maximum_matching_size(&figure2::graph()).unwrap(), 3);
        assert_eq!(maximum_matching_size(&path(4)).unwrap(), 2);
        let tri =
            Graph::from_identifiers(&[1, 2, 3], &[(1, 2), (2, 3), (1, 3)], &[(1, 2)]).unwrap();
        assert_eq!(maximum_matching_size(&tri).unwrap(), 1);
        assert_eq!(maximum_matching_size(&path(1)).unwrap(), 0);
    }

    #[test]
    fn too_many_edges() {
        let ids: Vec<u64> = (1..=42).collect();
        let edges: Vec<(u64, u64)> = (1..42).map(|i| (i, i + 1)).collect();
        let m = crate::graph::greedy_maximal_matching(&ids, &edges);
        let g = Graph::from_identifiers(&ids, &edges, &m).unwrap();
        assert_eq!(
            maximum_matching_size(&g).unwrap_err(),
            Error::TooLarge(41, 40)
        );
    }

    #[test]
    fn maximality() {
        let g = figure2::graph();
        assert!(is_maximal_matching(&g, &edges_by_id(&g, &[(8, 9), (2, 24)])).unwrap());
        assert!(!is_maximal_matching(&g, &edges_by_id(&g, &[(8, 9)])).unwrap());
        let empty = Graph::from_identifiers(&[], &[], &[]).unwrap();
        assert!(is_maximal_matching(&empty, &[]).unwrap());
        assert!(matches!(
            is_maximal_matching(&g, &edges_by_id(&g, &[(8, 9), (9, 10)])).unwrap_err(),
            Error::NotAMatching(_)
        ));
    }

    #[test]
    fn augmenting_paths_of_length_three() {
        let g = figure2::graph();
        assert!(has_3_augmenting_path(&g, &edges_by_id(&g, &[(8, 9), (2, 24)])).unwrap());
        assert!(
            !has_3_augmenting_path(&g, &edges_by_id(&g, &[(8, 9), (2, 10), (24, 15)])).unwrap()
        );
        let single = Graph::from_identifiers(&[1, 2], &[(1, 2)], &[(1, 2)]).unwrap();
        assert!(!has_3_augmenting_path(&single, &edges_by_id(&single, &[(1, 2)])).unwrap());
        // both endpoints only see the same free node
        let tri =
            Graph::from_identifiers(&[1, 2, 3], &[(1, 2), (2, 3), (1, 3)], &[(1, 2)]).unwrap();
        assert!(!has_3_augmenting_path(&tri, &edges_by_id(&tri, &[(1, 2)])).unwrap());
    }

    #[test]
    fn verify_final_figure_configuration() {
        let g = figure2::graph();
        let report = verify_stable(&g, &figure2::final_configuration(&g)).unwrap();
        assert_eq!(
            report,
            VerificationReport {
                matching_size: 3,
                maximum_size: 3,
                is_maximal: true,
                has_3_aug_path: false,
                ratio_ok: true,
            }
        );
        assert_eq!(
            verify_stable(&g, &figure2::initial_configuration(&g)).unwrap_err(),
            Error::NotStable
        );
    }

    #[test]
    fn null_configuration_on_matched_edge_plus_isolated_node() {
        let g = Graph::from_identifiers(&[1, 2, 3], &[(1, 2)], &[(1, 2)]).unwrap();
        let report = verify_stable(&g, &Configuration::null(3)).unwrap();
        assert!(report.passed());
        assert_eq!((report.matching_size, report.maximum_size), (1, 1));
    }
}
