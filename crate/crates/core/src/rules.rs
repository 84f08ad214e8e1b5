//! The guarded rules of algorithm M+.
//!
//! Every node owns a [`LocalState`] `(p, α, β, s)`. Single nodes run one rule
//! (`SingleNode`), matched nodes run four (`Update`, `MatchFirst`,
//! `MatchSecond`, `ResetMatch`). Guards read the local state of the node, of
//! its neighbors and, for `p_{p_v}`, of whatever node `p_v` names.
//!
//! Two readings are fixed here because the algorithm leaves them open:
//!
//! * `Unique` counts distinct non-null values only.
//! * `s_v ≠ (p_{p_v} = v)` treats `p_{p_v} = v` as false when `p_v` is null.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LocalState {
    pub p: Option<NodeId>,
    pub alpha: Option<NodeId>,
    pub beta: Option<NodeId>,
    pub s: bool,
}

/// Local states of every node of one graph, indexed by [`NodeId`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    states: Vec<LocalState>,
}

impl Configuration {
    /// All pointers null and all flags false.
    pub fn null(n: usize) -> Self {
        Configuration {
            states: vec![LocalState::default(); n],
        }
    }

    pub fn from_states(states: Vec<LocalState>) -> Self {
        Configuration { states }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn get(&self, v: NodeId) -> &LocalState {
        &self.states[v.0]
    }

    pub fn get_mut(&mut self, v: NodeId) -> &mut LocalState {
        &mut self.states[v.0]
    }

    pub fn set(&mut self, v: NodeId, state: LocalState) {
        self.states[v.0] = state;
    }

    pub fn p(&self, v: NodeId) -> Option<NodeId> {
        self.states[v.0].p
    }

    pub fn states(&self) -> &[LocalState] {
        &self.states
    }

    pub(crate) fn check_against(&self, g: &Graph) -> Result<()> {
        if self.states.len() != g.len() {
            return Err(Error::ConfigurationMismatch {
                expected: g.len(),
                found: self.states.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleKind {
    SingleNode,
    Update,
    MatchFirst,
    MatchSecond,
    ResetMatch,
}

impl RuleKind {
    pub const ALL: [RuleKind; 5] = [
        RuleKind::SingleNode,
        RuleKind::Update,
        RuleKind::MatchFirst,
        RuleKind::MatchSecond,
        RuleKind::ResetMatch,
    ];

    pub const MATCHED: [RuleKind; 4] = [
        RuleKind::Update,
        RuleKind::MatchFirst,
        RuleKind::MatchSecond,
        RuleKind::ResetMatch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::SingleNode => "SingleNode",
            RuleKind::Update => "Update",
            RuleKind::MatchFirst => "MatchFirst",
            RuleKind::MatchSecond => "MatchSecond",
            RuleKind::ResetMatch => "ResetMatch",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        RuleKind::ALL.into_iter().find(|r| r.name() == name)
    }

    pub fn for_single_nodes(self) -> bool {
        self == RuleKind::SingleNode
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Member with the smallest identifier.
pub fn lowest(g: &Graph, ids: impl IntoIterator<Item = NodeId>) -> Option<NodeId> {
    ids.into_iter().min_by_key(|&v| g.ident(v))
}

/// Number of distinct non-null values.
pub fn unique_nonnull(vals: [Option<NodeId>; 4]) -> usize {
    let mut seen: [Option<NodeId>; 4] = [None; 4];
    let mut count = 0;
    for v in vals.into_iter().flatten() {
        if !seen[..count].contains(&Some(v)) {
            seen[count] = Some(v);
            count += 1;
        }
    }
    count
}

fn check_node(g: &Graph, v: NodeId) -> Result<()> {
    if g.contains(v) {
        Ok(())
    } else {
        Err(Error::UnknownNode(v))
    }
}

fn matched_partner(g: &Graph, v: NodeId) -> Result<NodeId> {
    check_node(g, v)?;
    g.mate(v).ok_or(Error::NotMatchedNode(g.ident(v)))
}

fn check_partners(g: &Graph, v: NodeId, u: NodeId) -> Result<()> {
    check_node(g, v)?;
    check_node(g, u)?;
    if g.mate(v) == Some(u) {
        Ok(())
    } else {
        Err(Error::NotPartners(g.ident(v), g.ident(u)))
    }
}

/// Strict identifier comparison of two non-null values.
fn lt(g: &Graph, a: NodeId, b: NodeId) -> bool {
    g.ident(a) < g.ident(b)
}

/// Lowest neighbor `u` with `p_u = v`.
pub fn lowest_proposer(g: &Graph, c: &Configuration, v: NodeId) -> Option<NodeId> {
    // neighbors are sorted by identifier
    g.neighbors(v).iter().copied().find(|&u| c.p(u) == Some(v))
}

/// `p_{p_v} = v`, false when `p_v` is null.
fn points_back(c: &Configuration, v: NodeId) -> bool {
    match c.p(v) {
        Some(w) => c.p(w) == Some(v),
        None => false,
    }
}

pub(crate) fn best_rematch_unchecked(
    g: &Graph,
    c: &Configuration,
    v: NodeId,
) -> (Option<NodeId>, Option<NodeId>) {
    let mut candidates = g
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&u| g.is_single(u) && c.p(u).is_none_or(|w| w == v));
    let a = candidates.next();
    let b = candidates.next();
    (a, b)
}

/// The two lowest single neighbors that are free or already point at `v`.
pub fn best_rematch(
    g: &Graph,
    c: &Configuration,
    v: NodeId,
) -> Result<(Option<NodeId>, Option<NodeId>)> {
    matched_partner(g, v)?;
    Ok(best_rematch_unchecked(g, c, v))
}

pub(crate) fn ask_first_unchecked(
    g: &Graph,
    c: &Configuration,
    v: NodeId,
    u: NodeId,
) -> Option<NodeId> {
    let sv = c.get(v);
    let su = c.get(u);
    let (av, au) = match (sv.alpha, su.alpha) {
        (Some(a), Some(b)) => (a, b),
        _ => return None,
    };
    let unique = unique_nonnull([sv.alpha, sv.beta, su.alpha, su.beta]);
    if !(2..=4).contains(&unique) {
        return None;
    }
    let first = lt(g, av, au)
        || (av == au && sv.beta.is_none())
        || (av == au && su.beta.is_some() && lt(g, v, u));
    first.then_some(av)
}

/// Candidate the first asker of the pair `(v, u)` proposes to, if `v` is
/// that asker.
pub fn ask_first(g: &Graph, c: &Configuration, v: NodeId, u: NodeId) -> Result<Option<NodeId>> {
    check_partners(g, v, u)?;
    Ok(ask_first_unchecked(g, c, v, u))
}

pub(crate) fn ask_second_unchecked(
    g: &Graph,
    c: &Configuration,
    v: NodeId,
    u: NodeId,
) -> Option<NodeId> {
    ask_first_unchecked(g, c, u, v)?;
    let sv = c.get(v);
    let excluded = c.get(u).alpha;
    lowest(
        g,
        [sv.alpha, sv.beta]
            .into_iter()
            .flatten()
            .filter(|&w| Some(w) != excluded),
    )
}

/// Candidate of the second asker, available once the partner asks first.
pub fn ask_second(g: &Graph, c: &Configuration, v: NodeId, u: NodeId) -> Result<Option<NodeId>> {
    check_partners(g, v, u)?;
    Ok(ask_second_unchecked(g, c, v, u))
}

/// Guard evaluation; `v` must belong to `g` and `c` must cover `g`.
pub(crate) fn is_enabled_unchecked(g: &Graph, c: &Configuration, v: NodeId, r: RuleKind) -> bool {
    let me = c.get(v);
    match (g.mate(v), r) {
        (None, RuleKind::SingleNode) => match me.p {
            None => lowest_proposer(g, c, v).is_some(),
            Some(w) => {
                let matched_neighbor = g.is_neighbor(v, w) && !g.is_single(w);
                !matched_neighbor || c.p(w) != Some(v)
            }
        },
        (None, _) | (Some(_), RuleKind::SingleNode) => false,
        (Some(_), RuleKind::Update) => match me.p {
            Some(w) if !(g.is_neighbor(v, w) && g.is_single(w)) => true,
            p => {
                (me.alpha, me.beta) != best_rematch_unchecked(g, c, v)
                    && match p {
                        None => true,
                        Some(w) => c.p(w).is_some_and(|z| z != v),
                    }
            }
        },
        (Some(u), RuleKind::MatchFirst) => match ask_first_unchecked(g, c, v, u) {
            Some(x) => me.p != Some(x) || me.s != points_back(c, v),
            None => false,
        },
        (Some(u), RuleKind::MatchSecond) => match ask_second_unchecked(g, c, v, u) {
            Some(y) => c.get(u).s && me.p != Some(y),
            None => false,
        },
        (Some(u), RuleKind::ResetMatch) => {
            ask_first_unchecked(g, c, v, u).is_none()
                && ask_second_unchecked(g, c, v, u).is_none()
                && (me.p, me.s) != (None, false)
        }
    }
}

pub fn is_enabled(g: &Graph, c: &Configuration, v: NodeId, r: RuleKind) -> Result<bool> {
    check_node(g, v)?;
    c.check_against(g)?;
    Ok(is_enabled_unchecked(g, c, v, r))
}

/// Rules whose guard holds for `v`, in [`RuleKind`] order.
pub fn enabled_rules(g: &Graph, c: &Configuration, v: NodeId) -> Result<Vec<RuleKind>> {
    check_node(g, v)?;
    c.check_against(g)?;
    Ok(enabled_rules_unchecked(g, c, v))
}

pub(crate) fn enabled_rules_unchecked(g: &Graph, c: &Configuration, v: NodeId) -> Vec<RuleKind> {
    let candidates: &[RuleKind] = if g.is_single(v) {
        &[RuleKind::SingleNode]
    } else {
        &RuleKind::MATCHED
    };
    candidates
        .iter()
        .copied()
        .filter(|&r| is_enabled_unchecked(g, c, v, r))
        .collect()
}

/// New local state of `v` after executing the command of `r` in `c`.
/// The guard is not checked.
pub(crate) fn command(g: &Graph, c: &Configuration, v: NodeId, r: RuleKind) -> LocalState {
    let mut next = *c.get(v);
    match r {
        RuleKind::SingleNode => {
            next.p = lowest_proposer(g, c, v);
        }
        RuleKind::Update => {
            let (a, b) = best_rematch_unchecked(g, c, v);
            next.alpha = a;
            next.beta = b;
            next.p = None;
            next.s = false;
        }
        RuleKind::MatchFirst => {
            let u = g.mate(v).expect("MatchFirst on a single node");
            let x = ask_first_unchecked(g, c, v, u);
            next.p = x;
            // p_v is written first, so p_x is read after that write.
            next.s = match x {
                Some(x) if x == v => true,
                Some(x) => c.p(x) == Some(v),
                None => false,
            };
        }
        RuleKind::MatchSecond => {
            let u = g.mate(v).expect("MatchSecond on a single node");
            next.p = ask_second_unchecked(g, c, v, u);
        }
        RuleKind::ResetMatch => {
            next.p = None;
            next.s = false;
        }
    }
    next
}

/// Executes `r` at `v`; fails with [`Error::RuleNotEnabled`] if the guard
/// does not hold.
pub fn apply_rule(g: &Graph, c: &Configuration, v: NodeId, r: RuleKind) -> Result<Configuration> {
    let mut next = c.clone();
    apply_rule_in_place(g, &mut next, v, r)?;
    Ok(next)
}

/// In-place variant of [`apply_rule`] for long sequential schedules.
pub fn apply_rule_in_place(g: &Graph, c: &mut Configuration, v: NodeId, r: RuleKind) -> Result<()> {
    if !is_enabled(g, c, v, r)? {
        return Err(Error::RuleNotEnabled {
            node: g.ident(v),
            rule: r,
        });
    }
    let state = command(g, c, v, r);
    c.set(v, state);
    Ok(())
}

/// Neighbor pairs matched in the output: mutual pointers, or both pointers
/// null on an edge of `M`.
pub fn extract_matching(g: &Graph, c: &Configuration) -> Vec<Edge> {
    g.edges()
        .iter()
        .copied()
        .filter(|e| {
            let (v, u) = e.endpoints();
            let (pv, pu) = (c.p(v), c.p(u));
            (pv == Some(u) && pu == Some(v))
                || (pv.is_none() && pu.is_none() && g.mate(v) == Some(u))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figure2;
    use crate::graph::Identifier;

    fn id(g: &Graph, x: u64) -> NodeId {
        g.node_by_value(x).unwrap()
    }

    fn ids(g: &Graph, v: Option<NodeId>) -> Option<u64> {
        v.map(|v| g.ident(v).0)
    }

    #[test]
    fn lowest_by_identifier() {
        let g = figure2::graph();
        assert_eq!(lowest(&g, []), None);
        assert_eq!(lowest(&g, [id(&g, 9), id(&g, 2)]), Some(id(&g, 2)));
        assert_eq!(lowest(&g, [id(&g, 15)]), Some(id(&g, 15)));
    }

    #[test]
    fn unique_ignores_null() {
        let (a, b, c, d) = (NodeId(0), NodeId(1), NodeId(2), NodeId(3));
        assert_eq!(unique_nonnull([Some(a), None, Some(b), None]), 2);
        assert_eq!(unique_nonnull([Some(a), Some(a), None, None]), 1);
        assert_eq!(unique_nonnull([Some(a), Some(b), Some(c), Some(d)]), 4);
        assert_eq!(unique_nonnull([None; 4]), 0);
    }

    #[test]
    fn best_rematch_on_initial_configuration() {
        let g = figure2::graph();
        let c = figure2::initial_configuration(&g);
        let br = |v| {
            let (a, b) = best_rematch(&g, &c, id(&g, v)).unwrap();
            (ids(&g, a), ids(&g, b))
        };
        assert_eq!(br(2), (Some(10), None));
        assert_eq!(br(24), (Some(15), None));
        assert_eq!(
            best_rematch(&g, &c, id(&g, 15)).unwrap_err(),
            Error::NotMatchedNode(Identifier(15))
        );
    }

    #[test]
    fn best_rematch_empty_once_candidate_is_taken() {
        let g = figure2::graph();
        let mut c = figure2::initial_configuration(&g);
        c.get_mut(id(&g, 10)).p = Some(id(&g, 2));
        assert_eq!(best_rematch(&g, &c, id(&g, 9)).unwrap(), (None, None));
        apply_rule_in_place(&g, &mut c, id(&g, 9), RuleKind::Update).unwrap();
        let s9 = c.get(id(&g, 9));
        assert_eq!((s9.alpha, s9.beta), (None, None));
    }

    #[test]
    fn ask_first_and_second_after_updates() {
        let g = figure2::graph();
        let mut c = figure2::initial_configuration(&g);
        apply_rule_in_place(&g, &mut c, id(&g, 2), RuleKind::Update).unwrap();
        apply_rule_in_place(&g, &mut c, id(&g, 24), RuleKind::Update).unwrap();
        let (v2, v24) = (id(&g, 2), id(&g, 24));
        assert_eq!(ids(&g, ask_first(&g, &c, v2, v24).unwrap()), Some(10));
        assert_eq!(ask_first(&g, &c, v24, v2).unwrap(), None);
        assert_eq!(ids(&g, ask_second(&g, &c, v24, v2).unwrap()), Some(15));
        assert_eq!(ask_second(&g, &c, v2, v24).unwrap(), None);
        assert_eq!(
            ask_first(&g, &c, v2, id(&g, 9)).unwrap_err(),
            Error::NotPartners(Identifier(2), Identifier(9))
        );
    }

    #[test]
    fn equal_alphas_resolved_by_betas_then_identifiers() {
        // 1 - 10 = 11 - 2, plus a single 3 adjacent to both 10 and 11
        let g = Graph::from_identifiers(
            &[1, 2, 3, 10, 11],
            &[(1, 10), (10, 11), (11, 2), (3, 10), (3, 11)],
            &[(10, 11)],
        )
        .unwrap();
        let (v, u, x) = (id(&g, 10), id(&g, 11), id(&g, 3));
        let (one, two) = (id(&g, 1), id(&g, 2));
        let with = |bv: Option<NodeId>, bu: Option<NodeId>| {
            let mut c = Configuration::null(g.len());
            *c.get_mut(v) = LocalState {
                alpha: Some(x),
                beta: bv,
                ..Default::default()
            };
            *c.get_mut(u) = LocalState {
                alpha: Some(x),
                beta: bu,
                ..Default::default()
            };
            c
        };

        // a single shared candidate: no 3-augmenting path, nobody asks
        let c = with(None, None);
        assert_eq!(ask_first(&g, &c, v, u).unwrap(), None);
        assert_eq!(ask_first(&g, &c, u, v).unwrap(), None);
        assert_eq!(ask_second(&g, &c, v, u).unwrap(), None);
        assert_eq!(ask_second(&g, &c, u, v).unwrap(), None);

        // the side without a second candidate asks first
        let c = with(None, Some(two));
        assert_eq!(ask_first(&g, &c, v, u).unwrap(), Some(x));
        assert_eq!(ask_first(&g, &c, u, v).unwrap(), None);
        assert_eq!(ask_second(&g, &c, u, v).unwrap(), Some(two));
        assert_eq!(ask_second(&g, &c, v, u).unwrap(), None);

        let c = with(Some(one), None);
        assert_eq!(ask_first(&g, &c, u, v).unwrap(), Some(x));
        assert_eq!(ask_first(&g, &c, v, u).unwrap(), None);
        assert_eq!(ask_second(&g, &c, v, u).unwrap(), Some(one));

        // both have a second candidate: the lower identifier asks first
        let c = with(Some(one), Some(two));
        assert_eq!(ask_first(&g, &c, v, u).unwrap(), Some(x));
        assert_eq!(ask_first(&g, &c, u, v).unwrap(), None);
        assert_eq!(ask_second(&g, &c, u, v).unwrap(), Some(two));
    }

    #[test]
    fn only_node_10_enabled_in_figure_b() {
        let g = figure2::graph();
        let mut c = figure2::initial_configuration(&g);
        for (v, r) in [
            (2, RuleKind::Update),
            (24, RuleKind::Update),
            (2, RuleKind::MatchFirst),
        ] {
            apply_rule_in_place(&g, &mut c, id(&g, v), r).unwrap();
        }
        for v in g.nodes() {
            let rules = enabled_rules(&g, &c, v).unwrap();
            if g.ident(v).0 == 10 {
                assert_eq!(rules, vec![RuleKind::SingleNode]);
            } else {
                assert!(rules.is_empty(), "node {} has {:?}", g.ident(v), rules);
            }
        }
        let next = apply_rule(&g, &c, id(&g, 10), RuleKind::SingleNode).unwrap();
        assert_eq!(next.p(id(&g, 10)), Some(id(&g, 2)));
    }

    #[test]
    fn idle_single_node_has_no_rule() {
        let g = figure2::graph();
        let c = Configuration::null(g.len());
        assert!(enabled_rules(&g, &c, id(&g, 7)).unwrap().is_empty());
        assert_eq!(
            enabled_rules(&g, &c, NodeId(42)).unwrap_err(),
            Error::UnknownNode(NodeId(42))
        );
    }

    #[test]
    fn update_command_resets_pointer() {
        let g = figure2::graph();
        let c = figure2::initial_configuration(&g);
        let next = apply_rule(&g, &c, id(&g, 2), RuleKind::Update).unwrap();
        let s = next.get(id(&g, 2));
        assert_eq!(
            (ids(&g, s.alpha), s.beta, s.p, s.s),
            (Some(10), None, None, false)
        );
        assert_eq!(
            apply_rule(&g, &c, id(&g, 15), RuleKind::SingleNode).unwrap_err(),
            Error::RuleNotEnabled {
                node: Identifier(15),
                rule: RuleKind::SingleNode
            }
        );
    }

    #[test]
    fn reset_match_clears_pointer_and_flag() {
        let g = figure2::graph();
        let mut c = figure2::initial_configuration(&g);
        // state (f): node 9 dropped its candidate
        c.get_mut(id(&g, 9)).alpha = None;
        c.get_mut(id(&g, 9)).p = None;
        let next = apply_rule(&g, &c, id(&g, 8), RuleKind::ResetMatch).unwrap();
        let s = next.get(id(&g, 8));
        assert_eq!((s.p, s.s), (None, false));
    }

    #[test]
    fn extraction_on_initial_and_null_configurations() {
        let g = figure2::graph();
        let names = |edges: Vec<Edge>| -> Vec<(u64, u64)> {
            let mut v: Vec<_> = edges
                .into_iter()
                .map(|e| {
                    let (a, b) = g.edge_identifiers(e);
                    (a.0, b.0)
                })
                .collect();
            v.sort();
            v
        };
        let c = figure2::initial_configuration(&g);
        assert_eq!(names(extract_matching(&g, &c)), vec![(2, 24), (7, 8)]);
        let null = Configuration::null(g.len());
        assert_eq!(names(extract_matching(&g, &null)), names(g.matching()));
    }

    #[test]
    fn abnormal_pointers_do_not_panic() {
        let g = figure2::graph();
        let mut c = Configuration::null(g.len());
        // single node pointing at a non-neighbor, matched node pointing at its partner
        c.get_mut(id(&g, 15)).p = Some(id(&g, 7));
        c.get_mut(id(&g, 2)).p = Some(id(&g, 24));
        c.get_mut(id(&g, 9)).alpha = Some(id(&g, 15));
        c.get_mut(id(&g, 8)).alpha = Some(id(&g, 2));
        assert_eq!(
            enabled_rules(&g, &c, id(&g, 15)).unwrap(),
            vec![RuleKind::SingleNode]
        );
        assert!(enabled_rules(&g, &c, id(&g, 2))
            .unwrap()
            .contains(&RuleKind::Update));
        for v in g.nodes() {
            for r in enabled_rules(&g, &c, v).unwrap() {
                assert_ne!(apply_rule(&g, &c, v, r).unwrap(), c);
            }
        }
    }
}
