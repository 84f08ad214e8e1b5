//! The worked seven-node example: a path `7-8-9-10-2-24-15` with `M =
//! {(8,9), (2,24)}`, where edge `(9,8)` starts half-exploited and edge
//! `(24,2)` is Off. The scripted schedule resets the first attempt and
//! completes the second one.
//!
//! The schedule contains one move more than the narrated execution: node 2
//! runs `MatchFirst` a second time after node 10 accepts it, because its
//! `s` flag is computed before the acceptance and `MatchSecond` of node 24
//! needs `s_2 = true`.

use serde::Serialize;

use crate::engine::{self, Move};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::{configuration_from_pointers, pointer_pairs};
use crate::oracle;
use crate::rules::{self, Configuration, RuleKind};

/// Topology, underlying matching and initial state of the example, all by
/// identifier. Mutable so tests can perturb it.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub nodes: Vec<u64>,
    pub edges: Vec<(u64, u64)>,
    pub matching: Vec<(u64, u64)>,
    pub pointers: Vec<(u64, u64)>,
    pub alpha: Vec<(u64, u64)>,
    pub s_true: Vec<u64>,
}

impl Default for Fixture {
    fn default() -> Self {
        Fixture {
            nodes: vec![7, 8, 9, 10, 2, 24, 15],
            edges: vec![(7, 8), (8, 9), (9, 10), (10, 2), (2, 24), (24, 15)],
            matching: vec![(8, 9), (2, 24)],
            pointers: vec![(7, 8), (8, 7), (9, 10)],
            alpha: vec![(8, 7), (9, 10)],
            s_true: vec![8],
        }
    }
}

impl Fixture {
    pub fn graph(&self) -> Result<Graph> {
        Graph::from_identifiers(&self.nodes, &self.edges, &self.matching)
    }

    pub fn initial_configuration(&self, g: &Graph) -> Result<Configuration> {
        let mut c = configuration_from_pointers(g, &self.pointers)?;
        for &(v, a) in &self.alpha {
            c.get_mut(g.node_by_value(v)?).alpha = Some(g.node_by_value(a)?);
        }
        for &v in &self.s_true {
            c.get_mut(g.node_by_value(v)?).s = true;
        }
        Ok(c)
    }
}

pub fn graph() -> Graph {
    Fixture::default().graph().expect("fixture graph is valid")
}

pub fn initial_configuration(g: &Graph) -> Configuration {
    Fixture::default()
        .initial_configuration(g)
        .expect("fixture configuration is valid")
}

/// `(node, rule, sub-figure whose pointers hold afterwards)`.
pub const SCHEDULE: [(u64, RuleKind, char); 10] = [
    (2, RuleKind::Update, 'a'),
    (24, RuleKind::Update, 'a'),
    (2, RuleKind::MatchFirst, 'b'),
    (10, RuleKind::SingleNode, 'c'),
    (2, RuleKind::MatchFirst, 'c'),
    (24, RuleKind::MatchSecond, 'd'),
    (15, RuleKind::SingleNode, 'e'),
    (9, RuleKind::Update, 'f'),
    (8, RuleKind::ResetMatch, 'g'),
    (7, RuleKind::SingleNode, 'h'),
];

/// Pointers drawn in sub-figure `label`, sorted.
pub fn expected_pointers(label: char) -> Vec<(u64, u64)> {
    let mut p: Vec<(u64, u64)> = match label {
        'a' => vec![(7, 8), (8, 7), (9, 10)],
        'b' => vec![(7, 8), (8, 7), (9, 10), (2, 10)],
        'c' => vec![(7, 8), (8, 7), (9, 10), (2, 10), (10, 2)],
        'd' => vec![(7, 8), (8, 7), (9, 10), (2, 10), (10, 2), (24, 15)],
        'e' => vec![
            (7, 8),
            (8, 7),
            (9, 10),
            (2, 10),
            (10, 2),
            (24, 15),
            (15, 24),
        ],
        'f' => vec![(7, 8), (8, 7), (2, 10), (10, 2), (24, 15), (15, 24)],
        'g' => vec![(7, 8), (2, 10), (10, 2), (24, 15), (15, 24)],
        'h' => vec![(2, 10), (10, 2), (24, 15), (15, 24)],
        _ => panic!("no sub-figure {label}"),
    };
    p.sort_unstable();
    p
}

/// Null configuration carrying the pointers of sub-figure `label`.
pub fn expected_pointer_configuration(g: &Graph, label: char) -> Configuration {
    configuration_from_pointers(g, &expected_pointers(label)).expect("fixture pointers are valid")
}

/// Stable end state reached by the scripted schedule.
pub fn final_configuration(g: &Graph) -> Configuration {
    let mut c = initial_configuration(g);
    for (v, r, _) in SCHEDULE {
        let node = g.node_by_value(v).expect("fixture node");
        engine::step_in_place(g, &mut c, Move::new(node, r)).expect("schedule is valid");
    }
    c
}

pub const EXPECTED_MATCHING: [(u64, u64); 3] = [(2, 10), (8, 9), (15, 24)];

#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub node: u64,
    pub rule: RuleKind,
    pub figure: char,
    pub pointers: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReplayReport {
    pub passed: bool,
    pub moves: u64,
    pub steps: Vec<StepReport>,
    pub stable: bool,
    pub matching: Vec<(u64, u64)>,
    pub maximum_matching_size: usize,
    #[serde(skip)]
    pub snapshots: Vec<(String, Configuration)>,
}

fn fail(step: impl Into<String>, detail: impl Into<String>) -> Error {
    Error::AssertionFailed {
        step: step.into(),
        detail: detail.into(),
    }
}

/// Replays the schedule on `fixture`, checking the pointers after every
/// move, that node 10 is the only activable node in sub-figure (b), final
/// stability and the final matching.
pub fn replay(fixture: &Fixture) -> Result<ReplayReport> {
    let g = fixture.graph().map_err(|e| fail("setup", e.to_string()))?;
    let mut c = fixture
        .initial_configuration(&g)
        .map_err(|e| fail("setup", e.to_string()))?;
    let initial = pointer_pairs(&g, &c);
    if initial != expected_pointers('a') {
        return Err(fail(
            "(a)",
            format!("expected {:?}, got {:?}", expected_pointers('a'), initial),
        ));
    }

    let mut steps = Vec::new();
    let mut snapshots = vec![("00_a".to_string(), c.clone())];
    for (k, (v, rule, figure)) in SCHEDULE.into_iter().enumerate() {
        let label = format!("{}:{rule}@{v}", k + 1);
        let node = g
            .node_by_value(v)
            .map_err(|e| fail(&label, e.to_string()))?;
        engine::step_in_place(&g, &mut c, Move::new(node, rule))
            .map_err(|e| fail(&label, e.to_string()))?;
        let pointers = pointer_pairs(&g, &c);
        let expected = expected_pointers(figure);
        if pointers != expected {
            return Err(fail(
                &label,
                format!("sub-figure ({figure}): expected pointers {expected:?}, got {pointers:?}"),
            ));
        }
        if figure == 'b' {
            let active: Vec<u64> = engine::enabled_moves(&g, &c)
                .into_iter()
                .map(|(w, _)| g.ident(w).0)
                .collect();
            if active != [10] {
                return Err(fail(
                    &label,
                    format!("sub-figure (b): expected only node 10 enabled, got {active:?}"),
                ));
            }
        }
        steps.push(StepReport {
            node: v,
            rule,
            figure,
            pointers,
        });
        snapshots.push((format!("{:02}_{figure}", k + 1), c.clone()));
    }

    let stable = engine::is_stable(&g, &c);
    if !stable {
        return Err(fail("final", "configuration (h) is not stable"));
    }
    let mut matching: Vec<(u64, u64)> = rules::extract_matching(&g, &c)
        .into_iter()
        .map(|e| {
            let (a, b) = g.edge_identifiers(e);
            (a.0, b.0)
        })
        .collect();
    matching.sort_unstable();
    if matching != EXPECTED_MATCHING {
        return Err(fail(
            "final",
            format!("expected matching {EXPECTED_MATCHING:?}, got {matching:?}"),
        ));
    }
    let maximum = oracle::maximum_matching_size(&g).map_err(|e| fail("final", e.to_string()))?;
    if maximum != matching.len() {
        return Err(fail(
            "final",
            format!("maximum matching has size {maximum}"),
        ));
    }
    Ok(ReplayReport {
        passed: true,
        moves: steps.len() as u64,
        steps,
        stable,
        matching,
        maximum_matching_size: maximum,
        snapshots,
    })
}
