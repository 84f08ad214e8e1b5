//! Execution driver: a daemon picks moves among the enabled rules, the engine
//! checks and applies them, records the trace and detects stabilization.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng;
use crate::rules::{self, Configuration, RuleKind};

/// Default move budget of [`run`] callers.
pub const DEFAULT_MAX_MOVES: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub node: NodeId,
    pub rule: RuleKind,
}

impl Move {
    pub fn new(node: NodeId, rule: RuleKind) -> Self {
        Move { node, rule }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub initial: Configuration,
    pub steps: Vec<Vec<Move>>,
    pub move_count: u64,
    pub stabilized: bool,
    pub final_config: Configuration,
}

impl Trace {
    /// Re-applies every step from `initial`, validating each move again.
    pub fn replay(&self, g: &Graph) -> Result<Configuration> {
        let mut c = self.initial.clone();
        for moves in &self.steps {
            c = step(g, &c, moves)?;
        }
        Ok(c)
    }
}

/// Fixed rule preference when a node has several enabled rules.
pub const RULE_PRIORITY: [RuleKind; 5] = [
    RuleKind::Update,
    RuleKind::ResetMatch,
    RuleKind::MatchFirst,
    RuleKind::MatchSecond,
    RuleKind::SingleNode,
];

fn preferred_rule(enabled: &[RuleKind]) -> RuleKind {
    RULE_PRIORITY
        .into_iter()
        .find(|r| enabled.contains(r))
        .expect("preferred_rule called with no enabled rule")
}

#[derive(Debug, Clone, PartialEq)]
pub enum DaemonStrategy {
    /// Plays a fixed list of single moves, one per step.
    ScriptedCentral(Vec<Move>),
    /// One uniformly chosen enabled node, one uniformly chosen enabled rule.
    RandomCentral { seed: u64 },
    /// One node per step, cycling through nodes in ascending identifier order.
    RoundRobinFair,
    /// Every enabled node at once.
    Synchronous,
    /// Each enabled node independently with the given probability, resampled
    /// until the selection is nonempty.
    RandomDistributed {
        seed: u64,
        activation_probability: f64,
    },
}

impl DaemonStrategy {
    pub fn into_daemon(self, g: &Graph) -> Daemon {
        let kind = match self {
            DaemonStrategy::ScriptedCentral(script) => DaemonKind::Scripted { script, next: 0 },
            DaemonStrategy::RandomCentral { seed } => DaemonKind::RandomCentral {
                rng: rng::from_seed(seed),
            },
            DaemonStrategy::RoundRobinFair => DaemonKind::RoundRobin {
                order: g.nodes_by_identifier(),
                cursor: 0,
            },
            DaemonStrategy::Synchronous => DaemonKind::Synchronous,
            DaemonStrategy::RandomDistributed {
                seed,
                activation_probability,
            } => DaemonKind::RandomDistributed {
                rng: rng::from_seed(seed),
                probability: activation_probability.clamp(0.0, 1.0),
            },
        };
        Daemon { kind }
    }
}

/// Stateful scheduler built from a [`DaemonStrategy`].
#[derive(Debug, Clone)]
pub struct Daemon {
    kind: DaemonKind,
}

#[derive(Debug, Clone)]
enum DaemonKind {
    Scripted { script: Vec<Move>, next: usize },
    RandomCentral { rng: ChaCha8Rng },
    RoundRobin { order: Vec<NodeId>, cursor: usize },
    Synchronous,
    RandomDistributed { rng: ChaCha8Rng, probability: f64 },
}

impl Daemon {
    /// Next move set, or `None` when nothing can be scheduled. `enabled`
    /// lists every activable node (ascending [`NodeId`]) with its rules.
    pub fn select(&mut self, enabled: &[(NodeId, Vec<RuleKind>)]) -> Option<Vec<Move>> {
        if enabled.is_empty() {
            return None;
        }
        match &mut self.kind {
            DaemonKind::Scripted { script, next } => {
                let m = script.get(*next).copied()?;
                *next += 1;
                Some(vec![m])
            }
            DaemonKind::RandomCentral { rng } => {
                let (node, rules) = enabled.choose(rng)?;
                let rule = *rules.choose(rng)?;
                Some(vec![Move::new(*node, rule)])
            }
            DaemonKind::RoundRobin { order, cursor } => {
                for _ in 0..order.len() {
                    let v = order[*cursor];
                    *cursor = (*cursor + 1) % order.len();
                    if let Ok(k) = enabled.binary_search_by_key(&v, |(n, _)| *n) {
                        return Some(vec![Move::new(v, preferred_rule(&enabled[k].1))]);
                    }
                }
                None
            }
            DaemonKind::Synchronous => Some(
                enabled
                    .iter()
                    .map(|(v, rules)| Move::new(*v, preferred_rule(rules)))
                    .collect(),
            ),
            DaemonKind::RandomDistributed { rng, probability } => {
                if *probability <= 0.0 {
                    let (node, rules) = enabled.choose(rng)?;
                    return Some(vec![Move::new(*node, *rules.choose(rng)?)]);
                }
                loop {
                    let moves: Vec<Move> = enabled
                        .iter()
                        .filter_map(|(v, rules)| {
                            if rng.gen_bool(*probability) {
                                Some(Move::new(*v, *rules.choose(rng)?))
                            } else {
                                None
                            }
                        })
                        .collect();
                    if !moves.is_empty() {
                        return Some(moves);
                    }
                }
            }
        }
    }
}

/// Every activable node with its enabled rules, ascending by [`NodeId`].
pub fn enabled_moves(g: &Graph, c: &Configuration) -> Vec<(NodeId, Vec<RuleKind>)> {
    g.nodes()
        .filter_map(|v| {
            let rules = rules::enabled_rules_unchecked(g, c, v);
            (!rules.is_empty()).then_some((v, rules))
        })
        .collect()
}

fn validate_step(g: &Graph, c: &Configuration, moves: &[Move]) -> Result<()> {
    c.check_against(g)?;
    if moves.is_empty() {
        return Err(Error::EmptyStep);
    }
    let mut seen = if moves.len() > 1 {
        vec![false; g.len()]
    } else {
        Vec::new()
    };
    for m in moves {
        if !g.contains(m.node) {
            return Err(Error::UnknownNode(m.node));
        }
        if !seen.is_empty() && std::mem::replace(&mut seen[m.node.0], true) {
            return Err(Error::DuplicateNode(g.ident(m.node)));
        }
        if !rules::is_enabled_unchecked(g, c, m.node, m.rule) {
            return Err(Error::RuleNotEnabled {
                node: g.ident(m.node),
                rule: m.rule,
            });
        }
    }
    Ok(())
}

/// One transition: all commands read the same pre-step snapshot `c`.
pub fn step(g: &Graph, c: &Configuration, moves: &[Move]) -> Result<Configuration> {
    validate_step(g, c, moves)?;
    let updates: Vec<_> = moves
        .iter()
        .map(|m| (m.node, rules::command(g, c, m.node, m.rule)))
        .collect();
    let mut next = c.clone();
    for (v, state) in updates {
        next.set(v, state);
    }
    Ok(next)
}

/// Single validated move applied in place.
pub fn step_in_place(g: &Graph, c: &mut Configuration, m: Move) -> Result<()> {
    validate_step(g, c, std::slice::from_ref(&m))?;
    let state = rules::command(g, c, m.node, m.rule);
    c.set(m.node, state);
    Ok(())
}

pub fn is_stable(g: &Graph, c: &Configuration) -> bool {
    g.nodes()
        .all(|v| rules::enabled_rules_unchecked(g, c, v).is_empty())
}

/// Runs `strategy` from `c0` until no node is enabled, the daemon has
/// nothing to offer, or more than `max_moves` moves were made.
pub fn run(
    g: &Graph,
    c0: &Configuration,
    strategy: DaemonStrategy,
    max_moves: u64,
) -> Result<Trace> {
    run_with(g, c0, strategy, max_moves, true)
}

/// Like [`run`]; when `record` is false the step list stays empty.
pub fn run_with(
    g: &Graph,
    c0: &Configuration,
    strategy: DaemonStrategy,
    max_moves: u64,
    record: bool,
) -> Result<Trace> {
    if max_moves == 0 {
        return Err(Error::InvalidMaxMoves);
    }
    c0.check_against(g)?;
    let mut daemon = strategy.into_daemon(g);
    let mut c = c0.clone();
    let mut steps = Vec::new();
    let mut move_count = 0u64;
    loop {
        let enabled = enabled_moves(g, &c);
        if enabled.is_empty() || move_count >= max_moves {
            break;
        }
        let Some(moves) = daemon.select(&enabled) else {
            break;
        };
        c = step(g, &c, &moves)?;
        move_count += moves.len() as u64;
        if record {
            steps.push(moves);
        }
    }
    Ok(Trace {
        initial: c0.clone(),
        steps,
        move_count,
        stabilized: is_stable(g, &c),
        final_config: c,
    })
}
