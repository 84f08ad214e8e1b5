//! Scripted central daemon that drives `G_N` through every ω-configuration
//! from `0` to `2^N - 1`.
//!
//! Every move goes through [`engine::step_in_place`], so a schedule that
//! tries to fire a disabled rule aborts with [`Error::RuleNotEnabled`]
//! instead of being skipped.

use std::collections::BTreeSet;

use crate::engine::{self, DaemonStrategy, Move};
use crate::error::{Error, Result};
use crate::gn::{classify_roles, edge_roles, is_locally_off, EdgeRoles, EdgeState, GnInstance};
use crate::graph::{Graph, NodeId};
use crate::rules::{self, Configuration, RuleKind};

/// Largest `N` accepted by [`count_all`].
pub const MAX_COUNT_BITS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchOutcome {
    State(EdgeState),
    LocallyOff,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchReport {
    pub moves: Vec<Move>,
    pub touched: BTreeSet<NodeId>,
    pub achieved: SwitchOutcome,
}

struct Recorder<'a> {
    g: &'a Graph,
    moves: Vec<Move>,
}

impl Recorder<'_> {
    fn play(&mut self, c: &mut Configuration, node: NodeId, rule: RuleKind) -> Result<()> {
        let m = Move::new(node, rule);
        engine::step_in_place(self.g, c, m)?;
        self.moves.push(m);
        Ok(())
    }

    fn finish(self, achieved: SwitchOutcome) -> SwitchReport {
        SwitchReport {
            touched: self.moves.iter().map(|m| m.node).collect(),
            moves: self.moves,
            achieved,
        }
    }
}

/// Off → On for the matched edge `(a, b)`, moving only `u`, `v` and `x`:
/// `Update u`, `Update v` (each skipped when its candidates are already
/// right), `MatchFirst v`, `SingleNode x`, `MatchFirst v` to refresh `s_v`
/// after the acceptance, `MatchSecond u`.
///
/// Requires `p_u = p_v = p_x = p_y = null` and no proposer of `x` with an
/// identifier below `v`.
pub fn switch_on_in_place(
    g: &Graph,
    c: &mut Configuration,
    a: NodeId,
    b: NodeId,
) -> Result<SwitchReport> {
    let r = edge_roles(g, a, b)?;
    if !is_locally_off(c, &r) || c.p(r.y).is_some() {
        return Err(Error::PreconditionViolated(format!(
            "edge ({}, {}) is not Off",
            g.ident(a),
            g.ident(b)
        )));
    }
    if let Some(w) = rules::lowest_proposer(g, c, r.x) {
        if g.ident(w) < g.ident(r.v) {
            return Err(Error::PreconditionViolated(format!(
                "node {} already proposes to {} and would be preferred over {}",
                g.ident(w),
                g.ident(r.x),
                g.ident(r.v)
            )));
        }
    }

    let mut rec = Recorder {
        g,
        moves: Vec::with_capacity(6),
    };
    let (su, sv) = (*c.get(r.u), *c.get(r.v));
    if (su.alpha, su.beta) != (Some(r.y), None) {
        rec.play(c, r.u, RuleKind::Update)?;
    }
    if (sv.alpha, sv.beta) != (Some(r.x), None) {
        rec.play(c, r.v, RuleKind::Update)?;
    }
    rec.play(c, r.v, RuleKind::MatchFirst)?;
    rec.play(c, r.x, RuleKind::SingleNode)?;
    rec.play(c, r.v, RuleKind::MatchFirst)?;
    rec.play(c, r.u, RuleKind::MatchSecond)?;

    let state = classify_roles(c, &r);
    if state != EdgeState::On || !c.get(r.v).s {
        return Err(Error::PreconditionViolated(format!(
            "edge ({}, {}) ended in {state:?} instead of On",
            g.ident(a),
            g.ident(b)
        )));
    }
    Ok(rec.finish(SwitchOutcome::State(state)))
}

pub fn switch_on(
    g: &Graph,
    c: &Configuration,
    a: NodeId,
    b: NodeId,
) -> Result<(Configuration, SwitchReport)> {
    let mut next = c.clone();
    let report = switch_on_in_place(g, &mut next, a, b)?;
    Ok((next, report))
}

/// Almost On → locally-off for the matched edge `(a, b)`: `Update u`,
/// `ResetMatch v`, `SingleNode x`. `y` never moves and `v` keeps `α_v = x`.
pub fn switch_off_in_place(
    g: &Graph,
    c: &mut Configuration,
    a: NodeId,
    b: NodeId,
) -> Result<SwitchReport> {
    let r = edge_roles(g, a, b)?;
    let before = classify_roles(c, &r);
    if before != EdgeState::AlmostOn {
        return Err(Error::PreconditionViolated(format!(
            "edge ({}, {}) is {before:?}, not AlmostOn",
            g.ident(a),
            g.ident(b)
        )));
    }
    let mut rec = Recorder {
        g,
        moves: Vec::with_capacity(3),
    };
    rec.play(c, r.u, RuleKind::Update)?;
    rec.play(c, r.v, RuleKind::ResetMatch)?;
    rec.play(c, r.x, RuleKind::SingleNode)?;

    let (su, sv) = (c.get(r.u), c.get(r.v));
    let ok = is_locally_off(c, &r) && !su.s && !sv.s && su.alpha.is_none() && su.beta.is_none();
    if !ok {
        return Err(Error::PreconditionViolated(format!(
            "edge ({}, {}) is not locally off after the switch",
            g.ident(a),
            g.ident(b)
        )));
    }
    Ok(rec.finish(SwitchOutcome::LocallyOff))
}

pub fn switch_off(
    g: &Graph,
    c: &Configuration,
    a: NodeId,
    b: NodeId,
) -> Result<(Configuration, SwitchReport)> {
    let mut next = c.clone();
    let report = switch_off_in_place(g, &mut next, a, b)?;
    Ok((next, report))
}

/// Stages of one `+1` with carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Square edges `(i, j)` switched on; the low bits are Almost On.
    SquaresOn,
    /// Low bit edges switched locally off.
    LowBitsOff,
    /// Bit `i` switched on.
    BitOn,
    /// Square edges switched off again; the configuration encodes ω + 1.
    SquaresOff,
}

fn roles_of(gn: &GnInstance, (a, b): (NodeId, NodeId)) -> Result<EdgeRoles> {
    edge_roles(gn.graph(), a, b)
}

/// Moves an ω-configuration to the (ω+1)-configuration. `observe` sees the
/// configuration after every phase of a carry.
pub fn plus_one_observed(
    gn: &GnInstance,
    c: &mut Configuration,
    mut observe: impl FnMut(Phase, &Configuration),
) -> Result<Vec<Move>> {
    let n = gn.n_bits();
    let g = gn.graph();
    let omega = gn.decode_omega(c).ok_or_else(|| {
        Error::PreconditionViolated("configuration does not encode an integer".into())
    })?;
    let max = (1u64 << n) - 1;
    if omega >= max {
        return Err(Error::AtMaximum(max));
    }
    let i = omega.trailing_ones() as usize;
    let mut moves = Vec::new();
    let mut collect = |report: SwitchReport| moves.extend(report.moves);

    if i == 0 {
        let (a, b) = gn.bit_edge(0);
        collect(switch_on_in_place(g, c, a, b)?);
    } else {
        for j in 0..i {
            let (a, b) = gn.square_edge(i, j);
            collect(switch_on_in_place(g, c, a, b)?);
        }
        observe(Phase::SquaresOn, c);
        for j in 0..i {
            let (a, b) = gn.bit_edge(j);
            collect(switch_off_in_place(g, c, a, b)?);
        }
        observe(Phase::LowBitsOff, c);
        let (a, b) = gn.bit_edge(i);
        collect(switch_on_in_place(g, c, a, b)?);
        observe(Phase::BitOn, c);
        for j in 0..i {
            let (a, b) = gn.square_edge(i, j);
            collect(switch_off_in_place(g, c, a, b)?);
            let bit = roles_of(gn, gn.bit_edge(j))?;
            if classify_roles(c, &bit) != EdgeState::Off {
                return Err(Error::VerificationFailed(omega + 1));
            }
        }
        observe(Phase::SquaresOff, c);
    }

    if moves.len() > 6 * (2 * i + 1) {
        return Err(Error::VerificationFailed(omega + 1));
    }
    if gn.decode_omega(c) != Some(omega + 1) {
        return Err(Error::VerificationFailed(omega + 1));
    }
    Ok(moves)
}

pub fn plus_one_in_place(gn: &GnInstance, c: &mut Configuration) -> Result<Vec<Move>> {
    plus_one_observed(gn, c, |_, _| {})
}

pub fn plus_one(gn: &GnInstance, c: &Configuration) -> Result<(Configuration, Vec<Move>)> {
    let mut next = c.clone();
    let moves = plus_one_in_place(gn, &mut next)?;
    Ok((next, moves))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CountOptions {
    pub record_trace: bool,
    pub fair_finish: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub n_bits: usize,
    pub total_moves: u64,
    /// `verified[ω]` for ω = 0 .. 2^N - 1.
    pub verified: Vec<bool>,
    /// Every adversarial move, in order, when recording was requested.
    pub trace: Option<Vec<Move>>,
    /// Outcome of the round-robin run started from the final configuration.
    pub terminal_stable_after_fair_run: Option<bool>,
    pub fair_moves: u64,
    pub final_config: Configuration,
}

impl CountReport {
    pub fn omega_checks(&self) -> impl Iterator<Item = (u64, bool)> + '_ {
        self.verified
            .iter()
            .enumerate()
            .map(|(w, &ok)| (w as u64, ok))
    }

    pub fn all_verified(&self) -> bool {
        self.verified.len() as u64 == 1u64 << self.n_bits && self.verified.iter().all(|&v| v)
    }

    pub fn node_count(&self) -> usize {
        self.n_bits * self.n_bits + 3 * self.n_bits
    }
}

/// Counts from the 0-configuration to the (2^N - 1)-configuration of `G_N`,
/// checking the decoded value after every increment.
pub fn count_all(n_bits: usize, options: CountOptions) -> Result<CountReport> {
    if !(1..=MAX_COUNT_BITS).contains(&n_bits) {
        return Err(Error::InvalidN(n_bits));
    }
    let gn = GnInstance::build(n_bits)?;
    let mut c = gn.zero_configuration();
    let last = (1u64 << n_bits) - 1;
    let mut verified = Vec::with_capacity(last as usize + 1);
    if gn.decode_omega(&c) != Some(0) {
        return Err(Error::VerificationFailed(0));
    }
    verified.push(true);
    let mut trace = options.record_trace.then(Vec::new);
    let mut total_moves = 0u64;
    for omega in 1..=last {
        let moves = plus_one_in_place(&gn, &mut c)?;
        total_moves += moves.len() as u64;
        if let Some(t) = trace.as_mut() {
            t.extend(moves);
        }
        // plus_one already checked this; recorded for the report
        verified.push(gn.decode_omega(&c) == Some(omega));
    }

    let (terminal_stable_after_fair_run, fair_moves, final_config) = if options.fair_finish {
        let t = engine::run_with(
            gn.graph(),
            &c,
            DaemonStrategy::RoundRobinFair,
            engine::DEFAULT_MAX_MOVES,
            false,
        )?;
        (Some(t.stabilized), t.move_count, t.final_config)
    } else {
        (None, 0, c)
    };

    Ok(CountReport {
        n_bits,
        total_moves,
        verified,
        trace,
        terminal_stable_after_fair_run,
        fair_moves,
        final_config,
    })
}
