//! Simulator for the self-stabilizing matching algorithm M+, which turns a
//! stable maximal matching into a 2/3-approximation of a maximum matching
//! by exploiting augmenting paths of length three.
//!
//! * [`graph`]: topology, identifiers, underlying matching `M`.
//! * [`rules`]: local states, guards and commands.
//! * [`engine`]: daemons, steps, traces.
//! * [`gn`]: the counter gadget family `G_N` and its bit decoding.
//! * [`adversary`]: the central-daemon schedule counting from 0 to `2^N - 1`.
//! * [`oracle`]: brute-force checks of stable configurations.

pub mod adversary;
pub mod dot;
pub mod engine;
pub mod error;
pub mod figure2;
pub mod gn;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod pins;
pub mod random;
pub mod rng;
pub mod rules;

pub use error::{Error, Result};
pub use graph::{Graph, Identifier, NodeId};
pub use rules::{Configuration, LocalState, RuleKind};
