//! JSON file formats. Every node is referred to by its identifier.
//!
//! * graph: `{"nodes":[{"id":1}], "edges":[[1,2]], "matching":[[1,2]]}`
//! * configuration: `{"p":{"1":2}, "alpha":{..}, "beta":{..}, "s":{"1":true}}`
//! * trace: `{"initial":<configuration>, "steps":[[{"node":1,"rule":"Update"}]],
//!   "move_count":1, "stabilized":true}`

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::engine::{Move, Trace};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, NodeId};
use crate::rules::{Configuration, RuleKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub id: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub nodes: Vec<NodeEntry>,
    pub edges: Vec<(u64, u64)>,
    #[serde(default)]
    pub matching: Vec<(u64, u64)>,
}

impl GraphFile {
    pub fn from_graph(g: &Graph) -> Self {
        let pairs = |edges: &[Edge]| {
            let mut v: Vec<(u64, u64)> = edges
                .iter()
                .map(|&e| {
                    let (a, b) = g.edge_identifiers(e);
                    (a.0, b.0)
                })
                .collect();
            v.sort_unstable();
            v
        };
        GraphFile {
            nodes: g
                .nodes_by_identifier()
                .into_iter()
                .map(|v| NodeEntry { id: g.ident(v).0 })
                .collect(),
            edges: pairs(g.edges()),
            matching: pairs(&g.matching()),
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        let ids: Vec<u64> = self.nodes.iter().map(|n| n.id).collect();
        Graph::from_identifiers(&ids, &self.edges, &self.matching)
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_graph()
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfigFile {
    #[serde(default)]
    pub p: BTreeMap<u64, Option<u64>>,
    #[serde(default)]
    pub alpha: BTreeMap<u64, Option<u64>>,
    #[serde(default)]
    pub beta: BTreeMap<u64, Option<u64>>,
    #[serde(default)]
    pub s: BTreeMap<u64, bool>,
}

impl ConfigFile {
    /// Lists every node explicitly, nulls included.
    pub fn from_configuration(g: &Graph, c: &Configuration) -> Self {
        let name = |v: Option<NodeId>| v.map(|v| g.ident(v).0);
        let mut file = ConfigFile::default();
        for v in g.nodes() {
            let key = g.ident(v).0;
            let st = c.get(v);
            file.p.insert(key, name(st.p));
            file.alpha.insert(key, name(st.alpha));
            file.beta.insert(key, name(st.beta));
            file.s.insert(key, st.s);
        }
        file
    }

    /// Nodes missing from a map keep null / false.
    pub fn to_configuration(&self, g: &Graph) -> Result<Configuration> {
        let mut c = Configuration::null(g.len());
        let resolve = |x: Option<u64>| x.map(|id| g.node_by_value(id)).transpose();
        for (&k, &val) in &self.p {
            c.get_mut(g.node_by_value(k)?).p = resolve(val)?;
        }
        for (&k, &val) in &self.alpha {
            c.get_mut(g.node_by_value(k)?).alpha = resolve(val)?;
        }
        for (&k, &val) in &self.beta {
            c.get_mut(g.node_by_value(k)?).beta = resolve(val)?;
        }
        for (&k, &val) in &self.s {
            c.get_mut(g.node_by_value(k)?).s = val;
        }
        Ok(c)
    }
}

pub fn parse_configuration(g: &Graph, text: &str) -> Result<Configuration> {
    let file: ConfigFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_configuration(g)
}

/// Null configuration with the given `(from, to)` pointers, by identifier.
pub fn configuration_from_pointers(g: &Graph, pointers: &[(u64, u64)]) -> Result<Configuration> {
    let mut c = Configuration::null(g.len());
    for &(from, to) in pointers {
        c.get_mut(g.node_by_value(from)?).p = Some(g.node_by_value(to)?);
    }
    Ok(c)
}

/// Non-null pointers as sorted `(from, to)` identifier pairs.
pub fn pointer_pairs(g: &Graph, c: &Configuration) -> Vec<(u64, u64)> {
    let mut v: Vec<(u64, u64)> = g
        .nodes()
        .filter_map(|v| c.p(v).map(|w| (g.ident(v).0, g.ident(w).0)))
        .collect();
    v.sort_unstable();
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveEntry {
    pub node: u64,
    pub rule: RuleKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFile {
    pub initial: ConfigFile,
    pub steps: Vec<Vec<MoveEntry>>,
    pub move_count: u64,
    pub stabilized: bool,
}

impl TraceFile {
    pub fn from_trace(g: &Graph, t: &Trace) -> Self {
        TraceFile {
            initial: ConfigFile::from_configuration(g, &t.initial),
            steps: t
                .steps
                .iter()
                .map(|s| s.iter().map(|m| move_entry(g, m)).collect())
                .collect(),
            move_count: t.move_count,
            stabilized: t.stabilized,
        }
    }

    /// Rebuilds a [`Trace`] by replaying the recorded steps.
    pub fn to_trace(&self, g: &Graph) -> Result<Trace> {
        let initial = self.initial.to_configuration(g)?;
        let steps = self
            .steps
            .iter()
            .map(|s| {
                s.iter()
                    .map(|m| Ok(Move::new(g.node_by_value(m.node)?, m.rule)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut t = Trace {
            final_config: initial.clone(),
            initial,
            steps,
            move_count: self.move_count,
            stabilized: self.stabilized,
        };
        t.final_config = t.replay(g)?;
        Ok(t)
    }
}

pub fn move_entry(g: &Graph, m: &Move) -> MoveEntry {
    MoveEntry {
        node: g.ident(m.node).0,
        rule: m.rule,
    }
}
