//! Seeded random fixtures: Erdős–Rényi graphs with a greedy underlying
//! matching, and arbitrary initial configurations.

use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;

use crate::graph::{greedy_maximal_matching, Graph, NodeId};
use crate::rules::{Configuration, LocalState};

/// `n` nodes with distinct random identifiers in `1..=10n`, each pair joined
/// with probability `edge_probability`, `M` from [`greedy_maximal_matching`].
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, edge_probability: f64) -> Graph {
    let mut pool: Vec<u64> = (1..=(10 * n.max(1)) as u64).collect();
    pool.shuffle(rng);
    let idents: Vec<u64> = pool[..n].to_vec();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.gen_bool(edge_probability) {
                edges.push((idents[a], idents[b]));
            }
        }
    }
    let matching = greedy_maximal_matching(&idents, &edges);
    Graph::from_identifiers(&idents, &edges, &matching).expect("generated graph is valid")
}

fn abnormal_choice<R: Rng>(rng: &mut R, g: &Graph, v: NodeId) -> Option<NodeId> {
    // N(v) ∪ {null} ∪ {one node outside N(v)}
    let outsider = g.nodes().filter(|u| !g.is_neighbor(v, *u)).choose(rng);
    let options = g.neighbors(v).len() + 1 + usize::from(outsider.is_some());
    let k = rng.gen_range(0..options);
    if k < g.neighbors(v).len() {
        Some(g.neighbors(v)[k])
    } else if k == g.neighbors(v).len() {
        None
    } else {
        outsider
    }
}

/// Arbitrary local states: each pointer uniform over `N(v) ∪ {null}` plus
/// one random non-neighbor, `s` a fair coin.
pub fn random_configuration<R: Rng>(rng: &mut R, g: &Graph) -> Configuration {
    let states = g
        .nodes()
        .map(|v| LocalState {
            p: abnormal_choice(rng, g, v),
            alpha: abnormal_choice(rng, g, v),
            beta: abnormal_choice(rng, g, v),
            s: rng.gen_bool(0.5),
        })
        .collect();
    Configuration::from_states(states)
}
