//! Pinned move counts of the full counting run, one per `N`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

const TOTAL_MOVES: &str = include_str!("../data/total_moves.json");

/// Reads `{"N": total_moves, ...}`.
pub fn parse(text: &str) -> Result<BTreeMap<usize, u64>> {
    let raw: BTreeMap<String, u64> =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    raw.into_iter()
        .map(|(k, v)| {
            k.parse()
                .map(|n| (n, v))
                .map_err(|_| Error::Parse(format!("bad bit count {k:?}")))
        })
        .collect()
}

/// Built-in constants for [`crate::adversary::count_all`].
pub fn total_moves() -> BTreeMap<usize, u64> {
    parse(TOTAL_MOVES).expect("built-in total_moves.json")
}

pub fn pinned_total_moves(n_bits: usize) -> Option<u64> {
    total_moves().get(&n_bits).copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::count_all;

    #[test]
    fn pins_match_the_counting_run() {
        let pins = total_moves();
        assert_eq!(
            pins.keys().copied().collect::<Vec<_>>(),
            (1..=16).collect::<Vec<_>>()
        );
        for n in 1..=10 {
            assert_eq!(
                count_all(n, Default::default()).unwrap().total_moves,
                pins[&n]
            );
        }
    }

    #[test]
    fn malformed_pins() {
        assert!(matches!(parse("{\"x\": 1}").unwrap_err(), Error::Parse(_)));
        assert!(matches!(parse("[]").unwrap_err(), Error::Parse(_)));
    }
}
