//! Deciding one-sided testability of forbidden-subgraph freeness.
//!
//! A single connected pattern is testable exactly when none of its 2-blocks
//! has an obstacle: a minimal separating set of vertices that is also
//! independent. A family can still be testable when a member has an
//! obstacle, provided some other member is a sentinel for it, i.e. admits a
//! cactus representation relative to that obstacle.

mod cactus;
mod family;

pub use cactus::{cactus_reps, is_sentinel, CactusRep, Petal};
pub(crate) use cactus::attachment_order;
pub use family::{family_testable, render_report, SentinelEntry, TestabilityVerdict, Witness};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{block_decomposition, is_two_connected, Graph, GraphError, MAX_PATTERN_VERTICES};

pub const MAX_FAMILY_SIZE: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterizeError {
    #[error("pattern is not 2-connected")]
    NotTwoConnected,
    #[error("pattern has {0} vertices, above the cap of {MAX_PATTERN_VERTICES}")]
    PatternTooLarge(usize),
    #[error("pattern is not connected")]
    DisconnectedPattern,
    #[error("S' must be a subset of the obstacle of size |S| - 2")]
    BadSPrime,
    #[error("obstacle does not belong to the given base pattern")]
    ObstacleMismatch,
    #[error("family has {0} members, above the cap of {MAX_FAMILY_SIZE}")]
    FamilyTooLarge(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A minimal separating independent set of a 2-connected pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Obstacle {
    pub pattern: Graph,
    /// Sorted vertex indices of the separator.
    pub s_set: Vec<usize>,
}

impl Obstacle {
    pub fn r(&self) -> usize {
        self.s_set.len()
    }

    /// Checks independence, separation and minimality from scratch.
    pub fn validate(&self) -> Result<(), String> {
        let g = &self.pattern;
        let n = g.vertex_count();
        if self.s_set.iter().any(|&v| v >= n) {
            return Err("separator vertex out of range".into());
        }
        if self.s_set.windows(2).any(|w| w[0] >= w[1]) {
            return Err("separator must be sorted and duplicate-free".into());
        }
        for (i, &u) in self.s_set.iter().enumerate() {
            for &v in &self.s_set[i + 1..] {
                if g.has_edge(u, v) {
                    return Err(format!("separator is not independent: {u}-{v}"));
                }
            }
        }
        if count_components_without(g, &self.s_set) < 2 {
            return Err("removing the separator leaves the pattern connected".into());
        }
        let r = self.s_set.len();
        for mask in 0..(1u32 << r) - 1 {
            let sub: Vec<usize> = (0..r).filter(|&i| mask >> i & 1 == 1).map(|i| self.s_set[i]).collect();
            if count_components_without(g, &sub) >= 2 {
                return Err(format!("not minimal: {sub:?} already separates"));
            }
        }
        Ok(())
    }
}

pub(crate) fn count_components_without(g: &Graph, removed: &[usize]) -> usize {
    let mut mask = vec![false; g.vertex_count()];
    for &v in removed {
        mask[v] = true;
    }
    g.components_avoiding(&mask).len()
}

/// All obstacles of a 2-connected pattern, by size and then
/// lexicographically.
pub fn obstacles(h: &Graph) -> Result<Vec<Obstacle>, CharacterizeError> {
    let k = h.vertex_count();
    if k > MAX_PATTERN_VERTICES {
        return Err(CharacterizeError::PatternTooLarge(k));
    }
    if !is_two_connected(h) {
        return Err(CharacterizeError::NotTwoConnected);
    }
    let full = 1usize << k;
    let members = |mask: usize| -> Vec<usize> { (0..k).filter(|&i| mask >> i & 1 == 1).collect() };
    let separates: Vec<bool> = (0..full)
        .map(|mask| count_components_without(h, &members(mask)) >= 2)
        .collect();
    // below[mask]: some proper subset of mask separates.
    let mut below = vec![false; full];
    let mut by_size: Vec<usize> = (0..full).collect();
    by_size.sort_by_key(|&m| m.count_ones());
    for &mask in &by_size {
        below[mask] = (0..k)
            .filter(|&i| mask >> i & 1 == 1)
            .any(|i| separates[mask ^ (1 << i)] || below[mask ^ (1 << i)]);
    }
    let adj_mask: Vec<usize> = (0..k)
        .map(|v| h.neighbors(v).iter().fold(0, |m, &w| m | 1 << w))
        .collect();
    let independent = |mask: usize| (0..k).all(|i| mask >> i & 1 == 0 || adj_mask[i] & mask == 0);
    let mut found: Vec<Vec<usize>> = (0..full)
        .filter(|&m| separates[m] && !below[m] && independent(m))
        .map(members)
        .collect();
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(found
        .into_iter()
        .map(|s_set| Obstacle {
            pattern: h.clone(),
            s_set,
        })
        .collect())
}

/// Verdict for a single connected pattern: testable iff no 2-block has an
/// obstacle. One witness is reported per offending block.
pub fn is_testable(h: &Graph) -> Result<TestabilityVerdict, CharacterizeError> {
    let mut witnesses = Vec::new();
    for (block, ob) in block_obstacles(h)? {
        if let Some(first) = ob.into_iter().next() {
            witnesses.push(Witness::new(0, &block, first, None));
        }
    }
    Ok(TestabilityVerdict {
        testable: witnesses.is_empty(),
        witnesses,
        sentinel_table: Vec::new(),
    })
}

/// For each 2-block (as a sorted vertex list of `h`), its obstacles computed
/// on the induced block graph.
pub(crate) fn block_obstacles(h: &Graph) -> Result<Vec<(Vec<usize>, Vec<Obstacle>)>, CharacterizeError> {
    let k = h.vertex_count();
    if k > MAX_PATTERN_VERTICES {
        return Err(CharacterizeError::PatternTooLarge(k));
    }
    if !h.is_connected() {
        return Err(CharacterizeError::DisconnectedPattern);
    }
    let blocks = block_decomposition(h)?.blocks;
    blocks
        .into_iter()
        .map(|b| {
            let ob = obstacles(&h.induced_subgraph(&b))?;
            Ok((b, ob))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c4_obstacles() {
        let ob = obstacles(&Graph::cycle(4)).unwrap();
        let sets: Vec<_> = ob.iter().map(|o| o.s_set.clone()).collect();
        assert_eq!(sets, vec![vec![0, 2], vec![1, 3]]);
        for o in &ob {
            o.validate().unwrap();
        }
    }

    #[test]
    fn k4_and_c5() {
        assert!(obstacles(&Graph::complete(4)).unwrap().is_empty());
        let c5 = obstacles(&Graph::cycle(5)).unwrap();
        assert_eq!(c5.len(), 5);
        assert!(c5.iter().all(|o| o.r() == 2));
        assert_eq!(obstacles(&Graph::path(3)), Err(CharacterizeError::NotTwoConnected));
    }

    #[test]
    fn k23_obstacle_is_the_large_side_or_the_small_side() {
        let ob = obstacles(&Graph::complete_bipartite(2, 3)).unwrap();
        let sets: Vec<_> = ob.iter().map(|o| o.s_set.clone()).collect();
        assert_eq!(sets, vec![vec![0, 1], vec![2, 3, 4]]);
    }

    #[test]
    fn testability_of_small_patterns() {
        let v = is_testable(&Graph::cycle(4)).unwrap();
        assert!(!v.testable);
        assert_eq!(v.witnesses[0].s_set, vec![0, 2]);
        assert!(is_testable(&Graph::complete(3)).unwrap().testable);
        assert!(is_testable(&Graph::star(5)).unwrap().testable);
        assert!(is_testable(&Graph::path(6)).unwrap().testable);
        assert_eq!(
            is_testable(&Graph::empty(2)).unwrap_err(),
            CharacterizeError::DisconnectedPattern
        );
    }

    #[test]
    fn validate_catches_non_minimal() {
        // {0,2,4} separates C6 but so does its subset {0,2}.
        let bad = Obstacle {
            pattern: Graph::cycle(6),
            s_set: vec![0, 2, 4],
        };
        assert!(bad.validate().is_err());
        let good = Obstacle {
            pattern: Graph::cycle(6),
            s_set: vec![0, 3],
        };
        good.validate().unwrap();
    }
}
