//! Random-neighbor oracle access and the testers that run on it.
//!
//! Testers never see the host graph. They hold an [`OracleHandle`] which
//! answers "give me a uniformly random neighbor of v" and counts every such
//! query. A handle may carry a total query budget; once spent, further
//! queries fail with [`OracleError::BudgetExhausted`] and testers decide on
//! whatever they have explored so far.

mod bfs;
mod cactus;
mod hub;
mod tester;

pub use bfs::{bounded_bfs, ExploredSubgraph};
pub use cactus::{cactus_budget, cactus_embedding_tester};
pub use hub::{hub_assembly_tester, hub_budget};
pub use tester::{canonical_tester, default_samples, ExploredUnion, TesterConfig, Verdict};

use thiserror::Error;

use crate::graph::Graph;
use crate::rng::{seeded_rng, uniform_index, Rng};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("query budget exhausted")]
    BudgetExhausted,
    #[error("invalid tester configuration: {0}")]
    InvalidConfig(String),
}

pub struct OracleHandle<'g> {
    host: &'g Graph,
    rng: Rng,
    queries: u64,
    budget: Option<u64>,
}

impl<'g> OracleHandle<'g> {
    pub fn new(host: &'g Graph, seed: u64) -> Self {
        OracleHandle {
            host,
            rng: seeded_rng(seed),
            queries: 0,
            budget: None,
        }
    }

    /// Handle that refuses queries beyond `budget` in total.
    pub fn with_budget(host: &'g Graph, seed: u64, budget: u64) -> Self {
        OracleHandle {
            budget: Some(budget),
            ..OracleHandle::new(host, seed)
        }
    }

    /// Number of vertices; testers sample start vertices from `0..n`.
    pub fn vertex_count(&self) -> usize {
        self.host.vertex_count()
    }

    pub fn query_count(&self) -> u64 {
        self.queries
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    pub fn exhausted(&self) -> bool {
        self.budget.is_some_and(|b| self.queries >= b)
    }

    /// A uniformly random neighbor of `v`, or `None` when `v` is isolated.
    /// Either way the query is counted.
    pub fn query(&mut self, v: usize) -> Result<Option<usize>, OracleError> {
        let n = self.host.vertex_count();
        if v >= n {
            return Err(OracleError::VertexOutOfRange { vertex: v, n });
        }
        if self.exhausted() {
            return Err(OracleError::BudgetExhausted);
        }
        self.queries += 1;
        let nbrs = self.host.neighbors(v);
        if nbrs.is_empty() {
            return Ok(None);
        }
        Ok(Some(nbrs[uniform_index(&mut self.rng, nbrs.len())]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_every_query() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let mut h = OracleHandle::new(&g, 1);
        assert_eq!(h.query(0).unwrap(), Some(1));
        assert_eq!(h.query(2).unwrap(), None);
        assert_eq!(h.query_count(), 2);
        assert!(matches!(h.query(3), Err(OracleError::VertexOutOfRange { .. })));
        assert_eq!(h.query_count(), 2);
    }

    #[test]
    fn budget_stops_queries() {
        let g = Graph::star(4);
        let mut h = OracleHandle::with_budget(&g, 1, 2);
        h.query(0).unwrap();
        h.query(0).unwrap();
        assert_eq!(h.query(0), Err(OracleError::BudgetExhausted));
        assert_eq!(h.query_count(), 2);
    }

    #[test]
    fn same_seed_same_answers() {
        let g = Graph::star(50);
        let mut a = OracleHandle::new(&g, 9);
        let mut b = OracleHandle::new(&g, 9);
        for _ in 0..100 {
            assert_eq!(a.query(0).unwrap(), b.query(0).unwrap());
        }
    }
}
