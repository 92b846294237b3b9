//! Undirected simple graphs and the structural primitives built on them.
//!
//! Vertices are dense `usize` indices starting at zero. Adjacency lists are
//! kept sorted, which makes `has_edge` a binary search and keeps every
//! traversal order reproducible.

mod blocks;
mod degeneracy;
pub mod io;
mod packing;
mod partition;
mod search;

pub use blocks::{block_decomposition, is_two_connected, BlockDecomposition};
pub use degeneracy::{degeneracy, DegeneracyCertificate};
pub use packing::{greedy_packing, Packing};
pub use partition::{heavy_light_partition, s_components, semi_bipartite_clean, HeavyLight, SComponent};
pub use search::{
    find_appearances, search_appearances, visit_mappings, Appearance, SearchOptions,
    MAX_PATTERN_VERTICES,
};

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph is not connected")]
    DisconnectedInput,
    #[error("pattern has {0} vertices, above the search cap of {MAX_PATTERN_VERTICES}")]
    PatternTooLarge(usize),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        GraphRepr {
            vertex_count: self.vertex_count(),
            edges: self.edges().collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let r = GraphRepr::deserialize(de)?;
        Graph::from_edges(r.vertex_count, &r.edges).map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.vertex_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Graph on `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph, rejecting self-loops, duplicates (in either
    /// orientation) and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new(n);
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.vertex_count() || v >= self.vertex_count() {
            return false;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.vertex_count()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() <= 1 || self.components().len() == 1
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_avoiding(&vec![false; self.vertex_count()])
    }

    /// Components of the graph with the `removed` vertices deleted.
    pub(crate) fn components_avoiding(&self, removed: &[bool]) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = removed.to_vec();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Subgraph induced by `vertices`, relabeled `0..vertices.len()` in the
    /// given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut b = GraphBuilder::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adjacency[v] {
                let j = local[w];
                if j != usize::MAX && i < j {
                    b.add_edge_unchecked(i, j);
                }
            }
        }
        b.build()
    }

    /// Copy of the graph without the listed edges. Missing edges are ignored.
    pub fn without_edges<I>(&self, edges: I) -> Graph
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = self.clone();
        for (u, v) in edges {
            g.remove_edge(u, v);
        }
        g
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.vertex_count() || v >= self.vertex_count() {
            return false;
        }
        match self.adjacency[u].binary_search(&v) {
            Ok(i) => {
                self.adjacency[u].remove(i);
                let j = self.adjacency[v]
                    .binary_search(&u)
                    .expect("adjacency is symmetric");
                self.adjacency[v].remove(j);
                self.edge_count -= 1;
                true
            }
            Err(_) => false,
        }
    }

    /// Disjoint union; vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.vertex_count();
        let mut b = GraphBuilder::new(off + other.vertex_count());
        for (u, v) in self.edges() {
            b.add_edge_unchecked(u, v);
        }
        for (u, v) in other.edges() {
            b.add_edge_unchecked(u + off, v + off);
        }
        b.build()
    }

    /// Checks the simple/symmetric/edge-count invariants.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.vertex_count();
        let mut half = 0usize;
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for w in nbrs.windows(2) {
                if w[0] >= w[1] {
                    return Err(GraphError::DuplicateEdge(u, w[1]));
                }
            }
            for &v in nbrs {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
                if v == u {
                    return Err(GraphError::SelfLoop(u));
                }
                if self.adjacency[v].binary_search(&u).is_err() {
                    return Err(GraphError::DuplicateEdge(u, v));
                }
            }
            half += nbrs.len();
        }
        debug_assert_eq!(half % 2, 0);
        if half / 2 != self.edge_count {
            return Err(GraphError::DuplicateEdge(0, 0));
        }
        Ok(())
    }

    // Named shapes used throughout tests, generators and the CLI.

    pub fn path(k: usize) -> Graph {
        let edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        Graph::from_edges(k, &edges).expect("path is simple")
    }

    pub fn cycle(k: usize) -> Graph {
        assert!(k >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        Graph::from_edges(k, &edges).expect("cycle is simple")
    }

    pub fn complete(k: usize) -> Graph {
        let mut b = GraphBuilder::new(k);
        for u in 0..k {
            for v in u + 1..k {
                b.add_edge_unchecked(u, v);
            }
        }
        b.build()
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges).expect("star is simple")
    }

    /// Complete bipartite graph; left side is `0..a`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut g = GraphBuilder::new(a + b);
        for u in 0..a {
            for v in 0..b {
                g.add_edge_unchecked(u, a + v);
            }
        }
        g.build()
    }
}

/// Incremental builder. Edges may be added in any orientation.
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adjacency.push(Vec::new());
        self.adjacency.len() - 1
    }

    /// Adds `(u, v)`; duplicates are detected on `build` only for the
    /// unchecked variant, here they are rejected immediately.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.adjacency.len();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let (a, b) = if self.adjacency[u].len() <= self.adjacency[v].len() { (u, v) } else { (v, u) };
        if self.adjacency[a].contains(&b) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.add_edge_unchecked(u, v);
        Ok(())
    }

    /// Caller guarantees a fresh, in-range, non-loop edge.
    pub fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        debug_assert_ne!(u, v);
        self.adjacency[u].push(v);
        self.adjacency[v].push(u);
        self.edge_count += 1;
    }

    pub fn build(mut self) -> Graph {
        for nbrs in &mut self.adjacency {
            nbrs.sort_unstable();
        }
        let g = Graph {
            adjacency: self.adjacency,
            edge_count: self.edge_count,
        };
        debug_assert!(g.validate().is_ok(), "builder produced an invalid graph");
        g
    }
}
