use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::{OracleError, OracleHandle};
use crate::graph::Graph;

/// What one bounded BFS saw. Every edge was returned by a query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExploredSubgraph {
    pub root: usize,
    /// Vertices in discovery order; `vertices[0]` is the root.
    pub vertices: Vec<usize>,
    /// Edges as `(min, max)` pairs.
    pub edges: BTreeSet<(usize, usize)>,
    pub layer: BTreeMap<usize, usize>,
    /// True for vertices that received their full `s` queries.
    pub saturated: BTreeMap<usize, bool>,
    /// Distinct neighbors returned at each queried vertex.
    pub distinct_neighbors: BTreeMap<usize, usize>,
    pub heavy_threshold: usize,
    /// The handle's budget ran out before the BFS finished.
    pub truncated: bool,
}

impl ExploredSubgraph {
    /// Queried vertices whose samples revealed more than `h` distinct
    /// neighbors, in discovery order.
    pub fn heavy_looking(&self) -> Vec<usize> {
        self.vertices
            .iter()
            .copied()
            .filter(|v| self.distinct_neighbors.get(v).is_some_and(|&d| d > self.heavy_threshold))
            .collect()
    }

    /// Checks the edge-subset and BFS-layer invariants against `host`.
    pub fn validate(&self, host: &Graph) -> Result<(), String> {
        for &(u, v) in &self.edges {
            if !host.has_edge(u, v) {
                return Err(format!("edge {u}-{v} is not a host edge"));
            }
        }
        if self.layer.get(&self.root) != Some(&0) {
            return Err("root must be at layer 0".into());
        }
        for &v in &self.vertices {
            let d = *self.layer.get(&v).ok_or("vertex without layer")?;
            if v == self.root {
                continue;
            }
            let has_parent = self.layer.iter().any(|(&u, &du)| {
                du + 1 == d && self.edges.contains(&(u.min(v), u.max(v)))
            });
            if !has_parent {
                return Err(format!("vertex {v} at layer {d} has no parent one layer up"));
            }
        }
        Ok(())
    }

    /// Whether every host edge with an endpoint at distance `< t` from the
    /// root was found, i.e. the radius-`t` ball is fully recovered.
    pub fn covers_ball(&self, host: &Graph, t: usize) -> bool {
        let mut dist = vec![usize::MAX; host.vertex_count()];
        dist[self.root] = 0;
        let mut queue = VecDeque::from([self.root]);
        while let Some(u) = queue.pop_front() {
            if dist[u] >= t {
                continue;
            }
            for &w in host.neighbors(u) {
                if !self.edges.contains(&(u.min(w), u.max(w))) {
                    return false;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        true
    }
}

/// Depth-`t` exploration from `v` that spends exactly `s` neighbor queries
/// at every frontier vertex. Each layer keeps only vertices not seen in an
/// earlier layer. `h` is recorded for later heavy/light judgements and does
/// not change what is queried.
pub fn bounded_bfs(
    handle: &mut OracleHandle<'_>,
    v: usize,
    t: usize,
    s: usize,
    h: usize,
) -> Result<ExploredSubgraph, OracleError> {
    let n = handle.vertex_count();
    if v >= n {
        return Err(OracleError::VertexOutOfRange { vertex: v, n });
    }
    let mut out = ExploredSubgraph {
        root: v,
        vertices: vec![v],
        edges: BTreeSet::new(),
        layer: BTreeMap::from([(v, 0)]),
        saturated: BTreeMap::from([(v, false)]),
        distinct_neighbors: BTreeMap::new(),
        heavy_threshold: h,
        truncated: false,
    };
    let mut frontier = vec![v];
    let mut distinct: Vec<usize> = Vec::with_capacity(s);
    'layers: for depth in 1..=t {
        let mut next = Vec::new();
        for &u in &frontier {
            distinct.clear();
            for _ in 0..s {
                match handle.query(u) {
                    Ok(Some(w)) => {
                        if distinct.contains(&w) {
                            continue;
                        }
                        distinct.push(w);
                        out.edges.insert((u.min(w), u.max(w)));
                        if let std::collections::btree_map::Entry::Vacant(e) = out.layer.entry(w) {
                            e.insert(depth);
                            out.saturated.insert(w, false);
                            out.vertices.push(w);
                            next.push(w);
                        }
                    }
                    Ok(None) => {}
                    Err(OracleError::BudgetExhausted) => {
                        out.distinct_neighbors.insert(u, distinct.len());
                        out.truncated = true;
                        break 'layers;
                    }
                    Err(e) => return Err(e),
                }
            }
            out.saturated.insert(u, true);
            out.distinct_neighbors.insert(u, distinct.len());
        }
        frontier = next;
    }
    Ok(out)
}
