use rand::seq::SliceRandom;
use serde::Serialize;

use super::{search_appearances, Appearance, Graph, GraphError, SearchOptions};
use crate::rng::seeded_rng;

/// Pairwise edge-disjoint appearances of one pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Packing {
    pub pattern: Graph,
    pub members: Vec<Appearance>,
}

impl Packing {
    pub fn new(pattern: Graph, members: Vec<Appearance>) -> Self {
        Packing { pattern, members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Every member is a valid appearance in `host` and no host edge is used twice.
    pub fn is_valid(&self, host: &Graph) -> bool {
        let mut used = std::collections::HashSet::new();
        self.members.iter().all(|m| {
            m.is_valid(&self.pattern, host) && m.host_edges(&self.pattern).into_iter().all(|e| used.insert(e))
        })
    }

    /// `host` with every member edge deleted.
    pub fn residual(&self, host: &Graph) -> Graph {
        host.without_edges(self.members.iter().flat_map(|m| m.host_edges(&self.pattern)))
    }
}

/// A maximal packing: roots are visited in a seed-shuffled order and each
/// root is exhausted (appearances through it taken one at a time from the
/// residual host) before moving on. Since the residual only shrinks, no
/// appearance survives at the end. Patterns without edges give an empty
/// packing.
pub fn greedy_packing(pattern: &Graph, host: &Graph, seed: u64) -> Result<Packing, GraphError> {
    let k = pattern.vertex_count();
    if k > super::MAX_PATTERN_VERTICES {
        return Err(GraphError::PatternTooLarge(k));
    }
    let mut members = Vec::new();
    if pattern.edge_count() == 0 {
        return Ok(Packing::new(pattern.clone(), members));
    }
    let mut residual = host.clone();
    let mut roots: Vec<usize> = host.vertices().collect();
    roots.shuffle(&mut seeded_rng(seed));
    let min_deg = (0..k).map(|a| pattern.degree(a)).filter(|&d| d > 0).min().unwrap_or(1);
    let anchors: Vec<usize> = (0..k).filter(|&a| pattern.degree(a) > 0).collect();
    for x in roots {
        'root: loop {
            if residual.degree(x) < min_deg {
                break;
            }
            for &a in &anchors {
                if residual.degree(x) < pattern.degree(a) {
                    continue;
                }
                let fixed = [(a, x)];
                let opts = SearchOptions {
                    max_count: 1,
                    fixed: &fixed,
                    ..Default::default()
                };
                if let Some(app) = search_appearances(pattern, &residual, &opts)?.pop() {
                    for (u, v) in app.host_edges(pattern) {
                        residual.remove_edge(u, v);
                    }
                    members.push(app);
                    continue 'root;
                }
            }
            break;
        }
    }
    Ok(Packing::new(pattern.clone(), members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::find_appearances;

    #[test]
    fn disjoint_triangles() {
        let mut g = Graph::empty(0);
        for _ in 0..5 {
            g = g.disjoint_union(&Graph::complete(3));
        }
        let p = greedy_packing(&Graph::complete(3), &g, 7).unwrap();
        assert_eq!(p.len(), 5);
        assert!(p.is_valid(&g));
    }

    #[test]
    fn bowtie_packs_two() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert_eq!(greedy_packing(&Graph::complete(3), &g, 1).unwrap().len(), 2);
    }

    #[test]
    fn maximal_and_reproducible() {
        let g = Graph::complete(7);
        let c4 = Graph::cycle(4);
        let a = greedy_packing(&c4, &g, 3).unwrap();
        let b = greedy_packing(&c4, &g, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.is_valid(&g));
        assert!(find_appearances(&c4, &a.residual(&g), 1).unwrap().is_empty());
    }
}
