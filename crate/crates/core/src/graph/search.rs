//! Backtracking enumeration of (non-induced) pattern appearances.

use std::collections::HashSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

pub const MAX_PATTERN_VERTICES: usize = 12;

/// An injective, edge-preserving map from pattern vertices to host vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Appearance {
    pub mapping: Vec<usize>,
}

impl Appearance {
    pub fn new(mapping: Vec<usize>) -> Self {
        Appearance { mapping }
    }

    pub fn pattern_size(&self) -> usize {
        self.mapping.len()
    }

    /// Host edges covered, normalized `(min, max)` and sorted.
    pub fn host_edges(&self, pattern: &Graph) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = pattern
            .edges()
            .map(|(a, b)| {
                let (x, y) = (self.mapping[a], self.mapping[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        e.sort_unstable();
        e
    }

    pub fn host_vertices(&self) -> Vec<usize> {
        let mut v = self.mapping.clone();
        v.sort_unstable();
        v
    }

    /// Injective, in range, and every pattern edge lands on a host edge.
    pub fn is_valid(&self, pattern: &Graph, host: &Graph) -> bool {
        if self.mapping.len() != pattern.vertex_count() {
            return false;
        }
        let vs = self.host_vertices();
        if vs.windows(2).any(|w| w[0] == w[1]) || vs.last().is_some_and(|&v| v >= host.vertex_count()) {
            return false;
        }
        pattern
            .edges()
            .all(|(a, b)| host.has_edge(self.mapping[a], self.mapping[b]))
    }

    /// Same appearance after relabeling host vertices through `f`.
    pub fn relabeled(&self, f: impl Fn(usize) -> usize) -> Appearance {
        Appearance {
            mapping: self.mapping.iter().map(|&v| f(v)).collect(),
        }
    }
}

#[derive(Clone, Copy, Default)]
pub struct SearchOptions<'a> {
    /// Stop after this many distinct appearances; `usize::MAX` for all.
    pub max_count: usize,
    /// Pattern vertex → host vertex assignments that must hold.
    pub fixed: &'a [(usize, usize)],
    /// Host vertices no unfixed pattern vertex may map to.
    pub forbidden: &'a [usize],
    /// Extra per-vertex admissibility test `(pattern vertex, host vertex)`.
    pub allowed: Option<&'a dyn Fn(usize, usize) -> bool>,
    /// Report every injective map instead of one per host subgraph.
    pub all_mappings: bool,
}

impl<'a> SearchOptions<'a> {
    pub fn up_to(max_count: usize) -> Self {
        SearchOptions {
            max_count,
            ..Default::default()
        }
    }
}

/// Distinct appearances of `pattern` in `host`, at most `max_count`.
/// Appearances are distinct when they differ as subgraphs (vertex and edge
/// sets), so automorphic relabelings are reported once.
pub fn find_appearances(
    pattern: &Graph,
    host: &Graph,
    max_count: usize,
) -> Result<Vec<Appearance>, GraphError> {
    search_appearances(pattern, host, &SearchOptions::up_to(max_count))
}

pub fn search_appearances(
    pattern: &Graph,
    host: &Graph,
    opts: &SearchOptions<'_>,
) -> Result<Vec<Appearance>, GraphError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    if opts.max_count == 0 {
        check_inputs(pattern, host, opts)?;
        return Ok(out);
    }
    let _ = visit_mappings(pattern, host, opts, |mapping| {
        let app = Appearance::new(mapping.to_vec());
        let fresh = opts.all_mappings || {
            let mut key = app.host_vertices();
            key.push(usize::MAX);
            for (u, v) in app.host_edges(pattern) {
                key.push(u);
                key.push(v);
            }
            seen.insert(key)
        };
        if fresh {
            out.push(app);
        }
        if out.len() >= opts.max_count {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(out)
}

/// Calls `visit` with each pattern→host map found by the backtracking
/// search until it breaks. Without `all_mappings`, interchangeable pattern
/// vertices are symmetry-broken, but the same subgraph can still be reached
/// more than once; `search_appearances` removes those repeats.
pub fn visit_mappings<F>(
    pattern: &Graph,
    host: &Graph,
    opts: &SearchOptions<'_>,
    mut visit: F,
) -> Result<ControlFlow<()>, GraphError>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    check_inputs(pattern, host, opts)?;
    if pattern.vertex_count() > host.vertex_count() || pattern.edge_count() > host.edge_count() {
        return Ok(ControlFlow::Continue(()));
    }
    let mut s = Searcher::new(pattern, host, opts, &mut visit);
    if !s.consistent_fixed() {
        return Ok(ControlFlow::Continue(()));
    }
    s.extend(0);
    Ok(if s.stopped { ControlFlow::Break(()) } else { ControlFlow::Continue(()) })
}

fn check_inputs(pattern: &Graph, host: &Graph, opts: &SearchOptions<'_>) -> Result<(), GraphError> {
    let k = pattern.vertex_count();
    if k > MAX_PATTERN_VERTICES {
        return Err(GraphError::PatternTooLarge(k));
    }
    for &(a, x) in opts.fixed {
        if a >= k {
            return Err(GraphError::VertexOutOfRange { vertex: a, n: k });
        }
        if x >= host.vertex_count() {
            return Err(GraphError::VertexOutOfRange {
                vertex: x,
                n: host.vertex_count(),
            });
        }
    }
    Ok(())
}

struct Searcher<'a> {
    pattern: &'a Graph,
    host: &'a Graph,
    order: Vec<usize>,
    /// Pattern neighbors of `order[i]` that come earlier in the order.
    back: Vec<Vec<usize>>,
    /// Earlier member of the same twin class; its image must be smaller.
    twin_prev: Vec<Option<usize>>,
    fixed: Vec<Option<usize>>,
    forbidden: &'a [usize],
    allowed: Option<&'a dyn Fn(usize, usize) -> bool>,
    mapping: Vec<usize>,
    used: Vec<usize>,
    visit: &'a mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    stopped: bool,
}

impl<'a> Searcher<'a> {
    fn new(
        pattern: &'a Graph,
        host: &'a Graph,
        opts: &SearchOptions<'a>,
        visit: &'a mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Self {
        let k = pattern.vertex_count();
        let mut fixed = vec![None; k];
        for &(a, x) in opts.fixed {
            fixed[a] = Some(x);
        }
        let order = search_order(pattern, &fixed);
        let mut pos = vec![0; k];
        for (i, &a) in order.iter().enumerate() {
            pos[a] = i;
        }
        let back = order
            .iter()
            .map(|&a| {
                pattern
                    .neighbors(a)
                    .iter()
                    .copied()
                    .filter(|&b| pos[b] < pos[a])
                    .collect()
            })
            .collect();
        let twin_prev = if opts.all_mappings {
            vec![None; k]
        } else {
            twin_constraints(pattern, &fixed, &pos)
        };
        Searcher {
            pattern,
            host,
            order,
            back,
            twin_prev,
            fixed,
            forbidden: opts.forbidden,
            allowed: opts.allowed,
            mapping: vec![usize::MAX; k],
            used: Vec::with_capacity(k),
            visit,
            stopped: false,
        }
    }

    fn consistent_fixed(&self) -> bool {
        let mut images: Vec<usize> = self.fixed.iter().flatten().copied().collect();
        images.sort_unstable();
        let k = images.len();
        images.dedup();
        images.len() == k
    }

    fn done(&self) -> bool {
        self.stopped
    }

    fn extend(&mut self, i: usize) {
        if i == self.order.len() {
            if (self.visit)(&self.mapping).is_break() {
                self.stopped = true;
            }
            return;
        }
        let a = self.order[i];
        let need = self.pattern.degree(a);
        if let Some(x) = self.fixed[a] {
            if self.host.degree(x) >= need && self.fits(i, a, x) {
                self.assign(i, a, x);
            }
            return;
        }
        let host = self.host;
        let anchor = self.back[i]
            .iter()
            .map(|&b| self.mapping[b])
            .min_by_key(|&x| (host.degree(x), x));
        let lower = self.twin_prev[a].map_or(0, |b| self.mapping[b] + 1);
        match anchor {
            Some(y) => {
                let nbrs = host.neighbors(y);
                let start = nbrs.partition_point(|&x| x < lower);
                for &x in &nbrs[start..] {
                    if self.done() {
                        return;
                    }
                    if host.degree(x) >= need && self.fits(i, a, x) {
                        self.assign(i, a, x);
                    }
                }
            }
            None => {
                for x in lower..host.vertex_count() {
                    if self.done() {
                        return;
                    }
                    if host.degree(x) >= need && self.fits(i, a, x) {
                        self.assign(i, a, x);
                    }
                }
            }
        }
    }

    fn fits(&self, i: usize, a: usize, x: usize) -> bool {
        if self.used.contains(&x) {
            return false;
        }
        if self.fixed[a].is_none() && self.forbidden.contains(&x) {
            return false;
        }
        if let Some(ok) = self.allowed {
            if !ok(a, x) {
                return false;
            }
        }
        if let Some(b) = self.twin_prev[a] {
            if self.mapping[b] >= x {
                return false;
            }
        }
        self.back[i].iter().all(|&b| self.host.has_edge(self.mapping[b], x))
    }

    fn assign(&mut self, i: usize, a: usize, x: usize) {
        self.mapping[a] = x;
        self.used.push(x);
        self.extend(i + 1);
        self.used.pop();
        self.mapping[a] = usize::MAX;
    }

}

/// Fixed vertices first, then repeatedly the lowest-degree vertex adjacent
/// to what is already placed (ties by index); a fresh lowest-degree vertex
/// when the placed part has no unplaced neighbors.
fn search_order(pattern: &Graph, fixed: &[Option<usize>]) -> Vec<usize> {
    let k = pattern.vertex_count();
    let mut placed = vec![false; k];
    let mut order: Vec<usize> = (0..k).filter(|&a| fixed[a].is_some()).collect();
    for &a in &order {
        placed[a] = true;
    }
    while order.len() < k {
        let frontier = (0..k)
            .filter(|&a| !placed[a] && pattern.neighbors(a).iter().any(|&b| placed[b]))
            .min_by_key(|&a| (pattern.degree(a), a));
        let next = frontier.unwrap_or_else(|| {
            (0..k)
                .filter(|&a| !placed[a])
                .min_by_key(|&a| (pattern.degree(a), a))
                .expect("unplaced vertex remains")
        });
        placed[next] = true;
        order.push(next);
    }
    order
}

/// Vertices with equal open (or equal closed) neighborhoods are
/// interchangeable by an automorphism, so their images can be required to
/// increase along the search order. Classes touching a fixed vertex are left
/// unconstrained.
fn twin_constraints(pattern: &Graph, fixed: &[Option<usize>], pos: &[usize]) -> Vec<Option<usize>> {
    let k = pattern.vertex_count();
    let mut prev = vec![None; k];
    let mut done = vec![false; k];
    for a in 0..k {
        if done[a] {
            continue;
        }
        let open = pattern.neighbors(a);
        let closed = closed_nbhd(pattern, a);
        let mut class: Vec<usize> = (a..k)
            .filter(|&b| b == a || pattern.neighbors(b) == open)
            .collect();
        if class.len() == 1 {
            class = (a..k).filter(|&b| b == a || closed_nbhd(pattern, b) == closed).collect();
        }
        for &b in &class {
            done[b] = true;
        }
        if class.len() < 2 || class.iter().any(|&b| fixed[b].is_some()) {
            continue;
        }
        class.sort_by_key(|&b| pos[b]);
        for w in class.windows(2) {
            prev[w[1]] = Some(w[0]);
        }
    }
    prev
}

fn closed_nbhd(g: &Graph, a: usize) -> Vec<usize> {
    let mut c = g.neighbors(a).to_vec();
    let i = c.partition_point(|&x| x < a);
    c.insert(i, a);
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(p: &Graph, h: &Graph) -> usize {
        find_appearances(p, h, usize::MAX).unwrap().len()
    }

    #[test]
    fn basic_counts() {
        assert_eq!(count(&Graph::cycle(4), &Graph::cycle(4)), 1);
        assert_eq!(count(&Graph::complete(3), &Graph::complete(4)), 4);
        assert_eq!(count(&Graph::cycle(4), &Graph::complete(4)), 3);
        assert_eq!(count(&Graph::cycle(4), &Graph::star(6)), 0);
        assert_eq!(count(&Graph::path(3), &Graph::star(4)), 6);
        assert_eq!(count(&Graph::star(3), &Graph::star(5)), 10);
        assert_eq!(count(&Graph::complete(4), &Graph::complete(6)), 15);
    }

    #[test]
    fn respects_cap_and_size_limit() {
        assert_eq!(find_appearances(&Graph::complete(3), &Graph::complete(5), 2).unwrap().len(), 2);
        assert_eq!(
            find_appearances(&Graph::path(13), &Graph::path(20), 1),
            Err(GraphError::PatternTooLarge(13))
        );
    }

    #[test]
    fn fixed_and_forbidden() {
        let host = Graph::complete(5);
        let tri = Graph::complete(3);
        let opts = SearchOptions {
            max_count: usize::MAX,
            fixed: &[(0, 4)],
            forbidden: &[3],
            ..Default::default()
        };
        let apps = search_appearances(&tri, &host, &opts).unwrap();
        // triangles through 4 avoiding 3: {0,1,4},{0,2,4},{1,2,4}
        assert_eq!(apps.len(), 3);
        for app in &apps {
            assert_eq!(app.mapping[0], 4);
            assert!(!app.mapping.contains(&3));
            assert!(app.is_valid(&tri, &host));
        }
    }

    #[test]
    fn fixed_conflicts_yield_nothing() {
        let opts = SearchOptions {
            max_count: usize::MAX,
            fixed: &[(0, 1), (1, 1)],
            ..Default::default()
        };
        assert!(search_appearances(&Graph::path(2), &Graph::complete(3), &opts).unwrap().is_empty());
    }

    #[test]
    fn all_mappings_counts_automorphisms() {
        let opts = SearchOptions {
            max_count: usize::MAX,
            all_mappings: true,
            ..Default::default()
        };
        assert_eq!(search_appearances(&Graph::cycle(4), &Graph::cycle(4), &opts).unwrap().len(), 8);
        let only_even = |_: usize, x: usize| x.is_multiple_of(2);
        let opts = SearchOptions {
            allowed: Some(&only_even),
            ..opts
        };
        assert_eq!(search_appearances(&Graph::path(2), &Graph::complete(4), &opts).unwrap().len(), 2);
    }
}
