use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::{bounded_bfs, ExploredSubgraph, OracleError, OracleHandle};
use crate::graph::{search_appearances, Appearance, Graph, GraphBuilder, SearchOptions, MAX_PATTERN_VERTICES};
use crate::rng::{seeded_rng, uniform_index};

/// `h · ⌈ln(2·h^(t+1)/δ)⌉`: enough samples per vertex that, with
/// probability at least `1 - δ`, every vertex of degree at most `h` met
/// during a depth-`t` exploration has all of its neighbors sampled.
pub fn default_samples(h: usize, t: usize, delta: f64) -> usize {
    let x = (2.0 * (h as f64).powi(t as i32 + 1) / delta).ln().ceil();
    h * (x.max(1.0) as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TesterConfig {
    /// Number of sampled start vertices (attempts, for the assembling testers).
    pub q_prime: usize,
    /// BFS depth `t`.
    pub depth: usize,
    /// Neighbor queries per explored vertex `s`.
    pub samples: usize,
    /// A vertex is judged heavy when its samples show more than this many
    /// distinct neighbors.
    pub heavy_threshold: usize,
    pub witness_family: Vec<Graph>,
}

impl TesterConfig {
    /// Config with `samples` derived from `h` and `depth` at δ = 0.1.
    pub fn new(q_prime: usize, depth: usize, heavy_threshold: usize, witness_family: Vec<Graph>) -> Self {
        TesterConfig {
            q_prime,
            depth,
            samples: default_samples(heavy_threshold, depth, 0.1),
            heavy_threshold,
            witness_family,
        }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        let bad = |m: &str| Err(OracleError::InvalidConfig(m.to_string()));
        if self.q_prime == 0 || self.depth == 0 || self.samples == 0 || self.heavy_threshold == 0 {
            return bad("q_prime, depth, samples and heavy_threshold must be positive");
        }
        if let Some(g) = self.witness_family.iter().find(|g| g.vertex_count() > MAX_PATTERN_VERTICES) {
            return bad(&format!("witness with {} vertices exceeds the cap", g.vertex_count()));
        }
        Ok(())
    }

    /// Largest number of queries one bounded BFS can make: `s · Σ_{ℓ<t} s^ℓ`.
    pub fn bfs_budget(&self) -> u64 {
        bfs_budget(self.depth, self.samples)
    }

    /// Closed-form bound on the canonical tester's queries.
    pub fn canonical_budget(&self) -> u64 {
        (self.q_prime as u64).saturating_mul(self.bfs_budget())
    }
}

pub(crate) fn bfs_budget(t: usize, s: usize) -> u64 {
    let s = s as u64;
    let mut frontier: u64 = 1;
    let mut total: u64 = 0;
    for _ in 0..t {
        total = total.saturating_add(frontier.saturating_mul(s));
        frontier = frontier.saturating_mul(s);
    }
    total
}

/// Outcome of one tester run. A rejecting verdict can only be built from an
/// appearance whose every edge was observed through the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    accept: bool,
    witness: Option<(usize, Appearance)>,
    queries_used: u64,
}

impl Verdict {
    pub(crate) fn accepted(queries_used: u64) -> Self {
        Verdict {
            accept: true,
            witness: None,
            queries_used,
        }
    }

    /// Panics unless `app` is an appearance of `pattern` inside `union`.
    pub(crate) fn rejected(
        index: usize,
        pattern: &Graph,
        app: Appearance,
        union: &ExploredUnion,
        queries_used: u64,
    ) -> Self {
        assert!(
            union.certifies(pattern, &app),
            "reject without a witness inside the explored subgraph"
        );
        Verdict {
            accept: false,
            witness: Some((index, app)),
            queries_used,
        }
    }

    pub fn accept(&self) -> bool {
        self.accept
    }

    /// Index into the tester's witness list and the appearance found.
    pub fn witness(&self) -> Option<&(usize, Appearance)> {
        self.witness.as_ref()
    }

    pub fn queries_used(&self) -> u64 {
        self.queries_used
    }
}

/// Union of everything a tester has observed.
#[derive(Debug, Clone, Default)]
pub struct ExploredUnion {
    vertices: BTreeSet<usize>,
    edges: HashSet<(usize, usize)>,
}

impl ExploredUnion {
    pub fn add_explored(&mut self, e: &ExploredSubgraph) {
        self.vertices.extend(e.vertices.iter().copied());
        for &(u, v) in &e.edges {
            self.edges.insert((u, v));
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.vertices.insert(u);
        self.vertices.insert(v);
        self.edges.insert((u.min(v), u.max(v)));
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Injective and every pattern edge is an observed edge.
    pub fn certifies(&self, pattern: &Graph, app: &Appearance) -> bool {
        if app.mapping.len() != pattern.vertex_count() {
            return false;
        }
        let vs = app.host_vertices();
        vs.windows(2).all(|w| w[0] != w[1])
            && pattern
                .edges()
                .all(|(a, b)| self.contains_edge(app.mapping[a], app.mapping[b]))
    }

    /// The observed graph relabeled to `0..k` in increasing vertex order.
    fn local(&self) -> (Vec<usize>, Graph) {
        let verts: Vec<usize> = self.vertices.iter().copied().collect();
        let mut b = GraphBuilder::new(verts.len());
        let mut edges: Vec<_> = self.edges.iter().copied().collect();
        edges.sort_unstable();
        for (u, v) in edges {
            let lu = verts.binary_search(&u).expect("edge endpoint recorded");
            let lv = verts.binary_search(&v).expect("edge endpoint recorded");
            b.add_edge_unchecked(lu, lv);
        }
        (verts, b.build())
    }

    /// First member of `family` (in order) with an appearance here.
    pub fn find_any(&self, family: &[Graph]) -> Option<(usize, Appearance)> {
        let (verts, g) = self.local();
        family.iter().enumerate().find_map(|(i, p)| {
            search_appearances(p, &g, &SearchOptions::up_to(1))
                .expect("witness sizes are validated")
                .pop()
                .map(|app| (i, app.relabeled(|x| verts[x])))
        })
    }

    /// An appearance of `pattern` honoring fixed assignments and avoiding
    /// `forbidden`, all in host indices.
    pub fn find(&self, pattern: &Graph, fixed: &[(usize, usize)], forbidden: &[usize]) -> Option<Appearance> {
        let (verts, g) = self.local();
        let mut local_fixed = Vec::with_capacity(fixed.len());
        for &(a, x) in fixed {
            local_fixed.push((a, verts.binary_search(&x).ok()?));
        }
        let local_forbidden: Vec<usize> = forbidden.iter().filter_map(|x| verts.binary_search(x).ok()).collect();
        let opts = SearchOptions {
            max_count: 1,
            fixed: &local_fixed,
            forbidden: &local_forbidden,
            ..Default::default()
        };
        search_appearances(pattern, &g, &opts)
            .expect("pattern size is validated")
            .pop()
            .map(|app| app.relabeled(|x| verts[x]))
    }
}

/// Samples `q′` start vertices, explores each with a bounded BFS and rejects
/// as soon as the union of explored subgraphs contains a witness.
pub fn canonical_tester(handle: &mut OracleHandle<'_>, cfg: &TesterConfig, seed: u64) -> Result<Verdict, OracleError> {
    cfg.validate()?;
    let start = handle.query_count();
    let n = handle.vertex_count();
    if n == 0 {
        return Ok(Verdict::accepted(0));
    }
    let mut rng = seeded_rng(seed);
    let mut union = ExploredUnion::default();
    for _ in 0..cfg.q_prime {
        if handle.exhausted() {
            break;
        }
        let v = uniform_index(&mut rng, n);
        let e = bounded_bfs(handle, v, cfg.depth, cfg.samples, cfg.heavy_threshold)?;
        union.add_explored(&e);
        if let Some((i, app)) = union.find_any(&cfg.witness_family) {
            let used = handle.query_count() - start;
            return Ok(Verdict::rejected(i, &cfg.witness_family[i], app, &union, used));
        }
        if e.truncated {
            break;
        }
    }
    Ok(Verdict::accepted(handle.query_count() - start))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_formula() {
        // 8 · ⌈ln(2·8^4/0.1)⌉ = 8 · ⌈ln 81920⌉ = 8 · 12
        assert_eq!(default_samples(8, 3, 0.1), 96);
        assert_eq!(bfs_budget(2, 8), 8 + 64);
        assert_eq!(bfs_budget(1, 11), 11);
    }

    #[test]
    fn accepts_trees_and_rejects_triangles() {
        let tree = Graph::path(30);
        let cfg = TesterConfig::new(8, 2, 4, vec![Graph::cycle(4)]).with_samples(6);
        for seed in 0..20 {
            let mut h = OracleHandle::new(&tree, seed);
            let v = canonical_tester(&mut h, &cfg, seed).unwrap();
            assert!(v.accept());
            assert!(v.queries_used() <= cfg.canonical_budget());
        }
        let tri = Graph::complete(3);
        let cfg = TesterConfig::new(2, 2, 4, vec![Graph::complete(3)]).with_samples(8);
        let mut h = OracleHandle::new(&tri, 1);
        let v = canonical_tester(&mut h, &cfg, 1).unwrap();
        assert!(!v.accept());
        let (i, app) = v.witness().unwrap();
        assert_eq!(*i, 0);
        assert!(app.is_valid(&Graph::complete(3), &tri));
    }

    #[test]
    #[should_panic(expected = "reject without a witness")]
    fn reject_requires_observed_edges() {
        let union = ExploredUnion::default();
        Verdict::rejected(0, &Graph::path(2), Appearance::new(vec![0, 1]), &union, 0);
    }

    #[test]
    fn union_find_with_constraints() {
        let mut u = ExploredUnion::default();
        for (a, b) in [(10, 11), (11, 12), (12, 10), (12, 13)] {
            u.add_edge(a, b);
        }
        let tri = Graph::complete(3);
        let app = u.find(&tri, &[(0, 12)], &[]).unwrap();
        assert_eq!(app.mapping[0], 12);
        assert!(u.find(&tri, &[(0, 13)], &[]).is_none());
        assert!(u.find(&tri, &[(0, 12)], &[10]).is_none());
        assert!(u.find(&tri, &[(0, 99)], &[]).is_none());
    }

    #[test]
    fn invalid_config() {
        let cfg = TesterConfig::new(0, 1, 1, vec![]);
        let g = Graph::path(2);
        assert!(matches!(
            canonical_tester(&mut OracleHandle::new(&g, 0), &cfg, 0),
            Err(OracleError::InvalidConfig(_))
        ));
    }
}
