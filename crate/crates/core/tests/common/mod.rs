//! Brute-force reference implementations shared by the integration tests
//! and the acceptance harness. Nothing here calls into the library's
//! algorithms beyond constructing graphs.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use degentest::Graph;
use rand::Rng;

/// Connected components of `g` restricted to vertices with `alive[v]`.
pub fn components(g: &Graph, alive: &[bool]) -> usize {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if !alive[s] || seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if alive[w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

fn mask_members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Whether the subgraph induced on `set` is 2-connected (an edge counts).
pub fn induced_two_connected(g: &Graph, set: &[usize]) -> bool {
    if set.len() < 2 {
        return false;
    }
    let mut alive = vec![false; g.vertex_count()];
    for &v in set {
        alive[v] = true;
    }
    if components(g, &alive) != 1 {
        return false;
    }
    if set.len() == 2 {
        return g.has_edge(set[0], set[1]);
    }
    set.iter().all(|&v| {
        alive[v] = false;
        let ok = components(g, &alive) == 1;
        alive[v] = true;
        ok
    })
}

/// Maximal vertex sets inducing a 2-connected subgraph, by subset search.
pub fn brute_blocks(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    assert!(n <= 16);
    let good: Vec<u32> = (0..1u32 << n)
        .filter(|&m| induced_two_connected(g, &mask_members(m, n)))
        .collect();
    let mut out: Vec<Vec<usize>> = good
        .iter()
        .filter(|&&m| !good.iter().any(|&o| o != m && o & m == m))
        .map(|&m| mask_members(m, n))
        .collect();
    out.sort();
    out
}

/// Vertices whose removal increases the number of components.
pub fn brute_cut_vertices(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let base = components(g, &alive);
    (0..n)
        .filter(|&v| {
            alive[v] = false;
            let c = components(g, &alive);
            alive[v] = true;
            c > base
        })
        .collect()
}

/// Testable iff no block has an independent set whose removal disconnects
/// the block. Every independent separating set contains a minimal one, so
/// no minimality check is needed.
pub fn brute_testable(g: &Graph) -> bool {
    let n = g.vertex_count();
    for block in brute_blocks(g) {
        let k = block.len();
        for mask in 1..(1u32 << k) - 1 {
            let s: Vec<usize> = mask_members(mask, k).into_iter().map(|i| block[i]).collect();
            let independent = s.iter().enumerate().all(|(i, &u)| s[i + 1..].iter().all(|&v| !g.has_edge(u, v)));
            if !independent {
                continue;
            }
            let mut alive = vec![false; n];
            for &v in &block {
                alive[v] = true;
            }
            for &v in &s {
                alive[v] = false;
            }
            if components(g, &alive) >= 2 {
                return false;
            }
        }
    }
    true
}

/// Independent separating sets of a 2-connected graph that contain no
/// smaller separating set.
pub fn brute_obstacles(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let separates = |s: &[usize]| {
        let mut alive = vec![true; n];
        for &v in s {
            alive[v] = false;
        }
        components(g, &alive) >= 2
    };
    let mut out = Vec::new();
    for mask in 1..(1u32 << n) {
        let s = mask_members(mask, n);
        let independent = s.iter().enumerate().all(|(i, &u)| s[i + 1..].iter().all(|&v| !g.has_edge(u, v)));
        if !independent || !separates(&s) {
            continue;
        }
        let minimal = (0..mask).filter(|&sub| sub & mask == sub && sub != mask).all(|sub| !separates(&mask_members(sub, n)));
        if minimal {
            out.push(s);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Number of injective edge-preserving maps from `p` into `h`.
pub fn injective_homs(p: &Graph, h: &Graph) -> usize {
    fn go(p: &Graph, h: &Graph, f: &mut Vec<usize>, used: &mut Vec<bool>) -> usize {
        let a = f.len();
        if a == p.vertex_count() {
            return 1;
        }
        let mut total = 0;
        for x in 0..h.vertex_count() {
            if used[x] {
                continue;
            }
            if p.neighbors(a).iter().filter(|&&b| b < a).all(|&b| h.has_edge(f[b], x)) {
                used[x] = true;
                f.push(x);
                total += go(p, h, f, used);
                f.pop();
                used[x] = false;
            }
        }
        total
    }
    go(p, h, &mut Vec::new(), &mut vec![false; h.vertex_count()])
}

/// Distinct subgraphs of `h` isomorphic to `p`.
pub fn brute_appearance_count(p: &Graph, h: &Graph) -> usize {
    let aut = injective_homs(p, p);
    injective_homs(p, h) / aut
}

/// Largest minimum degree over all nonempty induced subgraphs.
pub fn brute_degeneracy(g: &Graph) -> usize {
    let n = g.vertex_count();
    assert!(n <= 16);
    (1..1u32 << n)
        .map(|m| {
            let set = mask_members(m, n);
            set.iter()
                .map(|&v| g.neighbors(v).iter().filter(|&&w| m >> w & 1 == 1).count())
                .min()
                .unwrap()
        })
        .max()
        .unwrap_or(0)
}

pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// One representative of every connected graph on `n` vertices up to
/// isomorphism, found by taking the lexicographically smallest edge mask
/// over all relabelings.
pub fn connected_classes(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut idx = vec![vec![0usize; n]; n];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        idx[u][v] = i;
        idx[v][u] = i;
    }
    let perms = permutations(n);
    let mut canon = BTreeSet::new();
    for mask in 0u32..1 << pairs.len() {
        let edges: Vec<(usize, usize)> = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        if components(&g, &vec![true; n]) != 1 {
            continue;
        }
        let best = perms
            .iter()
            .map(|p| edges.iter().fold(0u32, |acc, &(u, v)| acc | 1 << idx[p[u]][p[v]]))
            .min()
            .unwrap();
        canon.insert(best);
    }
    canon
        .into_iter()
        .map(|mask| {
            let edges: Vec<(usize, usize)> = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Whether `g` contains `p` anywhere, by exhaustive injective search.
pub fn brute_contains(p: &Graph, g: &Graph) -> bool {
    injective_homs(p, g) > 0
}

/// Edges as a set of normalized pairs.
pub fn edge_set(g: &Graph) -> HashSet<(usize, usize)> {
    g.edges().collect()
}

/// Whether `g` contains a 4-cycle: two distinct vertices with two common
/// neighbors.
pub fn has_c4(g: &Graph) -> bool {
    let n = g.vertex_count();
    let mut seen_by = vec![usize::MAX; n];
    for u in 0..n {
        for &x in g.neighbors(u) {
            for &w in g.neighbors(x) {
                if w == u {
                    continue;
                }
                if seen_by[w] == u {
                    return true;
                }
                seen_by[w] = u;
            }
        }
    }
    false
}

/// Degeneracy by repeatedly deleting a vertex of minimum degree.
pub fn peel_degeneracy(g: &Graph) -> usize {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = (0..n).map(|v| g.neighbors(v).len()).collect();
    let mut gone = vec![false; n];
    let mut buckets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n.max(1)];
    for v in 0..n {
        buckets[deg[v]].insert(v);
    }
    let mut best = 0;
    for _ in 0..n {
        let d = (0..buckets.len()).find(|&d| !buckets[d].is_empty()).unwrap();
        let v = buckets[d].pop_first().unwrap();
        best = best.max(d);
        gone[v] = true;
        for &w in g.neighbors(v) {
            if !gone[w] {
                buckets[deg[w]].remove(&w);
                deg[w] -= 1;
                buckets[deg[w]].insert(w);
            }
        }
    }
    best
}

/// Vertices within distance `t` of `root`, and the edges with an endpoint
/// closer than `t`.
pub fn ball(g: &Graph, root: usize, t: usize) -> (BTreeSet<usize>, BTreeSet<(usize, usize)>) {
    let mut dist = std::collections::HashMap::new();
    dist.insert(root, 0usize);
    let mut queue = std::collections::VecDeque::from([root]);
    let mut edges = BTreeSet::new();
    while let Some(u) = queue.pop_front() {
        let d = dist[&u];
        if d == t {
            continue;
        }
        for &w in g.neighbors(u) {
            edges.insert((u.min(w), u.max(w)));
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                e.insert(d + 1);
                queue.push_back(w);
            }
        }
    }
    (dist.into_keys().collect(), edges)
}

/// Members map every pattern edge onto a host edge and no host edge is
/// used twice.
pub fn packing_is_edge_disjoint(pattern: &Graph, host: &Graph, members: &[Vec<usize>]) -> bool {
    let mut used = HashSet::new();
    for f in members {
        for (u, v) in pattern.edges() {
            let (a, b) = (f[u].min(f[v]), f[u].max(f[v]));
            if !host.has_edge(a, b) || !used.insert((a, b)) {
                return false;
            }
        }
    }
    true
}
