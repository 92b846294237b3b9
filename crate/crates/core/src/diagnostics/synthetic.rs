use std::collections::BTreeMap;

use rand::Rng as _;

use super::{gamma_good_refine, RolePreservingPacking};
use crate::graph::{Appearance, Graph, GraphBuilder, Packing};
use crate::rng::seeded_rng;

/// Builds a host from explicit role assignments. `assignments[i][j]` is the
/// heavy vertex (in `0..heavy_count`) playing `s_set[j]` in member `i`;
/// every other pattern vertex gets a fresh vertex per member. Heavy vertices
/// below degree `h` are topped up with pendant leaves.
fn build(
    base: &Graph,
    s_set: &[usize],
    assignments: &[Vec<usize>],
    heavy_count: usize,
    h: usize,
) -> (Graph, RolePreservingPacking) {
    let k = base.vertex_count();
    let mut b = GraphBuilder::new(heavy_count);
    let mut deg = vec![0usize; heavy_count];
    let mut rho = BTreeMap::new();
    let mut members = Vec::with_capacity(assignments.len());
    for roles in assignments {
        let mut f = vec![usize::MAX; k];
        for (j, &s) in s_set.iter().enumerate() {
            f[s] = roles[j];
            rho.insert(roles[j], s);
        }
        for slot in f.iter_mut().filter(|x| **x == usize::MAX) {
            *slot = b.add_vertex();
        }
        for (u, v) in base.edges() {
            b.add_edge_unchecked(f[u], f[v]);
            for x in [f[u], f[v]] {
                if x < heavy_count {
                    deg[x] += 1;
                }
            }
        }
        members.push(Appearance::new(f));
    }
    for (v, &d) in deg.iter().enumerate() {
        for _ in d..h {
            let leaf = b.add_vertex();
            b.add_edge_unchecked(v, leaf);
        }
    }
    let g = b.build();
    let heavy_degree = (0..heavy_count)
        .filter(|&v| g.degree(v) >= h && rho.contains_key(&v))
        .map(|v| (v, g.degree(v)))
        .collect();
    let rp = RolePreservingPacking {
        packing: Packing::new(base.clone(), members),
        s_set: s_set.to_vec(),
        rho,
        heavy_degree,
        heavy_threshold: h,
        host_vertices: g.vertex_count(),
    };
    (g, rp)
}

/// A random role-preserving packing over `K_{2,r}` with the `r` side as the
/// separator, `r ∈ {2, 3, 4}`. Each role has a small pool of heavy vertices;
/// the first role's vertex is uniform, and every other role follows a
/// preferred partner of it with a random bias. The result is refined to be
/// `gamma`-good.
pub fn synthetic_role_packing(seed: u64, gamma: f64) -> (Graph, RolePreservingPacking) {
    let mut rng = seeded_rng(seed);
    let r = rng.gen_range(2..=4);
    let base = Graph::complete_bipartite(2, r);
    let s_set: Vec<usize> = (2..2 + r).collect();
    let pool_sizes: Vec<usize> = (0..r).map(|_| rng.gen_range(1..=4)).collect();
    let offsets: Vec<usize> = pool_sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let heavy_count: usize = pool_sizes.iter().sum();
    let bias: f64 = rng.gen_range(0.5..1.0);
    let count = rng.gen_range(20..=80);
    let assignments: Vec<Vec<usize>> = (0..count)
        .map(|_| {
            let first = rng.gen_range(0..pool_sizes[0]);
            (0..r)
                .map(|j| {
                    let local = if j == 0 {
                        first
                    } else if rng.gen_bool(bias) {
                        (first * 7 + j) % pool_sizes[j]
                    } else {
                        rng.gen_range(0..pool_sizes[j])
                    };
                    offsets[j] + local
                })
                .collect()
        })
        .collect();
    // Pattern vertices off the separator have degree r, so h = r + 1 keeps
    // them light.
    let (g, rp) = build(&base, &s_set, &assignments, heavy_count, r + 1);
    let refined = gamma_good_refine(&rp, gamma);
    (g, refined)
}

/// Three roles `a, b, c` (the `K_{2,3}` separator). One `a` vertex appears
/// ten times, nine of them with `b₁` and once with `b₂`; every member has
/// its own `c` vertex. At `γ = 0.2` the digraph is a tournament whose only
/// unlocked edge is `a → b`.
pub fn unlocked_edge_example() -> (Graph, RolePreservingPacking) {
    let base = Graph::complete_bipartite(2, 3);
    let s_set = vec![2, 3, 4];
    // Heavy ids: a₁ = 0, b₁ = 1, b₂ = 2, c_i = 3 + i.
    let assignments: Vec<Vec<usize>> = (0..10).map(|i| vec![0, if i < 9 { 1 } else { 2 }, 3 + i]).collect();
    build(&base, &s_set, &assignments, 13, 4)
}
