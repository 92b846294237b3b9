use std::ops::Range;

use rand::seq::SliceRandom;
use serde::Serialize;
use serde_json::json;

use super::{Fraction, GroundTruth, InstanceBundle, InstanceError, Provenance};
use crate::characterize::Obstacle;
use crate::graph::{is_two_connected, s_components, Appearance, Graph, GraphBuilder, Packing};
use crate::rng::seeded_rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LBParams {
    pub base: Graph,
    pub obstacle: Obstacle,
    /// The two separator vertices spread over the hub sets A and C. The
    /// remaining separator vertices become the fixed vertices W. Defaults to
    /// the first two separator vertices.
    pub hub_roles: Option<(usize, usize)>,
    pub n: usize,
    pub seed: u64,
}

impl LBParams {
    pub fn new(base: Graph, obstacle: Obstacle, n: usize, seed: u64) -> Self {
        LBParams {
            base,
            obstacle,
            hub_roles: None,
            n,
            seed,
        }
    }
}

/// Vertex ranges of a lower-bound host. Padding fills `used..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LBLayout {
    pub m: usize,
    pub hub_roles: (usize, usize),
    /// Separator vertices other than the hub roles, in order; `w[i]` plays
    /// `w_roles[i]`.
    pub w_roles: Vec<usize>,
    pub a: Range<usize>,
    pub c: Range<usize>,
    pub w: Vec<usize>,
    /// Components of the base minus the separator.
    pub components: Vec<Vec<usize>>,
    /// One pool per component holding `m²` consecutive copies.
    pub pools: Vec<Range<usize>>,
    pub used: usize,
}

/// Vertices used by the construction with hub sets of size `m`.
pub fn lb_size_for_m(component_total: usize, r: usize, m: usize) -> usize {
    2 * m + (r - 2) + m * m * component_total
}

fn check_obstacle(base: &Graph, obs: &Obstacle) -> Result<(), InstanceError> {
    if obs.r() < 2 {
        return Err(InstanceError::ObstacleTooSmall(obs.r()));
    }
    if obs.pattern != *base {
        return Err(InstanceError::InvalidObstacle("obstacle is stated on a different pattern".into()));
    }
    if !is_two_connected(base) {
        return Err(InstanceError::InvalidObstacle("base is not 2-connected".into()));
    }
    obs.validate().map_err(InstanceError::InvalidObstacle)
}

/// Sizes and ranges for `p`, without building the graph.
pub fn lb_layout(p: &LBParams) -> Result<LBLayout, InstanceError> {
    check_obstacle(&p.base, &p.obstacle)?;
    let s = &p.obstacle.s_set;
    let r = s.len();
    let hub_roles = p.hub_roles.unwrap_or((s[0], s[1]));
    if hub_roles.0 == hub_roles.1 || !s.contains(&hub_roles.0) || !s.contains(&hub_roles.1) {
        return Err(InstanceError::InvalidObstacle("hub roles must be two distinct separator vertices".into()));
    }
    let w_roles: Vec<usize> = s.iter().copied().filter(|&v| v != hub_roles.0 && v != hub_roles.1).collect();
    let components: Vec<Vec<usize>> = s_components(&p.base, s).into_iter().map(|c| c.component).collect();
    let total: usize = components.iter().map(Vec::len).sum();

    // Positive root of total·m² + 2m + (r - 2) - n = 0, then corrected.
    let n = p.n;
    let mut m = if n < r - 2 {
        0
    } else {
        let disc = 4.0 + 4.0 * total as f64 * (n - (r - 2)) as f64;
        ((disc.sqrt() - 2.0) / (2.0 * total as f64)).floor().max(0.0) as usize
    };
    while m > 0 && lb_size_for_m(total, r, m) > n {
        m -= 1;
    }
    while lb_size_for_m(total, r, m + 1) <= n {
        m += 1;
    }
    if m < 2 {
        return Err(InstanceError::NTooSmall {
            n,
            needed: lb_size_for_m(total, r, 2),
        });
    }

    let a = 0..m;
    let c = m..2 * m;
    let w: Vec<usize> = (2 * m..2 * m + r - 2).collect();
    let mut next = 2 * m + r - 2;
    let pools = components
        .iter()
        .map(|comp| {
            let start = next;
            next += comp.len() * m * m;
            start..next
        })
        .collect();
    Ok(LBLayout {
        m,
        hub_roles,
        w_roles,
        a,
        c,
        w,
        components,
        pools,
        used: next,
    })
}

/// The hard host for a base pattern and one of its obstacles. Hub sets A and
/// C of size `m` carry the two hub roles, the fixed vertices W carry the
/// other separator roles, and each pair `(i, j) ∈ A × C` receives its own
/// copy of every component, wired to `i`, `j` and W exactly along the
/// base's edges. Which copy goes to which pair is a seeded shuffle per
/// component. Unused vertices up to `n` are isolated.
pub fn lb_construction(p: &LBParams) -> Result<InstanceBundle, InstanceError> {
    let lay = lb_layout(p)?;
    let m = lay.m;
    let base = &p.base;
    let k = base.vertex_count();
    let mut rng = seeded_rng(p.seed);
    let assignment: Vec<Vec<usize>> = lay
        .components
        .iter()
        .map(|_| {
            let mut perm: Vec<usize> = (0..m * m).collect();
            perm.shuffle(&mut rng);
            perm
        })
        .collect();

    let mut b = GraphBuilder::new(p.n);
    let mut members = Vec::with_capacity(m * m);
    let mut f = vec![usize::MAX; k];
    for (wi, &role) in lay.w_roles.iter().enumerate() {
        f[role] = lay.w[wi];
    }
    for i in 0..m {
        for j in 0..m {
            let pair = i * m + j;
            f[lay.hub_roles.0] = lay.a.start + i;
            f[lay.hub_roles.1] = lay.c.start + j;
            for (l, comp) in lay.components.iter().enumerate() {
                let copy = assignment[l][pair];
                let start = lay.pools[l].start + copy * comp.len();
                for (pos, &v) in comp.iter().enumerate() {
                    f[v] = start + pos;
                }
            }
            for (u, v) in base.edges() {
                b.add_edge_unchecked(f[u], f[v]);
            }
            members.push(Appearance::new(f.clone()));
        }
    }
    let graph = b.build();
    let planted = m * m;
    Ok(InstanceBundle {
        graph,
        ground_truth: GroundTruth {
            planted_packing: Some(Packing::new(base.clone(), members)),
            distance_lower_bound: Some(Fraction::new(planted as u64, (p.n * k) as u64)),
            free_of: Vec::new(),
        },
        provenance: Provenance {
            generator: "lower_bound".into(),
            params: json!({
                "base_edges": base.edges().collect::<Vec<_>>(),
                "base_vertices": k,
                "s_set": p.obstacle.s_set,
                "hub_roles": [lay.hub_roles.0, lay.hub_roles.1],
                "n": p.n,
                "m": m,
                "used_vertices": lay.used,
            }),
            seed: p.seed,
        },
    })
}

/// Two fixed hubs, vertex 0 and vertex 1, play both separator roles for
/// every copy. The host holds `g` groups, each one fresh copy of every
/// component wired to both hubs along the base's edges, where `g` is
/// `⌊n/3⌋` or fewer when the copies would not fit.
pub fn two_hub_instance(base: &Graph, obs: &Obstacle, n: usize, seed: u64) -> Result<InstanceBundle, InstanceError> {
    check_obstacle(base, obs)?;
    if obs.r() != 2 {
        return Err(InstanceError::InvalidObstacle(format!(
            "two hubs need a separator of size 2, got {}",
            obs.r()
        )));
    }
    let k = base.vertex_count();
    let components: Vec<Vec<usize>> = s_components(base, &obs.s_set).into_iter().map(|c| c.component).collect();
    let total: usize = components.iter().map(Vec::len).sum();
    let groups = (n / 3).min(n.saturating_sub(2) / total);
    if groups == 0 {
        return Err(InstanceError::NTooSmall { n, needed: 2 + total });
    }
    let mut b = GraphBuilder::new(n);
    let mut members = Vec::with_capacity(groups);
    let mut f = vec![usize::MAX; k];
    f[obs.s_set[0]] = 0;
    f[obs.s_set[1]] = 1;
    let mut next = 2;
    for _ in 0..groups {
        for comp in &components {
            for &v in comp {
                f[v] = next;
                next += 1;
            }
        }
        for (u, v) in base.edges() {
            b.add_edge_unchecked(f[u], f[v]);
        }
        members.push(Appearance::new(f.clone()));
    }
    Ok(InstanceBundle {
        graph: b.build(),
        ground_truth: GroundTruth {
            planted_packing: Some(Packing::new(base.clone(), members)),
            distance_lower_bound: Some(Fraction::new(groups as u64, (n * k) as u64)),
            free_of: Vec::new(),
        },
        provenance: Provenance {
            generator: "two_hub".into(),
            params: json!({
                "base_edges": base.edges().collect::<Vec<_>>(),
                "base_vertices": k,
                "s_set": obs.s_set,
                "n": n,
                "groups": groups,
            }),
            seed,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characterize::obstacles;
    use crate::graph::degeneracy;

    fn c4_params(n: usize, seed: u64) -> LBParams {
        let c4 = Graph::cycle(4);
        let obs = obstacles(&c4).unwrap().remove(0);
        LBParams::new(c4, obs, n, seed)
    }

    #[test]
    fn c4_sizes() {
        let lay = lb_layout(&c4_params(10_000, 0)).unwrap();
        assert_eq!((lay.m, lay.used), (70, 9940));
        assert_eq!(lb_layout(&c4_params(2000, 0)).unwrap().m, 31);
        assert_eq!(lb_layout(&c4_params(80_400, 0)).unwrap().m, 200);
        assert_eq!(lb_layout(&c4_params(80_399, 0)).unwrap().m, 199);
        assert!(matches!(lb_layout(&c4_params(11, 0)), Err(InstanceError::NTooSmall { .. })));
        assert_eq!(lb_layout(&c4_params(12, 0)).unwrap().m, 2);
    }

    #[test]
    fn c4_instance() {
        let bundle = lb_construction(&c4_params(500, 3)).unwrap();
        let g = &bundle.graph;
        let m = 15;
        assert_eq!(g.vertex_count(), 500);
        assert_eq!(bundle.ground_truth.planted_packing.as_ref().unwrap().len(), m * m);
        bundle.validate().unwrap();
        assert!(bundle.residual_is_free().unwrap());
        assert_eq!(degeneracy(g).p, 2);
        for v in 0..2 * m {
            assert_eq!(g.degree(v), 2 * m);
        }
        assert_eq!(lb_construction(&c4_params(500, 3)).unwrap().graph, *g);
        assert_ne!(lb_construction(&c4_params(500, 4)).unwrap().graph, *g);
    }

    #[test]
    fn two_hubs() {
        let c4 = Graph::cycle(4);
        let obs = obstacles(&c4).unwrap().remove(0);
        let bundle = two_hub_instance(&c4, &obs, 3000, 0).unwrap();
        assert_eq!(bundle.graph.degree(0), 2000);
        assert_eq!(bundle.graph.degree(1), 2000);
        bundle.validate().unwrap();
        assert!(matches!(two_hub_instance(&c4, &obs, 2, 0), Err(InstanceError::NTooSmall { .. })));
    }
}
