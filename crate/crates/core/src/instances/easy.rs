use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{Fraction, GroundTruth, InstanceBundle, InstanceError, Provenance};
use crate::graph::{find_appearances, Appearance, Graph, GraphBuilder, Packing};
use crate::rng::seeded_rng;

/// `⌊fraction·n/k⌋` vertex-disjoint copies of `pattern` on the lowest
/// vertex indices, the rest isolated. The layout does not depend on `seed`,
/// which is only recorded.
pub fn disjoint_copies_instance(
    pattern: &Graph,
    n: usize,
    fraction: Fraction,
    seed: u64,
) -> Result<InstanceBundle, InstanceError> {
    if fraction.num == 0 || fraction.num > fraction.den {
        return Err(InstanceError::BadFraction);
    }
    let k = pattern.vertex_count();
    if k == 0 {
        return Err(InstanceError::NTooSmall { n, needed: 1 });
    }
    let copies = (fraction.num as u128 * n as u128 / (fraction.den as u128 * k as u128)) as usize;
    let mut b = GraphBuilder::new(n);
    let mut members = Vec::with_capacity(copies);
    for c in 0..copies {
        let off = c * k;
        for (u, v) in pattern.edges() {
            b.add_edge_unchecked(off + u, off + v);
        }
        members.push(Appearance::new((off..off + k).collect()));
    }
    let distance = (pattern.edge_count() > 0 && copies > 0).then(|| Fraction::new(copies as u64, n as u64));
    Ok(InstanceBundle {
        graph: b.build(),
        ground_truth: GroundTruth {
            planted_packing: Some(Packing::new(pattern.clone(), members)),
            distance_lower_bound: distance,
            free_of: Vec::new(),
        },
        provenance: Provenance {
            generator: "disjoint_copies".into(),
            params: json!({
                "pattern_edges": pattern.edges().collect::<Vec<_>>(),
                "pattern_vertices": k,
                "n": n,
                "fraction": fraction.to_string(),
                "copies": copies,
            }),
            seed,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YesStyle {
    /// Random trees, each smaller than the smallest tree in the family.
    Forest,
    /// Random bipartite graph of maximum degree 3 with every remaining
    /// family appearance broken by deleting one of its edges.
    BoundedDegreeRandom,
}

/// Largest tree component in forest-style hosts when the family has no
/// tree members.
const FOREST_COMPONENT_CAP: usize = 64;
const RANDOM_MAX_DEGREE: usize = 3;

/// A host on `n` vertices certified free of every family member.
pub fn yes_instance(family: &[Graph], n: usize, style: YesStyle, seed: u64) -> Result<InstanceBundle, InstanceError> {
    let mut rng = seeded_rng(seed);
    let graph = match style {
        YesStyle::Forest => {
            let cap = family
                .iter()
                .filter(|g| g.edge_count() + 1 == g.vertex_count() && g.is_connected())
                .map(|g| g.vertex_count() - 1)
                .min()
                .unwrap_or(FOREST_COMPONENT_CAP)
                .max(1);
            random_forest(n, cap, &mut rng)
        }
        YesStyle::BoundedDegreeRandom => {
            let mut g = random_bipartite(n, RANDOM_MAX_DEGREE, &mut rng);
            for member in family {
                while let Some(app) = find_appearances(member, &g, 1)?.pop() {
                    let edges = app.host_edges(member);
                    let (u, v) = edges[rng.gen_range(0..edges.len())];
                    g.remove_edge(u, v);
                }
            }
            g
        }
    };
    for (i, member) in family.iter().enumerate() {
        let acyclic_host = style == YesStyle::Forest;
        let member_has_cycle = member.edge_count() >= member.vertex_count();
        if acyclic_host && member_has_cycle && member.is_connected() {
            continue;
        }
        if !find_appearances(member, &graph, 1)?.is_empty() {
            return Err(InstanceError::CannotCertify(i));
        }
    }
    Ok(InstanceBundle {
        graph,
        ground_truth: GroundTruth {
            planted_packing: None,
            distance_lower_bound: None,
            free_of: family.to_vec(),
        },
        provenance: Provenance {
            generator: "yes".into(),
            params: json!({ "n": n, "style": style, "family_size": family.len() }),
            seed,
        },
    })
}

/// Consecutive random recursive trees with sizes drawn from `1..=cap`,
/// relabeled by a random permutation.
fn random_forest(n: usize, cap: usize, rng: &mut impl rand::Rng) -> Graph {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let mut b = GraphBuilder::new(n);
    let mut start = 0;
    while start < n {
        let size = rng.gen_range(1..=cap).min(n - start);
        for i in 1..size {
            let parent = start + rng.gen_range(0..i);
            b.add_edge_unchecked(labels[start + i], labels[parent]);
        }
        start += size;
    }
    b.build()
}

/// Even vertices on one side, odd on the other; each vertex proposes up to
/// `d` random partners and an edge is kept when both ends have room.
fn random_bipartite(n: usize, d: usize, rng: &mut impl rand::Rng) -> Graph {
    let mut b = GraphBuilder::new(n);
    if n < 2 {
        return b.build();
    }
    let odds = n / 2;
    let mut deg = vec![0usize; n];
    let mut seen = std::collections::HashSet::new();
    for u in (0..n).step_by(2) {
        for _ in 0..d {
            let v = 2 * rng.gen_range(0..odds) + 1;
            if deg[u] < d && deg[v] < d && seen.insert((u, v)) {
                deg[u] += 1;
                deg[v] += 1;
                b.add_edge_unchecked(u, v);
            }
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k3_copies() {
        let bundle = disjoint_copies_instance(&Graph::complete(3), 300, Fraction::new(1, 1), 0).unwrap();
        assert_eq!(bundle.ground_truth.planted_packing.as_ref().unwrap().len(), 100);
        assert_eq!(bundle.ground_truth.distance_lower_bound, Some(Fraction::new(1, 3)));
        assert_eq!(bundle.graph.max_degree(), 2);
        bundle.validate().unwrap();
        assert!(disjoint_copies_instance(&Graph::complete(3), 300, Fraction::new(0, 1), 0).is_err());
        let one = disjoint_copies_instance(&Graph::complete(3), 300, Fraction::new(1, 100), 0).unwrap();
        assert_eq!(one.ground_truth.distance_lower_bound, Some(Fraction::new(1, 300)));
    }

    #[test]
    fn yes_hosts_certify() {
        let fam = vec![Graph::cycle(4), Graph::star(10)];
        let f = yes_instance(&fam, 1000, YesStyle::Forest, 5).unwrap();
        assert!(f.graph.max_degree() <= 9);
        f.validate().unwrap();
        let r = yes_instance(&[Graph::complete(3), Graph::cycle(4)], 2000, YesStyle::BoundedDegreeRandom, 5).unwrap();
        assert!(r.graph.max_degree() <= RANDOM_MAX_DEGREE);
        assert!(r.graph.edge_count() > 2000);
        r.validate().unwrap();
    }
}
