use serde::Serialize;

use super::{Graph, GraphBuilder};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeavyLight {
    pub heavy: Vec<usize>,
    pub light: Vec<usize>,
}

/// Heavy vertices have degree at least `h`.
pub fn heavy_light_partition(g: &Graph, h: usize) -> HeavyLight {
    let (heavy, light) = g.vertices().partition(|&v| g.degree(v) >= h);
    HeavyLight { heavy, light }
}

/// Drops every edge whose endpoints are both heavy (degrees taken in `g`).
pub fn semi_bipartite_clean(g: &Graph, h: usize) -> Graph {
    let mut b = GraphBuilder::new(g.vertex_count());
    for (u, v) in g.edges() {
        if g.degree(u) < h || g.degree(v) < h {
            b.add_edge_unchecked(u, v);
        }
    }
    b.build()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SComponent {
    pub component: Vec<usize>,
    /// The component plus the separator vertices adjacent to it.
    pub closure: Vec<usize>,
}

/// Components of `g` minus `s`, each with its closure, ordered by smallest
/// component vertex.
pub fn s_components(g: &Graph, s: &[usize]) -> Vec<SComponent> {
    let mut removed = vec![false; g.vertex_count()];
    for &v in s {
        removed[v] = true;
    }
    g.components_avoiding(&removed)
        .into_iter()
        .map(|component| {
            let mut closure = component.clone();
            for &v in &component {
                closure.extend(g.neighbors(v).iter().filter(|&&w| removed[w]));
            }
            closure.sort_unstable();
            closure.dedup();
            SComponent { component, closure }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_partition() {
        let hl = heavy_light_partition(&Graph::star(10), 5);
        assert_eq!(hl.heavy, vec![0]);
        assert_eq!(hl.light, (1..=10).collect::<Vec<_>>());
    }

    #[test]
    fn clean_removes_hub_edge_only() {
        let mut edges = vec![(0, 1)];
        for i in 0..20 {
            edges.push((0, 2 + i));
            edges.push((1, 22 + i));
        }
        let g = Graph::from_edges(42, &edges).unwrap();
        let c = semi_bipartite_clean(&g, 10);
        assert_eq!(c.edge_count(), g.edge_count() - 1);
        assert!(!c.has_edge(0, 1));
        assert_eq!(semi_bipartite_clean(&Graph::cycle(5), 3), Graph::cycle(5));
    }

    #[test]
    fn c4_components() {
        let comps = s_components(&Graph::cycle(4), &[0, 2]);
        assert_eq!(
            comps,
            vec![
                SComponent { component: vec![1], closure: vec![0, 1, 2] },
                SComponent { component: vec![3], closure: vec![0, 2, 3] },
            ]
        );
        assert!(s_components(&Graph::cycle(4), &[0, 1, 2, 3]).is_empty());
        let none = s_components(&Graph::path(3), &[]);
        assert_eq!(none[0].closure, vec![0, 1, 2]);
    }
}
