use super::InstanceError;
use crate::graph::{Graph, GraphBuilder};

/// For each `v` in `attach_set`, glues `copies(v)` fresh copies of `h2` onto
/// `g` by identifying `h2`'s vertex `attach` with `v`. New vertices are
/// appended after `g`'s, copy by copy.
pub fn compose_attach(
    g: &Graph,
    h2: &Graph,
    attach: usize,
    attach_set: &[usize],
    copies: impl Fn(usize) -> usize,
) -> Result<Graph, InstanceError> {
    let k = h2.vertex_count();
    if attach >= k {
        return Err(InstanceError::BadAttachVertex { vertex: attach, k });
    }
    if let Some(&v) = attach_set.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(crate::graph::GraphError::VertexOutOfRange {
            vertex: v,
            n: g.vertex_count(),
        }
        .into());
    }
    let mut b = GraphBuilder::new(g.vertex_count());
    for (u, v) in g.edges() {
        b.add_edge_unchecked(u, v);
    }
    let mut f = vec![0; k];
    for &v in attach_set {
        for _ in 0..copies(v) {
            for (a, slot) in f.iter_mut().enumerate() {
                *slot = if a == attach { v } else { b.add_vertex() };
            }
            for (x, y) in h2.edges() {
                b.add_edge_unchecked(f[x], f[y]);
            }
        }
    }
    Ok(b.build())
}

/// `compose_attach` with `deg(v)` copies at each `v`.
pub fn compose_attach_by_degree(
    g: &Graph,
    h2: &Graph,
    attach: usize,
    attach_set: &[usize],
) -> Result<Graph, InstanceError> {
    compose_attach(g, h2, attach, attach_set, |v| g.degree(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::degeneracy;

    #[test]
    fn edge_onto_vertex_gives_star() {
        let g = compose_attach(&Graph::empty(1), &Graph::path(2), 0, &[0], |_| 3).unwrap();
        assert_eq!(g, Graph::star(3));
    }

    #[test]
    fn sizes_and_degeneracy() {
        let g = Graph::cycle(6);
        let h2 = Graph::complete(4);
        let out = compose_attach_by_degree(&g, &h2, 1, &[0, 2, 3]).unwrap();
        assert_eq!(out.vertex_count(), 6 + 3 * 6);
        assert!(degeneracy(&out).p <= degeneracy(&g).p + degeneracy(&h2).p);
        assert!(compose_attach(&g, &h2, 4, &[0], |_| 1).is_err());
    }
}
