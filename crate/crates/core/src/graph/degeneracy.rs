use serde::Serialize;

use super::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegeneracyCertificate {
    pub p: usize,
    /// Vertices in removal order; each has at most `p` neighbors later in it.
    pub peel_order: Vec<usize>,
}

impl DegeneracyCertificate {
    /// Largest number of later neighbors over the order, or `None` when the
    /// order is not a permutation of `g`'s vertices.
    pub fn later_neighbor_bound(&self, g: &Graph) -> Option<usize> {
        let n = g.vertex_count();
        if self.peel_order.len() != n {
            return None;
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in self.peel_order.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return None;
            }
            pos[v] = i;
        }
        Some(
            (0..n)
                .map(|v| g.neighbors(v).iter().filter(|&&w| pos[w] > pos[v]).count())
                .max()
                .unwrap_or(0),
        )
    }

    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.later_neighbor_bound(g) == Some(self.p)
    }
}

/// Minimum-degree peeling with bucket queues, O(n + m).
pub fn degeneracy(g: &Graph) -> DegeneracyCertificate {
    let n = g.vertex_count();
    if n == 0 {
        return DegeneracyCertificate { p: 0, peel_order: Vec::new() };
    }
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_deg = g.max_degree();
    // Vertices sorted by current degree; `pos[v]` is v's slot and
    // `start[d]` the first slot holding degree d.
    let mut start = vec![0usize; max_deg + 2];
    for &d in &deg {
        start[d + 1] += 1;
    }
    for d in 1..start.len() {
        start[d] += start[d - 1];
    }
    let mut order = vec![0usize; n];
    let mut pos = vec![0usize; n];
    {
        let mut next = start.clone();
        for v in 0..n {
            pos[v] = next[deg[v]];
            order[pos[v]] = v;
            next[deg[v]] += 1;
        }
    }
    let mut p = 0;
    for i in 0..n {
        let v = order[i];
        p = p.max(deg[v]);
        for &w in g.neighbors(v) {
            let dw = deg[w];
            if dw <= deg[v] {
                continue;
            }
            // Swap w with the first vertex of its bucket, then shrink it.
            let first = start[dw];
            let u = order[first];
            if u != w {
                order.swap(pos[w], first);
                pos[u] = pos[w];
                pos[w] = first;
            }
            start[dw] += 1;
            deg[w] -= 1;
        }
    }
    DegeneracyCertificate { p, peel_order: order }
}
