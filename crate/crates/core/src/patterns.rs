//! Named small patterns: `K<n>` complete, `C<n>` cycle, `P<n>` path on n
//! vertices, `ST_<n>` (or `ST<n>`) star with n leaves, `K<a>_<b>` complete
//! bipartite.

use crate::graph::Graph;

pub fn named(name: &str) -> Option<Graph> {
    let num = |s: &str| s.parse::<usize>().ok();
    if let Some(rest) = name.strip_prefix("ST") {
        let leaves = num(rest.strip_prefix('_').unwrap_or(rest))?;
        return (leaves >= 1).then(|| Graph::star(leaves));
    }
    if let Some(rest) = name.strip_prefix('K') {
        if let Some((a, b)) = rest.split_once('_') {
            let (a, b) = (num(a)?, num(b)?);
            return (a >= 1 && b >= 1).then(|| Graph::complete_bipartite(a, b));
        }
        let k = num(rest)?;
        return (k >= 1).then(|| Graph::complete(k));
    }
    if let Some(rest) = name.strip_prefix('C') {
        let k = num(rest)?;
        return (k >= 3).then(|| Graph::cycle(k));
    }
    if let Some(rest) = name.strip_prefix('P') {
        let k = num(rest)?;
        return (k >= 1).then(|| Graph::path(k));
    }
    None
}

/// Display label for pattern vertex `i`: `a`, `b`, …, `z`, then `v26`, ….
pub fn vertex_label(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("v{i}")
    }
}

pub fn set_label(vs: &[usize]) -> String {
    let inner: Vec<String> = vs.iter().map(|&v| vertex_label(v)).collect();
    format!("{{{}}}", inner.join(","))
}
