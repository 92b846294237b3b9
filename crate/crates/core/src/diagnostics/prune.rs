use serde::Serialize;

use super::{dependency_digraph, DependencyDigraph, RolePreservingPacking};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PruneStatus {
    IndependentPair { roles: (usize, usize) },
    LockedTournament,
    /// A step kept fewer than `(4/5)·γ²` of the previous members.
    VolumeCollapse { step: usize, before: usize, after: usize },
    /// A step did not add a locked edge.
    Stalled { step: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PruneOutcome {
    pub final_packing: RolePreservingPacking,
    /// Digraph of the input, then of each pruned collection.
    pub trace: Vec<DependencyDigraph>,
    pub status: PruneStatus,
    /// Broken invariants found along the way; empty on a clean run.
    pub violations: Vec<String>,
}

/// While the digraph has no independent pair and some edge is unlocked,
/// takes the first unlocked edge `a → b`, keeps the members whose role-`a`
/// vertex qualifies for it and whose role-`b` vertex is that vertex's
/// partner, then drops members touching a heavy vertex `v` left with fewer
/// than `γ'·deg(v)` members, where `γ' = γ²·|previous|/(10·p·n)`. Every step
/// is checked to keep the volume, keep all locked edges and lock a new one.
pub fn iterative_prune(rp: &RolePreservingPacking, gamma: f64, p: usize) -> PruneOutcome {
    let r = rp.s_set.len();
    let mut cur = rp.clone();
    let mut trace = vec![dependency_digraph(&cur, gamma)];
    let mut violations = Vec::new();
    let n = rp.host_vertices.max(1) as f64;
    check(&cur, &trace[0], &mut violations);
    let status = loop {
        let d = trace.last().unwrap();
        if let Some(pair) = d.independent_pair() {
            break PruneStatus::IndependentPair { roles: pair };
        }
        let Some(edge) = d.edges.iter().find(|e| !e.locked) else {
            break PruneStatus::LockedTournament;
        };
        let step = trace.len() - 1;
        if trace.len() >= r * r {
            break PruneStatus::Stalled { step };
        }
        let (a, b) = (edge.from, edge.to);
        let narrowed = cur.retain(|m| edge.partner(m.mapping[a]) == Some(m.mapping[b]));
        let threshold = gamma * gamma * cur.len() as f64 / (10.0 * p.max(1) as f64 * n);
        let deg = narrowed.member_degrees();
        let next = narrowed.retain(|m| {
            !m.mapping.iter().any(|v| {
                narrowed
                    .heavy_degree
                    .get(v)
                    .is_some_and(|&hd| (deg[v] as f64) < threshold * hd as f64)
            })
        });
        let before = cur.len();
        let after = next.len();
        let nd = dependency_digraph(&next, gamma);
        let old_locked = d.locked_edges();
        let new_locked = nd.locked_edges();
        if let Some(lost) = old_locked.iter().find(|e| !new_locked.contains(e)) {
            violations.push(format!("step {step}: locked edge {lost:?} was lost"));
        }
        check(&next, &nd, &mut violations);
        cur = next;
        trace.push(nd);
        if (after as f64) < 0.8 * gamma * gamma * before as f64 {
            break PruneStatus::VolumeCollapse { step, before, after };
        }
        if new_locked.len() <= old_locked.len() {
            break PruneStatus::Stalled { step };
        }
    };
    PruneOutcome {
        final_packing: cur,
        trace,
        status,
        violations,
    }
}

fn check(rp: &RolePreservingPacking, d: &DependencyDigraph, violations: &mut Vec<String>) {
    if let Err(e) = rp.validate(None) {
        violations.push(format!("role assignment: {e}"));
    }
    if let Err(e) = d.validate(rp) {
        violations.push(format!("digraph: {e}"));
    }
}
