use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::RolePreservingPacking;

/// Why `from → to` is present: the qualifying vertices of role `from`, each
/// with its best partner of role `to` and how often they co-occur.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeWitness {
    pub from: usize,
    pub to: usize,
    /// `(u, partner, co-occurrences, members containing u)`, by `u`.
    pub u_set: Vec<(usize, usize, usize, usize)>,
    /// Members counted over `u_set`.
    pub volume: usize,
    /// Members counted over every heavy vertex of role `from`.
    pub role_volume: usize,
    pub locked: bool,
}

impl EdgeWitness {
    pub fn partner(&self, u: usize) -> Option<usize> {
        self.u_set.iter().find(|x| x.0 == u).map(|x| x.1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DependencyDigraph {
    pub roles: Vec<usize>,
    pub gamma: f64,
    /// Present edges ordered by `(from, to)`.
    pub edges: Vec<EdgeWitness>,
}

impl DependencyDigraph {
    pub fn edge(&self, from: usize, to: usize) -> Option<&EdgeWitness> {
        self.edges.iter().find(|e| e.from == from && e.to == to)
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edge(from, to).is_some()
    }

    pub fn locked_edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().filter(|e| e.locked).map(|e| (e.from, e.to)).collect()
    }

    /// Some pair of roles with no edge in either direction.
    pub fn independent_pair(&self) -> Option<(usize, usize)> {
        let r = &self.roles;
        (0..r.len())
            .flat_map(|i| (i + 1..r.len()).map(move |j| (r[i], r[j])))
            .find(|&(a, b)| !self.has_edge(a, b) && !self.has_edge(b, a))
    }

    pub fn is_locked_tournament(&self) -> bool {
        self.independent_pair().is_none() && self.edges.iter().all(|e| e.locked)
    }

    /// Recomputes both edge conditions and the locked flag for every
    /// recorded edge, and that the recorded vertex sets are maximal.
    pub fn validate(&self, rp: &RolePreservingPacking) -> Result<(), String> {
        let members = &rp.packing.members;
        for e in &self.edges {
            let mut volume = 0;
            for &(u, v, co, deg) in &e.u_set {
                if rp.rho.get(&u) != Some(&e.from) || rp.rho.get(&v) != Some(&e.to) {
                    return Err(format!("{u}→{v} does not connect roles {}→{}", e.from, e.to));
                }
                let real_deg = members.iter().filter(|m| m.mapping.contains(&u)).count();
                let real_co = members
                    .iter()
                    .filter(|m| m.mapping.contains(&u) && m.mapping[e.to] == v)
                    .count();
                if real_deg != deg || real_co != co {
                    return Err(format!("counts for {u} are stale"));
                }
                if (co as f64) < self.gamma * deg as f64 {
                    return Err(format!("{u} has no partner at the γ share"));
                }
                volume += deg;
            }
            let role_volume: usize = rp
                .rho
                .iter()
                .filter(|&(_, &r)| r == e.from)
                .map(|(&v, _)| members.iter().filter(|m| m.mapping.contains(&v)).count())
                .sum();
            if volume != e.volume || role_volume != e.role_volume || e.u_set.is_empty() {
                return Err(format!("edge {}→{} volumes are wrong", e.from, e.to));
            }
            if (volume as f64) < self.gamma * role_volume as f64 {
                return Err(format!("edge {}→{} is below the γ volume share", e.from, e.to));
            }
            let locked = e.u_set.iter().all(|&(_, _, co, deg)| co == deg);
            if locked != e.locked {
                return Err(format!("edge {}→{} has the wrong locked flag", e.from, e.to));
            }
        }
        let fresh = dependency_digraph(rp, self.gamma);
        if fresh.edges != self.edges {
            return Err("edge set differs from a recomputation".into());
        }
        Ok(())
    }
}

/// `from → to` is present when the heavy vertices of role `from` that have a
/// partner of role `to` in at least a `gamma` share of their members carry
/// at least a `gamma` share of that role's member count. The partner of `u`
/// is the most frequent one, lowest index on ties, and the qualifying set is
/// every `u` that has one. An edge is locked when each such `u` always
/// appears with its partner.
pub fn dependency_digraph(rp: &RolePreservingPacking, gamma: f64) -> DependencyDigraph {
    let roles = rp.s_set.clone();
    let deg = rp.member_degrees();
    // co[(u, to)][v]: members with u and φ(to) = v, for heavy u and v.
    let mut co: HashMap<(usize, usize), BTreeMap<usize, usize>> = HashMap::new();
    for m in &rp.packing.members {
        for &a in &roles {
            let u = m.mapping[a];
            if !rp.is_heavy(u) {
                continue;
            }
            for &b in &roles {
                let v = m.mapping[b];
                if b != a && rp.is_heavy(v) {
                    *co.entry((u, b)).or_default().entry(v).or_insert(0) += 1;
                }
            }
        }
    }
    let mut edges = Vec::new();
    for &a in &roles {
        let of_role: Vec<usize> = rp
            .rho
            .iter()
            .filter(|&(v, &r)| r == a && deg.contains_key(v))
            .map(|(&v, _)| v)
            .collect();
        let role_volume: usize = of_role.iter().map(|v| deg[v]).sum();
        for &b in &roles {
            if a == b {
                continue;
            }
            let mut u_set = Vec::new();
            for &u in &of_role {
                let Some(counts) = co.get(&(u, b)) else { continue };
                let (mut best, mut best_c) = (usize::MAX, 0);
                for (&v, &c) in counts {
                    if c > best_c {
                        (best, best_c) = (v, c);
                    }
                }
                if best_c > 0 && best_c as f64 >= gamma * deg[&u] as f64 {
                    u_set.push((u, best, best_c, deg[&u]));
                }
            }
            let volume: usize = u_set.iter().map(|x| x.3).sum();
            if !u_set.is_empty() && volume as f64 >= gamma * role_volume as f64 {
                let locked = u_set.iter().all(|&(_, _, c, d)| c == d);
                edges.push(EdgeWitness {
                    from: a,
                    to: b,
                    u_set,
                    volume,
                    role_volume,
                    locked,
                });
            }
        }
    }
    DependencyDigraph { roles, gamma, edges }
}
