//! Cactus representations of a pattern relative to an obstacle of a base
//! pattern, and the sentinel condition built on them.
//!
//! A representation is a role map Φ from the cactus into the base plus a set
//! L of cut vertices whose roles lie in the separator. Cutting the cactus at
//! L leaves petals (component closures); Φ must embed each petal injectively
//! into the closure of a single separator component of the base.

use std::collections::HashSet;
use std::ops::ControlFlow;

use serde::Serialize;

use super::{count_components_without, CharacterizeError, Obstacle};
use crate::graph::{block_decomposition, s_components, visit_mappings, Graph, SearchOptions, MAX_PATTERN_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CactusRep {
    pub cactus: Graph,
    pub base: Graph,
    pub s_set: Vec<usize>,
    /// Role of each cactus vertex, as a base vertex.
    pub role_map: Vec<usize>,
    pub articulation_set: Vec<usize>,
}

/// A petal of a representation: cactus vertices (sorted) and the index of
/// the base separator component it embeds into.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Petal {
    pub vertices: Vec<usize>,
    pub base_component: usize,
}

impl CactusRep {
    /// Number of cactus vertices playing base vertex `role`.
    pub fn role_count(&self, role: usize) -> usize {
        self.role_map.iter().filter(|&&x| x == role).count()
    }

    /// Petals in the order of `s_components`, each tagged with the base
    /// component holding its image; `None` if some petal fits no component.
    pub fn petals(&self) -> Option<Vec<Petal>> {
        let base_comps = s_components(&self.base, &self.s_set);
        s_components(&self.cactus, &self.articulation_set)
            .into_iter()
            .map(|p| {
                let image: Vec<usize> = p.closure.iter().map(|&v| self.role_map[v]).collect();
                let c = base_comps
                    .iter()
                    .position(|bc| image.iter().all(|x| bc.closure.binary_search(x).is_ok()))?;
                Some(Petal {
                    vertices: p.closure,
                    base_component: c,
                })
            })
            .collect()
    }

    /// Re-checks every defining condition from scratch.
    pub fn validate(&self) -> Result<(), String> {
        Obstacle {
            pattern: self.base.clone(),
            s_set: self.s_set.clone(),
        }
        .validate()
        .map_err(|e| format!("obstacle: {e}"))?;
        let h = &self.cactus;
        if self.role_map.len() != h.vertex_count() {
            return Err("role map has the wrong length".into());
        }
        if self.role_map.iter().any(|&x| x >= self.base.vertex_count()) {
            return Err("role out of range".into());
        }
        for (u, v) in h.edges() {
            if !self.base.has_edge(self.role_map[u], self.role_map[v]) {
                return Err(format!("edge {u}-{v} is not mapped to a base edge"));
            }
        }
        if self.articulation_set.windows(2).any(|w| w[0] >= w[1]) {
            return Err("articulation set must be sorted and duplicate-free".into());
        }
        let base_parts = h.components().len();
        for &v in &self.articulation_set {
            if v >= h.vertex_count() {
                return Err("articulation vertex out of range".into());
            }
            if count_components_without(h, &[v]) <= base_parts {
                return Err(format!("vertex {v} is not an articulation point"));
            }
            if self.s_set.binary_search(&self.role_map[v]).is_err() {
                return Err(format!("vertex {v} has a role outside the separator"));
            }
        }
        let petals = self.petals().ok_or("a petal does not fit any separator component")?;
        for p in &petals {
            let mut image: Vec<usize> = p.vertices.iter().map(|&v| self.role_map[v]).collect();
            image.sort_unstable();
            if image.windows(2).any(|w| w[0] == w[1]) {
                return Err(format!("role map is not injective on petal {:?}", p.vertices));
            }
        }
        Ok(())
    }
}

/// Up to `max_count` representations of `h` relative to `obs`, articulation
/// sets tried smallest first.
pub fn cactus_reps(
    h: &Graph,
    base: &Graph,
    obs: &Obstacle,
    max_count: usize,
) -> Result<Vec<CactusRep>, CharacterizeError> {
    let mut out = Vec::new();
    if max_count == 0 {
        return Ok(out);
    }
    enumerate(h, base, obs, &[], |rep| {
        out.push(rep);
        if out.len() >= max_count {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(out)
}

/// Whether `hj` has a representation relative to `(hi, obs)` in which every
/// role of `s_prime` is played by at most one vertex.
pub fn is_sentinel(
    hj: &Graph,
    hi: &Graph,
    obs: &Obstacle,
    s_prime: &[usize],
) -> Result<(bool, Option<CactusRep>), CharacterizeError> {
    let r = obs.s_set.len();
    let mut sp = s_prime.to_vec();
    sp.sort_unstable();
    sp.dedup();
    if r < 2 || sp.len() != s_prime.len() || sp.len() != r - 2 || sp.iter().any(|s| obs.s_set.binary_search(s).is_err()) {
        return Err(CharacterizeError::BadSPrime);
    }
    let mut found = None;
    enumerate(hj, hi, obs, &sp, |rep| {
        found = Some(rep);
        ControlFlow::Break(())
    })?;
    Ok((found.is_some(), found))
}

struct Ctx {
    /// Closure vertex lists and induced graphs of the base separator components.
    comps: Vec<(Vec<usize>, Graph)>,
    in_s: Vec<bool>,
    unique: Vec<bool>,
    is_l: Vec<bool>,
    /// Petals as (closure vertices of h, induced graph), in attachment order.
    petals: Vec<(Vec<usize>, Graph)>,
}

struct State {
    phi: Vec<usize>,
    uses: Vec<usize>,
    seen: HashSet<Vec<usize>>,
}

fn enumerate<F>(
    h: &Graph,
    base: &Graph,
    obs: &Obstacle,
    unique_roles: &[usize],
    mut on_rep: F,
) -> Result<(), CharacterizeError>
where
    F: FnMut(CactusRep) -> ControlFlow<()>,
{
    if obs.pattern != *base {
        return Err(CharacterizeError::ObstacleMismatch);
    }
    for g in [h, base] {
        if g.vertex_count() > MAX_PATTERN_VERTICES {
            return Err(CharacterizeError::PatternTooLarge(g.vertex_count()));
        }
    }
    if !h.is_connected() {
        return Err(CharacterizeError::DisconnectedPattern);
    }
    let mut in_s = vec![false; base.vertex_count()];
    for &s in &obs.s_set {
        in_s[s] = true;
    }
    let mut unique = vec![false; base.vertex_count()];
    for &s in unique_roles {
        unique[s] = true;
    }
    let comps: Vec<(Vec<usize>, Graph)> = s_components(base, &obs.s_set)
        .into_iter()
        .map(|c| {
            let g = base.induced_subgraph(&c.closure);
            (c.closure, g)
        })
        .collect();
    let art = block_decomposition(h)?.articulation_points;

    for l in independent_subsets(h, &art) {
        let mut is_l = vec![false; h.vertex_count()];
        for &v in &l {
            is_l[v] = true;
        }
        let petals = attachment_order(h, &l)
            .into_iter()
            .map(|closure| {
                let g = h.induced_subgraph(&closure);
                (closure, g)
            })
            .collect();
        let ctx = Ctx {
            comps: comps.clone(),
            in_s: in_s.clone(),
            unique: unique.clone(),
            is_l,
            petals,
        };
        let mut st = State {
            phi: vec![usize::MAX; h.vertex_count()],
            uses: vec![0; base.vertex_count()],
            seen: HashSet::new(),
        };
        let mut emit = |phi: &[usize]| {
            on_rep(CactusRep {
                cactus: h.clone(),
                base: base.clone(),
                s_set: obs.s_set.clone(),
                role_map: phi.to_vec(),
                articulation_set: l.clone(),
            })
        };
        if place_petal(&ctx, &mut st, 0, &mut emit).is_break() {
            return Ok(());
        }
    }
    Ok(())
}

fn place_petal(
    ctx: &Ctx,
    st: &mut State,
    pi: usize,
    emit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if pi == ctx.petals.len() {
        if st.seen.insert(st.phi.clone()) {
            return emit(&st.phi);
        }
        return ControlFlow::Continue(());
    }
    let (closure, petal) = &ctx.petals[pi];
    let preassigned: Vec<bool> = closure.iter().map(|&v| st.phi[v] != usize::MAX).collect();
    for (cverts, cgraph) in &ctx.comps {
        let mut fixed = Vec::new();
        let mut fits = true;
        for (a, &v) in closure.iter().enumerate() {
            if preassigned[a] {
                match cverts.binary_search(&st.phi[v]) {
                    Ok(x) => fixed.push((a, x)),
                    Err(_) => {
                        fits = false;
                        break;
                    }
                }
            }
        }
        if !fits {
            continue;
        }
        // Snapshot of which component vertices are still free to take.
        let blocked: Vec<bool> = cverts.iter().map(|&x| ctx.unique[x] && st.uses[x] > 0).collect();
        let s_ok: Vec<bool> = cverts.iter().map(|&x| ctx.in_s[x]).collect();
        let is_l: Vec<bool> = closure.iter().map(|&v| ctx.is_l[v]).collect();
        let allowed = |a: usize, x: usize| preassigned[a] || ((!is_l[a] || s_ok[x]) && !blocked[x]);
        let opts = SearchOptions {
            max_count: usize::MAX,
            fixed: &fixed,
            allowed: Some(&allowed),
            all_mappings: true,
            ..Default::default()
        };
        let flow = visit_mappings(petal, cgraph, &opts, |map| {
            for (a, &x) in map.iter().enumerate() {
                if !preassigned[a] {
                    let role = cverts[x];
                    st.phi[closure[a]] = role;
                    st.uses[role] += 1;
                }
            }
            let flow = place_petal(ctx, st, pi + 1, emit);
            for (a, &x) in map.iter().enumerate() {
                if !preassigned[a] {
                    st.phi[closure[a]] = usize::MAX;
                    st.uses[cverts[x]] -= 1;
                }
            }
            flow
        })
        .expect("petal and component sizes are capped");
        if flow.is_break() {
            return flow;
        }
    }
    ControlFlow::Continue(())
}

/// Subsets of `art` that are independent in `h`, by size then lexicographically.
fn independent_subsets(h: &Graph, art: &[usize]) -> Vec<Vec<usize>> {
    let k = art.len();
    let mut out: Vec<Vec<usize>> = (0..1usize << k)
        .map(|m| (0..k).filter(|&i| m >> i & 1 == 1).map(|i| art[i]).collect::<Vec<_>>())
        .filter(|s: &Vec<usize>| {
            s.iter()
                .enumerate()
                .all(|(i, &u)| s[i + 1..].iter().all(|&v| !h.has_edge(u, v)))
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Petal closures ordered so that every petal after the first shares a cut
/// vertex with an earlier one (breadth-first over the petal tree).
pub(crate) fn attachment_order(h: &Graph, l: &[usize]) -> Vec<Vec<usize>> {
    let petals: Vec<Vec<usize>> = s_components(h, l).into_iter().map(|c| c.closure).collect();
    let n = petals.len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let start = (0..n).find(|&i| !placed[i]).expect("unplaced petal");
        placed[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for j in 0..n {
                if !placed[j] && petals[i].iter().any(|v| petals[j].binary_search(v).is_ok()) {
                    placed[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    order.into_iter().map(|i| petals[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characterize::obstacles;

    fn c4_ac() -> Obstacle {
        obstacles(&Graph::cycle(4)).unwrap().remove(0)
    }

    #[test]
    fn path_is_single_petal() {
        let reps = cactus_reps(&Graph::path(3), &Graph::cycle(4), &c4_ac(), usize::MAX).unwrap();
        assert!(reps.iter().any(|r| r.articulation_set.is_empty()));
        for r in &reps {
            r.validate().unwrap();
        }
    }

    #[test]
    fn c4_has_no_rep() {
        assert!(cactus_reps(&Graph::cycle(4), &Graph::cycle(4), &c4_ac(), 10).unwrap().is_empty());
        let (ok, rep) = is_sentinel(&Graph::cycle(4), &Graph::cycle(4), &c4_ac(), &[]).unwrap();
        assert!(!ok && rep.is_none());
    }

    #[test]
    fn star_rep() {
        let star = Graph::star(10);
        let reps = cactus_reps(&star, &Graph::cycle(4), &c4_ac(), 50).unwrap();
        assert!(!reps.is_empty());
        assert!(reps.iter().all(|r| r.articulation_set == vec![0]));
        let r = &reps[0];
        r.validate().unwrap();
        assert!(r.s_set.contains(&r.role_map[0]));
        let (ok, rep) = is_sentinel(&star, &Graph::cycle(4), &c4_ac(), &[]).unwrap();
        assert!(ok);
        rep.unwrap().validate().unwrap();
    }

    #[test]
    fn bad_s_prime() {
        assert_eq!(
            is_sentinel(&Graph::star(3), &Graph::cycle(4), &c4_ac(), &[0]).unwrap_err(),
            CharacterizeError::BadSPrime
        );
    }

    #[test]
    fn unique_roles_are_enforced() {
        // K2,3 with obstacle on the 3-side {2,3,4}; components are {0} and {1}.
        let base = Graph::complete_bipartite(2, 3);
        let obs = obstacles(&base).unwrap().into_iter().find(|o| o.r() == 3).unwrap();
        // Center on role 2 as the single cut vertex, leaves on roles 0 or 1.
        let (ok, rep) = is_sentinel(&Graph::star(4), &base, &obs, &[2]).unwrap();
        assert!(ok);
        let rep = rep.unwrap();
        rep.validate().unwrap();
        assert!(rep.role_count(2) <= 1);
    }

    #[test]
    fn validate_rejects_broken_maps() {
        let mut rep = cactus_reps(&Graph::star(3), &Graph::cycle(4), &c4_ac(), 1).unwrap().remove(0);
        rep.role_map[1] = rep.role_map[0];
        assert!(rep.validate().is_err());
    }
}
