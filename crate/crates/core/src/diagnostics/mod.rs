//! Full-information versions of the packing arguments behind the testers.
//!
//! Everything here sees the whole host and uses exact degrees. Starting
//! from an edge-disjoint packing of a base pattern, the pipeline keeps
//! members whose heavy vertices are well covered, extracts a sub-packing in
//! which every heavy vertex plays one fixed separator role, measures which
//! roles determine which (the dependency digraph) and prunes until the
//! digraph either has an independent pair of roles or is a tournament of
//! locked edges.

mod digraph;
mod prune;
mod synthetic;

pub use digraph::{dependency_digraph, DependencyDigraph, EdgeWitness};
pub use prune::{iterative_prune, PruneOutcome, PruneStatus};
pub use synthetic::{synthetic_role_packing, unlocked_edge_example};

use std::collections::{BTreeMap, HashMap};

use rand::Rng as _;
use serde::Serialize;
use thiserror::Error;

use crate::characterize::Obstacle;
use crate::graph::{Appearance, Graph, Packing};
use crate::rng::seeded_rng;

pub const DEFAULT_ATTEMPTS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("best extraction kept {best} members, below the target {target:.2}")]
    Underweight { best: usize, target: f64 },
    #[error("packing does not fit the host or obstacle: {0}")]
    InvalidPacking(String),
}

/// Threshold constants derived from degeneracy `p`, distance `epsilon` and
/// pattern size `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    pub h: usize,
    pub delta: f64,
    pub gamma: f64,
}

impl Constants {
    /// `h = ⌈4p²/ε⌉`, `δ = ε/(4kp²)`, `γ = δ/(2kᵏ)`.
    pub fn defaults(p: usize, epsilon: f64, k: usize) -> Self {
        let p2 = (p * p) as f64;
        let h = (4.0 * p2 / epsilon).ceil() as usize;
        let delta = epsilon / (4.0 * k as f64 * p2);
        let gamma = delta / (2.0 * (k as f64).powi(k as i32));
        Constants { h, delta, gamma }
    }
}

/// Packing in which every heavy vertex plays the same separator role in
/// every member that contains it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RolePreservingPacking {
    pub packing: Packing,
    pub s_set: Vec<usize>,
    /// Heavy host vertex → the separator role it plays.
    pub rho: BTreeMap<usize, usize>,
    /// Host degree of every heavy vertex that occurs in the packing.
    pub heavy_degree: BTreeMap<usize, usize>,
    pub heavy_threshold: usize,
    pub host_vertices: usize,
}

impl RolePreservingPacking {
    /// Takes `packing` whole when every heavy vertex already plays a single
    /// separator role across its members.
    pub fn from_packing(
        host: &Graph,
        packing: &Packing,
        obs: &Obstacle,
        h: usize,
    ) -> Result<Self, DiagnosticsError> {
        if packing.pattern != obs.pattern || !packing.is_valid(host) {
            return Err(DiagnosticsError::InvalidPacking("packing does not fit the obstacle and host".into()));
        }
        let mut rho = BTreeMap::new();
        let mut heavy_degree = BTreeMap::new();
        for (i, m) in packing.members.iter().enumerate() {
            for (role, &v) in m.mapping.iter().enumerate() {
                if host.degree(v) < h {
                    continue;
                }
                if obs.s_set.binary_search(&role).is_err() || *rho.entry(v).or_insert(role) != role {
                    return Err(DiagnosticsError::InvalidPacking(format!(
                        "member {i}: heavy vertex {v} breaks the role assignment"
                    )));
                }
                heavy_degree.insert(v, host.degree(v));
            }
        }
        Ok(RolePreservingPacking {
            packing: packing.clone(),
            s_set: obs.s_set.clone(),
            rho,
            heavy_degree,
            heavy_threshold: h,
            host_vertices: host.vertex_count(),
        })
    }

    pub fn len(&self) -> usize {
        self.packing.len()
    }

    pub fn is_empty(&self) -> bool {
        self.packing.is_empty()
    }

    pub fn is_heavy(&self, v: usize) -> bool {
        self.heavy_degree.contains_key(&v)
    }

    /// Number of members containing each vertex.
    pub fn member_degrees(&self) -> HashMap<usize, usize> {
        member_degrees(&self.packing.members)
    }

    /// Same metadata over the members that pass `keep`.
    pub fn retain(&self, keep: impl Fn(&Appearance) -> bool) -> Self {
        let members = self.packing.members.iter().filter(|m| keep(m)).cloned().collect();
        RolePreservingPacking {
            packing: Packing::new(self.packing.pattern.clone(), members),
            ..self.clone()
        }
    }

    /// Checks the role assignment member by member, and against `host`
    /// the packing and the heavy classification.
    pub fn validate(&self, host: Option<&Graph>) -> Result<(), String> {
        if let Some(g) = host {
            if !self.packing.is_valid(g) {
                return Err("packing is not valid in the host".into());
            }
            for m in &self.packing.members {
                for &v in &m.mapping {
                    let heavy = g.degree(v) >= self.heavy_threshold;
                    if heavy != self.is_heavy(v) || heavy && self.heavy_degree[&v] != g.degree(v) {
                        return Err(format!("heavy classification of {v} disagrees with the host"));
                    }
                }
            }
        }
        for (i, m) in self.packing.members.iter().enumerate() {
            for (role, &v) in m.mapping.iter().enumerate() {
                if self.is_heavy(v) && self.rho.get(&v) != Some(&role) {
                    return Err(format!("member {i}: heavy vertex {v} plays {role}, assigned {:?}", self.rho.get(&v)));
                }
            }
        }
        if self.rho.values().any(|r| self.s_set.binary_search(r).is_err()) {
            return Err("a heavy vertex is assigned a role outside the separator".into());
        }
        Ok(())
    }
}

fn member_degrees(members: &[Appearance]) -> HashMap<usize, usize> {
    let mut d = HashMap::new();
    for m in members {
        for &v in &m.mapping {
            *d.entry(v).or_insert(0) += 1;
        }
    }
    d
}

/// Keeps the members whose heavy vertices (degree ≥ `h`) all have at least
/// `delta·deg(v)` of their edges covered by the input packing.
pub fn delta_good_filter(host: &Graph, packing: &Packing, h: usize, delta: f64) -> Packing {
    let mut covered: HashMap<usize, usize> = HashMap::new();
    for m in &packing.members {
        for (u, v) in m.host_edges(&packing.pattern) {
            *covered.entry(u).or_insert(0) += 1;
            *covered.entry(v).or_insert(0) += 1;
        }
    }
    let good = |v: usize| {
        let d = host.degree(v);
        d < h || covered.get(&v).copied().unwrap_or(0) as f64 >= delta * d as f64
    };
    let members = packing
        .members
        .iter()
        .filter(|m| m.mapping.iter().all(|&v| good(v)))
        .cloned()
        .collect();
    Packing::new(packing.pattern.clone(), members)
}

/// Random `r`-colorings of the host. Members whose separator vertices get
/// distinct colors are grouped by the color-to-role bijection they induce,
/// and the largest group is kept, dropping members that would place a
/// heavy vertex outside the separator or give it two roles. The best of
/// `attempts` colorings is returned, or `Underweight` when it keeps fewer
/// than `|packing|/(2·rʳ)` members.
pub fn role_preserving_extract(
    host: &Graph,
    packing: &Packing,
    obs: &Obstacle,
    h: usize,
    attempts: usize,
    seed: u64,
) -> Result<RolePreservingPacking, DiagnosticsError> {
    if packing.pattern != obs.pattern {
        return Err(DiagnosticsError::InvalidPacking("packing pattern differs from the obstacle's".into()));
    }
    if !packing.is_valid(host) {
        return Err(DiagnosticsError::InvalidPacking("packing is not valid in the host".into()));
    }
    let r = obs.r();
    let s = &obs.s_set;
    let heavy = |v: usize| host.degree(v) >= h;
    let mut rng = seeded_rng(seed);
    let mut best: Option<RolePreservingPacking> = None;
    let mut color = vec![0u8; host.vertex_count()];
    for _ in 0..attempts.max(1) {
        for c in color.iter_mut() {
            *c = rng.gen_range(0..r) as u8;
        }
        let mut classes: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
        for (i, m) in packing.members.iter().enumerate() {
            let key: Vec<u8> = s.iter().map(|&role| color[m.mapping[role]]).collect();
            let mut sorted = key.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() == r {
                classes.entry(key).or_default().push(i);
            }
        }
        // Largest class; ties go to the smallest bijection.
        let Some((_, chosen)) = classes.into_iter().rev().max_by_key(|(_, v)| v.len()) else {
            continue;
        };
        let mut rho = BTreeMap::new();
        let mut heavy_degree = BTreeMap::new();
        let mut members = Vec::new();
        'members: for &i in &chosen {
            let m = &packing.members[i];
            for (role, &v) in m.mapping.iter().enumerate() {
                if heavy(v) && (s.binary_search(&role).is_err() || rho.get(&v).is_some_and(|&r0| r0 != role)) {
                    continue 'members;
                }
            }
            for (role, &v) in m.mapping.iter().enumerate() {
                if heavy(v) {
                    rho.insert(v, role);
                    heavy_degree.insert(v, host.degree(v));
                }
            }
            members.push(m.clone());
        }
        if best.as_ref().is_none_or(|b| members.len() > b.len()) {
            best = Some(RolePreservingPacking {
                packing: Packing::new(packing.pattern.clone(), members),
                s_set: s.clone(),
                rho,
                heavy_degree,
                heavy_threshold: h,
                host_vertices: host.vertex_count(),
            });
        }
    }
    let best = best.unwrap_or_else(|| RolePreservingPacking {
        packing: Packing::new(packing.pattern.clone(), Vec::new()),
        s_set: s.clone(),
        rho: BTreeMap::new(),
        heavy_degree: BTreeMap::new(),
        heavy_threshold: h,
        host_vertices: host.vertex_count(),
    });
    let target = packing.len() as f64 / (2.0 * (r as f64).powi(r as i32));
    if (best.len() as f64) < target {
        return Err(DiagnosticsError::Underweight {
            best: best.len(),
            target,
        });
    }
    Ok(best)
}

/// Repeatedly drops members containing a heavy vertex `v` with fewer than
/// `gamma·deg(v)` members, until none is left.
pub fn gamma_good_refine(rp: &RolePreservingPacking, gamma: f64) -> RolePreservingPacking {
    let mut cur = rp.clone();
    loop {
        let d = cur.member_degrees();
        let bad = |v: &usize| cur.heavy_degree.get(v).is_some_and(|&deg| (d[v] as f64) < gamma * deg as f64);
        let next = cur.retain(|m| !m.mapping.iter().any(bad));
        if next.len() == cur.len() {
            return cur;
        }
        cur = next;
    }
}

/// The whole pipeline on one host: greedy packing, δ-good filter,
/// extraction, γ-good refinement and pruning.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub constants: Constants,
    pub packing_size: usize,
    pub delta_good_size: usize,
    pub extracted_size: usize,
    pub refined_size: usize,
    pub s_set: Vec<usize>,
    pub prune: PruneOutcome,
}

pub fn analyze(
    host: &Graph,
    obs: &Obstacle,
    constants: Constants,
    p: usize,
    seed: u64,
) -> Result<AnalysisReport, Box<dyn std::error::Error + Send + Sync>> {
    let packing = crate::graph::greedy_packing(&obs.pattern, host, seed)?;
    let good = delta_good_filter(host, &packing, constants.h, constants.delta);
    let rp = role_preserving_extract(host, &good, obs, constants.h, DEFAULT_ATTEMPTS, seed)?;
    let refined = gamma_good_refine(&rp, constants.gamma);
    let prune = iterative_prune(&refined, constants.gamma, p);
    Ok(AnalysisReport {
        constants,
        packing_size: packing.len(),
        delta_good_size: good.len(),
        extracted_size: rp.len(),
        refined_size: refined.len(),
        s_set: obs.s_set.clone(),
        prune,
    })
}
