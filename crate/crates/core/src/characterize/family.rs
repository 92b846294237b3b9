use std::fmt::Write as _;

use serde::Serialize;

use super::{block_obstacles, is_sentinel, CactusRep, CharacterizeError, Obstacle, MAX_FAMILY_SIZE};
use crate::graph::Graph;
use crate::patterns::set_label;

/// An obstacle that is not covered. Vertex lists (`block`, `s_set`,
/// `s_prime`) use the member's own indices; `obstacle` is stated on the
/// block graph induced by `block`, relabeled in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub member: usize,
    pub block: Vec<usize>,
    pub obstacle: Obstacle,
    pub s_set: Vec<usize>,
    /// Set for family verdicts: the part of the separator whose roles had to
    /// be used at most once.
    pub s_prime: Option<Vec<usize>>,
}

impl Witness {
    pub(crate) fn new(member: usize, block: &[usize], obstacle: Obstacle, s_prime_local: Option<&[usize]>) -> Self {
        let s_set = obstacle.s_set.iter().map(|&s| block[s]).collect();
        Witness {
            member,
            block: block.to_vec(),
            obstacle,
            s_set,
            s_prime: s_prime_local.map(|sp| sp.iter().map(|&s| block[s]).collect()),
        }
    }
}

/// One covered (member, block obstacle, S') triple and its sentinel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SentinelEntry {
    pub member: usize,
    pub block: Vec<usize>,
    pub s_set: Vec<usize>,
    pub s_prime: Vec<usize>,
    pub sentinel: usize,
    /// Representation of the sentinel relative to the block graph, in
    /// block-local indices.
    pub rep: CactusRep,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TestabilityVerdict {
    pub testable: bool,
    pub witnesses: Vec<Witness>,
    pub sentinel_table: Vec<SentinelEntry>,
}

impl TestabilityVerdict {
    /// Re-validates every certificate against `family`.
    pub fn validate(&self, family: &[Graph]) -> Result<(), String> {
        if self.testable != self.witnesses.is_empty() {
            return Err("testable flag disagrees with the witness list".into());
        }
        for w in &self.witnesses {
            let h = family.get(w.member).ok_or("witness member out of range")?;
            if w.obstacle.pattern != h.induced_subgraph(&w.block) {
                return Err("witness obstacle is not stated on its block".into());
            }
            w.obstacle.validate()?;
        }
        for e in &self.sentinel_table {
            let h = family.get(e.member).ok_or("entry member out of range")?;
            let hj = family.get(e.sentinel).ok_or("sentinel out of range")?;
            if e.sentinel == e.member {
                return Err("a member cannot be its own sentinel".into());
            }
            if e.rep.base != h.induced_subgraph(&e.block) || e.rep.cactus != *hj {
                return Err("sentinel representation refers to the wrong graphs".into());
            }
            e.rep.validate()?;
            let local = |v: usize| e.block.binary_search(&v).map_err(|_| "vertex outside block".to_string());
            for &s in &e.s_prime {
                if e.rep.role_count(local(s)?) > 1 {
                    return Err(format!("role {s} of S' is used more than once"));
                }
            }
        }
        Ok(())
    }
}

/// Decides a finite family. For every member, every obstacle of each of its
/// 2-blocks and every S' ⊂ S with |S'| = |S| - 2, some other member must be a
/// sentinel. Stops at the first uncovered triple.
pub fn family_testable(family: &[Graph]) -> Result<TestabilityVerdict, CharacterizeError> {
    if family.len() > MAX_FAMILY_SIZE {
        return Err(CharacterizeError::FamilyTooLarge(family.len()));
    }
    let per_member: Vec<_> = family.iter().map(block_obstacles).collect::<Result<_, _>>()?;
    let mut table = Vec::new();
    for (i, blocks) in per_member.into_iter().enumerate() {
        for (block, obs_list) in blocks {
            for obs in obs_list {
                for s_prime in subsets_of_size(&obs.s_set, obs.r().saturating_sub(2)) {
                    let mut hit = None;
                    for (j, hj) in family.iter().enumerate() {
                        if j == i {
                            continue;
                        }
                        if let (true, Some(rep)) = is_sentinel(hj, &obs.pattern, &obs, &s_prime)? {
                            hit = Some((j, rep));
                            break;
                        }
                    }
                    match hit {
                        Some((j, rep)) => table.push(SentinelEntry {
                            member: i,
                            block: block.clone(),
                            s_set: obs.s_set.iter().map(|&s| block[s]).collect(),
                            s_prime: s_prime.iter().map(|&s| block[s]).collect(),
                            sentinel: j,
                            rep,
                        }),
                        None => {
                            return Ok(TestabilityVerdict {
                                testable: false,
                                witnesses: vec![Witness::new(i, &block, obs, Some(&s_prime))],
                                sentinel_table: Vec::new(),
                            })
                        }
                    }
                }
            }
        }
    }
    Ok(TestabilityVerdict {
        testable: true,
        witnesses: Vec::new(),
        sentinel_table: table,
    })
}

fn subsets_of_size(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let n = items.len();
    let mut out: Vec<Vec<usize>> = (0..1usize << n)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).map(|i| items[i]).collect())
        .collect();
    out.sort();
    out
}

/// Human-readable report. Pattern vertices print as letters `a`, `b`, ….
pub fn render_report(v: &TestabilityVerdict, names: &[String]) -> String {
    let name = |i: usize| names.get(i).cloned().unwrap_or_else(|| format!("#{i}"));
    let mut out = String::new();
    writeln!(out, "testable: {}", if v.testable { "yes" } else { "no" }).unwrap();
    for w in &v.witnesses {
        write!(
            out,
            "obstacle in {}: block {} separator {}",
            name(w.member),
            set_label(&w.block),
            set_label(&w.s_set)
        )
        .unwrap();
        if let Some(sp) = &w.s_prime {
            write!(out, " S'={} has no sentinel", set_label(sp)).unwrap();
        }
        out.push('\n');
    }
    for e in &v.sentinel_table {
        let roles: Vec<String> = e
            .rep
            .role_map
            .iter()
            .map(|&r| crate::patterns::vertex_label(e.block[r]))
            .collect();
        let l: Vec<usize> = e.rep.articulation_set.clone();
        writeln!(
            out,
            "sentinel for {} separator {} S'={}: {} (roles [{}], cut vertices {:?})",
            name(e.member),
            set_label(&e.s_set),
            set_label(&e.s_prime),
            name(e.sentinel),
            roles.join(","),
            l
        )
        .unwrap();
    }
    out
}
