use super::tester::{ExploredUnion, TesterConfig, Verdict};
use super::{bounded_bfs, OracleError, OracleHandle};
use crate::characterize::Obstacle;
use crate::graph::Graph;
use crate::rng::{seeded_rng, uniform_index};

/// Looks for `h1` by way of a shared hub. Each attempt explores from a
/// random start, picks candidate hubs among what it saw (vertices that
/// already look heavy first, then unqueried discoveries, at most `|S|` of
/// them), probes each candidate with `s` queries and explores from every
/// distinct neighbor returned. Rejects once the explored union holds an
/// `h1` appearance; the verdict's witness index is always 0.
pub fn hub_assembly_tester(
    handle: &mut OracleHandle<'_>,
    h1: &Graph,
    obs: &Obstacle,
    cfg: &TesterConfig,
    seed: u64,
) -> Result<Verdict, OracleError> {
    cfg.validate()?;
    if obs.pattern != *h1 {
        return Err(OracleError::InvalidConfig("obstacle does not belong to the pattern".into()));
    }
    if h1.vertex_count() > crate::graph::MAX_PATTERN_VERTICES {
        return Err(OracleError::InvalidConfig("pattern exceeds the size cap".into()));
    }
    let start = handle.query_count();
    let n = handle.vertex_count();
    if n == 0 {
        return Ok(Verdict::accepted(0));
    }
    let family = std::slice::from_ref(h1);
    let mut rng = seeded_rng(seed);
    let mut union = ExploredUnion::default();
    let (t, s, h) = (cfg.depth, cfg.samples, cfg.heavy_threshold);
    'attempts: for _ in 0..cfg.q_prime {
        if handle.exhausted() {
            break;
        }
        let v = uniform_index(&mut rng, n);
        let e = bounded_bfs(handle, v, t, s, h)?;
        union.add_explored(&e);
        if let Some(found) = union.find_any(family) {
            return Ok(reject(found, h1, &union, handle.query_count() - start));
        }
        let heavy = e.heavy_looking();
        let candidates: Vec<usize> = heavy
            .iter()
            .copied()
            .chain(e.vertices.iter().copied().filter(|x| !e.distinct_neighbors.contains_key(x)))
            .take(obs.r())
            .collect();
        for root in candidates {
            let mut seen: Vec<usize> = Vec::new();
            for _ in 0..s {
                match handle.query(root) {
                    Ok(Some(w)) => {
                        union.add_edge(root, w);
                        if !seen.contains(&w) {
                            seen.push(w);
                        }
                    }
                    Ok(None) => {}
                    Err(OracleError::BudgetExhausted) => break 'attempts,
                    Err(err) => return Err(err),
                }
            }
            if seen.len() <= h && !heavy.contains(&root) {
                continue;
            }
            for y in seen {
                let ey = bounded_bfs(handle, y, t, s, h)?;
                union.add_explored(&ey);
                if ey.truncated {
                    break 'attempts;
                }
            }
            if let Some(found) = union.find_any(family) {
                return Ok(reject(found, h1, &union, handle.query_count() - start));
            }
        }
    }
    match union.find_any(family) {
        Some(found) => Ok(reject(found, h1, &union, handle.query_count() - start)),
        None => Ok(Verdict::accepted(handle.query_count() - start)),
    }
}

fn reject(found: (usize, crate::graph::Appearance), h1: &Graph, union: &ExploredUnion, used: u64) -> Verdict {
    Verdict::rejected(found.0, h1, found.1, union, used)
}

/// Closed-form query bound for `hub_assembly_tester` with `r` hub candidates.
pub fn hub_budget(cfg: &TesterConfig, r: usize) -> u64 {
    let bfs = cfg.bfs_budget();
    let s = cfg.samples as u64;
    let per_root = s.saturating_add(s.saturating_mul(bfs));
    (cfg.q_prime as u64).saturating_mul(bfs.saturating_add((r as u64).saturating_mul(per_root)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characterize::obstacles;

    #[test]
    fn finds_c4_through_a_hub() {
        // Two hubs joined through 40 middle vertices.
        let mut edges = Vec::new();
        for i in 2..42 {
            edges.push((0, i));
            edges.push((1, i));
        }
        let g = Graph::from_edges(42, &edges).unwrap();
        let c4 = Graph::cycle(4);
        let obs = obstacles(&c4).unwrap().remove(0);
        let cfg = TesterConfig::new(3, 1, 2, vec![]).with_samples(4);
        let mut rejects = 0;
        for seed in 0..50 {
            let mut handle = OracleHandle::new(&g, seed);
            let v = hub_assembly_tester(&mut handle, &c4, &obs, &cfg, seed).unwrap();
            assert!(v.queries_used() <= hub_budget(&cfg, 2));
            if !v.accept() {
                rejects += 1;
                assert!(v.witness().unwrap().1.is_valid(&c4, &g));
            }
        }
        assert!(rejects >= 45, "{rejects}");
    }

    #[test]
    fn never_rejects_a_c4_free_host() {
        let g = Graph::star(30);
        let c4 = Graph::cycle(4);
        let obs = obstacles(&c4).unwrap().remove(0);
        let cfg = TesterConfig::new(4, 2, 2, vec![]).with_samples(6);
        for seed in 0..30 {
            let mut handle = OracleHandle::new(&g, seed);
            assert!(hub_assembly_tester(&mut handle, &c4, &obs, &cfg, seed).unwrap().accept());
        }
    }
}
