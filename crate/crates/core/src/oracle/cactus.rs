use super::tester::{canonical_tester, ExploredUnion, TesterConfig, Verdict};
use super::{bounded_bfs, OracleError, OracleHandle};
use crate::characterize::{attachment_order, CactusRep};
use crate::graph::{Appearance, Graph};
use crate::rng::{seeded_rng, uniform_index};

/// Extra probe rounds allowed per petal before an attempt is abandoned.
const PETAL_RETRIES: usize = 2;

/// Builds an appearance of `rep.cactus` petal by petal. An attempt anchors
/// the first cut vertex at a vertex that looks heavy, then for each petal in
/// attachment order looks for a copy through the already embedded cut vertex
/// that avoids every vertex used so far, probing around that cut vertex when
/// the explored union has none. The attempt is abandoned when a petal cannot
/// be placed on fresh vertices. A representation without cut vertices is a
/// single petal and is handled by the canonical tester.
pub fn cactus_embedding_tester(
    handle: &mut OracleHandle<'_>,
    rep: &CactusRep,
    cfg: &TesterConfig,
    seed: u64,
) -> Result<Verdict, OracleError> {
    cfg.validate()?;
    rep.validate().map_err(OracleError::InvalidConfig)?;
    let h = &rep.cactus;
    if rep.articulation_set.is_empty() {
        let single = TesterConfig {
            witness_family: vec![h.clone()],
            ..cfg.clone()
        };
        return canonical_tester(handle, &single, seed);
    }
    let start = handle.query_count();
    let n = handle.vertex_count();
    if n == 0 {
        return Ok(Verdict::accepted(0));
    }
    let plan = Plan::new(h, &rep.articulation_set);
    let (t, s, hh) = (cfg.depth, cfg.samples, cfg.heavy_threshold);
    let mut rng = seeded_rng(seed);
    let mut union = ExploredUnion::default();

    for _ in 0..cfg.q_prime {
        if handle.exhausted() {
            break;
        }
        let v = uniform_index(&mut rng, n);
        let e = bounded_bfs(handle, v, t, s, hh)?;
        union.add_explored(&e);
        let mut anchor = e.heavy_looking().first().copied();
        if anchor.is_none() {
            let unqueried = e.vertices.iter().copied().filter(|x| !e.distinct_neighbors.contains_key(x));
            for x in unqueried.take(rep.s_set.len()) {
                match probe(handle, &mut union, x, s)? {
                    Some(seen) if seen.len() > hh => {
                        anchor = Some(x);
                        break;
                    }
                    Some(_) => {}
                    None => return Ok(Verdict::accepted(handle.query_count() - start)),
                }
            }
        }
        let Some(anchor) = anchor else { continue };

        let mut f = vec![usize::MAX; h.vertex_count()];
        f[plan.root] = anchor;
        let mut used = vec![anchor];
        let mut complete = true;
        'petals: for petal in &plan.petals {
            let fixed = [(petal.attach_local, f[petal.attach])];
            let mut found = union.find(&petal.graph, &fixed, &used);
            let mut retries = 0;
            while found.is_none() && retries < PETAL_RETRIES {
                retries += 1;
                let x = f[petal.attach];
                let Some(seen) = probe(handle, &mut union, x, s)? else {
                    complete = false;
                    break 'petals;
                };
                for y in seen {
                    if used.contains(&y) {
                        continue;
                    }
                    let ey = bounded_bfs(handle, y, t, s, hh)?;
                    union.add_explored(&ey);
                    if ey.truncated {
                        break;
                    }
                }
                found = union.find(&petal.graph, &fixed, &used);
            }
            let Some(app) = found else {
                complete = false;
                break;
            };
            for (a, &hv) in petal.vertices.iter().enumerate() {
                if hv != petal.attach {
                    f[hv] = app.mapping[a];
                    used.push(app.mapping[a]);
                }
            }
        }
        if complete {
            let app = Appearance::new(f);
            return Ok(Verdict::rejected(0, h, app, &union, handle.query_count() - start));
        }
    }
    Ok(Verdict::accepted(handle.query_count() - start))
}

/// `s` queries at `x`; the distinct neighbors returned, or `None` once the
/// budget runs out.
fn probe(
    handle: &mut OracleHandle<'_>,
    union: &mut ExploredUnion,
    x: usize,
    s: usize,
) -> Result<Option<Vec<usize>>, OracleError> {
    let mut seen = Vec::new();
    for _ in 0..s {
        match handle.query(x) {
            Ok(Some(w)) => {
                union.add_edge(x, w);
                if !seen.contains(&w) {
                    seen.push(w);
                }
            }
            Ok(None) => {}
            Err(OracleError::BudgetExhausted) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(seen))
}

struct PlannedPetal {
    /// Cactus vertices of the petal, sorted; local index = position.
    vertices: Vec<usize>,
    graph: Graph,
    /// Cactus vertex shared with earlier petals (the root cut vertex for the
    /// first petal).
    attach: usize,
    attach_local: usize,
}

struct Plan {
    root: usize,
    petals: Vec<PlannedPetal>,
}

impl Plan {
    fn new(h: &Graph, l: &[usize]) -> Self {
        let closures = attachment_order(h, l);
        let root = *closures[0]
            .iter()
            .find(|v| l.binary_search(v).is_ok())
            .expect("first petal touches a cut vertex");
        let mut placed = vec![false; h.vertex_count()];
        placed[root] = true;
        let petals = closures
            .into_iter()
            .map(|vertices| {
                let attach = *vertices
                    .iter()
                    .find(|&&v| placed[v])
                    .expect("petals attach to earlier ones");
                for &v in &vertices {
                    placed[v] = true;
                }
                let attach_local = vertices.binary_search(&attach).unwrap();
                let graph = h.induced_subgraph(&vertices);
                PlannedPetal {
                    vertices,
                    graph,
                    attach,
                    attach_local,
                }
            })
            .collect();
        Plan { root, petals }
    }
}

/// Closed-form query bound for `cactus_embedding_tester` on `rep`.
pub fn cactus_budget(cfg: &TesterConfig, rep: &CactusRep) -> u64 {
    let bfs = cfg.bfs_budget();
    let s = cfg.samples as u64;
    if rep.articulation_set.is_empty() {
        return cfg.canonical_budget();
    }
    let petals = crate::graph::s_components(&rep.cactus, &rep.articulation_set).len() as u64;
    let per_round = s.saturating_add(s.saturating_mul(bfs));
    let per_attempt = bfs
        .saturating_add((rep.s_set.len() as u64).saturating_mul(s))
        .saturating_add(petals.saturating_mul(PETAL_RETRIES as u64).saturating_mul(per_round));
    (cfg.q_prime as u64).saturating_mul(per_attempt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characterize::{cactus_reps, obstacles};

    fn star_rep() -> CactusRep {
        let c4 = Graph::cycle(4);
        let obs = obstacles(&c4).unwrap().remove(0);
        cactus_reps(&Graph::star(4), &c4, &obs, 1).unwrap().remove(0)
    }

    #[test]
    fn finds_star_at_a_hub() {
        let host = Graph::star(60);
        let rep = star_rep();
        let cfg = TesterConfig::new(3, 1, 3, vec![]).with_samples(8);
        for seed in 0..30 {
            let mut handle = OracleHandle::new(&host, seed);
            let v = cactus_embedding_tester(&mut handle, &rep, &cfg, seed).unwrap();
            assert!(v.queries_used() <= cactus_budget(&cfg, &rep));
            assert!(!v.accept());
            assert!(v.witness().unwrap().1.is_valid(&rep.cactus, &host));
        }
    }

    #[test]
    fn accepts_when_degrees_are_too_small() {
        let host = Graph::cycle(40);
        let rep = star_rep();
        let cfg = TesterConfig::new(5, 2, 3, vec![]).with_samples(8);
        for seed in 0..30 {
            let mut handle = OracleHandle::new(&host, seed);
            assert!(cactus_embedding_tester(&mut handle, &rep, &cfg, seed).unwrap().accept());
        }
    }
}
