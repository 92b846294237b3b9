mod common;

use degentest::characterize::{cactus_reps, obstacles};
use degentest::instances::{disjoint_copies_instance, yes_instance, Fraction, YesStyle};
use degentest::oracle::{
    bounded_bfs, cactus_budget, cactus_embedding_tester, canonical_tester, default_samples, hub_assembly_tester,
    hub_budget, OracleError, OracleHandle, TesterConfig,
};
use degentest::Graph;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Any rejection names a real appearance of the host, and no run spends
    /// more than its closed-form bound.
    #[test]
    fn rejections_are_real_and_budgets_hold(gseed in any::<u64>(), n in 4usize..30, p in 0.05f64..0.5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(gseed);
        let host = common::random_graph(n, p, &mut rng);
        let c4 = Graph::cycle(4);
        let cfg = TesterConfig::new(4, 2, 3, vec![Graph::complete(3), c4.clone()]).with_samples(4);

        let mut handle = OracleHandle::new(&host, seed);
        let v = canonical_tester(&mut handle, &cfg, seed ^ 1).unwrap();
        prop_assert!(v.queries_used() <= cfg.canonical_budget());
        prop_assert_eq!(v.queries_used(), handle.query_count());
        if let Some((i, app)) = v.witness() {
            prop_assert!(!v.accept());
            prop_assert!(app.is_valid(&cfg.witness_family[*i], &host));
        }

        let obs = obstacles(&c4).unwrap().remove(0);
        let mut handle = OracleHandle::new(&host, seed);
        let v = hub_assembly_tester(&mut handle, &c4, &obs, &cfg, seed ^ 2).unwrap();
        prop_assert!(v.queries_used() <= hub_budget(&cfg, obs.r()));
        if let Some((i, app)) = v.witness() {
            prop_assert_eq!(*i, 0);
            prop_assert!(app.is_valid(&c4, &host));
        }

        let rep = cactus_reps(&Graph::star(3), &c4, &obs, 1).unwrap().remove(0);
        let mut handle = OracleHandle::new(&host, seed);
        let v = cactus_embedding_tester(&mut handle, &rep, &cfg, seed ^ 3).unwrap();
        prop_assert!(v.queries_used() <= cactus_budget(&cfg, &rep));
        if let Some((_, app)) = v.witness() {
            prop_assert!(app.is_valid(&rep.cactus, &host));
        }
    }

    #[test]
    fn bfs_sees_only_real_edges(gseed in any::<u64>(), n in 1usize..40, t in 1usize..4, s in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(gseed);
        let host = common::random_graph(n, 0.15, &mut rng);
        let mut handle = OracleHandle::new(&host, gseed);
        let e = bounded_bfs(&mut handle, 0, t, s, 2).unwrap();
        e.validate(&host).map_err(TestCaseError::fail)?;
        let edges = common::edge_set(&host);
        prop_assert!(e.edges.iter().all(|x| edges.contains(x)));
        prop_assert!(handle.query_count() <= TesterConfig::new(1, t, 1, vec![]).with_samples(s).bfs_budget());
    }
}

#[test]
fn all_testers_accept_free_hosts() {
    let c4 = Graph::cycle(4);
    let obs = obstacles(&c4).unwrap().remove(0);
    let rep = cactus_reps(&Graph::star(3), &c4, &obs, 1).unwrap().remove(0);
    let cfg = TesterConfig::new(16, 2, 4, vec![c4.clone()]).with_samples(8);
    for style in [YesStyle::Forest, YesStyle::BoundedDegreeRandom] {
        let host_c4 = yes_instance(std::slice::from_ref(&c4), 2000, style, 7).unwrap().graph;
        let host_cactus = yes_instance(std::slice::from_ref(&rep.cactus), 2000, style, 7).unwrap().graph;
        for trial in 0..40u64 {
            let mut h = OracleHandle::new(&host_c4, trial);
            assert!(canonical_tester(&mut h, &cfg, trial).unwrap().accept());
            let mut h = OracleHandle::new(&host_c4, trial);
            assert!(hub_assembly_tester(&mut h, &c4, &obs, &cfg, trial).unwrap().accept());
            let mut h = OracleHandle::new(&host_cactus, trial);
            assert!(cactus_embedding_tester(&mut h, &rep, &cfg, trial).unwrap().accept());
        }
    }
}

#[test]
fn canonical_tester_finds_dense_triangles() {
    let bundle = disjoint_copies_instance(&Graph::complete(3), 3000, Fraction::new(1, 2), 0).unwrap();
    let cfg = TesterConfig::new(32, 2, 2, vec![Graph::complete(3)]).with_samples(8);
    let rejects = (0..50u64)
        .filter(|&i| !canonical_tester(&mut OracleHandle::new(&bundle.graph, i), &cfg, i).unwrap().accept())
        .count();
    assert!(rejects >= 45, "{rejects}");
}

#[test]
fn budget_cuts_the_run_short() {
    let host = Graph::complete(30);
    let cfg = TesterConfig::new(50, 2, 4, vec![Graph::cycle(4)]).with_samples(2);
    let mut h = OracleHandle::with_budget(&host, 0, 3);
    let v = canonical_tester(&mut h, &cfg, 0).unwrap();
    assert!(v.queries_used() <= 3);
    assert_eq!(h.query(0), Err(OracleError::BudgetExhausted));
}

#[test]
fn configs_are_checked() {
    let host = Graph::complete(3);
    let bad = TesterConfig::new(1, 1, 1, vec![]).with_samples(0);
    assert!(matches!(
        canonical_tester(&mut OracleHandle::new(&host, 0), &bad, 0),
        Err(OracleError::InvalidConfig(_))
    ));
    assert!(matches!(
        bounded_bfs(&mut OracleHandle::new(&host, 0), 7, 1, 1, 1),
        Err(OracleError::VertexOutOfRange { vertex: 7, n: 3 })
    ));
    let c4 = Graph::cycle(4);
    let obs = obstacles(&Graph::complete_bipartite(2, 3)).unwrap().remove(0);
    let cfg = TesterConfig::new(1, 1, 1, vec![]);
    assert!(hub_assembly_tester(&mut OracleHandle::new(&host, 0), &c4, &obs, &cfg, 0).is_err());
    assert_eq!(default_samples(8, 3, 0.1), 96);
}
