mod common;

use degentest::characterize::{
    cactus_reps, family_testable, is_sentinel, is_testable, obstacles, render_report, CharacterizeError,
};
use degentest::graph::is_two_connected;
use degentest::patterns::named;
use degentest::Graph;
use proptest::prelude::*;

fn arb_connected(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
                let edges: Vec<_> = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e).collect();
                Graph::from_edges(n, &edges).unwrap()
            })
        })
        .prop_filter("connected", |g| g.is_connected())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn verdict_matches_brute_force(g in arb_connected(8)) {
        let v = is_testable(&g).unwrap();
        prop_assert_eq!(v.testable, common::brute_testable(&g));
        v.validate(std::slice::from_ref(&g)).unwrap();
    }

    #[test]
    fn obstacle_list_matches_brute_force(g in arb_connected(8)) {
        prop_assume!(is_two_connected(&g));
        let found: Vec<Vec<usize>> = obstacles(&g).unwrap().into_iter().map(|o| o.s_set).collect();
        prop_assert_eq!(found, common::brute_obstacles(&g));
    }

    /// Adding a member with no obstacles of its own keeps a testable
    /// family testable, and a family of such members is testable.
    #[test]
    fn adding_testable_members(a in arb_connected(5), b in arb_connected(5), c in arb_connected(5)) {
        let pair = [a.clone(), b.clone()];
        let before = family_testable(&pair).unwrap();
        before.validate(&pair).unwrap();
        let c_alone = is_testable(&c).unwrap().testable;
        let triple = [a.clone(), b.clone(), c];
        let after = family_testable(&triple).unwrap();
        after.validate(&triple).unwrap();
        if c_alone {
            prop_assert!(!before.testable || after.testable);
        }
        let members_ok = is_testable(&a).unwrap().testable && is_testable(&b).unwrap().testable;
        prop_assert!(!members_ok || before.testable);
    }
}

#[test]
fn c4_has_the_diagonal_obstacle() {
    let v = is_testable(&Graph::cycle(4)).unwrap();
    assert!(!v.testable);
    assert_eq!(v.witnesses[0].s_set, vec![0, 2]);
    let all: Vec<_> = obstacles(&Graph::cycle(4)).unwrap().into_iter().map(|o| o.s_set).collect();
    assert_eq!(all, vec![vec![0, 2], vec![1, 3]]);
}

#[test]
fn complete_graphs_and_trees_are_testable() {
    for k in 2..7 {
        assert!(obstacles(&Graph::complete(k)).unwrap().is_empty());
        assert!(is_testable(&Graph::complete(k)).unwrap().testable);
        assert!(is_testable(&Graph::path(k)).unwrap().testable);
    }
    assert!(is_testable(&Graph::cycle(5)).unwrap().testable == common::brute_testable(&Graph::cycle(5)));
}

#[test]
fn star_rescues_c4_and_k23_needs_more() {
    let fam = vec![Graph::cycle(4), named("ST10").unwrap()];
    let v = family_testable(&fam).unwrap();
    assert!(v.testable);
    assert!(v.sentinel_table.iter().all(|e| e.sentinel == 1));
    v.validate(&fam).unwrap();
    let report = render_report(&v, &["C4".into(), "ST10".into()]);
    assert!(report.starts_with("testable: yes"));
    assert!(report.contains("ST10"));

    let k23 = Graph::complete_bipartite(2, 3);
    assert!(!family_testable(std::slice::from_ref(&k23)).unwrap().testable);
}

#[test]
fn sentinel_checks_role_multiplicity() {
    // S = {2,3,4} in K_{2,3}; S' = {2} must be used at most once.
    let k23 = Graph::complete_bipartite(2, 3);
    let obs = obstacles(&k23).unwrap().into_iter().find(|o| o.s_set == vec![2, 3, 4]).unwrap();
    let (ok, rep) = is_sentinel(&Graph::star(4), &k23, &obs, &[2]).unwrap();
    if ok {
        let rep = rep.unwrap();
        rep.validate().unwrap();
        assert!(rep.role_count(2) <= 1);
    }
    assert_eq!(is_sentinel(&Graph::star(4), &k23, &obs, &[2, 3, 4]), Err(CharacterizeError::BadSPrime));
}

#[test]
fn cactus_reps_validate() {
    let c4 = Graph::cycle(4);
    let obs = obstacles(&c4).unwrap().remove(0);
    for h in [Graph::star(3), Graph::path(3), Graph::star(6)] {
        let reps = cactus_reps(&h, &c4, &obs, 5).unwrap();
        assert!(!reps.is_empty());
        for r in reps {
            r.validate().unwrap();
        }
    }
    assert!(cactus_reps(&Graph::complete(3), &c4, &obs, 1).unwrap().is_empty());
}

#[test]
fn errors_on_bad_input() {
    assert_eq!(obstacles(&Graph::path(3)), Err(CharacterizeError::NotTwoConnected));
    assert_eq!(is_testable(&Graph::empty(2)).unwrap_err(), CharacterizeError::DisconnectedPattern);
    assert!(matches!(is_testable(&Graph::path(13)), Err(CharacterizeError::PatternTooLarge(13))));
    let many = vec![Graph::cycle(4); 17];
    assert!(matches!(family_testable(&many), Err(CharacterizeError::FamilyTooLarge(17))));
}
