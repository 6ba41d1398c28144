mod common;

use assumekit::oracles::{brute_cooperative, brute_restrictive, brute_safe_sufficient, minimal_safety_assumptions};
use assumekit::safety::{
    assume_safe_transform, compute_safety_assumption, env_can_avoid, is_restrictive,
    is_safe_sufficient,
};
use assumekit::{fixtures, solve, EdgeSet, Objective, Player};
use proptest::prelude::*;

#[test]
fn fixture_values() {
    let (g, obj) = fixtures::safety_escape();
    let sa = compute_safety_assumption(&g, &obj).unwrap();
    assert_eq!(g.edge_ids_of(&sa.edges), [("b".to_string(), "c".to_string())]);
    assert!(env_can_avoid(&g, &sa.edges, 0).unwrap());
    let ba: EdgeSet = [g.resolve_edge("b", "a").unwrap()].into_iter().collect();
    assert!(is_restrictive(&g, &obj, &ba, 0).unwrap());
    assert!(!is_restrictive(&g, &obj, &EdgeSet::new(), 0).unwrap());

    let (g, obj) = fixtures::buchi_loop();
    assert!(compute_safety_assumption(&g, &obj).unwrap().edges.is_empty());

    let (g, obj) = fixtures::pipe();
    let sa = compute_safety_assumption(&g, &obj).unwrap();
    let (h, obj2) = assume_safe_transform(&g, &obj, &sa.edges).unwrap();
    assert_eq!(h.len(), 4);
    assert!(solve(&h, &obj2).unwrap().win1.contains(3));
    let (h, _) = assume_safe_transform(&g, &obj, &EdgeSet::new()).unwrap();
    assert!(h.pred(3) == [3]);
}

#[test]
fn fixtures_have_unique_minimum() {
    for name in ["buchi_loop", "safety_escape", "pipe", "rcg", "safety_escape_synthesis"] {
        let doc = fixtures::by_name(name).unwrap();
        let obj = doc.objective.clone().unwrap();
        let sa = compute_safety_assumption(&doc.graph, &obj).unwrap();
        assert_eq!(minimal_safety_assumptions(&doc.graph, &obj).unwrap(), vec![sa.edges], "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn computed_assumption_is_unique_minimum(seed in 0u64..1_000_000) {
        let g = common::small_game(seed, 4, 0.0);
        let obj = Objective::Parity(g.priorities().unwrap());
        let sa = compute_safety_assumption(&g, &obj).unwrap();
        prop_assert_eq!(&sa.safe_region, &brute_cooperative(&g, &obj).unwrap());
        let minimal = minimal_safety_assumptions(&g, &obj).unwrap();
        prop_assert_eq!(minimal, vec![sa.edges.clone()]);
        for s in sa.safe_region.ones() {
            prop_assert!(is_safe_sufficient(&g, &obj, &sa.edges, s).unwrap());
            prop_assert!(!is_restrictive(&g, &obj, &sa.edges, s).unwrap());
            prop_assert!(env_can_avoid(&g, &sa.edges, s).unwrap());
        }
    }

    #[test]
    fn checks_agree_with_oracles(seed in 0u64..1_000_000, mask in any::<u32>()) {
        let g = common::small_game(seed, 4, 0.0);
        let obj = Objective::Parity(g.priorities().unwrap());
        let w = brute_cooperative(&g, &obj).unwrap();
        let cand: EdgeSet = g.player_edges(Player::P2).into_iter().enumerate()
            .filter(|(i, _)| mask >> (i % 32) & 1 == 1).map(|(_, e)| e).collect();
        for s in 0..g.len() {
            prop_assert_eq!(is_safe_sufficient(&g, &obj, &cand, s).unwrap(), brute_safe_sufficient(&g, &w, &cand, s).unwrap());
            prop_assert_eq!(is_restrictive(&g, &obj, &cand, s).unwrap(), brute_restrictive(&g, &w, &cand, s));
        }
    }
}
