mod common;

use assumekit::fair::{
    ass_red, assume_fair_win, is_fair_sufficient, is_live, locally_minimal_fair,
    oracle_assume_fair, NoFairReason,
};
use assumekit::oracles::min_fair_subset_exhaustive;
use assumekit::safety::{assume_safe_transform, compute_safety_assumption};
use assumekit::{fixtures, solve, EdgeSet, Objective, Owner};
use proptest::prelude::*;

fn es(g: &assumekit::GameGraph, pairs: &[(&str, &str)]) -> EdgeSet {
    pairs.iter().map(|(s, t)| g.resolve_edge(s, t).unwrap()).collect()
}

#[test]
fn fixture_values() {
    let (g, obj) = fixtures::buchi_loop();
    let p = obj.priorities(g.len()).unwrap();
    let ba = es(&g, &[("b", "a")]);
    assert_eq!(g.ids_of(&assume_fair_win(&g, &p, &ba).unwrap().0), ["a", "b"]);
    assert!(is_fair_sufficient(&g, &p, &ba, 0).unwrap());
    assert!(!is_fair_sufficient(&g, &p, &EdgeSet::new(), 0).unwrap());
    assert!(is_live(&g, &p, 0));
    let lm = locally_minimal_fair(&g, &p, 0).unwrap().unwrap();
    assert_eq!(lm.edges, ba);

    let (g, obj) = fixtures::pipe();
    let p = obj.priorities(g.len()).unwrap();
    let ba = es(&g, &[("b", "a")]);
    assert!(assume_fair_win(&g, &p, &ba).unwrap().0.is_clear());
    assert!(!is_live(&g, &p, 0));
    assert_eq!(locally_minimal_fair(&g, &p, 0).unwrap(), Err(NoFairReason::NotLive));

    let r = ass_red(&g, &ba, &p).unwrap();
    assert_eq!(r.game.len(), 4);
    assert_eq!(r.game.owner(1), Owner::Prob);
    assert_eq!(r.game.id(3), "b~");
    assert_eq!(r.game.succ(1), [0, 3]);
    assert_eq!(r.game.succ(3), [0, 2]);
    assert_eq!(r.priority.get(3), 1);

    let sa = compute_safety_assumption(&g, &obj).unwrap();
    let (h, obj2) = assume_safe_transform(&g, &obj, &sa.edges).unwrap();
    let ph = obj2.priorities(h.len()).unwrap();
    assert!(is_live(&h, &ph, 0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn reduction_matches_oracle(seed in 0u64..1_000_000) {
        let g = common::small_game(seed, 4, 0.0);
        let p = g.priorities().unwrap();
        let fair = common::random_fair(&g, seed);
        let (win, _) = assume_fair_win(&g, &p, &fair).unwrap();
        for s in 0..g.len() {
            prop_assert_eq!(win.contains(s), oracle_assume_fair(&g, &p, &fair, s).unwrap(), "state {}", s);
        }
        // fairness only adds winning plays
        let plain = solve(&g, &Objective::Parity(p.clone())).unwrap().win1;
        prop_assert!(plain.is_subset(&win));
    }

    #[test]
    fn monotone_in_fair_edges(seed in 0u64..1_000_000, mask in any::<u64>()) {
        let g = common::small_game(seed, 4, 0.0);
        let p = g.priorities().unwrap();
        let fair = common::random_fair(&g, seed);
        let sub: EdgeSet = fair.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, &e)| e).collect();
        let (big, _) = assume_fair_win(&g, &p, &fair).unwrap();
        let (small, _) = assume_fair_win(&g, &p, &sub).unwrap();
        prop_assert!(small.is_subset(&big));
    }

    #[test]
    fn local_minimum_is_local(seed in 0u64..1_000_000) {
        let g = common::small_game(seed, 4, 0.0);
        let p = g.priorities().unwrap();
        for s in 0..g.len() {
            if let Ok(lm) = locally_minimal_fair(&g, &p, s).unwrap() {
                prop_assert!(is_fair_sufficient(&g, &p, &lm.edges, s).unwrap());
                for e in &lm.edges {
                    let mut less = lm.edges.clone();
                    less.remove(e);
                    prop_assert!(!is_fair_sufficient(&g, &p, &less, s).unwrap());
                }
                if let Ok(Some(min)) = min_fair_subset_exhaustive(&g, &p, s, lm.edges.len()) {
                    prop_assert!(min.len() <= lm.edges.len());
                }
            }
        }
    }

    #[test]
    fn live_buchi_has_assumption(seed in 0u64..1_000_000) {
        let g = common::small_game(seed, 2, 0.0);
        let p = g.priorities().unwrap();
        for s in 0..g.len() {
            let r = locally_minimal_fair(&g, &p, s).unwrap();
            prop_assert_eq!(r.is_ok(), is_live(&g, &p, s));
        }
    }
}
