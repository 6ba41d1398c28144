mod common;

use assumekit::fixtures;
use assumekit::stochastic::{
    almost_sure_parity, gadget_reduce, oracle_almost_sure, sure_parity_adversarial,
};
use assumekit::{GameBuilder, GameGraph, MemorylessStrategy, Owner};
use proptest::prelude::*;

/// The game with player-1 moves fixed by `alpha` where it is defined.
fn restrict(g: &GameGraph, alpha: &MemorylessStrategy) -> GameGraph {
    let mut b = GameBuilder::new();
    for st in g.states() {
        b.add_state(st.id.clone(), st.owner, st.priority, st.label.clone());
    }
    for (s, t) in g.edges() {
        let keep = g.owner(s) != Owner::P1 || alpha.get(s).map_or(true, |c| c == t);
        if keep {
            b.add_edge(s, t);
        }
    }
    b.build().unwrap()
}

#[test]
fn coin_fixtures() {
    let (g, obj) = fixtures::coin();
    let p = obj.priorities(g.len()).unwrap();
    assert_eq!(g.ids_of(&almost_sure_parity(&g, &p).0), ["v", "w", "x"]);
    assert_eq!(g.ids_of(&oracle_almost_sure(&g, &p).unwrap()), ["v", "w", "x"]);

    let (g, obj) = fixtures::coin_abs();
    let p = obj.priorities(g.len()).unwrap();
    assert_eq!(g.ids_of(&almost_sure_parity(&g, &p).0), ["g"]);
    assert_eq!(g.ids_of(&oracle_almost_sure(&g, &p).unwrap()), ["g"]);
    let gadget = gadget_reduce(&g, &p).unwrap();
    assert_eq!(gadget.game.len(), 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn gadget_matches_oracle(seed in 0u64..1_000_000) {
        let g = common::small_game(seed, 4, 0.35);
        let p = g.priorities().unwrap();
        let (win, alpha) = almost_sure_parity(&g, &p);
        prop_assert_eq!(&win, &oracle_almost_sure(&g, &p).unwrap());
        // the extracted strategy wins on its own
        let fixed = restrict(&g, &alpha.completed(&g));
        prop_assert!(win.is_subset(&oracle_almost_sure(&fixed, &p).unwrap()));
        prop_assert!(sure_parity_adversarial(&g, &p).is_subset(&win));
    }

    #[test]
    fn gadget_size_and_priorities(seed in 0u64..1_000_000) {
        let g = common::small_game(seed, 5, 0.5);
        let p = g.priorities().unwrap();
        let out = gadget_reduce(&g, &p).unwrap();
        let d = p.d() as usize;
        prop_assert!(out.game.len() <= g.len() * (d + 2));
        prop_assert!(out.priority.0.iter().all(|&x| x < p.d()));
        prop_assert!(out.game.is_deterministic());
        for s in 0..g.len() {
            prop_assert_eq!(out.game.id(s), g.id(s));
        }
    }
}
