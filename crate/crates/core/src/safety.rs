//! Safety assumptions: player-2 edges the environment promises never to
//! take.
//!
//! The minimal non-restrictive safety assumption forbids exactly the
//! player-2 edges that leave the cooperative winning set `Win12`. Player 1
//! then wins `AssumeSafe(E_s, Φ)`: either some forbidden edge is taken, or
//! the play stays in `Win12` forever.

use crate::error::{Error, Result};
use crate::game::{EdgeSet, GameBuilder, GameGraph, Letter, Objective, Owner, Player, StateSet};
use crate::graph::{reachable, Arena, Skeleton};
use crate::solve::{attractor, cooperative_win_objective, solve};

/// A set of forbidden player-2 edges together with the region it protects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyAssumption {
    pub edges: EdgeSet,
    /// The cooperative winning set of the original objective.
    pub safe_region: StateSet,
}

/// Player-2 edges from `Win12(obj)` to its complement.
pub fn compute_safety_assumption(g: &GameGraph, obj: &Objective) -> Result<SafetyAssumption> {
    g.ensure_deterministic()?;
    let w = cooperative_win_objective(g, obj)?;
    let edges = g
        .player_edges(Player::P2)
        .into_iter()
        .filter(|&(s, t)| w.contains(s) && !w.contains(t))
        .collect();
    Ok(SafetyAssumption {
        edges,
        safe_region: w,
    })
}

fn check_player2_edges(g: &GameGraph, edges: &EdgeSet) -> Result<()> {
    for &(s, t) in edges {
        if s >= g.len() || t >= g.len() || !g.has_edge(s, t) {
            return Err(Error::Precondition(format!("({s}, {t}) is not an edge")));
        }
        if g.owner(s) != Owner::P2 {
            return Err(Error::Precondition(format!(
                "edge ({}, {}) does not leave a player-2 state",
                g.id(s),
                g.id(t)
            )));
        }
    }
    Ok(())
}

/// The game with every edge of `e_s` redirected to a fresh player-1 sink
/// `top` (priority 0, self-loop), which is winning for player 1. The
/// objective is extended accordingly; original indices are preserved and
/// the sink is the last state.
pub fn assume_safe_transform(
    g: &GameGraph,
    obj: &Objective,
    e_s: &EdgeSet,
) -> Result<(GameGraph, Objective)> {
    g.ensure_deterministic()?;
    obj.check_size(g.len())?;
    check_player2_edges(g, e_s)?;
    let mut b = GameBuilder::new();
    for st in g.states() {
        b.add_state(st.id.clone(), st.owner, st.priority, st.label.clone());
    }
    let top = b.add_state(g.fresh_id("top"), Owner::P1, Some(0), Letter::empty());
    for (s, t) in g.edges() {
        if e_s.contains(&(s, t)) {
            b.add_edge(s, top);
        } else {
            b.add_edge(s, t);
        }
    }
    b.add_edge(top, top);
    b.initial = g.initial();
    let h = b.build()?;
    let grow = |t: &StateSet| {
        let mut t2 = h.set_of(t.ones());
        t2.insert(top);
        t2
    };
    let obj2 = match obj {
        Objective::Reach(t) => Objective::Reach(grow(t)),
        Objective::Safe(t) => Objective::Safe(grow(t)),
        Objective::Buchi(t) => Objective::Buchi(grow(t)),
        Objective::CoBuchi(t) => Objective::CoBuchi(grow(t)),
        Objective::Parity(p) => {
            let mut q = p.0.clone();
            q.push(0);
            Objective::Parity(crate::game::Priorities(q))
        }
    };
    Ok((h, obj2))
}

/// Whether player 1 sure-wins `AssumeSafe(cand, Φ)` from `s`, where the
/// safety part is `Safe(Win12(Φ))` of the original game.
pub fn is_safe_sufficient(g: &GameGraph, obj: &Objective, cand: &EdgeSet, s: usize) -> Result<bool> {
    check_state(g, s)?;
    Ok(safe_sufficient_set(g, obj, cand)?.contains(s))
}

/// All states from which `cand` is safe-sufficient.
pub fn safe_sufficient_set(g: &GameGraph, obj: &Objective, cand: &EdgeSet) -> Result<StateSet> {
    let w = cooperative_win_objective(g, obj)?;
    safe_sufficient_set_in(g, &w, cand)
}

pub(crate) fn safe_sufficient_set_in(g: &GameGraph, w: &StateSet, cand: &EdgeSet) -> Result<StateSet> {
    let (h, _) = assume_safe_transform(g, &Objective::Safe(w.clone()), cand)?;
    let mut safe = h.set_of(w.ones());
    safe.insert(h.len() - 1);
    let r = solve(&h, &Objective::Safe(safe))?;
    Ok(g.set_of(r.win1.ones().filter(|&u| u < g.len())))
}

/// Whether some cooperative play from `s` takes an edge of `cand` and stays
/// in `Win12(Φ)` forever.
pub fn is_restrictive(g: &GameGraph, obj: &Objective, cand: &EdgeSet, s: usize) -> Result<bool> {
    check_state(g, s)?;
    let w = cooperative_win_objective(g, obj)?;
    Ok(is_restrictive_in(g, &w, cand, s))
}

pub(crate) fn is_restrictive_in(g: &GameGraph, w: &StateSet, cand: &EdgeSet, s: usize) -> bool {
    if !w.contains(s) {
        return false;
    }
    // Win12 is closed under cooperative continuation: every state in it has
    // a successor in it, so reaching a cand edge into it is enough.
    let r = reachable(g, &g.set_of([s]), w, |_, _| true);
    cand.iter().any(|&(u, v)| r.contains(u) && w.contains(v))
}

/// Whether player 2 can avoid every edge of `e_s` forever from `s`.
pub fn env_can_avoid(g: &GameGraph, e_s: &EdgeSet, s: usize) -> Result<bool> {
    check_state(g, s)?;
    check_player2_edges(g, e_s)?;
    Ok(!env_forced_set(g, e_s).contains(s))
}

/// States from which player 1 can force player 2 into a state whose every
/// move is forbidden.
pub(crate) fn env_forced_set<A: Arena>(g: &A, e_s: &EdgeSet) -> StateSet {
    let mut stuck = g.empty_set();
    let succ: Vec<Vec<usize>> = (0..g.len())
        .map(|u| {
            let ts: Vec<usize> = g.succ(u).iter().copied().filter(|&t| !e_s.contains(&(u, t))).collect();
            if ts.is_empty() {
                stuck.insert(u);
                vec![u]
            } else {
                ts
            }
        })
        .collect();
    let sk = Skeleton::new((0..g.len()).map(|u| g.owner(u)).collect(), succ);
    attractor(&sk, Player::P1, &stuck)
}

fn check_state(g: &GameGraph, s: usize) -> Result<()> {
    if s >= g.len() {
        return Err(Error::UnknownState(s.to_string()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn escape() -> (GameGraph, Objective) {
        let mut b = GameBuilder::new();
        let a = b.add_state("a", Owner::P1, Some(0), Letter::empty());
        let bb = b.add_state("b", Owner::P2, Some(0), Letter::empty());
        let c = b.add_state("c", Owner::P1, Some(1), Letter::empty());
        b.add_edge(a, bb).add_edge(bb, a).add_edge(bb, c).add_edge(c, c);
        let g = b.build().unwrap();
        let obj = Objective::Safe(g.set_of([0, 1]));
        (g, obj)
    }

    #[test]
    fn boundary_edge() {
        let (g, obj) = escape();
        let sa = compute_safety_assumption(&g, &obj).unwrap();
        assert_eq!(sa.edges, [(1, 2)].into_iter().collect());
        assert!(is_safe_sufficient(&g, &obj, &sa.edges, 0).unwrap());
        assert!(!is_safe_sufficient(&g, &obj, &EdgeSet::new(), 0).unwrap());
        assert!(!is_restrictive(&g, &obj, &sa.edges, 0).unwrap());
        assert!(is_restrictive(&g, &obj, &[(1, 0)].into_iter().collect(), 0).unwrap());
        assert!(env_can_avoid(&g, &sa.edges, 0).unwrap());
    }

    #[test]
    fn transform_adds_sink() {
        let (g, obj) = escape();
        let es: EdgeSet = [(1, 2)].into_iter().collect();
        let (h, obj2) = assume_safe_transform(&g, &obj, &es).unwrap();
        assert_eq!(h.len(), 4);
        assert_eq!(h.succ(1), &[0, 3]);
        let r = solve(&h, &obj2).unwrap();
        assert_eq!(h.ids_of(&r.win1), vec!["a", "b", "top"]);
    }

    #[test]
    fn forced_forbidden_move() {
        let (g, _) = escape();
        let all: EdgeSet = [(1, 0), (1, 2)].into_iter().collect();
        assert!(!env_can_avoid(&g, &all, 0).unwrap());
        assert!(env_can_avoid(&g, &EdgeSet::new(), 0).unwrap());
    }
}
