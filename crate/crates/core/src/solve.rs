//! Sure-winning solvers for deterministic games: attractors, reachability,
//! safety, Büchi, co-Büchi and (Zielonka) parity, plus the cooperative
//! winning set.
//!
//! Strategies pick the successor with the smallest index among the valid
//! ones, which is the lexicographically smallest id on parsed graphs.

use crate::error::{Error, Result};
use crate::game::{GameGraph, MemorylessStrategy, Objective, Player, Priorities, StateSet};
use crate::graph::{backward_reachable, sccs, Arena};

/// Outcome of a sure-winning analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub win1: StateSet,
    pub win2: StateSet,
    /// Player-1 choices on player-1 states of `win1`.
    pub strat1: MemorylessStrategy,
    /// Player-2 choices on player-2 states of `win2`.
    pub strat2: MemorylessStrategy,
}

impl SolveResult {
    pub fn win(&self, p: Player) -> &StateSet {
        match p {
            Player::P1 => &self.win1,
            Player::P2 => &self.win2,
        }
    }

    pub fn strategy(&self, p: Player) -> &MemorylessStrategy {
        match p {
            Player::P1 => &self.strat1,
            Player::P2 => &self.strat2,
        }
    }

    fn from_choices<A: Arena>(g: &A, win1: StateSet, choice: Vec<Option<usize>>) -> SolveResult {
        let mut win2 = win1.clone();
        win2.toggle_range(..);
        let mut strat1 = MemorylessStrategy::new(Player::P1, g.len());
        let mut strat2 = MemorylessStrategy::new(Player::P2, g.len());
        for (s, c) in choice.into_iter().enumerate() {
            let Some(t) = c else { continue };
            if win1.contains(s) && g.owner(s).is(Player::P1) {
                strat1.choice[s] = Some(t);
            } else if win2.contains(s) && g.owner(s).is(Player::P2) {
                strat2.choice[s] = Some(t);
            }
        }
        SolveResult {
            win1,
            win2,
            strat1,
            strat2,
        }
    }
}

const NO_RANK: u32 = u32::MAX;

/// Attractor inside the subgame `within`, returning the set and the BFS
/// rank of each member (targets have rank 0).
fn attractor_ranked<A: Arena>(g: &A,
    player: Player,
    target: &StateSet,
    within: &StateSet,
) -> (StateSet, Vec<u32>) {
    let n = g.len();
    let mut rank = vec![NO_RANK; n];
    let mut set = g.empty_set();
    let mut count: Vec<u32> = vec![0; n];
    let mut queue = std::collections::VecDeque::new();
    for s in target.ones() {
        if within.contains(s) {
            set.insert(s);
            rank[s] = 0;
            queue.push_back(s);
        }
    }
    for s in within.ones() {
        if !g.owner(s).is(player) {
            count[s] = g.succ(s).iter().filter(|&&t| within.contains(t)).count() as u32;
        }
    }
    while let Some(t) = queue.pop_front() {
        for &s in g.pred(t) {
            if !within.contains(s) || set.contains(s) {
                continue;
            }
            let add = if g.owner(s).is(player) {
                true
            } else {
                count[s] -= 1;
                count[s] == 0
            };
            if add {
                set.insert(s);
                rank[s] = rank[t] + 1;
                queue.push_back(s);
            }
        }
    }
    (set, rank)
}

/// Writes attractor choices for `player` states of the attractor that are
/// not targets: the smallest successor with a smaller rank.
fn attractor_choices<A: Arena>(g: &A,
    player: Player,
    set: &StateSet,
    rank: &[u32],
    choice: &mut [Option<usize>],
) {
    for s in set.ones() {
        if rank[s] == 0 || !g.owner(s).is(player) {
            continue;
        }
        choice[s] = g.succ(s).iter().copied().find(|&t| rank[t] < rank[s]);
    }
}

/// For owned states of `region`, picks the smallest successor in `region`
/// unless a choice is already present.
fn stay_choices<A: Arena>(g: &A, player: Player, region: &StateSet, choice: &mut [Option<usize>]) {
    for s in region.ones() {
        if g.owner(s).is(player) && choice[s].is_none() {
            choice[s] = g.succ(s).iter().copied().find(|&t| region.contains(t));
        }
    }
}

/// The attractor of `target` for `player`: the least superset of `target`
/// closed under "player state with a successor inside" and "opponent state
/// with all successors inside". Probabilistic states count as opponent
/// states.
pub fn attractor<A: Arena>(g: &A, player: Player, target: &StateSet) -> StateSet {
    attractor_ranked(g, player, target, &g.full_set()).0
}

/// Attractor together with a positional strategy reaching `target`.
pub fn attractor_strategy<A: Arena>(g: &A,
    player: Player,
    target: &StateSet,
) -> (StateSet, MemorylessStrategy) {
    let (set, rank) = attractor_ranked(g, player, target, &g.full_set());
    let mut strat = MemorylessStrategy::new(player, g.len());
    attractor_choices(g, player, &set, &rank, &mut strat.choice);
    (set, strat)
}

/// Solves a deterministic game for player 1's objective.
pub fn solve(g: &GameGraph, obj: &Objective) -> Result<SolveResult> {
    g.ensure_deterministic()?;
    obj.check_size(g.len())?;
    Ok(match obj {
        Objective::Reach(t) => solve_reach(g, Player::P1, t),
        Objective::Safe(t) => {
            let mut bad = t.clone();
            bad.toggle_range(..);
            solve_reach(g, Player::P2, &bad)
        }
        Objective::Buchi(t) => solve_buchi(g, Player::P1, t),
        Objective::CoBuchi(t) => {
            let mut rest = t.clone();
            rest.toggle_range(..);
            solve_buchi(g, Player::P2, &rest)
        }
        Objective::Parity(p) => zielonka(g, p),
    })
}

/// Solves parity with `p`; probabilistic states are rejected.
pub fn solve_parity(g: &GameGraph, p: &Priorities) -> Result<SolveResult> {
    solve(g, &Objective::Parity(p.clone()))
}

/// `player` wants to reach `target`.
fn solve_reach<A: Arena>(g: &A, player: Player, target: &StateSet) -> SolveResult {
    let (set, rank) = attractor_ranked(g, player, target, &g.full_set());
    let mut choice = vec![None; g.len()];
    attractor_choices(g, player, &set, &rank, &mut choice);
    let mut rest = set.clone();
    rest.toggle_range(..);
    stay_choices(g, player.opponent(), &rest, &mut choice);
    // targets owned by the reacher: any move, the objective is met
    for s in target.ones() {
        if g.owner(s).is(player) && choice[s].is_none() {
            choice[s] = Some(g.succ(s)[0]);
        }
    }
    finish(g, player, set, choice)
}

/// `player` wants to visit `target` infinitely often.
fn solve_buchi<A: Arena>(g: &A, player: Player, target: &StateSet) -> SolveResult {
    let opp = player.opponent();
    let mut u = g.full_set();
    let mut choice = vec![None; g.len()];
    loop {
        let mut f = target.clone();
        f.intersect_with(&u);
        let (r, r_rank) = attractor_ranked(g, player, &f, &u);
        let mut trap = u.clone();
        trap.difference_with(&r);
        if trap.count_ones(..) == 0 {
            attractor_choices(g, player, &r, &r_rank, &mut choice);
            stay_choices(g, player, &f, &mut choice);
            break;
        }
        let (a, a_rank) = attractor_ranked(g, opp, &trap, &u);
        attractor_choices(g, opp, &a, &a_rank, &mut choice);
        stay_choices(g, opp, &trap, &mut choice);
        u.difference_with(&a);
        if u.count_ones(..) == 0 {
            break;
        }
    }
    finish(g, player, u, choice)
}

fn finish<A: Arena>(g: &A, player: Player, win: StateSet, choice: Vec<Option<usize>>) -> SolveResult {
    match player {
        Player::P1 => SolveResult::from_choices(g, win, choice),
        Player::P2 => {
            let mut win1 = win;
            win1.toggle_range(..);
            SolveResult::from_choices(g, win1, choice)
        }
    }
}

/// Zielonka's recursive algorithm for min-parity games.
pub fn zielonka<A: Arena>(g: &A, p: &Priorities) -> SolveResult {
    let mut choice = vec![None; g.len()];
    let (w1, _) = zielonka_rec(g, p, g.full_set(), &mut choice);
    SolveResult::from_choices(g, w1, choice)
}

/// Returns (win1, win2) of the subgame `u`, writing winning choices.
fn zielonka_rec<A: Arena>(g: &A,
    p: &Priorities,
    u: StateSet,
    choice: &mut [Option<usize>],
) -> (StateSet, StateSet) {
    let Some(min) = u.ones().map(|s| p.get(s)).min() else {
        return (g.empty_set(), g.empty_set());
    };
    let i = Player::of_priority(min);
    let top = g.set_of(u.ones().filter(|&s| p.get(s) == min));
    let (a, a_rank) = attractor_ranked(g, i, &top, &u);
    let mut rest = u.clone();
    rest.difference_with(&a);
    let (w1, w2) = zielonka_rec(g, p, rest, choice);
    let (wi, wo) = match i {
        Player::P1 => (w1, w2),
        Player::P2 => (w2, w1),
    };
    if wo.count_ones(..) == 0 {
        attractor_choices(g, i, &a, &a_rank, choice);
        for s in top.ones() {
            if g.owner(s).is(i) {
                choice[s] = g.succ(s).iter().copied().find(|&t| u.contains(t));
            }
        }
        let _ = wi;
        return match i {
            Player::P1 => (u, g.empty_set()),
            Player::P2 => (g.empty_set(), u),
        };
    }
    let (b, b_rank) = attractor_ranked(g, i.opponent(), &wo, &u);
    attractor_choices(g, i.opponent(), &b, &b_rank, choice);
    let mut rest = u;
    rest.difference_with(&b);
    let (v1, v2) = zielonka_rec(g, p, rest, choice);
    match i {
        Player::P1 => {
            let mut v2 = v2;
            v2.union_with(&b);
            (v1, v2)
        }
        Player::P2 => {
            let mut v1 = v1;
            v1.union_with(&b);
            (v1, v2)
        }
    }
}

/// States from which the two players together can produce a play that
/// satisfies the parity condition: those that can reach a cycle whose
/// least priority is even.
pub fn cooperative_win<A: Arena>(g: &A, p: &Priorities) -> StateSet {
    let mut good = g.empty_set();
    for k in (0..p.d()).step_by(2) {
        let within = g.set_of((0..g.len()).filter(|&s| p.get(s) >= k));
        for c in sccs(g, &within, |_, _| true) {
            if c.nontrivial && c.states.iter().any(|&s| p.get(s) == k) {
                good.extend(c.states.iter().copied());
            }
        }
    }
    backward_reachable(g, &good, &g.full_set())
}

/// Cooperative winning set of any objective; reachability and safety are
/// evaluated directly.
pub fn cooperative_win_objective(g: &GameGraph, obj: &Objective) -> Result<StateSet> {
    obj.check_size(g.len())?;
    match obj {
        Objective::Reach(t) => Ok(backward_reachable(g, t, &g.full_set())),
        Objective::Safe(t) => {
            // states that can stay inside the safe set forever
            let mut good = g.empty_set();
            for c in sccs(g, t, |_, _| true) {
                if c.nontrivial {
                    good.extend(c.states.iter().copied());
                }
            }
            Ok(backward_reachable(g, &good, t))
        }
        _ => {
            let p = obj
                .priorities(g.len())
                .ok_or_else(|| Error::UnsupportedObjective(obj.kind().into()))?;
            Ok(cooperative_win(g, &p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{GameBuilder, Letter, Owner};

    fn escape() -> GameGraph {
        let mut b = GameBuilder::new();
        let a = b.add_state("a", Owner::P1, Some(0), Letter::empty());
        let bb = b.add_state("b", Owner::P2, Some(0), Letter::empty());
        let c = b.add_state("c", Owner::P1, Some(1), Letter::empty());
        b.add_edge(a, bb).add_edge(bb, a).add_edge(bb, c).add_edge(c, c);
        b.build().unwrap()
    }

    #[test]
    fn attractor_basics() {
        let g = escape();
        let c = g.set_of([2]);
        // a has b as its only successor, so it is forced into the attractor
        assert_eq!(attractor(&g, Player::P2, &c).ones().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(attractor(&g, Player::P1, &c).ones().collect::<Vec<_>>(), vec![2]);
        assert_eq!(attractor(&g, Player::P1, &g.empty_set()).count_ones(..), 0);
        assert_eq!(attractor(&g, Player::P1, &g.full_set()), g.full_set());
    }

    #[test]
    fn safety_escape() {
        let g = escape();
        let r = solve(&g, &Objective::Safe(g.set_of([0, 1]))).unwrap();
        assert_eq!(r.win1.count_ones(..), 0);
        assert_eq!(r.strat2.get(1), Some(2));
    }

    #[test]
    fn buchi_and_parity_agree() {
        let g = escape();
        let f = g.set_of([0]);
        let b = solve(&g, &Objective::Buchi(f.clone())).unwrap();
        let z = zielonka(&g, &Priorities::buchi(3, &f));
        assert_eq!(b.win1, z.win1);
        let cb = solve(&g, &Objective::CoBuchi(g.set_of([2]))).unwrap();
        assert_eq!(cb.win1, g.set_of([2]));
    }

    #[test]
    fn all_even_wins() {
        let g = escape();
        let r = zielonka(&g, &Priorities(vec![0, 2, 4]));
        assert_eq!(r.win1, g.full_set());
        r.strat1.validate(&g).unwrap();
    }

    #[test]
    fn cooperative() {
        let g = escape();
        let p = Priorities(vec![0, 1, 1]);
        assert_eq!(cooperative_win(&g, &p).ones().collect::<Vec<_>>(), vec![0, 1]);
    }
}
