//! Strongly-fair assumptions on player-2 edges.
//!
//! A set `E_l` of player-2 edges is read as: whenever the source of an edge
//! in `E_l` is visited infinitely often, the edge itself is taken infinitely
//! often. Player 1 wins `AssumeFair(E_l, Φ)` on plays that violate this or
//! satisfy `Φ`. Winning is decided by turning fair sources into
//! probabilistic states and solving for almost-sure winning.

use crate::error::{Error, Result};
use crate::game::{
    EdgeSet, GameBuilder, GameGraph, MemorylessStrategy, Owner, Player, Priorities, StateSet,
};
use crate::graph::{sccs, Arena, Skeleton};
use crate::solve::{attractor, cooperative_win};
use crate::stochastic::almost_sure_parity;

/// A fair assumption and the states that win under it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FairAssumption {
    pub edges: EdgeSet,
    pub winning_from: StateSet,
}

/// Which moves the copy `s~` of a fair source offers player 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CopyMoves {
    /// All of `E(s)`. Player 2 may keep choosing any edge, as long as the
    /// fair ones also recur.
    #[default]
    All,
    /// Only the non-fair edges `E(s) \ E_l`. Kept for comparison; it
    /// overstates player 1's power when player 2 can satisfy fairness by
    /// always taking one fair edge.
    NonFairOnly,
}

/// Output of [`ass_red`].
#[derive(Debug, Clone)]
pub struct Reduced {
    pub game: GameGraph,
    pub priority: Priorities,
    /// `copy_of[i]` is the original state of appended state `n + i`.
    pub copy_of: Vec<usize>,
}

pub(crate) fn check_fair_edges<A: Arena>(a: &A, fair: &EdgeSet) -> Result<()> {
    for &(s, t) in fair {
        if s >= a.len() || t >= a.len() || !a.has_edge(s, t) {
            return Err(Error::Precondition(format!("({s}, {t}) is not an edge")));
        }
        if a.owner(s) != Owner::P2 {
            return Err(Error::Precondition(format!(
                "fair edge ({s}, {t}) does not leave a player-2 state"
            )));
        }
    }
    Ok(())
}

/// Index-level reduction: returns the probabilistic arena, its priorities
/// and the originals of the appended copies.
pub(crate) fn ass_red_skeleton<A: Arena>(
    a: &A,
    fair: &EdgeSet,
    p: &Priorities,
    mode: CopyMoves,
) -> (Skeleton, Priorities, Vec<usize>) {
    let n = a.len();
    let mut owner: Vec<Owner> = (0..n).map(|s| a.owner(s)).collect();
    let mut succ: Vec<Vec<usize>> = (0..n).map(|s| a.succ(s).to_vec()).collect();
    let mut prio = p.0.clone();
    let mut copy_of = Vec::new();
    let mut it = fair.iter().peekable();
    while let Some(&&(s, _)) = it.peek() {
        let mut fair_succ = Vec::new();
        while let Some(&&(s2, t)) = it.peek() {
            if s2 != s {
                break;
            }
            fair_succ.push(t);
            it.next();
        }
        owner[s] = Owner::Prob;
        if fair_succ.len() == a.succ(s).len() {
            continue;
        }
        let copy = owner.len();
        owner.push(Owner::P2);
        succ.push(match mode {
            CopyMoves::All => a.succ(s).to_vec(),
            CopyMoves::NonFairOnly => a
                .succ(s)
                .iter()
                .copied()
                .filter(|t| !fair_succ.contains(t))
                .collect(),
        });
        prio.push(p.get(s));
        copy_of.push(s);
        fair_succ.push(copy);
        succ[s] = fair_succ;
    }
    (Skeleton::new(owner, succ), Priorities(prio), copy_of)
}

/// The reduction of a deterministic game with fair edges to a probabilistic
/// game. Every fair source becomes probabilistic, uniform over its fair
/// successors and, unless all its edges are fair, a fresh player-2 copy
/// `s~` with the same priority.
pub fn ass_red(g: &GameGraph, fair: &EdgeSet, p: &Priorities) -> Result<Reduced> {
    ass_red_with(g, fair, p, CopyMoves::All)
}

pub fn ass_red_with(
    g: &GameGraph,
    fair: &EdgeSet,
    p: &Priorities,
    mode: CopyMoves,
) -> Result<Reduced> {
    g.ensure_deterministic()?;
    check_priorities(g, p)?;
    check_fair_edges(g, fair)?;
    let (sk, prio, copy_of) = ass_red_skeleton(g, fair, p, mode);
    let mut b = GameBuilder::new();
    for s in 0..sk.len() {
        if s < g.len() {
            let st = g.state(s);
            b.add_state(st.id.clone(), sk.owner(s), Some(prio.get(s)), st.label.clone());
        } else {
            let orig = copy_of[s - g.len()];
            b.add_state(
                g.fresh_id(&format!("{}~", g.id(orig))),
                Owner::P2,
                Some(prio.get(s)),
                g.label(orig).clone(),
            );
        }
        for &t in sk.succ(s) {
            b.add_edge(s, t);
        }
    }
    b.initial = g.initial();
    Ok(Reduced {
        game: b.build()?,
        priority: prio,
        copy_of,
    })
}

fn check_priorities<A: Arena>(a: &A, p: &Priorities) -> Result<()> {
    if p.len() != a.len() {
        return Err(Error::validation("priorities", "one priority per state is required"));
    }
    Ok(())
}

/// States from which player 1 sure-wins `AssumeFair(fair, Parity(p))`,
/// with a positional winning strategy on player-1 states.
pub fn assume_fair_win<A: Arena>(
    a: &A,
    p: &Priorities,
    fair: &EdgeSet,
) -> Result<(StateSet, MemorylessStrategy)> {
    assume_fair_win_with(a, p, fair, CopyMoves::All)
}

pub fn assume_fair_win_with<A: Arena>(
    a: &A,
    p: &Priorities,
    fair: &EdgeSet,
    mode: CopyMoves,
) -> Result<(StateSet, MemorylessStrategy)> {
    if (0..a.len()).any(|s| a.owner(s) == Owner::Prob) {
        return Err(Error::Precondition("expected a deterministic game".into()));
    }
    check_priorities(a, p)?;
    check_fair_edges(a, fair)?;
    let n = a.len();
    let (sk, prio, _) = ass_red_skeleton(a, fair, p, mode);
    let (win, strat) = almost_sure_parity(&sk, &prio);
    let mut out = a.empty_set();
    out.extend(win.ones().take_while(|&s| s < n));
    let mut alpha = MemorylessStrategy::new(Player::P1, n);
    for s in out.ones() {
        if a.owner(s) == Owner::P1 {
            alpha.choice[s] = strat.get(s);
        }
    }
    Ok((out, alpha))
}

/// Whether `s` wins `AssumeFair(fair, Parity(p))`.
pub fn is_fair_sufficient<A: Arena>(a: &A, p: &Priorities, fair: &EdgeSet, s: usize) -> Result<bool> {
    Ok(assume_fair_win(a, p, fair)?.0.contains(s))
}

/// Player 1 can keep the play inside the cooperative winning set forever.
pub fn is_live<A: Arena>(a: &A, p: &Priorities, s: usize) -> bool {
    live_set(a, p).contains(s)
}

/// States from which player 1 sure-wins `Safe(Win12(p))`.
pub fn live_set<A: Arena>(a: &A, p: &Priorities) -> StateSet {
    let mut bad = cooperative_win(a, p);
    bad.toggle_range(..);
    let mut live = attractor(a, Player::P2, &bad);
    live.toggle_range(..);
    live
}

/// Why [`locally_minimal_fair`] found no assumption.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoFairReason {
    /// Player 1 cannot stay in the cooperative winning set; a safety
    /// assumption is needed first.
    NotLive,
    /// Live, but even all player-2 edges as fair edges do not suffice.
    NoFairSubset,
}

/// A locally-minimal sufficient fair set for `s` among `candidates`.
///
/// Starts from all candidates and drops, in ascending edge order, every
/// edge whose removal keeps `s` winning. Because sufficiency is monotone in
/// the edge set, a single pass already yields a set from which no single
/// edge can be removed.
pub fn locally_minimal_fair_among<A: Arena>(
    a: &A,
    p: &Priorities,
    s: usize,
    candidates: &EdgeSet,
) -> Result<std::result::Result<FairAssumption, NoFairReason>> {
    let (win, _) = assume_fair_win(a, p, candidates)?;
    if !win.contains(s) {
        let reason = if is_live(a, p, s) {
            NoFairReason::NoFairSubset
        } else {
            NoFairReason::NotLive
        };
        return Ok(Err(reason));
    }
    let mut current = candidates.clone();
    let mut winning_from = win;
    for &e in candidates {
        current.remove(&e);
        let (w, _) = assume_fair_win(a, p, &current)?;
        if w.contains(s) {
            winning_from = w;
        } else {
            current.insert(e);
        }
    }
    Ok(Ok(FairAssumption {
        edges: current,
        winning_from,
    }))
}

/// [`locally_minimal_fair_among`] with all player-2 edges as candidates.
pub fn locally_minimal_fair(
    g: &GameGraph,
    p: &Priorities,
    s: usize,
) -> Result<std::result::Result<FairAssumption, NoFairReason>> {
    g.ensure_deterministic()?;
    locally_minimal_fair_among(g, p, s, &g.player_edges(Player::P2))
}

/// Brute-force check of `AssumeFair(fair, Parity(p))` from `s`: some
/// positional player-1 strategy leaves player 2 no reachable cycle that is
/// fair (every fair edge leaving the cycle's states is on the cycle) and has
/// an odd least priority. Cycles are closed walks, so it suffices to look
/// for strongly connected edge sets.
pub fn oracle_assume_fair(
    g: &GameGraph,
    p: &Priorities,
    fair: &EdgeSet,
    s: usize,
) -> Result<bool> {
    g.ensure_deterministic()?;
    check_priorities(g, p)?;
    check_fair_edges(g, fair)?;
    let count = crate::stochastic::strategy_count(g, Owner::P1);
    if count > crate::stochastic::ORACLE_LIMIT {
        return Err(Error::GuardExceeded(format!("{count} player-1 strategies")));
    }
    let mut found = false;
    crate::stochastic::for_each_strategy(g, Owner::P1, |alpha| {
        if found {
            return;
        }
        let keep = |u: usize, t: usize| alpha[u].map_or(true, |c| c == t);
        let reach = crate::graph::reachable(g, &g.set_of([s]), &g.full_set(), keep);
        if !has_bad_fair_cycle(g, p, fair, &reach, &keep) {
            found = true;
        }
    });
    Ok(found)
}

/// Is there a strongly connected edge set inside `within` (using edges
/// accepted by `keep`) whose least priority is odd and which contains every
/// fair edge leaving its states?
fn has_bad_fair_cycle<F>(
    g: &GameGraph,
    p: &Priorities,
    fair: &EdgeSet,
    within: &StateSet,
    keep: &F,
) -> bool
where
    F: Fn(usize, usize) -> bool,
{
    for m in (1..p.d()).step_by(2) {
        let mut region = g.set_of(within.ones().filter(|&u| p.get(u) >= m));
        // Remove states with a fair edge that cannot stay inside their
        // component until the components stabilise.
        loop {
            let comps = sccs(g, &region, keep);
            let mut comp_of = vec![usize::MAX; g.len()];
            for (i, c) in comps.iter().enumerate() {
                for &u in &c.states {
                    comp_of[u] = i;
                }
            }
            let mut changed = false;
            for &(u, t) in fair {
                if region.contains(u) && comp_of[u] != usize::MAX {
                    let inside = keep(u, t) && region.contains(t) && comp_of[t] == comp_of[u];
                    if !inside {
                        region.set(u, false);
                        changed = true;
                    }
                }
            }
            if !changed {
                if comps
                    .iter()
                    .any(|c| c.nontrivial && c.states.iter().any(|&u| p.get(u) == m))
                {
                    return true;
                }
                break;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Letter;

    /// a(P1,0) -> b ; b(P2,1) -> a, b
    fn buchi_loop() -> (GameGraph, Priorities) {
        let mut b = GameBuilder::new();
        let a = b.add_state("a", Owner::P1, Some(0), Letter::empty());
        let bb = b.add_state("b", Owner::P2, Some(1), Letter::empty());
        b.add_edge(a, bb).add_edge(bb, a).add_edge(bb, bb);
        (b.build().unwrap(), Priorities(vec![0, 1]))
    }

    #[test]
    fn fair_edge_back_to_a_suffices() {
        let (g, p) = buchi_loop();
        let fair: EdgeSet = [(1, 0)].into_iter().collect();
        let (w, _) = assume_fair_win(&g, &p, &fair).unwrap();
        assert_eq!(w, g.full_set());
        assert!(oracle_assume_fair(&g, &p, &fair, 0).unwrap());
        assert!(!oracle_assume_fair(&g, &p, &EdgeSet::new(), 0).unwrap());
    }

    #[test]
    fn reduction_shape() {
        let (g, p) = buchi_loop();
        let fair: EdgeSet = [(1, 0)].into_iter().collect();
        let r = ass_red(&g, &fair, &p).unwrap();
        assert_eq!(r.game.len(), 3);
        assert_eq!(r.game.owner(1), Owner::Prob);
        assert_eq!(r.game.id(2), "b~");
        assert_eq!(r.game.succ(2), &[0, 1]);
        let all: EdgeSet = [(1, 0), (1, 1)].into_iter().collect();
        assert_eq!(ass_red(&g, &all, &p).unwrap().game.len(), 2);
    }

    #[test]
    fn local_minimum() {
        let (g, p) = buchi_loop();
        let r = locally_minimal_fair(&g, &p, 0).unwrap().unwrap();
        assert_eq!(r.edges, [(1, 0)].into_iter().collect());
    }

    #[test]
    fn player1_edge_rejected() {
        let (g, p) = buchi_loop();
        let fair: EdgeSet = [(0, 1)].into_iter().collect();
        assert!(assume_fair_win(&g, &p, &fair).is_err());
    }
}
