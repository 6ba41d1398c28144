//! Exponential-time reference implementations, for tests on small games.
//!
//! These deliberately avoid the solvers: winning is decided by enumerating
//! positional strategies and inspecting the cycles of the resulting graphs.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::fair::assume_fair_win;
use crate::game::{
    parity_form, Edge, EdgeSet, GameGraph, MemorylessStrategy, Objective, Owner, Player, Priorities,
    StateSet,
};
use crate::graph::Arena;
use crate::stochastic::{for_each_strategy, strategy_count, ORACLE_LIMIT};
use crate::synthesis::SynthesisGame;

/// Largest number of player-2 edges for subset enumeration.
pub const SUBSET_GUARD: usize = 16;

/// For each state, whether it can reach a cycle whose least priority has
/// the given parity.
fn reaches_cycle(succ: &[Vec<usize>], prio: &[u32], odd: bool) -> Vec<bool> {
    let n = succ.len();
    let d = prio.iter().copied().max().unwrap_or(0);
    let mut core = vec![false; n];
    for m in (0..=d).filter(|m| (m % 2 == 1) == odd) {
        let mut h = DiGraph::<usize, ()>::new();
        let mut node = vec![None; n];
        for s in (0..n).filter(|&s| prio[s] >= m) {
            node[s] = Some(h.add_node(s));
        }
        for s in 0..n {
            for &t in &succ[s] {
                if let (Some(a), Some(b)) = (node[s], node[t]) {
                    h.add_edge(a, b, ());
                }
            }
        }
        for c in tarjan_scc(&h) {
            let nontrivial = c.len() > 1 || h.contains_edge(c[0], c[0]);
            if nontrivial && c.iter().any(|&v| prio[h[v]] == m) {
                for v in c {
                    core[h[v]] = true;
                }
            }
        }
    }
    // backward closure
    let mut pred = vec![Vec::new(); n];
    for s in 0..n {
        for &t in &succ[s] {
            pred[t].push(s);
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&s| core[s]).collect();
    while let Some(t) = stack.pop() {
        for &s in &pred[t] {
            if !core[s] {
                core[s] = true;
                stack.push(s);
            }
        }
    }
    core
}

fn restricted(g: &GameGraph, owner: Owner, choice: &[Option<usize>]) -> Vec<Vec<usize>> {
    (0..g.len())
        .map(|s| {
            if g.owner(s) == owner {
                vec![choice[s].expect("choice for every owned state")]
            } else {
                g.succ(s).to_vec()
            }
        })
        .collect()
}

fn guard(g: &GameGraph, owner: Owner) -> Result<()> {
    let count = strategy_count(g, owner);
    if count > ORACLE_LIMIT {
        return Err(Error::GuardExceeded(format!("{count} positional strategies")));
    }
    Ok(())
}

/// Player-1 sure-winning set of a deterministic parity game: `s` wins iff
/// some positional player-1 strategy leaves no reachable cycle with odd
/// least priority.
pub fn brute_win1(g: &GameGraph, p: &Priorities) -> Result<StateSet> {
    g.ensure_deterministic()?;
    guard(g, Owner::P1)?;
    let mut win = g.empty_set();
    for_each_strategy(g, Owner::P1, |alpha| {
        let bad = reaches_cycle(&restricted(g, Owner::P1, alpha), &p.0, true);
        win.extend((0..g.len()).filter(|&s| !bad[s]));
    });
    Ok(win)
}

/// Player-2 sure-winning set, dually.
pub fn brute_win2(g: &GameGraph, p: &Priorities) -> Result<StateSet> {
    g.ensure_deterministic()?;
    guard(g, Owner::P2)?;
    let mut win = g.empty_set();
    for_each_strategy(g, Owner::P2, |beta| {
        let good = reaches_cycle(&restricted(g, Owner::P2, beta), &p.0, false);
        win.extend((0..g.len()).filter(|&s| !good[s]));
    });
    Ok(win)
}

/// States from which a fixed positional strategy of `player` wins against
/// every opponent behaviour. Unset choices count as losing for the owner.
pub fn strategy_wins(g: &GameGraph, p: &Priorities, player: Player, strat: &MemorylessStrategy) -> StateSet {
    let owner = match player {
        Player::P1 => Owner::P1,
        Player::P2 => Owner::P2,
    };
    let mut succ: Vec<Vec<usize>> = Vec::with_capacity(g.len());
    let mut undefined = vec![false; g.len()];
    for s in 0..g.len() {
        if g.owner(s) == owner {
            match strat.get(s).filter(|&t| g.has_edge(s, t)) {
                Some(t) => succ.push(vec![t]),
                None => {
                    undefined[s] = true;
                    succ.push(g.succ(s).to_vec());
                }
            }
        } else {
            succ.push(g.succ(s).to_vec());
        }
    }
    let mut bad = reaches_cycle(&succ, &p.0, player == Player::P1);
    // reaching an undefined choice also loses
    let mut stack: Vec<usize> = (0..g.len()).filter(|&s| undefined[s]).collect();
    for &s in &stack {
        bad[s] = true;
    }
    let mut pred = vec![Vec::new(); g.len()];
    for (s, ts) in succ.iter().enumerate() {
        for &t in ts {
            pred[t].push(s);
        }
    }
    while let Some(t) = stack.pop() {
        for &s in &pred[t] {
            if !bad[s] {
                bad[s] = true;
                stack.push(s);
            }
        }
    }
    g.set_of((0..g.len()).filter(|&s| !bad[s]))
}

/// [`brute_win1`] for any objective, via its parity form.
pub fn brute_win1_objective(g: &GameGraph, obj: &Objective) -> Result<StateSet> {
    let (h, p) = parity_form(g, obj)?;
    brute_win1(&h, &p)
}

/// States from which some play satisfies the objective.
pub fn brute_cooperative(g: &GameGraph, obj: &Objective) -> Result<StateSet> {
    let (h, p) = parity_form(g, obj)?;
    let succ: Vec<Vec<usize>> = (0..h.len()).map(|s| h.succ(s).to_vec()).collect();
    let good = reaches_cycle(&succ, &p.0, false);
    Ok(g.set_of((0..g.len()).filter(|&s| good[s])))
}

/// Whether player 1 can keep every play from `s` inside `w` unless it takes
/// an edge of `cand`, by a naive greatest fixpoint: a state survives if it
/// is in `w` and its owner can (player 1) or must (player 2) continue along
/// a `cand` edge or to a surviving state.
pub fn brute_safe_sufficient(g: &GameGraph, w: &StateSet, cand: &EdgeSet, s: usize) -> Result<bool> {
    g.ensure_deterministic()?;
    let mut alive: Vec<bool> = (0..g.len()).map(|u| w.contains(u)).collect();
    loop {
        let mut changed = false;
        for u in 0..g.len() {
            if !alive[u] {
                continue;
            }
            let mut ok = g.succ(u).iter().map(|&v| cand.contains(&(u, v)) || alive[v]);
            let keep = match g.owner(u) {
                Owner::P1 => ok.any(|b| b),
                _ => ok.all(|b| b),
            };
            if !keep {
                alive[u] = false;
                changed = true;
            }
        }
        if !changed {
            return Ok(alive[s]);
        }
    }
}

/// Whether some play from `s` takes an edge of `cand` and stays in `w`
/// forever.
pub fn brute_restrictive(g: &GameGraph, w: &StateSet, cand: &EdgeSet, s: usize) -> bool {
    if !w.contains(s) {
        return false;
    }
    let inside = |from: usize| {
        let mut seen = vec![false; g.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(u) = stack.pop() {
            for &v in g.succ(u) {
                if w.contains(v) && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    };
    let from_s = inside(s);
    // a state can stay in `w` forever iff it reaches a cycle inside `w`
    let succ: Vec<Vec<usize>> = (0..g.len())
        .map(|u| {
            if w.contains(u) {
                g.succ(u).iter().copied().filter(|&v| w.contains(v)).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let zeros = vec![0; g.len()];
    let forever = reaches_cycle(&succ, &zeros, false);
    cand.iter()
        .any(|&(u, v)| from_s[u] && w.contains(v) && g.has_edge(u, v) && forever[v])
}

fn subsets_by_size(pool: &[Edge], size: usize, mut f: impl FnMut(&EdgeSet) -> bool) -> bool {
    let n = pool.len();
    if size > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let set: EdgeSet = idx.iter().map(|&i| pool[i]).collect();
        if f(&set) {
            return true;
        }
        let mut i = size;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] < n - size + i {
                idx[i] += 1;
                for k in i + 1..size {
                    idx[k] = idx[k - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All minimal sets of player-2 edges that are safe-sufficient and
/// non-restrictive for every state of the cooperative winning set.
pub fn minimal_safety_assumptions(g: &GameGraph, obj: &Objective) -> Result<Vec<EdgeSet>> {
    g.ensure_deterministic()?;
    let pool: Vec<Edge> = g.player_edges(Player::P2).into_iter().collect();
    let w = brute_cooperative(g, obj)?;
    let empty = EdgeSet::new();
    let empty_ok = w.ones().try_fold(true, |acc, s| {
        Ok::<_, Error>(acc && brute_safe_sufficient(g, &w, &empty, s)?)
    })?;
    if empty_ok {
        // every set contains the empty set
        return Ok(vec![empty]);
    }
    if pool.len() > SUBSET_GUARD {
        return Err(Error::GuardExceeded(format!("{} player-2 edges", pool.len())));
    }
    let mut good: Vec<EdgeSet> = Vec::new();
    let mut err = None;
    for size in 0..=pool.len() {
        subsets_by_size(&pool, size, |x| {
            if good.iter().any(|m| m.is_subset(x)) {
                return false;
            }
            let ok = w.ones().all(|s| {
                !brute_restrictive(g, &w, x, s)
                    && brute_safe_sufficient(g, &w, x, s).unwrap_or_else(|e| {
                        err = Some(e);
                        false
                    })
            });
            if ok {
                good.push(x.clone());
            }
            false
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(good)
}

/// Smallest sufficient fair set from `pool` with at most `k` edges, by
/// size-ascending enumeration in pool order.
pub fn min_fair_subset_in<A: Arena>(
    a: &A,
    p: &Priorities,
    s: usize,
    k: usize,
    pool: &[Edge],
) -> Result<Option<EdgeSet>> {
    let mut found = None;
    let mut err = None;
    for size in 0..=k.min(pool.len()) {
        let hit = subsets_by_size(pool, size, |x| match assume_fair_win(a, p, x) {
            Ok((w, _)) if w.contains(s) => {
                found = Some(x.clone());
                true
            }
            Ok(_) => false,
            Err(e) => {
                err = Some(e);
                true
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        if hit {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Smallest sufficient fair set with at most `k` edges, over all player-2
/// edges in ascending order.
pub fn min_fair_subset_exhaustive(
    g: &GameGraph,
    p: &Priorities,
    s: usize,
    k: usize,
) -> Result<Option<EdgeSet>> {
    g.ensure_deterministic()?;
    let pool: Vec<Edge> = g.player_edges(Player::P2).into_iter().collect();
    if pool.len() > SUBSET_GUARD {
        return Err(Error::GuardExceeded(format!("{} player-2 edges", pool.len())));
    }
    min_fair_subset_in(g, p, s, k, &pool)
}

/// Player-2 edges whose source has a choice. A fair edge from a source
/// with a single successor is satisfied by every play, so only these
/// edges can matter in a fair assumption.
pub fn fair_pool(g: &GameGraph) -> Vec<Edge> {
    g.player_edges(Player::P2)
        .into_iter()
        .filter(|&(s, _)| g.succ(s).len() > 1)
        .collect()
}

/// Whether some lasso play from the initial state, with at most `max_len`
/// states in stem and cycle together, avoids `forbidden` and takes every
/// fair edge whose source recurs.
pub fn brute_lasso_nonempty(sg: &SynthesisGame, forbidden: &EdgeSet, fair: &EdgeSet, max_len: usize) -> bool {
    let g = &sg.graph;
    let mut path = vec![sg.initial];
    fn go(
        g: &GameGraph,
        path: &mut Vec<usize>,
        forbidden: &EdgeSet,
        fair: &EdgeSet,
        max_len: usize,
    ) -> bool {
        let last = *path.last().unwrap();
        // close a cycle back to any earlier position
        for start in 0..path.len() {
            if !g.has_edge(last, path[start]) || forbidden.contains(&(last, path[start])) {
                continue;
            }
            let cycle = &path[start..];
            let mut rec_edges: EdgeSet = cycle.windows(2).map(|w| (w[0], w[1])).collect();
            rec_edges.insert((last, path[start]));
            if fair
                .iter()
                .all(|&(u, v)| !cycle.contains(&u) || rec_edges.contains(&(u, v)))
            {
                return true;
            }
        }
        if path.len() == max_len {
            return false;
        }
        for &t in g.succ(last) {
            if forbidden.contains(&(last, t)) {
                continue;
            }
            path.push(t);
            if go(g, path, forbidden, fair, max_len) {
                return true;
            }
            path.pop();
        }
        false
    }
    go(g, &mut path, forbidden, fair, max_len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixture_values() {
        let (g, obj) = fixtures::buchi_loop();
        let p = obj.priorities(g.len()).unwrap();
        assert_eq!(brute_win1(&g, &p).unwrap().count_ones(..), 0);
        assert_eq!(brute_win2(&g, &p).unwrap().count_ones(..), 2);
        assert_eq!(
            min_fair_subset_exhaustive(&g, &p, 0, 1).unwrap(),
            Some([(1, 0)].into_iter().collect())
        );
        let (g, obj) = fixtures::pipe();
        let p = obj.priorities(g.len()).unwrap();
        assert_eq!(min_fair_subset_exhaustive(&g, &p, 0, 4).unwrap(), None);
        assert_eq!(g.ids_of(&brute_cooperative(&g, &obj).unwrap()), vec!["a", "b"]);
    }

    #[test]
    fn safety_fixture_has_unique_minimum() {
        let (g, obj) = fixtures::safety_escape();
        let m = minimal_safety_assumptions(&g, &obj).unwrap();
        assert_eq!(m, vec![[(1, 2)].into_iter().collect::<EdgeSet>()]);
        let w = g.set_of([0, 1]);
        assert!(brute_restrictive(&g, &w, &[(1, 0)].into_iter().collect(), 0));
    }

    #[test]
    fn subset_order() {
        let pool = [(0, 1), (0, 2), (1, 2)];
        let mut seen = Vec::new();
        subsets_by_size(&pool, 2, |x| {
            seen.push(x.clone());
            false
        });
        assert_eq!(seen.len(), 3);
        assert_eq!(seen[0], [(0, 1), (0, 2)].into_iter().collect());
    }
}
