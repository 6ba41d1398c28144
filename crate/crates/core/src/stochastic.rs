//! Almost-sure winning in probabilistic parity games.
//!
//! Each probabilistic state `v` is replaced by a deterministic gadget. At
//! the entry, player 1 claims an even priority `e <= p(v)`. Player 2 then
//! either accepts the claim, paying `e` and picking the successor,
//! or challenges it, paying `e + 1` and letting player 1 pick. Sure winning
//! in the gadget game coincides with almost-sure winning in the original
//! game on the original states.

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::{Error, Result};
use crate::game::{
    GameBuilder, GameGraph, Letter, MemorylessStrategy, Owner, Player, Priorities, StateSet,
};
use crate::graph::{Arena, Skeleton};
use crate::solve::zielonka;

/// Where a state of the gadget game comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GadgetRole {
    /// A non-probabilistic state copied verbatim.
    Original,
    /// A probabilistic state, now owned by player 1, choosing a claim.
    Entry,
    /// Player 2 decides whether to accept or challenge claim `e`; priority
    /// `e + 1`.
    Decide(u32),
    /// Claim `e` accepted: player 2 picks the successor; priority `e`.
    /// For `e = p(v)` the entry leads here directly.
    Accept(u32),
    /// Some claim was challenged: player 1 picks the successor; priority
    /// `p(v)`.
    Pick,
}

/// Result of [`gadget_reduce`].
#[derive(Debug, Clone)]
pub struct GadgetOutput {
    pub game: GameGraph,
    pub priority: Priorities,
    /// For every state of `game`: the originating state and its role.
    pub back: Vec<(usize, GadgetRole)>,
}

/// Index-level gadget construction; original indices are preserved and
/// every probabilistic state adds at most `d + 1` states.
pub(crate) fn gadget_skeleton<A: Arena>(
    a: &A,
    p: &Priorities,
) -> (Skeleton, Priorities, Vec<(usize, GadgetRole)>) {
    let n = a.len();
    let mut out = Grow {
        owner: (0..n).map(|s| a.owner(s)).collect(),
        succ: (0..n).map(|s| a.succ(s).to_vec()).collect(),
        prio: p.0.clone(),
        back: (0..n).map(|s| (s, GadgetRole::Original)).collect(),
    };
    for v in 0..n {
        if a.owner(v) != Owner::Prob {
            continue;
        }
        let pv = p.get(v);
        let support = a.succ(v).to_vec();
        let mut entry = Vec::new();
        if pv >= 1 {
            let pick = out.push(Owner::P1, support.clone(), pv, (v, GadgetRole::Pick));
            for e in (0..pv).step_by(2) {
                let acc = out.push(Owner::P2, support.clone(), e, (v, GadgetRole::Accept(e)));
                let dec = out.push(Owner::P2, vec![acc, pick], e + 1, (v, GadgetRole::Decide(e)));
                entry.push(dec);
            }
        }
        if pv % 2 == 0 {
            entry.push(out.push(Owner::P2, support, pv, (v, GadgetRole::Accept(pv))));
        }
        out.owner[v] = Owner::P1;
        out.succ[v] = entry;
        out.back[v].1 = GadgetRole::Entry;
    }
    (Skeleton::new(out.owner, out.succ), Priorities(out.prio), out.back)
}

struct Grow {
    owner: Vec<Owner>,
    succ: Vec<Vec<usize>>,
    prio: Vec<u32>,
    back: Vec<(usize, GadgetRole)>,
}

impl Grow {
    fn push(&mut self, o: Owner, ts: Vec<usize>, q: u32, role: (usize, GadgetRole)) -> usize {
        self.owner.push(o);
        self.succ.push(ts);
        self.prio.push(q);
        self.back.push(role);
        self.owner.len() - 1
    }
}

fn check_priorities<A: Arena>(a: &A, p: &Priorities) -> Result<()> {
    if p.len() != a.len() {
        return Err(Error::validation("priorities", "one priority per state is required"));
    }
    Ok(())
}

/// Builds the deterministic gadget game of a probabilistic game. Without
/// probabilistic states the game is returned unchanged.
pub fn gadget_reduce(g: &GameGraph, p: &Priorities) -> Result<GadgetOutput> {
    check_priorities(g, p)?;
    let (sk, prio, back) = gadget_skeleton(g, p);
    let mut b = GameBuilder::new();
    for s in 0..sk.len() {
        let (origin, role) = back[s];
        let (id, label) = match role {
            GadgetRole::Original | GadgetRole::Entry => {
                (g.id(s).to_string(), g.label(s).clone())
            }
            GadgetRole::Decide(e) => (g.fresh_id(&format!("{}#dec{e}", g.id(origin))), Letter::empty()),
            GadgetRole::Accept(e) => (g.fresh_id(&format!("{}#acc{e}", g.id(origin))), Letter::empty()),
            GadgetRole::Pick => (g.fresh_id(&format!("{}#pick", g.id(origin))), Letter::empty()),
        };
        b.add_state(id, sk.owner(s), Some(prio.get(s)), label);
    }
    for s in 0..sk.len() {
        for &t in sk.succ(s) {
            b.add_edge(s, t);
        }
    }
    b.initial = g.initial();
    Ok(GadgetOutput {
        game: b.build()?,
        priority: prio,
        back,
    })
}

/// Almost-sure winning set of player 1 for `Parity(p)` and a positional
/// almost-sure winning strategy on it.
pub fn almost_sure_parity<A: Arena>(a: &A, p: &Priorities) -> (StateSet, MemorylessStrategy) {
    let n = a.len();
    if (0..n).all(|s| a.owner(s) != Owner::Prob) {
        let r = zielonka(a, p);
        return (r.win1, r.strat1);
    }
    let (sk, prio, _) = gadget_skeleton(a, p);
    let r = zielonka(&sk, &prio);
    let mut win = a.empty_set();
    win.extend(r.win1.ones().take_while(|&s| s < n));
    let mut strat = MemorylessStrategy::new(Player::P1, n);
    for s in win.ones() {
        if a.owner(s) == Owner::P1 {
            strat.choice[s] = r.strat1.get(s);
        }
    }
    (win, strat)
}

/// Validating wrapper around [`almost_sure_parity`].
pub fn almost_sure_parity_checked(
    g: &GameGraph,
    p: &Priorities,
) -> Result<(StateSet, MemorylessStrategy)> {
    check_priorities(g, p)?;
    Ok(almost_sure_parity(g, p))
}

/// Sure winning set of player 1 when probabilistic states are adversarial.
pub fn sure_parity_adversarial<A: Arena>(a: &A, p: &Priorities) -> StateSet {
    let owner = (0..a.len())
        .map(|s| match a.owner(s) {
            Owner::Prob => Owner::P2,
            o => o,
        })
        .collect();
    let sk = Skeleton::new(owner, (0..a.len()).map(|s| a.succ(s).to_vec()).collect());
    zielonka(&sk, p).win1
}

/// Upper bound on strategy pairs enumerated by the brute-force oracle.
pub const ORACLE_LIMIT: u64 = 1 << 22;

/// Number of positional strategies of the owner of `owner`.
pub(crate) fn strategy_count<A: Arena>(a: &A, owner: Owner) -> u64 {
    (0..a.len())
        .filter(|&s| a.owner(s) == owner)
        .map(|s| a.succ(s).len() as u64)
        .try_fold(1u64, |acc, k| acc.checked_mul(k))
        .unwrap_or(u64::MAX)
}

/// Calls `f` with every positional choice vector for the states of `owner`
/// (other entries are `None`).
pub(crate) fn for_each_strategy<A: Arena, F>(a: &A, owner: Owner, mut f: F)
where
    F: FnMut(&[Option<usize>]),
{
    let states: Vec<usize> = (0..a.len()).filter(|&s| a.owner(s) == owner).collect();
    let mut pos = vec![0usize; states.len()];
    let mut choice: Vec<Option<usize>> = vec![None; a.len()];
    for &s in &states {
        choice[s] = Some(a.succ(s)[0]);
    }
    loop {
        f(&choice);
        let mut i = 0;
        loop {
            if i == states.len() {
                return;
            }
            let s = states[i];
            pos[i] += 1;
            if pos[i] < a.succ(s).len() {
                choice[s] = Some(a.succ(s)[pos[i]]);
                break;
            }
            pos[i] = 0;
            choice[s] = Some(a.succ(s)[0]);
            i += 1;
        }
    }
}

fn ni(s: usize) -> NodeIndex {
    NodeIndex::new(s)
}

/// Brute-force almost-sure winning set: `s` is winning iff some positional
/// player-1 strategy makes every bottom SCC reachable from `s` have an even
/// least priority, against every positional player-2 strategy.
pub fn oracle_almost_sure(g: &GameGraph, p: &Priorities) -> Result<StateSet> {
    check_priorities(g, p)?;
    let pairs = strategy_count(g, Owner::P1).saturating_mul(strategy_count(g, Owner::P2));
    if pairs > ORACLE_LIMIT {
        return Err(Error::GuardExceeded(format!("{pairs} strategy pairs")));
    }
    let n = g.len();
    let mut result = g.empty_set();
    for_each_strategy(g, Owner::P1, |alpha| {
        let mut win = g.full_set();
        for_each_strategy(g, Owner::P2, |beta| {
            if win.count_ones(..) == 0 {
                return;
            }
            let mut chain = DiGraph::<(), ()>::with_capacity(n, n * 2);
            for _ in 0..n {
                chain.add_node(());
            }
            for s in 0..n {
                match g.owner(s) {
                    Owner::P1 => {
                        chain.add_edge(ni(s), ni(alpha[s].unwrap()), ());
                    }
                    Owner::P2 => {
                        chain.add_edge(ni(s), ni(beta[s].unwrap()), ());
                    }
                    Owner::Prob => {
                        for &t in g.succ(s) {
                            chain.add_edge(ni(s), ni(t), ());
                        }
                    }
                }
            }
            let mut comp = vec![0usize; n];
            let sccs = tarjan_scc(&chain);
            for (i, c) in sccs.iter().enumerate() {
                for v in c {
                    comp[v.index()] = i;
                }
            }
            // a state is losing if it reaches a bottom SCC with odd minimum
            let mut bad = vec![false; n];
            for (i, c) in sccs.iter().enumerate() {
                let bottom = c
                    .iter()
                    .all(|v| chain.neighbors(*v).all(|w| comp[w.index()] == i));
                let min = c.iter().map(|v| p.get(v.index())).min().unwrap();
                if bottom && min % 2 == 1 {
                    for v in c {
                        bad[v.index()] = true;
                    }
                }
            }
            // tarjan_scc lists components in reverse topological order
            for c in &sccs {
                let reaches_bad = c.iter().any(|v| {
                    bad[v.index()] || chain.neighbors(*v).any(|w| bad[w.index()])
                });
                if reaches_bad {
                    for v in c {
                        bad[v.index()] = true;
                    }
                }
            }
            for (s, b) in bad.into_iter().enumerate() {
                if b {
                    win.set(s, false);
                }
            }
        });
        result.union_with(&win);
    });
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn coin_abs() -> (GameGraph, Priorities) {
        let mut b = GameBuilder::new();
        let d = b.add_state("d", Owner::P1, Some(1), Letter::empty());
        let g = b.add_state("g", Owner::P1, Some(0), Letter::empty());
        let v = b.add_state("v", Owner::Prob, Some(1), Letter::empty());
        b.add_edge(v, g).add_edge(v, d).add_edge(g, g).add_edge(d, d);
        b.set_weight(v, g, Ratio::new(1, 2)).set_weight(v, d, Ratio::new(1, 2));
        (b.build().unwrap(), Priorities(vec![1, 0, 1]))
    }

    #[test]
    fn gadget_shape() {
        let (g, p) = coin_abs();
        let out = gadget_reduce(&g, &p).unwrap();
        assert!(out.game.is_deterministic());
        assert_eq!(out.game.len(), 6);
        assert_eq!(out.game.succ(2).len(), 1);
        assert!(out.priority.d() <= p.d() + 1);
        assert_eq!(out.back[3], (2, GadgetRole::Pick));
        assert_eq!(out.back[4], (2, GadgetRole::Accept(0)));
        assert_eq!(out.back[5], (2, GadgetRole::Decide(0)));
        assert!(out.game.len() <= g.len() * (p.d() as usize + 2));
    }

    #[test]
    fn absorbing_coin() {
        let (g, p) = coin_abs();
        let (win, _) = almost_sure_parity(&g, &p);
        assert_eq!(g.ids_of(&win), vec!["g"]);
        assert_eq!(oracle_almost_sure(&g, &p).unwrap(), win);
    }

    #[test]
    fn strategy_enumeration_counts() {
        let (g, _) = coin_abs();
        let mut k = 0;
        for_each_strategy(&g, Owner::P1, |_| k += 1);
        assert_eq!(k as u64, strategy_count(&g, Owner::P1));
    }
}
