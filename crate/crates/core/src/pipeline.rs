//! The combined pipeline on synthesis games and the assumption automaton
//! it produces.
//!
//! The automaton accepts a word iff the unique play spelling it never takes
//! a forbidden edge and, for every fair edge `(s, t)`, either visits `s`
//! finitely often or takes `(s, t)` infinitely often.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::fair::{
    assume_fair_win, is_live, locally_minimal_fair_among, FairAssumption, NoFairReason,
};
use crate::game::{
    parity_form, EdgeSet, GameGraph, LassoPlay, LassoWord, Letter, MemorylessStrategy,
    Owner, Player, Priorities, StateSet,
};
use crate::graph::{reachable, sccs, Arena, Skeleton};
use crate::io::GameDoc;
use crate::safety::{assume_safe_transform, compute_safety_assumption, env_forced_set, SafetyAssumption};
use crate::synthesis::{word_of_play, MealyTransducer, SynthesisGame};

/// Upper bound on environment-witness memory states.
pub const WITNESS_GUARD: usize = 100_000;

/// The language of a safety and a fair assumption over a synthesis game.
#[derive(Debug, Clone)]
pub struct AssumptionAutomaton {
    pub base: SynthesisGame,
    pub forbidden: EdgeSet,
    pub fair: EdgeSet,
}

impl AssumptionAutomaton {
    /// Both edge sets must be disjoint sets of player-2 edges of `base`.
    pub fn new(base: SynthesisGame, forbidden: EdgeSet, fair: EdgeSet) -> Result<Self> {
        let g = &base.graph;
        for (field, es) in [("forbidden", &forbidden), ("fair", &fair)] {
            for &(s, t) in es {
                if s >= g.len() || t >= g.len() || !g.has_edge(s, t) {
                    return Err(Error::validation(field, format!("({s}, {t}) is not an edge")));
                }
                if g.owner(s) != Owner::P2 {
                    return Err(Error::validation(
                        field,
                        format!("edge ({}, {}) does not leave a player-2 state", g.id(s), g.id(t)),
                    ));
                }
            }
        }
        if let Some(&(s, t)) = forbidden.intersection(&fair).next() {
            return Err(Error::validation(
                "fair",
                format!("edge ({}, {}) is both forbidden and fair", g.id(s), g.id(t)),
            ));
        }
        Ok(AssumptionAutomaton {
            base,
            forbidden,
            fair,
        })
    }

    pub fn from_doc(doc: &GameDoc) -> Result<Self> {
        Self::new(
            doc.synthesis()?,
            doc.forbidden.clone().unwrap_or_default(),
            doc.fair.clone().unwrap_or_default(),
        )
    }

    pub fn to_doc(&self) -> GameDoc {
        let mut doc = GameDoc::from_synthesis(&self.base);
        doc.forbidden = Some(self.forbidden.clone());
        doc.fair = Some(self.fair.clone());
        doc
    }

    /// Acceptance of a play from the initial state.
    pub fn accepts_play(&self, play: &LassoPlay) -> bool {
        if play.all_edges().iter().any(|e| self.forbidden.contains(e)) {
            return false;
        }
        let rec = play.recurring();
        let rec_edges = play.recurring_edges();
        self.fair
            .iter()
            .all(|&(s, t)| !rec.contains(&s) || rec_edges.contains(&(s, t)))
    }

    /// Membership of an ultimately periodic word.
    pub fn lasso_member(&self, w: &LassoWord) -> Result<bool> {
        Ok(self.accepts_play(&self.base.play_of_word(w)?))
    }

    /// Whether the language is empty.
    pub fn is_empty(&self) -> bool {
        self.good_component().is_none()
    }

    /// An accepting play, if the language is nonempty.
    pub fn witness_play(&self) -> Option<LassoPlay> {
        let g = &self.base.graph;
        let comp = self.good_component()?;
        let ok = |u: usize, v: usize| !self.forbidden.contains(&(u, v));
        let reach = reachable(g, &g.set_of([self.base.initial]), &g.full_set(), ok);
        let c0 = comp.ones().next()?;
        let mut stem = path(g, self.base.initial, c0, &reach, &ok)?;
        stem.pop();
        // Closed walk from c0 covering every edge inside the component.
        let mut cycle = Vec::new();
        let mut cur = c0;
        for u in comp.ones() {
            for &v in g.succ(u) {
                if comp.contains(v) && ok(u, v) {
                    let mut p = path(g, cur, u, &comp, &ok)?;
                    p.pop();
                    cycle.extend(p);
                    cycle.push(u);
                    cur = v;
                }
            }
        }
        let mut back = path(g, cur, c0, &comp, &ok)?;
        back.pop();
        cycle.extend(back);
        Some(LassoPlay::new(stem, cycle))
    }

    /// An accepted word, if the language is nonempty.
    pub fn witness_word(&self) -> Option<LassoWord> {
        let play = self.witness_play()?;
        word_of_play(&self.base, &play).ok()
    }

    /// A nontrivial strongly connected set, reachable without forbidden
    /// edges, that contains the target of every fair edge leaving it.
    fn good_component(&self) -> Option<StateSet> {
        let g = &self.base.graph;
        let ok = |u: usize, v: usize| !self.forbidden.contains(&(u, v));
        let reach = reachable(g, &g.set_of([self.base.initial]), &g.full_set(), ok);
        let mut work = vec![reach];
        while let Some(within) = work.pop() {
            for c in sccs(g, &within, ok) {
                if !c.nontrivial {
                    continue;
                }
                let set = g.set_of(c.states.iter().copied());
                let bad: Vec<usize> = c
                    .states
                    .iter()
                    .copied()
                    .filter(|&u| self.fair.range((u, 0)..(u + 1, 0)).any(|&(_, t)| !set.contains(t)))
                    .collect();
                if bad.is_empty() {
                    return Some(set);
                }
                let mut rest = set;
                for u in bad {
                    rest.set(u, false);
                }
                work.push(rest);
            }
        }
        None
    }
}

/// Shortest path from `s` to `t` inside `within`, both ends included.
fn path<F>(g: &GameGraph, s: usize, t: usize, within: &StateSet, ok: &F) -> Option<Vec<usize>>
where
    F: Fn(usize, usize) -> bool,
{
    let mut parent = vec![usize::MAX; g.len()];
    let mut queue = VecDeque::from([s]);
    parent[s] = s;
    while let Some(u) = queue.pop_front() {
        if u == t {
            let mut p = vec![t];
            let mut x = t;
            while x != s {
                x = parent[x];
                p.push(x);
            }
            p.reverse();
            return Some(p);
        }
        for &v in g.succ(u) {
            if within.contains(v) && parent[v] == usize::MAX && ok(u, v) {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    None
}

/// Result of the combined pipeline.
#[derive(Debug, Clone)]
pub struct CombinedAssumption {
    pub safety: SafetyAssumption,
    pub fair: FairAssumption,
    pub automaton: AssumptionAutomaton,
    /// The game with forbidden edges redirected to a winning sink.
    pub transformed: GameGraph,
    pub transformed_priorities: Priorities,
    /// A player-1 strategy on the transformed game that wins under the fair
    /// assumption from the initial state.
    pub strategy: MemorylessStrategy,
}

impl CombinedAssumption {
    /// The player-1 strategy restricted to the states of the synthesis game.
    pub fn base_strategy(&self) -> MemorylessStrategy {
        let n = self.automaton.base.graph.len();
        let mut a = MemorylessStrategy::new(Player::P1, n);
        for s in 0..n {
            if let Some(t) = self.strategy.get(s) {
                a.set(s, t);
            }
        }
        a
    }
}

/// Outcome of [`combined_assumption`].
#[derive(Debug, Clone)]
pub enum Outcome {
    Assumption(Box<CombinedAssumption>),
    /// The initial state is outside the cooperative winning set.
    Unsat,
    /// No fair assumption suffices on the transformed game.
    NoFair(NoFairReason),
}

/// Safety assumption, then a locally-minimal fair assumption on the game
/// with the forbidden edges redirected to a winning sink.
pub fn combined_assumption(sg: &SynthesisGame) -> Result<Outcome> {
    let g = &sg.graph;
    let s0 = sg.initial;
    let safety = compute_safety_assumption(g, &sg.objective)?;
    if !safety.safe_region.contains(s0) {
        return Ok(Outcome::Unsat);
    }
    let (h, obj2) = assume_safe_transform(g, &sg.objective, &safety.edges)?;
    let (hp, p) = parity_form(&h, &obj2)?;
    if !is_live(&hp, &p, s0) {
        return Err(Error::Invariant(
            "initial state is not live after the safety transform".into(),
        ));
    }
    let top = h.len() - 1;
    let candidates: EdgeSet = hp
        .player_edges(Player::P2)
        .into_iter()
        .filter(|&(s, t)| t != top && g.has_edge(s, t))
        .collect();
    let fair = match locally_minimal_fair_among(&hp, &p, s0, &candidates)? {
        Ok(f) => f,
        Err(reason) => return Ok(Outcome::NoFair(reason)),
    };
    let (win, alpha) = assume_fair_win(&hp, &p, &fair.edges)?;
    if !win.contains(s0) {
        return Err(Error::Invariant("fair assumption is not sufficient on re-check".into()));
    }
    let strategy = alpha.completed(&hp);
    if !verify_strategy(&hp, &p, &fair.edges, &strategy, s0)? {
        return Err(Error::Invariant(
            "extracted strategy does not win under the assumptions".into(),
        ));
    }
    let fair_orig = FairAssumption {
        edges: fair.edges.clone(),
        winning_from: g.set_of(fair.winning_from.ones().filter(|&s| s < g.len())),
    };
    let automaton = AssumptionAutomaton::new(sg.clone(), safety.edges.clone(), fair.edges)?;
    Ok(Outcome::Assumption(Box::new(CombinedAssumption {
        safety,
        fair: fair_orig,
        automaton,
        transformed: hp,
        transformed_priorities: p,
        strategy,
    })))
}

/// Whether a fixed player-1 strategy wins `AssumeFair(fair, Parity(p))`
/// from `s`: with player 1's moves fixed, player 2 must lose.
pub fn verify_strategy<A: Arena>(
    a: &A,
    p: &Priorities,
    fair: &EdgeSet,
    alpha: &MemorylessStrategy,
    s: usize,
) -> Result<bool> {
    let succ = (0..a.len())
        .map(|u| match (a.owner(u), alpha.get(u)) {
            (Owner::P1, Some(t)) if a.has_edge(u, t) => Ok(vec![t]),
            (Owner::P1, _) => Err(Error::InvalidStrategy(format!("no valid choice at state {u}"))),
            _ => Ok(a.succ(u).to_vec()),
        })
        .collect::<Result<Vec<_>>>()?;
    let sk = Skeleton::new((0..a.len()).map(|u| a.owner(u)).collect(), succ);
    Ok(assume_fair_win(&sk, p, fair)?.0.contains(s))
}

/// An environment transducer whose words are all accepted by `a`.
///
/// It reads the system's output letter and answers with an input letter.
/// Memory is the current player-1 state and, per fair source, a
/// round-robin counter over its fair targets. Elsewhere it answers with the
/// empty input when allowed, else with the first allowed successor. Forbidden edges are never
/// taken and the environment never enters a state from which the system
/// could force a forbidden move.
pub fn env_witness(a: &AssumptionAutomaton) -> Result<MealyTransducer> {
    let sg = &a.base;
    let g = &sg.graph;
    let forced = env_forced_set(g, &a.forbidden);
    if forced.contains(sg.initial) {
        return Err(Error::Precondition(
            "the system can force a forbidden move from the initial state".into(),
        ));
    }
    let sources: Vec<usize> = a.fair.iter().map(|&(s, _)| s).collect::<BTreeSet<_>>().into_iter().collect();
    let targets: HashMap<usize, Vec<usize>> = sources
        .iter()
        .map(|&s| (s, a.fair.range((s, 0)..(s + 1, 0)).map(|&(_, t)| t).collect()))
        .collect();
    let slot: HashMap<usize, usize> = sources.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let out_letters = Letter::all_over(&sg.outputs);

    type Mem = (usize, Vec<usize>);
    let mut index: HashMap<Mem, usize> = HashMap::new();
    let mut mems: Vec<Mem> = Vec::new();
    let mut delta = Vec::new();
    let mut output = Vec::new();
    let start: Mem = (sg.initial, vec![0; sources.len()]);
    index.insert(start.clone(), 0);
    mems.push(start);
    let mut k = 0;
    while k < mems.len() {
        let (q, counters) = mems[k].clone();
        let mut row_d = Vec::with_capacity(out_letters.len());
        let mut row_o = Vec::with_capacity(out_letters.len());
        for o in &out_letters {
            let s = sg
                .succ_with_label(q, o)
                .ok_or_else(|| Error::validation("label", "game is not label-complete"))?;
            let mut next_counters = counters.clone();
            let t = if let Some(&i) = slot.get(&s) {
                let ts = &targets[&s];
                let t = ts[counters[i]];
                if forced.contains(t) {
                    return Err(Error::Precondition(format!(
                        "fair edge ({}, {}) leads into a forced region",
                        g.id(s),
                        g.id(t)
                    )));
                }
                next_counters[i] = (counters[i] + 1) % ts.len();
                t
            } else {
                let allowed = |t: &usize| !a.forbidden.contains(&(s, *t)) && !forced.contains(*t);
                let mut safe = g.succ(s).iter().copied().filter(allowed);
                g.succ(s)
                    .iter()
                    .copied()
                    .filter(allowed)
                    .find(|&t| g.label(t).0.is_empty())
                    .or_else(|| safe.next())
                    .ok_or_else(|| Error::Invariant("no safe environment move".into()))?
            };
            let m: Mem = (t, next_counters);
            let id = match index.get(&m) {
                Some(&id) => id,
                None => {
                    if mems.len() >= WITNESS_GUARD {
                        return Err(Error::GuardExceeded(format!(
                            "more than {WITNESS_GUARD} witness memory states"
                        )));
                    }
                    index.insert(m.clone(), mems.len());
                    mems.push(m);
                    mems.len() - 1
                }
            };
            row_d.push(id);
            row_o.push(g.label(t).clone());
        }
        delta.push(row_d);
        output.push(row_o);
        k += 1;
    }
    let names = mems
        .iter()
        .map(|(q, c)| {
            if c.is_empty() {
                g.id(*q).to_string()
            } else {
                let cs: Vec<String> = c.iter().map(ToString::to_string).collect();
                format!("{}[{}]", g.id(*q), cs.join(","))
            }
        })
        .collect();
    Ok(MealyTransducer {
        names,
        initial: 0,
        inputs: out_letters,
        delta,
        output,
    })
}

/// Convenience: the objective of a synthesis game as priorities on its
/// parity form.
pub fn base_priorities(sg: &SynthesisGame) -> Result<(GameGraph, Priorities)> {
    parity_form(&sg.graph, &sg.objective)
}

/// Whether `obj` on `sg` is already won by player 1 from the initial state.
pub fn realizable(sg: &SynthesisGame) -> Result<bool> {
    Ok(crate::solve::solve(&sg.graph, &sg.objective)?.win1.contains(sg.initial))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::synthesis::{compose, strategy_to_moore};

    fn w(stem: &[&[&str]], cycle: &[&[&str]]) -> LassoWord {
        let l = |xs: &[&[&str]]| xs.iter().map(|x| Letter::from_props(x.iter().copied())).collect();
        LassoWord::new(l(stem), l(cycle))
    }

    fn rcg_result() -> CombinedAssumption {
        match combined_assumption(&fixtures::rcg()).unwrap() {
            Outcome::Assumption(c) => *c,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn running_example_words() {
        let c = rcg_result();
        let a = &c.automaton;
        assert!(!a.is_empty());
        assert!(!a.fair.is_empty());
        assert!(a.lasso_member(&w(&[], &[&[]])).unwrap());
        assert!(!a.lasso_member(&w(&[&["req"]], &[&["cancel"]])).unwrap());
        let ww = a.witness_word().unwrap();
        assert!(a.lasso_member(&ww).unwrap());
    }

    #[test]
    fn forbidden_edge_rejects() {
        let sg = fixtures::safety_escape_synthesis();
        let c = match combined_assumption(&sg).unwrap() {
            Outcome::Assumption(c) => *c,
            other => panic!("unexpected {other:?}"),
        };
        let a = &c.automaton;
        assert_eq!(a.forbidden.len(), 1);
        assert!(!a.lasso_member(&w(&[&["x"]], &[&[]])).unwrap());
        assert!(a.lasso_member(&w(&[], &[&[]])).unwrap());
    }

    #[test]
    fn all_forbidden_is_empty() {
        let sg = fixtures::safety_escape_synthesis();
        let g = &sg.graph;
        let all: EdgeSet = g.player_edges(Player::P2).into_iter().filter(|&(s, _)| s == 1).collect();
        let a = AssumptionAutomaton::new(sg.clone(), all, EdgeSet::new()).unwrap();
        assert!(a.is_empty());
        assert!(env_witness(&a).is_err());
        let free = AssumptionAutomaton::new(sg, EdgeSet::new(), EdgeSet::new()).unwrap();
        assert!(!free.is_empty());
    }

    #[test]
    fn witness_against_system() {
        let c = rcg_result();
        let env = env_witness(&c.automaton).unwrap();
        let sys = strategy_to_moore(&c.automaton.base, &c.base_strategy()).unwrap();
        let word = compose(&sys, &env).unwrap();
        assert!(c.automaton.lasso_member(&word).unwrap());
    }
}
