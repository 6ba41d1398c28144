//! Synthesis games: bipartite labelled games whose plays spell words over
//! inputs and outputs, and the transducers obtained from strategies.
//!
//! Player-1 (system) states carry input letters and player-2 (environment)
//! states carry output letters. From a player-1 state the system picks an
//! output by moving to the player-2 state with that label; the environment
//! answers with an input. Letter `i` of the word of a play is the union of
//! the labels at positions `2i+1` and `2i+2`; the label of the initial state
//! is ignored.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::game::{GameGraph, LassoPlay, LassoWord, Letter, MemorylessStrategy, Objective, Owner};

/// A validated synthesis game.
#[derive(Debug, Clone)]
pub struct SynthesisGame {
    pub graph: GameGraph,
    pub initial: usize,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub objective: Objective,
}

impl SynthesisGame {
    /// Checks alternation, label ranges, label-determinism and
    /// label-completeness.
    pub fn new(
        graph: GameGraph,
        initial: usize,
        inputs: Vec<String>,
        outputs: Vec<String>,
        objective: Objective,
    ) -> Result<SynthesisGame> {
        graph.ensure_deterministic()?;
        objective.check_size(graph.len())?;
        if initial >= graph.len() || graph.owner(initial) != Owner::P1 {
            return Err(Error::validation("initial", "initial state must be a player-1 state"));
        }
        if inputs.iter().any(|p| outputs.contains(p)) {
            return Err(Error::validation("inputs", "inputs and outputs must be disjoint"));
        }
        let in_letters = Letter::all_over(&inputs);
        let out_letters = Letter::all_over(&outputs);
        for s in 0..graph.len() {
            let id = graph.id(s);
            let (own_props, succ_letters) = match graph.owner(s) {
                Owner::P1 => (&inputs, &out_letters),
                Owner::P2 => (&outputs, &in_letters),
                Owner::Prob => unreachable!(),
            };
            if !graph.label(s).is_subset_of(own_props) {
                return Err(Error::validation(
                    "label",
                    format!("label of `{id}` uses propositions of the other player"),
                ));
            }
            let mut seen = BTreeSet::new();
            for &t in graph.succ(s) {
                if graph.owner(t) == graph.owner(s) {
                    return Err(Error::validation(
                        "edges",
                        format!("edge from `{id}` to `{}` breaks alternation", graph.id(t)),
                    ));
                }
                if !seen.insert(graph.label(t).clone()) {
                    return Err(Error::validation(
                        "label",
                        format!("two successors of `{id}` share the label {}", graph.label(t)),
                    ));
                }
            }
            if seen.len() != succ_letters.len() {
                return Err(Error::validation(
                    "label",
                    format!("successors of `{id}` do not cover every letter"),
                ));
            }
        }
        Ok(SynthesisGame {
            graph,
            initial,
            inputs,
            outputs,
            objective,
        })
    }

    /// All propositions, inputs first.
    pub fn propositions(&self) -> Vec<String> {
        self.inputs.iter().chain(&self.outputs).cloned().collect()
    }

    /// The successor of `s` labelled `l`.
    pub fn succ_with_label(&self, s: usize, l: &Letter) -> Option<usize> {
        self.graph
            .succ(s)
            .iter()
            .copied()
            .find(|&t| self.graph.label(t) == l)
    }

    fn check_letter(&self, l: &Letter) -> Result<()> {
        for p in &l.0 {
            if !self.inputs.contains(p) && !self.outputs.contains(p) {
                return Err(Error::InvalidWord(format!("unknown proposition `{p}`")));
            }
        }
        Ok(())
    }

    /// The unique play from the initial state whose word is `w`.
    pub fn play_of_word(&self, w: &LassoWord) -> Result<LassoPlay> {
        if w.cycle.is_empty() {
            return Err(Error::InvalidWord("empty cycle".into()));
        }
        for l in w.stem.iter().chain(&w.cycle) {
            self.check_letter(l)?;
        }
        let mut seq = Vec::new();
        let mut first: HashMap<(usize, usize), usize> = HashMap::new();
        let mut q = self.initial;
        let mut k = 0usize;
        loop {
            if k >= w.stem.len() {
                let phase = (k - w.stem.len()) % w.cycle.len();
                if let Some(&k1) = first.get(&(q, phase)) {
                    let cycle = seq.split_off(2 * k1);
                    return Ok(LassoPlay::new(seq, cycle));
                }
                first.insert((q, phase), k);
            }
            let l = w.at(k);
            let o = self
                .succ_with_label(q, &l.restrict(&self.outputs))
                .ok_or_else(|| Error::InvalidWord("incomplete game".into()))?;
            let q2 = self
                .succ_with_label(o, &l.restrict(&self.inputs))
                .ok_or_else(|| Error::InvalidWord("incomplete game".into()))?;
            seq.push(q);
            seq.push(o);
            q = q2;
            k += 1;
        }
    }
}

/// The word spelled by a play that starts in the initial state.
pub fn word_of_play(sg: &SynthesisGame, play: &LassoPlay) -> Result<LassoWord> {
    play.validate(&sg.graph)?;
    if play.first() != Some(sg.initial) {
        return Err(Error::InvalidPlay("play does not start in the initial state".into()));
    }
    let g = &sg.graph;
    let all: Vec<usize> = play.stem.iter().chain(&play.cycle).copied().collect();
    let wrap = [*play.cycle.last().unwrap(), play.cycle[0]];
    for w in all.windows(2).chain(std::iter::once(&wrap[..])) {
        if g.owner(w[0]) == g.owner(w[1]) {
            return Err(Error::InvalidPlay(format!(
                "`{}` and `{}` have the same owner",
                g.id(w[0]),
                g.id(w[1])
            )));
        }
    }
    // Pairs start at position 1, so the cycle must start at an odd position.
    let (mut stem, mut cycle) = (play.stem.clone(), play.cycle.clone());
    if stem.len() % 2 == 0 {
        stem.push(cycle[0]);
        cycle.rotate_left(1);
    }
    let letters = |xs: &[usize]| -> Vec<Letter> {
        xs.chunks(2)
            .map(|p| g.label(p[0]).union(g.label(p[1])))
            .collect()
    };
    Ok(LassoWord::new(letters(&stem[1..]), letters(&cycle)))
}

/// A Moore machine: the output depends on the state only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreTransducer {
    pub names: Vec<String>,
    pub initial: usize,
    /// Input alphabet, in the order used by `delta`.
    pub inputs: Vec<Letter>,
    pub delta: Vec<Vec<usize>>,
    pub output: Vec<Letter>,
}

/// A Mealy machine: the output depends on the state and the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyTransducer {
    pub names: Vec<String>,
    pub initial: usize,
    pub inputs: Vec<Letter>,
    pub delta: Vec<Vec<usize>>,
    pub output: Vec<Vec<Letter>>,
}

impl MooreTransducer {
    fn input_index(&self, l: &Letter) -> Result<usize> {
        self.inputs
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| Error::InvalidWord(format!("{l} is not an input letter")))
    }

    /// The joint word produced against an input lasso; letter `k` is the
    /// output of the current state together with input `k`.
    pub fn run(&self, inputs: &LassoWord) -> Result<LassoWord> {
        if inputs.cycle.is_empty() {
            return Err(Error::InvalidWord("empty cycle".into()));
        }
        let mut word = Vec::new();
        let mut first: HashMap<(usize, usize), usize> = HashMap::new();
        let mut q = self.initial;
        let mut k = 0;
        loop {
            if k >= inputs.stem.len() {
                let phase = (k - inputs.stem.len()) % inputs.cycle.len();
                if let Some(&k1) = first.get(&(q, phase)) {
                    let cycle = word.split_off(k1);
                    return Ok(LassoWord::new(word, cycle));
                }
                first.insert((q, phase), k);
            }
            let i = inputs.at(k);
            word.push(self.output[q].union(i));
            q = self.delta[q][self.input_index(i)?];
            k += 1;
        }
    }
}

impl MealyTransducer {
    pub fn input_index(&self, l: &Letter) -> Result<usize> {
        self.inputs
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| Error::InvalidWord(format!("{l} is not an input letter")))
    }
}

/// Joint word of a Moore system and a Mealy environment: the system outputs,
/// the environment reads that output and answers with an input.
pub fn compose(sys: &MooreTransducer, env: &MealyTransducer) -> Result<LassoWord> {
    let mut word = Vec::new();
    let mut first: HashMap<(usize, usize), usize> = HashMap::new();
    let (mut m, mut e) = (sys.initial, env.initial);
    loop {
        if let Some(&k1) = first.get(&(m, e)) {
            let cycle = word.split_off(k1);
            return Ok(LassoWord::new(word, cycle));
        }
        first.insert((m, e), word.len());
        let o = &sys.output[m];
        let oi = env.input_index(o)?;
        let i = env.output[e][oi].clone();
        word.push(o.union(&i));
        e = env.delta[e][oi];
        m = sys.delta[m][sys.input_index(&i)?];
    }
}

/// The Moore machine of a player-1 strategy: states are player-1 states,
/// the output is the label of the chosen successor and input `l` moves to
/// its successor labelled `l`.
pub fn strategy_to_moore(sg: &SynthesisGame, alpha: &MemorylessStrategy) -> Result<MooreTransducer> {
    alpha.validate(&sg.graph)?;
    let g = &sg.graph;
    let states: Vec<usize> = g.states_of(Owner::P1).collect();
    let mut pos = vec![usize::MAX; g.len()];
    for (i, &s) in states.iter().enumerate() {
        pos[s] = i;
    }
    let inputs = Letter::all_over(&sg.inputs);
    let mut delta = Vec::with_capacity(states.len());
    let mut output = Vec::with_capacity(states.len());
    for &q in &states {
        let o = alpha.get(q).ok_or_else(|| {
            Error::InvalidStrategy(format!("strategy undefined at `{}`", g.id(q)))
        })?;
        output.push(g.label(o).clone());
        let row = inputs
            .iter()
            .map(|l| {
                sg.succ_with_label(o, l)
                    .map(|t| pos[t])
                    .ok_or_else(|| Error::validation("label", "game is not label-complete"))
            })
            .collect::<Result<Vec<_>>>()?;
        delta.push(row);
    }
    Ok(MooreTransducer {
        names: states.iter().map(|&s| g.id(s).to_string()).collect(),
        initial: pos[sg.initial],
        inputs,
        delta,
        output,
    })
}
