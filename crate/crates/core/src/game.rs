//! Game graphs, objectives, strategies and plays.
//!
//! States are addressed by dense indices. Graphs loaded from files or
//! produced by the generators have their states sorted by id, so index
//! order coincides with lexicographic id order. Derived graphs (sink
//! transforms, reductions) keep the original indices and append new
//! states at the end.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// A set of states, indexed by state index.
pub type StateSet = FixedBitSet;

/// An edge `(source, target)` between state indices.
pub type Edge = (usize, usize);

/// A set of edges ordered by (source, target).
pub type EdgeSet = BTreeSet<Edge>;

/// Exact transition weight of a probabilistic state.
pub type Weight = Ratio<u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    P1,
    P2,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::P1 => Player::P2,
            Player::P2 => Player::P1,
        }
    }

    /// The player who wins plays whose least recurring priority is `priority`.
    pub fn of_priority(priority: u32) -> Player {
        if priority % 2 == 0 {
            Player::P1
        } else {
            Player::P2
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::P1 => write!(f, "P1"),
            Player::P2 => write!(f, "P2"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Owner {
    P1,
    P2,
    Prob,
}

impl Owner {
    pub fn as_str(self) -> &'static str {
        match self {
            Owner::P1 => "P1",
            Owner::P2 => "P2",
            Owner::Prob => "PROB",
        }
    }

    /// Whether `player` picks the successor at a state with this owner.
    /// Probabilistic states are controlled by nobody.
    pub fn is(self, player: Player) -> bool {
        matches!(
            (self, player),
            (Owner::P1, Player::P1) | (Owner::P2, Player::P2)
        )
    }
}

impl From<Player> for Owner {
    fn from(p: Player) -> Self {
        match p {
            Player::P1 => Owner::P1,
            Player::P2 => Owner::P2,
        }
    }
}

/// A letter over atomic propositions: the set of propositions that hold.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub BTreeSet<String>);

impl Letter {
    pub fn empty() -> Self {
        Letter(BTreeSet::new())
    }

    pub fn from_props<I, S>(props: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Letter(props.into_iter().map(Into::into).collect())
    }

    pub fn contains(&self, prop: &str) -> bool {
        self.0.contains(prop)
    }

    pub fn union(&self, other: &Letter) -> Letter {
        Letter(self.0.union(&other.0).cloned().collect())
    }

    /// Restriction of the letter to the given propositions.
    pub fn restrict(&self, props: &[String]) -> Letter {
        Letter(
            self.0
                .iter()
                .filter(|p| props.contains(p))
                .cloned()
                .collect(),
        )
    }

    pub fn is_subset_of(&self, props: &[String]) -> bool {
        self.0.iter().all(|p| props.contains(p))
    }

    /// All letters over `props`, in a fixed order.
    pub fn all_over(props: &[String]) -> Vec<Letter> {
        (0u64..1 << props.len())
            .map(|mask| {
                Letter(
                    props
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, p)| p.clone())
                        .collect(),
                )
            })
            .collect()
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub id: String,
    pub owner: Owner,
    pub priority: Option<u32>,
    pub label: Letter,
}

/// A finite turn-based game graph, possibly with probabilistic states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameGraph {
    states: Vec<State>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    dist: Vec<Option<Vec<(usize, Weight)>>>,
    initial: Option<usize>,
    index: HashMap<String, usize>,
}

impl GameGraph {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, s: usize) -> &State {
        &self.states[s]
    }

    pub fn id(&self, s: usize) -> &str {
        &self.states[s].id
    }

    pub fn owner(&self, s: usize) -> Owner {
        self.states[s].owner
    }

    pub fn label(&self, s: usize) -> &Letter {
        &self.states[s].label
    }

    /// Successors of `s` in ascending index order.
    pub fn succ(&self, s: usize) -> &[usize] {
        &self.succ[s]
    }

    pub fn pred(&self, s: usize) -> &[usize] {
        &self.pred[s]
    }

    pub fn dist(&self, s: usize) -> Option<&[(usize, Weight)]> {
        self.dist[s].as_deref()
    }

    pub fn initial(&self) -> Option<usize> {
        self.initial
    }

    pub fn has_edge(&self, s: usize, t: usize) -> bool {
        self.succ[s].binary_search(&t).is_ok()
    }

    pub fn lookup(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn resolve(&self, id: &str) -> Result<usize> {
        self.lookup(id)
            .ok_or_else(|| Error::UnknownState(id.to_string()))
    }

    pub fn resolve_edge(&self, src: &str, dst: &str) -> Result<Edge> {
        let (s, t) = (self.resolve(src)?, self.resolve(dst)?);
        if !self.has_edge(s, t) {
            return Err(Error::UnknownEdge(src.into(), dst.into()));
        }
        Ok((s, t))
    }

    pub fn edge_ids(&self, e: Edge) -> (&str, &str) {
        (self.id(e.0), self.id(e.1))
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(s, ts)| ts.iter().map(move |&t| (s, t)))
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Edges whose source is owned by `player`.
    pub fn player_edges(&self, player: Player) -> EdgeSet {
        self.edges()
            .filter(|&(s, _)| self.owner(s).is(player))
            .collect()
    }

    pub fn states_of(&self, owner: Owner) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&s| self.owner(s) == owner)
    }

    /// True iff no state is probabilistic.
    pub fn is_deterministic(&self) -> bool {
        self.states.iter().all(|s| s.owner != Owner::Prob)
    }

    pub fn ensure_deterministic(&self) -> Result<()> {
        match self.states_of(Owner::Prob).next() {
            Some(s) => Err(Error::NotDeterministic(self.id(s).to_string())),
            None => Ok(()),
        }
    }

    pub fn empty_set(&self) -> StateSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> StateSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn set_of<I: IntoIterator<Item = usize>>(&self, it: I) -> StateSet {
        let mut s = self.empty_set();
        s.extend(it);
        s
    }

    pub fn set_from_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<StateSet> {
        let mut set = self.empty_set();
        for id in ids {
            set.insert(self.resolve(id.as_ref())?);
        }
        Ok(set)
    }

    pub fn ids_of(&self, set: &StateSet) -> Vec<String> {
        set.ones().map(|s| self.id(s).to_string()).collect()
    }

    pub fn edge_ids_of(&self, edges: &EdgeSet) -> Vec<(String, String)> {
        edges
            .iter()
            .map(|&(s, t)| (self.id(s).to_string(), self.id(t).to_string()))
            .collect()
    }

    /// The priority function stored on the states, if every state has one.
    pub fn priorities(&self) -> Option<Priorities> {
        self.states.iter().map(|s| s.priority).collect::<Option<Vec<_>>>().map(Priorities)
    }

    /// The same graph with every probabilistic state handed to player 2.
    pub fn with_prob_as_p2(&self) -> GameGraph {
        let mut g = self.clone();
        for (st, d) in g.states.iter_mut().zip(g.dist.iter_mut()) {
            if st.owner == Owner::Prob {
                st.owner = Owner::P2;
                *d = None;
            }
        }
        g
    }

    /// A builder seeded with a copy of this graph; new states get fresh
    /// indices after the existing ones.
    pub fn to_builder(&self) -> GameBuilder {
        let mut b = GameBuilder::new();
        for st in &self.states {
            b.add_state(st.id.clone(), st.owner, st.priority, st.label.clone());
        }
        for (s, t) in self.edges() {
            b.add_edge(s, t);
        }
        for (s, d) in self.dist.iter().enumerate() {
            if let Some(d) = d {
                for &(t, w) in d {
                    b.set_weight(s, t, w);
                }
            }
        }
        b.initial = self.initial;
        b
    }

    /// A state id not yet used in the graph, derived from `base`.
    pub fn fresh_id(&self, base: &str) -> String {
        let mut id = base.to_string();
        while self.index.contains_key(&id) {
            id.push('\'');
        }
        id
    }
}

/// Incremental construction of a [`GameGraph`]; [`GameBuilder::build`]
/// validates every structural invariant.
#[derive(Debug, Clone, Default)]
pub struct GameBuilder {
    states: Vec<State>,
    edges: Vec<Edge>,
    weights: Vec<(usize, usize, Weight)>,
    pub initial: Option<usize>,
}

impl GameBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn add_state(
        &mut self,
        id: impl Into<String>,
        owner: Owner,
        priority: Option<u32>,
        label: Letter,
    ) -> usize {
        self.states.push(State {
            id: id.into(),
            owner,
            priority,
            label,
        });
        self.states.len() - 1
    }

    pub fn add_edge(&mut self, s: usize, t: usize) -> &mut Self {
        self.edges.push((s, t));
        self
    }

    pub fn set_weight(&mut self, s: usize, t: usize, w: Weight) -> &mut Self {
        self.weights.push((s, t, w));
        self
    }

    pub fn find(&self, id: &str) -> Option<usize> {
        self.states.iter().position(|s| s.id == id)
    }

    /// Builds with states reordered by id, so that index order is
    /// lexicographic id order.
    pub fn build_sorted(self) -> Result<GameGraph> {
        let mut order: Vec<usize> = (0..self.states.len()).collect();
        order.sort_by(|&a, &b| self.states[a].id.cmp(&self.states[b].id));
        let mut new_of = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_of[old] = new;
        }
        let map = |i: usize| new_of.get(i).copied().unwrap_or(usize::MAX);
        let mut states = self.states;
        let mut slots: Vec<Option<State>> = states.drain(..).map(Some).collect();
        let states = order.iter().map(|&old| slots[old].take().unwrap()).collect();
        GameBuilder {
            states,
            edges: self.edges.iter().map(|&(s, t)| (map(s), map(t))).collect(),
            weights: self.weights.iter().map(|&(s, t, w)| (map(s), map(t), w)).collect(),
            initial: self.initial.map(map),
        }
        .build()
    }

    pub fn build(self) -> Result<GameGraph> {
        let n = self.states.len();
        let mut index = HashMap::with_capacity(n);
        for (i, st) in self.states.iter().enumerate() {
            if st.id.is_empty() {
                return Err(Error::validation("states", "empty state id"));
            }
            if index.insert(st.id.clone(), i).is_some() {
                return Err(Error::validation(
                    "states",
                    format!("duplicate state id `{}`", st.id),
                ));
            }
        }
        let mut succ = vec![Vec::new(); n];
        for &(s, t) in &self.edges {
            if s >= n || t >= n {
                return Err(Error::validation("edges", "edge endpoint out of range"));
            }
            succ[s].push(t);
        }
        for ts in &mut succ {
            ts.sort_unstable();
            ts.dedup();
        }
        let mut pred = vec![Vec::new(); n];
        for (s, ts) in succ.iter().enumerate() {
            for &t in ts {
                pred[t].push(s);
            }
        }
        for (s, ts) in succ.iter().enumerate() {
            if ts.is_empty() {
                return Err(Error::validation(
                    "edges",
                    format!("state `{}` has no outgoing edge", self.states[s].id),
                ));
            }
        }

        let mut dist: Vec<Option<BTreeMap<usize, Weight>>> = vec![None; n];
        for &(s, t, w) in &self.weights {
            if self.states[s].owner != Owner::Prob {
                return Err(Error::validation(
                    "dist",
                    format!("state `{}` is not probabilistic", self.states[s].id),
                ));
            }
            dist[s].get_or_insert_with(BTreeMap::new).insert(t, w);
        }
        let mut out = vec![None; n];
        for s in 0..n {
            if self.states[s].owner != Owner::Prob {
                continue;
            }
            let id = &self.states[s].id;
            let d: Vec<(usize, Weight)> = match dist[s].take() {
                None => {
                    let k = succ[s].len() as u64;
                    succ[s].iter().map(|&t| (t, Ratio::new(1, k))).collect()
                }
                Some(m) => {
                    let d: Vec<_> = m.into_iter().filter(|(_, w)| *w > Ratio::from(0)).collect();
                    let support: Vec<usize> = d.iter().map(|&(t, _)| t).collect();
                    if support != succ[s] {
                        return Err(Error::validation(
                            "dist",
                            format!("support of `{id}` differs from its successors"),
                        ));
                    }
                    let total = d.iter().fold(Ratio::from(0), |acc, &(_, w)| acc + w);
                    if total != Ratio::from(1) {
                        return Err(Error::validation(
                            "dist",
                            format!("weights of `{id}` sum to {total}, not 1"),
                        ));
                    }
                    d
                }
            };
            out[s] = Some(d);
        }
        if let Some(i) = self.initial {
            if i >= n {
                return Err(Error::validation("initial", "initial state out of range"));
            }
        }
        Ok(GameGraph {
            states: self.states,
            succ,
            pred,
            dist: out,
            initial: self.initial,
            index,
        })
    }
}

/// A priority function, one entry per state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Priorities(pub Vec<u32>);

impl Priorities {
    pub fn get(&self, s: usize) -> u32 {
        self.0[s]
    }

    /// Number of priorities `d`; all values lie in `0..d`.
    pub fn d(&self) -> u32 {
        self.0.iter().max().map_or(0, |m| m + 1)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Büchi encoding: priority 0 on the target, 1 elsewhere.
    pub fn buchi(n: usize, target: &StateSet) -> Self {
        Priorities((0..n).map(|s| u32::from(!target.contains(s))).collect())
    }

    /// Co-Büchi encoding: priority 2 on the target, 1 elsewhere.
    pub fn co_buchi(n: usize, target: &StateSet) -> Self {
        Priorities((0..n).map(|s| if target.contains(s) { 2 } else { 1 }).collect())
    }
}

/// Winning condition for player 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Objective {
    Reach(StateSet),
    Safe(StateSet),
    Buchi(StateSet),
    CoBuchi(StateSet),
    Parity(Priorities),
}

impl Objective {
    pub fn kind(&self) -> &'static str {
        match self {
            Objective::Reach(_) => "Reach",
            Objective::Safe(_) => "Safe",
            Objective::Buchi(_) => "Buchi",
            Objective::CoBuchi(_) => "CoBuchi",
            Objective::Parity(_) => "Parity",
        }
    }

    pub fn target(&self) -> Option<&StateSet> {
        match self {
            Objective::Reach(t)
            | Objective::Safe(t)
            | Objective::Buchi(t)
            | Objective::CoBuchi(t) => Some(t),
            Objective::Parity(_) => None,
        }
    }

    /// The priority function of a prefix-independent objective. Reachability
    /// and safety are not parity conditions on the same graph.
    pub fn priorities(&self, n: usize) -> Option<Priorities> {
        match self {
            Objective::Buchi(t) => Some(Priorities::buchi(n, t)),
            Objective::CoBuchi(t) => Some(Priorities::co_buchi(n, t)),
            Objective::Parity(p) => Some(p.clone()),
            Objective::Reach(_) | Objective::Safe(_) => None,
        }
    }

    pub(crate) fn check_size(&self, n: usize) -> Result<()> {
        let ok = match self {
            Objective::Parity(p) => p.len() == n,
            _ => self.target().is_some_and(|t| t.len() == n),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::validation("objective", "objective does not match the game size"))
        }
    }
}

/// Turns any objective into a parity condition, making target states
/// absorbing for reachability and unsafe states absorbing for safety.
/// The state set and indices are preserved; only the out-edges of the
/// absorbing states change.
pub fn parity_form(g: &GameGraph, obj: &Objective) -> Result<(GameGraph, Priorities)> {
    obj.check_size(g.len())?;
    if let Some(p) = obj.priorities(g.len()) {
        return Ok((g.clone(), p));
    }
    let (absorbing, good) = match obj {
        Objective::Reach(t) => (t.clone(), t.clone()),
        Objective::Safe(t) => {
            let mut bad = t.clone();
            bad.toggle_range(..);
            (bad, t.clone())
        }
        _ => unreachable!(),
    };
    let mut b = g.to_builder();
    for s in absorbing.ones() {
        if b.states[s].owner == Owner::Prob {
            b.states[s].owner = Owner::P1;
        }
    }
    b.edges.retain(|&(s, _)| !absorbing.contains(s));
    b.weights.retain(|&(s, _, _)| !absorbing.contains(s));
    for s in absorbing.ones() {
        b.add_edge(s, s);
    }
    Ok((b.build()?, Priorities::buchi(g.len(), &good)))
}

/// A positional strategy: `choice[s]` is the successor picked at `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemorylessStrategy {
    pub player: Player,
    pub choice: Vec<Option<usize>>,
}

impl MemorylessStrategy {
    pub fn new(player: Player, n: usize) -> Self {
        MemorylessStrategy {
            player,
            choice: vec![None; n],
        }
    }

    pub fn get(&self, s: usize) -> Option<usize> {
        self.choice.get(s).copied().flatten()
    }

    pub fn set(&mut self, s: usize, t: usize) {
        self.choice[s] = Some(t);
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.choice
            .iter()
            .enumerate()
            .filter_map(|(s, c)| c.map(|_| s))
    }

    /// Checks that only owned states are mapped, and only to successors.
    pub fn validate(&self, g: &GameGraph) -> Result<()> {
        if self.choice.len() != g.len() {
            return Err(Error::InvalidStrategy("strategy size mismatch".into()));
        }
        for s in self.domain() {
            let t = self.choice[s].unwrap();
            if !g.owner(s).is(self.player) {
                return Err(Error::InvalidStrategy(format!(
                    "`{}` is not owned by {}",
                    g.id(s),
                    self.player
                )));
            }
            if t >= g.len() || !g.has_edge(s, t) {
                return Err(Error::InvalidStrategy(format!(
                    "`{}` has no edge to the chosen successor",
                    g.id(s)
                )));
            }
        }
        Ok(())
    }

    /// Completes the strategy on every owned state of `g` with the first
    /// successor.
    pub fn completed(&self, g: &GameGraph) -> MemorylessStrategy {
        let mut out = self.clone();
        for s in 0..g.len() {
            if g.owner(s).is(self.player) && out.choice[s].is_none() {
                out.choice[s] = Some(g.succ(s)[0]);
            }
        }
        out
    }

    pub fn to_ids(&self, g: &GameGraph) -> BTreeMap<String, String> {
        self.domain()
            .map(|s| (g.id(s).to_string(), g.id(self.choice[s].unwrap()).to_string()))
            .collect()
    }
}

/// Restricts every state owned by a fixed strategy to its chosen edge.
/// Strategies must cover all states of their player.
pub fn induced_structure(
    g: &GameGraph,
    alpha: &MemorylessStrategy,
    beta: Option<&MemorylessStrategy>,
) -> Result<GameGraph> {
    let mut fixed: Vec<Option<usize>> = vec![None; g.len()];
    for strat in std::iter::once(alpha).chain(beta) {
        strat.validate(g)?;
        for s in g.states_of(strat.player.into()) {
            match strat.get(s) {
                Some(t) => fixed[s] = Some(t),
                None => {
                    return Err(Error::InvalidStrategy(format!(
                        "strategy for {} does not cover `{}`",
                        strat.player,
                        g.id(s)
                    )))
                }
            }
        }
    }
    let mut b = g.to_builder();
    b.edges.retain(|&(s, t)| fixed[s].map_or(true, |c| c == t));
    b.build()
}

/// An ultimately periodic play `stem · cycle^ω` of state indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoPlay {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl LassoPlay {
    pub fn new(stem: Vec<usize>, cycle: Vec<usize>) -> Self {
        LassoPlay { stem, cycle }
    }

    pub fn first(&self) -> Option<usize> {
        self.stem.first().or(self.cycle.first()).copied()
    }

    /// Checks the cycle is nonempty and all consecutive pairs are edges.
    pub fn validate(&self, g: &GameGraph) -> Result<()> {
        if self.cycle.is_empty() {
            return Err(Error::InvalidPlay("empty cycle".into()));
        }
        let seq: Vec<usize> = self
            .stem
            .iter()
            .chain(&self.cycle)
            .chain(std::iter::once(&self.cycle[0]))
            .copied()
            .collect();
        for w in seq.windows(2) {
            if w[0] >= g.len() || w[1] >= g.len() || !g.has_edge(w[0], w[1]) {
                return Err(Error::InvalidPlay(format!(
                    "consecutive states are not an edge at `{}`",
                    g.states().get(w[0]).map_or("?", |s| s.id.as_str())
                )));
            }
        }
        Ok(())
    }

    /// States occurring infinitely often.
    pub fn recurring(&self) -> BTreeSet<usize> {
        self.cycle.iter().copied().collect()
    }

    /// Edges traversed infinitely often.
    pub fn recurring_edges(&self) -> EdgeSet {
        let k = self.cycle.len();
        (0..k).map(|i| (self.cycle[i], self.cycle[(i + 1) % k])).collect()
    }

    /// All edges traversed, including the stem.
    pub fn all_edges(&self) -> EdgeSet {
        let mut out = self.recurring_edges();
        let seq: Vec<usize> = self.stem.iter().chain(self.cycle.first()).copied().collect();
        out.extend(seq.windows(2).map(|w| (w[0], w[1])));
        out
    }
}

/// An ultimately periodic word `stem · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LassoWord {
    pub stem: Vec<Letter>,
    pub cycle: Vec<Letter>,
}

impl LassoWord {
    pub fn new(stem: Vec<Letter>, cycle: Vec<Letter>) -> Self {
        LassoWord { stem, cycle }
    }

    /// Letter at position `i` of the infinite word.
    pub fn at(&self, i: usize) -> &Letter {
        if i < self.stem.len() {
            &self.stem[i]
        } else {
            &self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    pub fn propositions(&self) -> BTreeSet<&str> {
        self.stem
            .iter()
            .chain(&self.cycle)
            .flat_map(|l| l.0.iter().map(String::as_str))
            .collect()
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ls: &[Letter]| {
            ls.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}|{}", join(&self.stem), join(&self.cycle))
    }
}

impl std::str::FromStr for LassoWord {
    type Err = Error;

    /// Parses `stem|cycle`, where both parts are comma-separated letters
    /// such as `{req,cancel}` and the cycle is nonempty.
    fn from_str(text: &str) -> Result<Self> {
        let bad = |pos: usize, msg: &str| Error::Syntax {
            line: 1,
            column: pos + 1,
            msg: msg.to_string(),
        };
        let mut parts: [Vec<Letter>; 2] = [Vec::new(), Vec::new()];
        let mut part = 0;
        let mut chars = text.char_indices().peekable();
        let mut expect_letter = true;
        while let Some((i, c)) = chars.next() {
            match c {
                ' ' | '\t' => {}
                '{' if expect_letter => {
                    let mut props = BTreeSet::new();
                    let mut cur = String::new();
                    loop {
                        let (j, c) = chars.next().ok_or_else(|| bad(i, "unclosed `{`"))?;
                        match c {
                            '}' | ',' => {
                                let p = cur.trim();
                                if !p.is_empty() {
                                    props.insert(p.to_string());
                                } else if c == ',' || !props.is_empty() {
                                    return Err(bad(j, "empty proposition"));
                                }
                                cur.clear();
                                if c == '}' {
                                    break;
                                }
                            }
                            c if c.is_alphanumeric() || c == '_' || c == ' ' => cur.push(c),
                            _ => return Err(bad(j, "unexpected character in letter")),
                        }
                    }
                    parts[part].push(Letter(props));
                    expect_letter = false;
                }
                ',' if !expect_letter => expect_letter = true,
                '|' if part == 0 && (parts[0].is_empty() || !expect_letter) => {
                    part = 1;
                    expect_letter = true;
                }
                _ => return Err(bad(i, "unexpected character")),
            }
        }
        if part == 0 {
            return Err(bad(text.len(), "missing `|` between stem and cycle"));
        }
        if parts[1].is_empty() || expect_letter {
            return Err(bad(text.len(), "the cycle needs at least one letter"));
        }
        let [stem, cycle] = parts;
        Ok(LassoWord::new(stem, cycle))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_state() -> GameBuilder {
        let mut b = GameBuilder::new();
        let a = b.add_state("a", Owner::P1, Some(0), Letter::empty());
        let c = b.add_state("b", Owner::P2, Some(1), Letter::empty());
        b.add_edge(a, c).add_edge(c, a).add_edge(c, c);
        b
    }

    #[test]
    fn builds_and_sorts_successors() {
        let g = two_state().build().unwrap();
        assert_eq!(g.succ(1), &[0, 1]);
        assert_eq!(g.pred(0), &[1]);
        assert!(g.is_deterministic());
        assert_eq!(g.player_edges(Player::P2).len(), 2);
    }

    #[test]
    fn dead_end_is_rejected() {
        let mut b = GameBuilder::new();
        b.add_state("a", Owner::P1, None, Letter::empty());
        let err = b.build().unwrap_err();
        assert!(matches!(err, Error::Validation { ref field, .. } if field == "edges"));
    }

    #[test]
    fn weights_must_sum_to_one() {
        let mut b = GameBuilder::new();
        let v = b.add_state("v", Owner::Prob, None, Letter::empty());
        let w = b.add_state("w", Owner::P1, None, Letter::empty());
        let x = b.add_state("x", Owner::P1, None, Letter::empty());
        b.add_edge(v, w).add_edge(v, x).add_edge(w, v).add_edge(x, v);
        b.set_weight(v, w, Ratio::new(1, 2)).set_weight(v, x, Ratio::new(1, 4));
        assert!(matches!(b.build(), Err(Error::Validation { ref field, .. }) if field == "dist"));
    }

    #[test]
    fn induced_keeps_chosen_edges_only() {
        let g = two_state().build().unwrap();
        let mut alpha = MemorylessStrategy::new(Player::P1, 2);
        alpha.set(0, 1);
        let mut beta = MemorylessStrategy::new(Player::P2, 2);
        beta.set(1, 1);
        let h = induced_structure(&g, &alpha, Some(&beta)).unwrap();
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 1)]);

        let mut bad = MemorylessStrategy::new(Player::P1, 2);
        bad.choice[0] = Some(0);
        assert!(induced_structure(&g, &bad, None).is_err());
    }

    #[test]
    fn word_syntax() {
        let w: LassoWord = "{req},{}|{cancel, req}".parse().unwrap();
        assert_eq!(w.stem.len(), 2);
        assert_eq!(w.cycle[0], Letter::from_props(["req", "cancel"]));
        assert_eq!(w.to_string().parse::<LassoWord>().unwrap(), w);
        assert_eq!("|{}".parse::<LassoWord>().unwrap().cycle.len(), 1);
        for bad in ["{}", "{}|", "{a|{}", "{a,}|{}", "{}{}|{}", "{},|{}", "|{}x"] {
            assert!(bad.parse::<LassoWord>().is_err(), "{bad}");
        }
    }

    #[test]
    fn letter_enumeration() {
        let props = vec!["a".to_string(), "b".to_string()];
        let all = Letter::all_over(&props);
        assert_eq!(all.len(), 4);
        assert_eq!(all[3].to_string(), "{a,b}");
    }
}
