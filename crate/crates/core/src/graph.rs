//! Plain graph utilities: reachability and strongly connected components
//! of subgraphs of a game graph.

use fixedbitset::FixedBitSet;

use crate::game::{GameGraph, Owner, StateSet};

/// The part of a game graph the solvers look at: owners and edges.
/// Implemented by [`GameGraph`] and by the id-free [`Skeleton`] used for
/// intermediate constructions.
pub trait Arena {
    fn len(&self) -> usize;
    fn owner(&self, s: usize) -> Owner;
    /// Successors in ascending order.
    fn succ(&self, s: usize) -> &[usize];
    fn pred(&self, s: usize) -> &[usize];

    fn has_edge(&self, s: usize, t: usize) -> bool {
        self.succ(s).binary_search(&t).is_ok()
    }

    fn empty_set(&self) -> StateSet {
        FixedBitSet::with_capacity(self.len())
    }

    fn full_set(&self) -> StateSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    fn set_of<I: IntoIterator<Item = usize>>(&self, it: I) -> StateSet
    where
        Self: Sized,
    {
        let mut s = self.empty_set();
        s.extend(it);
        s
    }
}

impl Arena for GameGraph {
    fn len(&self) -> usize {
        GameGraph::len(self)
    }
    fn owner(&self, s: usize) -> Owner {
        GameGraph::owner(self, s)
    }
    fn succ(&self, s: usize) -> &[usize] {
        GameGraph::succ(self, s)
    }
    fn pred(&self, s: usize) -> &[usize] {
        GameGraph::pred(self, s)
    }
}

/// An id-free game graph: owners and sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    pub owner: Vec<Owner>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl Skeleton {
    /// Sorts and deduplicates successor lists and builds predecessors.
    pub fn new(owner: Vec<Owner>, mut succ: Vec<Vec<usize>>) -> Self {
        let mut pred = vec![Vec::new(); owner.len()];
        for (s, ts) in succ.iter_mut().enumerate() {
            ts.sort_unstable();
            ts.dedup();
            for &t in ts.iter() {
                pred[t].push(s);
            }
        }
        Skeleton { owner, succ, pred }
    }

    pub fn of<A: Arena>(a: &A) -> Self {
        Skeleton::new(
            (0..a.len()).map(|s| a.owner(s)).collect(),
            (0..a.len()).map(|s| a.succ(s).to_vec()).collect(),
        )
    }
}

impl Arena for Skeleton {
    fn len(&self) -> usize {
        self.owner.len()
    }
    fn owner(&self, s: usize) -> Owner {
        self.owner[s]
    }
    fn succ(&self, s: usize) -> &[usize] {
        &self.succ[s]
    }
    fn pred(&self, s: usize) -> &[usize] {
        &self.pred[s]
    }
}

/// States reachable from `from` using only states in `within` and edges
/// accepted by `edge_ok`. States of `from` outside `within` are ignored.
pub fn reachable<A: Arena, F>(g: &A, from: &StateSet, within: &StateSet, edge_ok: F) -> StateSet
where
    F: Fn(usize, usize) -> bool,
{
    let mut seen = g.empty_set();
    let mut stack: Vec<usize> = from.ones().filter(|&s| within.contains(s)).collect();
    for &s in &stack {
        seen.insert(s);
    }
    while let Some(s) = stack.pop() {
        for &t in g.succ(s) {
            if within.contains(t) && !seen.contains(t) && edge_ok(s, t) {
                seen.insert(t);
                stack.push(t);
            }
        }
    }
    seen
}

/// States in `within` that can reach `target` inside `within`.
pub fn backward_reachable<A: Arena>(g: &A, target: &StateSet, within: &StateSet) -> StateSet {
    let mut seen = g.empty_set();
    let mut stack: Vec<usize> = target.ones().filter(|&s| within.contains(s)).collect();
    for &s in &stack {
        seen.insert(s);
    }
    while let Some(t) = stack.pop() {
        for &s in g.pred(t) {
            if within.contains(s) && !seen.contains(s) {
                seen.insert(s);
                stack.push(s);
            }
        }
    }
    seen
}

/// A strongly connected component of a subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scc {
    pub states: Vec<usize>,
    /// True iff the component contains at least one internal edge, so that
    /// a play can stay inside it forever.
    pub nontrivial: bool,
}

/// Strongly connected components (Tarjan, iterative) of the subgraph
/// induced by `within` and the edges accepted by `edge_ok`. Components are
/// returned in reverse topological order.
pub fn sccs<A: Arena, F>(g: &A, within: &StateSet, edge_ok: F) -> Vec<Scc>
where
    F: Fn(usize, usize) -> bool,
{
    const UNSEEN: usize = usize::MAX;
    let n = g.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut next = 0usize;
    // (state, position in its successor list)
    let mut work: Vec<(usize, usize)> = Vec::new();

    for root in within.ones() {
        if index[root] != UNSEEN {
            continue;
        }
        work.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = work.last_mut() {
            let succ = g.succ(v);
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if !within.contains(w) || !edge_ok(v, w) {
                    continue;
                }
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            work.pop();
            if let Some(&(parent, _)) = work.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                let nontrivial = comp.len() > 1 || (g.has_edge(v, v) && edge_ok(v, v));
                out.push(Scc {
                    states: comp,
                    nontrivial,
                });
            }
        }
    }
    out
}
