//! Small hand-built games used by tests, examples and the CLI.

use crate::game::{GameBuilder, GameGraph, Letter, Objective, Owner};
use crate::io::GameDoc;
use crate::synthesis::SynthesisGame;

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &[
    "buchi_loop",
    "safety_escape",
    "pipe",
    "coin",
    "coin_abs",
    "rcg",
    "safety_escape_synthesis",
];

fn e() -> Letter {
    Letter::empty()
}

fn three(owner_b: Owner, prio_b: u32, c_owner: Owner, c_prio: u32) -> GameGraph {
    let mut b = GameBuilder::new();
    let a = b.add_state("a", Owner::P1, Some(0), e());
    let bb = b.add_state("b", owner_b, Some(prio_b), e());
    let c = b.add_state("c", c_owner, Some(c_prio), e());
    b.add_edge(a, bb).add_edge(bb, a).add_edge(bb, c).add_edge(c, c);
    b.build_sorted().expect("fixture is valid")
}

/// `a` (P1, 0) and `b` (P2, 1); edges a→b, b→a, b→b; Büchi on `a`.
pub fn buchi_loop() -> (GameGraph, Objective) {
    let mut b = GameBuilder::new();
    let a = b.add_state("a", Owner::P1, Some(0), e());
    let bb = b.add_state("b", Owner::P2, Some(1), e());
    b.add_edge(a, bb).add_edge(bb, a).add_edge(bb, bb);
    b.initial = Some(a);
    let g = b.build_sorted().expect("fixture is valid");
    let t = g.set_of([0]);
    (g, Objective::Buchi(t))
}

/// `a` (P1, 0), `b` (P2, 0), `c` (P1, 1, self-loop); Safe{a, b}.
pub fn safety_escape() -> (GameGraph, Objective) {
    let g = three(Owner::P2, 0, Owner::P1, 1);
    let t = g.set_of([0, 1]);
    (g, Objective::Safe(t))
}

/// `a` (P1, 0), `b` (P2, 1), `c` (P2, 1, self-loop); Büchi on `a`.
pub fn pipe() -> (GameGraph, Objective) {
    let g = three(Owner::P2, 1, Owner::P2, 1);
    let t = g.set_of([0]);
    (g, Objective::Buchi(t))
}

/// `v` (PROB, 1) uniform over `w` (P1, 0) and `x` (P1, 1), both back to `v`.
pub fn coin() -> (GameGraph, Objective) {
    let mut b = GameBuilder::new();
    let v = b.add_state("v", Owner::Prob, Some(1), e());
    let w = b.add_state("w", Owner::P1, Some(0), e());
    let x = b.add_state("x", Owner::P1, Some(1), e());
    b.add_edge(v, w).add_edge(v, x).add_edge(w, v).add_edge(x, v);
    let g = b.build_sorted().expect("fixture is valid");
    let p = g.priorities().expect("all priorities set");
    (g, Objective::Parity(p))
}

/// `v` (PROB, 1) uniform over the absorbing `g` (P1, 0) and `d` (P1, 1).
pub fn coin_abs() -> (GameGraph, Objective) {
    let mut b = GameBuilder::new();
    let v = b.add_state("v", Owner::Prob, Some(1), e());
    let g0 = b.add_state("g", Owner::P1, Some(0), e());
    let d = b.add_state("d", Owner::P1, Some(1), e());
    b.add_edge(v, g0).add_edge(v, d).add_edge(g0, g0).add_edge(d, d);
    let g = b.build_sorted().expect("fixture is valid");
    let p = g.priorities().expect("all priorities set");
    (g, Objective::Parity(p))
}

/// A synthesis game for "every request is eventually granted, and no grant
/// directly follows a cancel or a grant", over inputs `req`, `cancel` and
/// output `grant`.
///
/// The tracker state is `(pending, block)`: an unanswered request exists,
/// and the next grant is forbidden. A grant while blocked leads to a trap.
/// Player-1 state `sys{p}{b}_{i}` has just read input `i` (`q` quiet, `r`,
/// `c`, `rc`); player-2 state `env{p}{b}_{o}` has just emitted `o` (`n`
/// none, `g` grant) from tracker state `(p, b)`. The Büchi target is the
/// set of player-2 states with no pending request or a grant.
pub fn rcg() -> SynthesisGame {
    let inputs: Vec<String> = vec!["cancel".into(), "req".into()];
    let outputs: Vec<String> = vec!["grant".into()];
    let in_tags = [("q", false, false), ("r", true, false), ("c", false, true), ("rc", true, true)];
    let in_label = |req: bool, cancel: bool| {
        let mut l = Vec::new();
        if req {
            l.push("req");
        }
        if cancel {
            l.push("cancel");
        }
        Letter::from_props(l)
    };
    let grant_label = |g: bool| {
        if g {
            Letter::from_props(["grant"])
        } else {
            e()
        }
    };
    let mut b = GameBuilder::new();
    let tracker = [(false, false), (false, true), (true, false), (true, true)];
    let bit = |x: bool| u8::from(x);
    let mut sys = std::collections::HashMap::new();
    let mut env = std::collections::HashMap::new();
    for &(p, bl) in &tracker {
        for &(tag, req, cancel) in &in_tags {
            let i = b.add_state(
                format!("sys{}{}_{tag}", bit(p), bit(bl)),
                Owner::P1,
                Some(1),
                in_label(req, cancel),
            );
            sys.insert((p, bl, req, cancel), i);
        }
        for g in [false, true] {
            if bl && g {
                continue;
            }
            let prio = if !p || g { 0 } else { 1 };
            let i = b.add_state(
                format!("env{}{}_{}", bit(p), bit(bl), if g { "g" } else { "n" }),
                Owner::P2,
                Some(prio),
                grant_label(g),
            );
            env.insert((p, bl, g), i);
        }
    }
    let mut trap_sys = Vec::new();
    for &(tag, req, cancel) in &in_tags {
        trap_sys.push(b.add_state(format!("trap_sys_{tag}"), Owner::P1, Some(1), in_label(req, cancel)));
    }
    let trap_env: Vec<usize> = [false, true]
        .iter()
        .map(|&g| {
            let tag = if g { "g" } else { "n" };
            b.add_state(format!("trap_env_{tag}"), Owner::P2, Some(1), grant_label(g))
        })
        .collect();
    for &(p, bl) in &tracker {
        for &(_, req, cancel) in &in_tags {
            let s = sys[&(p, bl, req, cancel)];
            for g in [false, true] {
                let t = if bl && g { trap_env[1] } else { env[&(p, bl, g)] };
                b.add_edge(s, t);
            }
        }
        for g in [false, true] {
            let Some(&s) = env.get(&(p, bl, g)) else { continue };
            let p2 = p && !g;
            for &(_, req, cancel) in &in_tags {
                b.add_edge(s, sys[&(p2 || req, cancel || g, req, cancel)]);
            }
        }
    }
    for &s in &trap_sys {
        for &t in &trap_env {
            b.add_edge(s, t);
        }
    }
    for &s in &trap_env {
        for &t in &trap_sys {
            b.add_edge(s, t);
        }
    }
    b.initial = Some(sys[&(false, false, false, false)]);
    let g = b.build_sorted().expect("fixture is valid");
    let target = g.set_of((0..g.len()).filter(|&s| g.state(s).priority == Some(0)));
    let init = g.initial().expect("initial set");
    SynthesisGame::new(g, init, inputs, outputs, Objective::Buchi(target)).expect("fixture is valid")
}

/// The safety-escape shape as a synthesis game over input `x` and no
/// outputs: from `b` the environment returns to `a` on `{}` and escapes to
/// `c` on `{x}`. Safe{a, b}.
pub fn safety_escape_synthesis() -> SynthesisGame {
    let x = || Letter::from_props(["x"]);
    let mut b = GameBuilder::new();
    let a = b.add_state("a", Owner::P1, Some(0), e());
    let bb = b.add_state("b", Owner::P2, Some(0), e());
    let c = b.add_state("c", Owner::P1, Some(1), x());
    let c2 = b.add_state("c2", Owner::P1, Some(1), e());
    let d = b.add_state("d", Owner::P2, Some(1), e());
    b.add_edge(a, bb).add_edge(bb, a).add_edge(bb, c);
    b.add_edge(c, d).add_edge(c2, d).add_edge(d, c).add_edge(d, c2);
    b.initial = Some(a);
    let g = b.build_sorted().expect("fixture is valid");
    let t = g.set_of([0, 1]);
    SynthesisGame::new(g, 0, vec!["x".into()], vec![], Objective::Safe(t)).expect("fixture is valid")
}

/// A fixture as a game document.
pub fn by_name(name: &str) -> Option<GameDoc> {
    let plain = |(g, o): (GameGraph, Objective)| Some(GameDoc::new(g, Some(o)));
    match name {
        "buchi_loop" => plain(buchi_loop()),
        "safety_escape" => plain(safety_escape()),
        "pipe" => plain(pipe()),
        "coin" => plain(coin()),
        "coin_abs" => plain(coin_abs()),
        "rcg" => Some(GameDoc::from_synthesis(&rcg())),
        "safety_escape_synthesis" => Some(GameDoc::from_synthesis(&safety_escape_synthesis())),
        _ => None,
    }
}
