//! JSON game files and DOT export.
//!
//! ```json
//! {
//!   "states": [{"id": "a", "owner": "P1", "priority": 0, "label": ["req"]}],
//!   "edges": [["a", "b"]],
//!   "dist": {"v": {"w": "1/2", "x": "1/2"}},
//!   "initial": "a",
//!   "objective": {"kind": "Buchi", "target": ["a"]},
//!   "inputs": ["req"], "outputs": ["grant"],
//!   "forbidden": [["b", "c"]], "fair": [["b", "a"]]
//! }
//! ```
//!
//! Owners are `P1`, `P2` or `PROB`. `dist` is optional; probabilistic
//! states without an entry are uniform over their successors. Objective
//! kinds are `Reach`, `Safe`, `Buchi`, `CoBuchi` (with `target`) and
//! `Parity` (priorities taken from the states; an optional integer
//! `priorities` bounds them from above). `inputs`/`outputs` mark a synthesis
//! game; `forbidden`/`fair` make an assumption automaton file.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{EdgeSet, GameBuilder, GameGraph, Letter, Objective, Owner, Priorities, Weight};
use crate::synthesis::SynthesisGame;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    id: String,
    owner: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    priority: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    label: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObjective {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    priorities: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGame {
    states: Vec<RawState>,
    edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dist: Option<BTreeMap<String, BTreeMap<String, String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    objective: Option<RawObjective>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inputs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    outputs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    forbidden: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fair: Option<Vec<(String, String)>>,
}

/// Contents of a game file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameDoc {
    pub graph: GameGraph,
    pub objective: Option<Objective>,
    pub inputs: Option<Vec<String>>,
    pub outputs: Option<Vec<String>>,
    pub forbidden: Option<EdgeSet>,
    pub fair: Option<EdgeSet>,
}

impl GameDoc {
    pub fn new(graph: GameGraph, objective: Option<Objective>) -> Self {
        GameDoc {
            graph,
            objective,
            inputs: None,
            outputs: None,
            forbidden: None,
            fair: None,
        }
    }

    pub fn from_synthesis(sg: &SynthesisGame) -> Self {
        GameDoc {
            graph: sg.graph.clone(),
            objective: Some(sg.objective.clone()),
            inputs: Some(sg.inputs.clone()),
            outputs: Some(sg.outputs.clone()),
            forbidden: None,
            fair: None,
        }
    }

    pub fn is_synthesis(&self) -> bool {
        self.inputs.is_some() || self.outputs.is_some()
    }

    /// The objective, failing if the file has none.
    pub fn objective(&self) -> Result<&Objective> {
        self.objective
            .as_ref()
            .ok_or_else(|| Error::validation("objective", "missing objective"))
    }

    /// The file read as a synthesis game.
    pub fn synthesis(&self) -> Result<SynthesisGame> {
        let initial = self
            .graph
            .initial()
            .ok_or_else(|| Error::validation("initial", "a synthesis game needs an initial state"))?;
        SynthesisGame::new(
            self.graph.clone(),
            initial,
            self.inputs.clone().unwrap_or_default(),
            self.outputs.clone().unwrap_or_default(),
            self.objective()?.clone(),
        )
    }

    /// Pretty-printed JSON; the output only depends on the document.
    pub fn to_json(&self) -> String {
        let g = &self.graph;
        let edge_ids = |es: &EdgeSet| -> Vec<(String, String)> { g.edge_ids_of(es) };
        let mut dist = BTreeMap::new();
        for s in g.states_of(Owner::Prob) {
            let d = g.dist(s).unwrap_or_default();
            dist.insert(
                g.id(s).to_string(),
                d.iter()
                    .map(|&(t, w)| (g.id(t).to_string(), w.to_string()))
                    .collect::<BTreeMap<_, _>>(),
            );
        }
        let raw = RawGame {
            states: g
                .states()
                .iter()
                .map(|st| RawState {
                    id: st.id.clone(),
                    owner: st.owner.as_str().to_string(),
                    priority: st.priority,
                    label: st.label.0.iter().cloned().collect(),
                })
                .collect(),
            edges: g
                .edges()
                .map(|(s, t)| (g.id(s).to_string(), g.id(t).to_string()))
                .collect(),
            dist: (!dist.is_empty()).then_some(dist),
            initial: g.initial().map(|s| g.id(s).to_string()),
            objective: self.objective.as_ref().map(|o| raw_objective(g, o)),
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            forbidden: self.forbidden.as_ref().map(edge_ids),
            fair: self.fair.as_ref().map(edge_ids),
        };
        let mut out = serde_json::to_string_pretty(&raw).expect("game documents serialise");
        out.push('\n');
        out
    }
}

fn raw_objective(g: &GameGraph, o: &Objective) -> RawObjective {
    match o {
        Objective::Parity(p) => RawObjective {
            kind: "Parity".into(),
            target: None,
            priorities: Some(p.d()),
        },
        _ => RawObjective {
            kind: o.kind().into(),
            target: o.target().map(|t| g.ids_of(t)),
            priorities: None,
        },
    }
}

fn parse_owner(s: &str) -> Result<Owner> {
    match s {
        "P1" => Ok(Owner::P1),
        "P2" => Ok(Owner::P2),
        "PROB" => Ok(Owner::Prob),
        _ => Err(Error::validation("owner", format!("unknown owner `{s}`"))),
    }
}

fn parse_edges(g: &GameGraph, field: &str, es: &[(String, String)]) -> Result<EdgeSet> {
    es.iter()
        .map(|(s, t)| {
            g.resolve_edge(s, t).map_err(|e| match e {
                Error::UnknownState(id) => {
                    Error::validation(field, format!("unknown state `{id}`"))
                }
                other => other,
            })
        })
        .collect()
}

/// Parses and validates a game file.
pub fn parse_game(text: &str) -> Result<GameDoc> {
    let raw: RawGame = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let mut b = GameBuilder::new();
    let mut ids = BTreeMap::new();
    for st in &raw.states {
        let i = b.add_state(
            st.id.clone(),
            parse_owner(&st.owner)?,
            st.priority,
            Letter::from_props(st.label.iter().cloned()),
        );
        ids.insert(st.id.clone(), i);
    }
    let find = |field: &str, id: &str| {
        ids.get(id)
            .copied()
            .ok_or_else(|| Error::validation(field, format!("unknown state `{id}`")))
    };
    for (s, t) in &raw.edges {
        b.add_edge(find("edges", s)?, find("edges", t)?);
    }
    if let Some(dist) = &raw.dist {
        for (s, m) in dist {
            let si = find("dist", s)?;
            for (t, w) in m {
                let w: Weight = w
                    .parse()
                    .map_err(|_| Error::validation("dist", format!("bad weight `{w}`")))?;
                b.set_weight(si, find("dist", t)?, w);
            }
        }
    }
    if let Some(init) = &raw.initial {
        b.initial = Some(find("initial", init)?);
    }
    let graph = b.build_sorted()?;
    let objective = raw
        .objective
        .as_ref()
        .map(|o| parse_objective(&graph, o))
        .transpose()?;
    let forbidden = raw
        .forbidden
        .as_ref()
        .map(|es| parse_edges(&graph, "forbidden", es))
        .transpose()?;
    let fair = raw
        .fair
        .as_ref()
        .map(|es| parse_edges(&graph, "fair", es))
        .transpose()?;
    let doc = GameDoc {
        graph,
        objective,
        inputs: raw.inputs,
        outputs: raw.outputs,
        forbidden,
        fair,
    };
    if doc.is_synthesis() {
        doc.synthesis()?;
    }
    Ok(doc)
}

fn parse_objective(g: &GameGraph, o: &RawObjective) -> Result<Objective> {
    let target = || -> Result<_> {
        let ids = o
            .target
            .as_ref()
            .ok_or_else(|| Error::validation("objective.target", "missing target"))?;
        g.set_from_ids(ids)
            .map_err(|e| Error::validation("objective.target", e.to_string()))
    };
    let obj = match o.kind.as_str() {
        "Reach" => Objective::Reach(target()?),
        "Safe" => Objective::Safe(target()?),
        "Buchi" => Objective::Buchi(target()?),
        "CoBuchi" => Objective::CoBuchi(target()?),
        "Parity" => {
            let p = g.priorities().ok_or_else(|| {
                Error::validation("priority", "every state needs a priority for Parity")
            })?;
            if let Some(d) = o.priorities {
                if p.0.iter().any(|&x| x >= d) {
                    return Err(Error::validation(
                        "objective.priorities",
                        format!("a priority is not below {d}"),
                    ));
                }
            }
            Objective::Parity(p)
        }
        k => return Err(Error::validation("objective.kind", format!("unknown kind `{k}`"))),
    };
    Ok(obj)
}

/// Priorities for an objective that has them, or the stored state
/// priorities otherwise.
pub fn priorities_for(g: &GameGraph, obj: Option<&Objective>) -> Option<Priorities> {
    obj.and_then(|o| o.priorities(g.len())).or_else(|| g.priorities())
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT rendering: boxes for player-1 states, diamonds for player-2 states,
/// circles for probabilistic states; forbidden edges dashed, fair edges
/// bold.
pub fn to_dot(g: &GameGraph, forbidden: Option<&EdgeSet>, fair: Option<&EdgeSet>) -> String {
    let mut out = String::from("digraph game {\n");
    for (s, st) in g.states().iter().enumerate() {
        let shape = match st.owner {
            Owner::P1 => "box",
            Owner::P2 => "diamond",
            Owner::Prob => "circle",
        };
        let mut label = st.id.clone();
        if let Some(p) = st.priority {
            let _ = write!(label, " : {p}");
        }
        if !st.label.0.is_empty() {
            let _ = write!(label, "\\n{}", st.label);
        }
        let _ = writeln!(
            out,
            "  n{s} [label=\"{}\", shape={shape}{}];",
            dot_escape(&label),
            if g.initial() == Some(s) { ", peripheries=2" } else { "" }
        );
    }
    for (s, t) in g.edges() {
        let mut attrs = Vec::new();
        if forbidden.is_some_and(|f| f.contains(&(s, t))) {
            attrs.push("style=dashed".to_string());
        }
        if fair.is_some_and(|f| f.contains(&(s, t))) {
            attrs.push("style=bold".to_string());
        }
        if let Some(d) = g.dist(s) {
            if let Some((_, w)) = d.iter().find(|(x, _)| *x == t) {
                attrs.push(format!("label=\"{w}\""));
            }
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  n{s} -> n{t};");
        } else {
            let _ = writeln!(out, "  n{s} -> n{t} [{}];", attrs.join(", "));
        }
    }
    out.push_str("}\n");
    out
}
