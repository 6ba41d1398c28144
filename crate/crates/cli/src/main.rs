//! `assumekit`: solve games, compute environment assumptions, check fair
//! edge sets, generate benchmarks and test words against assumption
//! automata. Every successful run prints one JSON report on stdout; failures
//! print nothing on stdout and a message on stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use assumekit::bench::{gen_3sat_game, random_game, Cnf, RandomParams};
use assumekit::fair::{is_fair_sufficient, locally_minimal_fair, NoFairReason};
use assumekit::io::{parse_game, to_dot, GameDoc};
use assumekit::pipeline::{combined_assumption, env_witness, verify_strategy, AssumptionAutomaton, Outcome};
use assumekit::safety::compute_safety_assumption;
use assumekit::stochastic::almost_sure_parity_checked;
use assumekit::synthesis::{strategy_to_moore, MealyTransducer, MooreTransducer};
use assumekit::{fixtures, parity_form, solve, EdgeSet, Error, GameGraph, LassoWord, Objective, Owner};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "assumekit", version, about = "Environment assumptions for unrealizable synthesis games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Winning regions and strategies (almost-sure for probabilistic games).
    Solve {
        file: PathBuf,
        /// `parity`, or `reach|safe|buchi|cobuchi:` followed by state ids.
        #[arg(long)]
        objective: Option<String>,
        /// Include a DOT rendering of the game.
        #[arg(long)]
        dot: bool,
    },
    /// Safety, fair or combined environment assumption.
    Assume {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// State to make winning (fair mode); defaults to the initial state.
        #[arg(long)]
        state: Option<String>,
        /// Where to write the automaton file (combined mode).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: bool,
    },
    /// Whether a set of fair edges suffices for a state.
    Check {
        file: PathBuf,
        /// Comma-separated `src->dst` pairs; may be empty.
        #[arg(long, allow_hyphen_values = true)]
        fair_edges: String,
        #[arg(long)]
        state: String,
    },
    /// Generate a benchmark game.
    Gen(GenArgs),
    /// Whether a lasso word is in the language of an assumption automaton.
    Member {
        file: PathBuf,
        /// `stem|cycle`, letters like `{req,grant}` separated by commas.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GenSource {
    /// DIMACS CNF file.
    #[arg(long)]
    three_sat: Option<PathBuf>,
    /// `states=N,density=D,priorities=P,prob=F`.
    #[arg(long)]
    random: Option<String>,
    /// One of the built-in example games.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    source: GenSource,
    /// Seed for `--random`; defaults to `ASSUMEKIT_SEED`, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the game here instead of embedding it in the report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Safety,
    Fair,
    Combined,
}

/// A failed run: exit code and message.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Failure { code, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Invariant(_)) { 3 } else { 2 };
        Failure::new(code, e.to_string())
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// What a command produced besides timing.
struct Outputs {
    digest: String,
    seed: Option<u64>,
    result: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(cli.command) {
        Ok(out) => {
            let report = json!({
                "command": std::env::args().skip(1).collect::<Vec<_>>(),
                "input_digest": out.digest,
                "seed": out.seed,
                "result": out.result,
                "timing_ms": start.elapsed().as_millis() as u64,
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Run<Outputs> {
    match cmd {
        Command::Solve { file, objective, dot } => cmd_solve(&file, objective.as_deref(), dot),
        Command::Assume { file, mode, state, out, dot } => {
            cmd_assume(&file, mode, state.as_deref(), out.as_deref(), dot)
        }
        Command::Check { file, fair_edges, state } => cmd_check(&file, &fair_edges, &state),
        Command::Gen(args) => cmd_gen(&args),
        Command::Member { file, word } => cmd_member(&file, &word),
    }
}

fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

fn read(path: &Path) -> Run<(String, String)> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", path.display())))?;
    let d = digest(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| Failure::new(2, format!("{} is not UTF-8", path.display())))?;
    Ok((text, d))
}

fn load(path: &Path) -> Run<(GameDoc, String)> {
    let (text, d) = read(path)?;
    Ok((parse_game(&text)?, d))
}

fn write(path: &Path, contents: &str) -> Run<()> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::new(2, format!("cannot write {}: {e}", path.display())))
}

fn ids(g: &GameGraph, set: &assumekit::StateSet) -> Value {
    json!(g.ids_of(set))
}

fn edges(g: &GameGraph, e: &EdgeSet) -> Value {
    json!(g.edge_ids_of(e))
}

fn parse_objective(g: &GameGraph, spec: &str) -> Run<Objective> {
    if spec == "parity" {
        return g
            .priorities()
            .map(Objective::Parity)
            .ok_or_else(|| Failure::new(2, "parity objective needs a priority on every state"));
    }
    let (kind, list) = spec
        .split_once(':')
        .ok_or_else(|| Failure::new(2, format!("bad objective `{spec}`")))?;
    let mut set = g.empty_set();
    for id in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        set.insert(g.resolve(id)?);
    }
    Ok(match kind {
        "reach" => Objective::Reach(set),
        "safe" => Objective::Safe(set),
        "buchi" => Objective::Buchi(set),
        "cobuchi" => Objective::CoBuchi(set),
        _ => return Err(Failure::new(2, format!("unknown objective kind `{kind}`"))),
    })
}

fn cmd_solve(file: &Path, objective: Option<&str>, dot: bool) -> Run<Outputs> {
    let (doc, d) = load(file)?;
    let g = &doc.graph;
    let obj = match objective {
        Some(s) => parse_objective(g, s)?,
        None => doc.objective()?.clone(),
    };
    let mut result = if g.is_deterministic() {
        let r = solve(g, &obj)?;
        json!({
            "kind": "sure",
            "win1": ids(g, &r.win1),
            "win2": ids(g, &r.win2),
            "strategy1": r.strat1.to_ids(g),
            "strategy2": r.strat2.to_ids(g),
        })
    } else {
        let (g2, p) = parity_form(g, &obj)?;
        let (win, strat) = almost_sure_parity_checked(&g2, &p)?;
        json!({
            "kind": "almost_sure",
            "almost_sure": ids(g, &win),
            "strategy1": strat.to_ids(g),
        })
    };
    if dot {
        result["dot"] = json!(to_dot(g, None, None));
    }
    Ok(Outputs { digest: d, seed: None, result })
}

fn start_state(g: &GameGraph, state: Option<&str>) -> Run<usize> {
    match state {
        Some(id) => Ok(g.resolve(id)?),
        None => g
            .initial()
            .ok_or_else(|| Failure::new(2, "no --state given and the game has no initial state")),
    }
}

fn no_fair(reason: NoFairReason) -> Failure {
    let msg = match reason {
        NoFairReason::NotLive => "no fair assumption: the state is not live, a safety assumption is needed first",
        NoFairReason::NoFairSubset => "no fair assumption: even all environment edges as fair edges do not suffice",
    };
    Failure::new(5, msg)
}

fn cmd_assume(
    file: &Path,
    mode: Mode,
    state: Option<&str>,
    out: Option<&Path>,
    dot: bool,
) -> Run<Outputs> {
    let (doc, d) = load(file)?;
    let g = &doc.graph;
    let mut result = match mode {
        Mode::Safety => {
            let sa = compute_safety_assumption(g, doc.objective()?)?;
            let mut r = json!({
                "mode": "safety",
                "forbidden": edges(g, &sa.edges),
                "safe_region": ids(g, &sa.safe_region),
            });
            if dot {
                r["dot"] = json!(to_dot(g, Some(&sa.edges), None));
            }
            r
        }
        Mode::Fair => {
            g.ensure_deterministic()?;
            let s = start_state(g, state)?;
            let (g2, p) = parity_form(g, doc.objective()?)?;
            let fa = locally_minimal_fair(&g2, &p, s)?.map_err(no_fair)?;
            let mut r = json!({
                "mode": "fair",
                "state": g.id(s),
                "fair": edges(g, &fa.edges),
                "winning_from": ids(g, &fa.winning_from),
            });
            if dot {
                r["dot"] = json!(to_dot(g, None, Some(&fa.edges)));
            }
            r
        }
        Mode::Combined => combined(&doc, out, dot)?,
    };
    if let Some(obj) = result.as_object_mut() {
        obj.retain(|_, v| !v.is_null());
    }
    Ok(Outputs { digest: d, seed: None, result })
}

fn moore_json(m: &MooreTransducer) -> Value {
    json!({
        "states": m.names,
        "initial": m.names[m.initial],
        "inputs": m.inputs.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "delta": m.delta.iter().map(|row| row.iter().map(|&q| m.names[q].clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "output": m.output.iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

fn mealy_json(m: &MealyTransducer) -> Value {
    json!({
        "states": m.names,
        "initial": m.names[m.initial],
        "inputs": m.inputs.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "delta": m.delta.iter().map(|row| row.iter().map(|&q| m.names[q].clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "output": m.output.iter().map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn combined(doc: &GameDoc, out: Option<&Path>, dot: bool) -> Run<Value> {
    let sg = doc.synthesis()?;
    let ca = match combined_assumption(&sg)? {
        Outcome::Assumption(ca) => ca,
        Outcome::Unsat => {
            return Err(Failure::new(4, "specification is unsatisfiable from the initial state"))
        }
        Outcome::NoFair(r) => return Err(no_fair(r)),
    };
    if !verify_strategy(&ca.transformed, &ca.transformed_priorities, &ca.fair.edges, &ca.strategy, sg.initial)? {
        return Err(Error::Invariant("strategy does not win under the computed assumption".into()).into());
    }
    let g = &sg.graph;
    let aut = &ca.automaton;
    let aut_json = aut.to_doc().to_json();
    if let Some(path) = out {
        write(path, &aut_json)?;
    }
    let system = strategy_to_moore(&sg, &ca.base_strategy()).ok().map(|m| moore_json(&m));
    let mut r = json!({
        "mode": "combined",
        "forbidden": edges(g, &ca.safety.edges),
        "fair": edges(g, &ca.fair.edges),
        "empty": aut.is_empty(),
        "witness_word": aut.witness_word().map(|w| w.to_string()),
        "system": system,
        "environment": mealy_json(&env_witness(aut)?),
        "automaton": serde_json::from_str::<Value>(&aut_json).expect("document is JSON"),
    });
    if let Some(path) = out {
        r["automaton_file"] = json!(path.display().to_string());
    }
    if dot {
        r["dot"] = json!(to_dot(g, Some(&ca.safety.edges), Some(&ca.fair.edges)));
    }
    Ok(r)
}

fn parse_edges(g: &GameGraph, list: &str) -> Run<EdgeSet> {
    let mut out = EdgeSet::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (s, t) = item
            .split_once("->")
            .ok_or_else(|| Failure::new(2, format!("bad edge `{item}`, expected `src->dst`")))?;
        out.insert(g.resolve_edge(s.trim(), t.trim())?);
    }
    Ok(out)
}

fn cmd_check(file: &Path, fair_edges: &str, state: &str) -> Run<Outputs> {
    let (doc, d) = load(file)?;
    let g = &doc.graph;
    g.ensure_deterministic()?;
    let fair = parse_edges(g, fair_edges)?;
    if let Some(&(s, t)) = fair.iter().find(|&&(s, _)| g.owner(s) != Owner::P2) {
        return Err(Failure::new(
            2,
            format!("({}, {}) does not leave an environment state", g.id(s), g.id(t)),
        ));
    }
    let s = g.resolve(state)?;
    let (g2, p) = parity_form(g, doc.objective()?)?;
    // Absorbing states lose their edges in parity form; fairness there is moot.
    let fair2: EdgeSet = fair.iter().copied().filter(|&(u, t)| g2.has_edge(u, t)).collect();
    let yes = is_fair_sufficient(&g2, &p, &fair2, s)?;
    Ok(Outputs {
        digest: d,
        seed: None,
        result: json!({
            "state": state,
            "fair": edges(g, &fair),
            "sufficient": if yes { "yes" } else { "no" },
        }),
    })
}

fn parse_params(spec: &str) -> Run<RandomParams> {
    let mut p = RandomParams {
        num_states: 6,
        edge_density: 0.4,
        num_priorities: 3,
        prob_fraction: 0.0,
    };
    let bad = |msg: String| Failure::new(2, msg);
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| bad(format!("bad parameter `{item}`, expected key=value")))?;
        let num = |what: &str| bad(format!("bad value `{v}` for {what}"));
        match k.trim() {
            "states" => p.num_states = v.parse().map_err(|_| num("states"))?,
            "density" => p.edge_density = v.parse().map_err(|_| num("density"))?,
            "priorities" => p.num_priorities = v.parse().map_err(|_| num("priorities"))?,
            "prob" => p.prob_fraction = v.parse().map_err(|_| num("prob"))?,
            other => return Err(bad(format!("unknown parameter `{other}`"))),
        }
    }
    p.validate()?;
    Ok(p)
}

fn default_seed() -> Run<u64> {
    match std::env::var("ASSUMEKIT_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::new(2, format!("ASSUMEKIT_SEED is not an integer: `{s}`"))),
        Err(_) => Ok(0),
    }
}

fn cmd_gen(args: &GenArgs) -> Run<Outputs> {
    let src = &args.source;
    let (doc, d, seed, k) = if let Some(path) = &src.three_sat {
        let (text, d) = read(path)?;
        let f = Cnf::parse_dimacs(&text)?;
        let t = gen_3sat_game(&f)?;
        (GameDoc::new(t.game, Some(t.objective)), d, None, Some(t.k))
    } else if let Some(spec) = &src.random {
        let params = parse_params(spec)?;
        let seed = match args.seed {
            Some(s) => s,
            None => default_seed()?,
        };
        let g = random_game(&params, seed)?;
        let obj = g.priorities().map(Objective::Parity);
        (GameDoc::new(g, obj), digest(spec.as_bytes()), Some(seed), None)
    } else {
        let name = src.fixture.as_deref().unwrap_or_default();
        let doc = fixtures::by_name(name).ok_or_else(|| {
            Failure::new(2, format!("unknown fixture `{name}`; known: {}", fixtures::NAMES.join(", ")))
        })?;
        (doc, digest(name.as_bytes()), None, None)
    };
    let g = &doc.graph;
    let text = doc.to_json();
    let mut result = json!({
        "states": g.len(),
        "edges": g.edges().count(),
        "initial": g.initial().map(|s| g.id(s).to_string()),
        "k": k,
    });
    match &args.out {
        Some(path) => {
            write(path, &text)?;
            result["file"] = json!(path.display().to_string());
        }
        None => result["game"] = serde_json::from_str::<Value>(&text).expect("document is JSON"),
    }
    Ok(Outputs { digest: d, seed, result })
}

fn cmd_member(file: &Path, word: &str) -> Run<Outputs> {
    let (doc, d) = load(file)?;
    let aut = AssumptionAutomaton::from_doc(&doc)?;
    let w: LassoWord = word.parse()?;
    let accepted = aut.lasso_member(&w)?;
    Ok(Outputs {
        digest: d,
        seed: None,
        result: json!({
            "word": w.to_string(),
            "accepted": accepted,
        }),
    })
}
