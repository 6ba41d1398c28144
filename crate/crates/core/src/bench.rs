//! Benchmark generators: the CNF-to-game hardness construction and seeded
//! random games.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{EdgeSet, GameBuilder, GameGraph, Letter, Objective, Owner};

/// A CNF formula over variables `1..=num_vars`; literals are signed
/// variable indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    /// Validates literal ranges and clause sizes (1 to 3 literals).
    /// Repeated literals inside a clause are merged.
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Cnf> {
        let mut out = Vec::with_capacity(clauses.len());
        for (i, c) in clauses.into_iter().enumerate() {
            let mut c2: Vec<i32> = Vec::new();
            for l in c {
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(Error::validation(
                        "clauses",
                        format!("literal {l} in clause {} is out of range", i + 1),
                    ));
                }
                if !c2.contains(&l) {
                    c2.push(l);
                }
            }
            if c2.is_empty() || c2.len() > 3 {
                return Err(Error::validation(
                    "clauses",
                    format!("clause {} must have 1 to 3 literals", i + 1),
                ));
            }
            out.push(c2);
        }
        if num_vars == 0 || out.is_empty() {
            return Err(Error::validation("cnf", "at least one variable and one clause required"));
        }
        Ok(Cnf {
            num_vars,
            clauses: out,
        })
    }

    /// Parses DIMACS CNF (`p cnf <vars> <clauses>` header, `c` comments,
    /// clauses terminated by `0`).
    pub fn parse_dimacs(text: &str) -> Result<Cnf> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            let syntax = |msg: &str| Error::Syntax {
                line: ln + 1,
                column: 1,
                msg: msg.to_string(),
            };
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if header.is_some() || parts.len() != 4 || parts[1] != "cnf" {
                    return Err(syntax("expected `p cnf <vars> <clauses>`"));
                }
                let v = parts[2].parse().map_err(|_| syntax("bad variable count"))?;
                let c = parts[3].parse().map_err(|_| syntax("bad clause count"))?;
                header = Some((v, c));
                continue;
            }
            if header.is_none() {
                return Err(syntax("clause before the `p cnf` header"));
            }
            for tok in line.split_whitespace() {
                let l: i32 = tok.parse().map_err(|_| syntax("bad literal"))?;
                if l == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(l);
                }
            }
        }
        let (v, c) = header.ok_or_else(|| Error::Syntax {
            line: 1,
            column: 1,
            msg: "missing `p cnf` header".into(),
        })?;
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != c {
            return Err(Error::validation(
                "clauses",
                format!("header announces {c} clauses, found {}", clauses.len()),
            ));
        }
        Cnf::new(v, clauses)
    }

    /// Value of the formula; `assignment[i]` is the value of variable `i+1`.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    /// Brute-force satisfiability.
    pub fn satisfying_assignment(&self) -> Option<Vec<bool>> {
        (0u64..1 << self.num_vars)
            .map(|m| (0..self.num_vars).map(|i| m >> i & 1 == 1).collect::<Vec<_>>())
            .find(|a| self.eval(a))
    }

    pub fn is_satisfiable(&self) -> bool {
        self.satisfying_assignment().is_some()
    }
}

/// Every CNF with `1..=max_vars` variables, all of them used, and
/// `1..=max_clauses` distinct clauses of 1 to 3 distinct variables, up to
/// renaming and negating variables. Each class is represented by its least
/// sorted form.
pub fn small_cnfs(max_vars: usize, max_clauses: usize) -> Vec<Cnf> {
    let mut out = Vec::new();
    for n in 1..=max_vars {
        let mut pool: Vec<Vec<i32>> = Vec::new();
        for mask in 1u32..1 << n {
            let vars: Vec<i32> = (1..=n as i32).filter(|v| mask >> (v - 1) & 1 == 1).collect();
            if vars.len() > 3 {
                continue;
            }
            for signs in 0u32..1 << vars.len() {
                let mut c: Vec<i32> = vars
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| if signs >> i & 1 == 1 { -v } else { v })
                    .collect();
                c.sort_unstable();
                pool.push(c);
            }
        }
        let perms = permutations(n);
        let mut seen = std::collections::BTreeSet::new();
        for c in 1..=max_clauses.min(pool.len()) {
            for_each_combination(pool.len(), c, |idx| {
                let f: Vec<Vec<i32>> = idx.iter().map(|&i| pool[i].clone()).collect();
                let used = f.iter().flatten().fold(0u32, |m, l| m | 1 << (l.unsigned_abs() - 1));
                if used.count_ones() as usize != n {
                    return;
                }
                let mut best: Option<Vec<Vec<i32>>> = None;
                for perm in &perms {
                    for signs in 0u32..1 << n {
                        let mut g: Vec<Vec<i32>> = f
                            .iter()
                            .map(|cl| {
                                let mut cl: Vec<i32> = cl
                                    .iter()
                                    .map(|&l| {
                                        let v = l.unsigned_abs() as usize - 1;
                                        let flip = if signs >> v & 1 == 1 { -1 } else { 1 };
                                        perm[v] * l.signum() * flip
                                    })
                                    .collect();
                                cl.sort_unstable();
                                cl
                            })
                            .collect();
                        g.sort();
                        if best.as_ref().map_or(true, |b| g < *b) {
                            best = Some(g);
                        }
                    }
                }
                seen.insert(best.expect("at least one permutation"));
            });
        }
        out.extend(seen.into_iter().map(|clauses| Cnf { num_vars: n, clauses }));
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<i32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n as i32);
            out.push(q);
        }
    }
    out
}

fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.num_vars, self.clauses.len())?;
        for c in &self.clauses {
            for l in c {
                write!(f, "{l} ")?;
            }
            writeln!(f, "0")?;
        }
        Ok(())
    }
}

/// The game built from a CNF formula.
#[derive(Debug, Clone)]
pub struct ThreeSatGame {
    pub game: GameGraph,
    pub objective: Objective,
    /// The grid entry `"11"`.
    pub initial: usize,
    /// Bound on the number of fair edges, equal to the number of variables.
    pub k: usize,
}

/// Id of grid state in column `col`, row `row` (both 1-based).
pub fn grid_id(col: usize, row: usize) -> String {
    if col >= 10 || row >= 10 {
        format!("{col}_{row}")
    } else {
        format!("{col}{row}")
    }
}

fn literal_id(l: i32) -> String {
    if l > 0 {
        format!("l{l}")
    } else {
        format!("nl{}", -l)
    }
}

/// Builds the hardness game of `f`.
///
/// Player 1 owns variable states `v_i` (choosing literal `l_i` or `nl_i`)
/// and clause states `c_i` (choosing one of their literals). Literal states
/// belong to player 2 and lead to `B` (priority 0) or `Bbar`. Both return to
/// the entry `"11"` of a triangular grid of player-2 states with `j = n + c`
/// columns; column `k` has `min(k + 1, j)` rows, each state moves right and
/// up, and row `r` of the last column leads to the `r`-th element of
/// `v_1..v_n, c_1..c_c`. The objective is Büchi on `B`.
pub fn gen_3sat_game(f: &Cnf) -> Result<ThreeSatGame> {
    let f = Cnf::new(f.num_vars, f.clauses.clone())?;
    let n = f.num_vars;
    let c = f.clauses.len();
    let j = n + c;
    let mut b = GameBuilder::new();
    let add = |b: &mut GameBuilder, id: String, owner: Owner, prio: u32| {
        b.add_state(id, owner, Some(prio), Letter::empty())
    };
    let big_b = add(&mut b, "B".into(), Owner::P2, 0);
    let bbar = add(&mut b, "Bbar".into(), Owner::P2, 1);
    let mut targets = Vec::with_capacity(j);
    let mut lit = std::collections::HashMap::new();
    for i in 1..=n as i32 {
        let v = add(&mut b, format!("v{i}"), Owner::P1, 1);
        targets.push(v);
        for l in [i, -i] {
            let s = add(&mut b, literal_id(l), Owner::P2, 1);
            lit.insert(l, s);
            b.add_edge(v, s).add_edge(s, big_b).add_edge(s, bbar);
        }
    }
    for (i, cl) in f.clauses.iter().enumerate() {
        let cs = add(&mut b, format!("c{}", i + 1), Owner::P1, 1);
        targets.push(cs);
        for l in cl {
            b.add_edge(cs, lit[l]);
        }
    }
    let height = |k: usize| (k + 1).min(j);
    let mut grid = vec![Vec::new(); j + 1];
    for (k, col) in grid.iter_mut().enumerate().skip(1) {
        for r in 1..=height(k) {
            col.push(add(&mut b, grid_id(k, r), Owner::P2, 1));
        }
    }
    for k in 1..=j {
        for r in 1..=height(k) {
            let s = grid[k][r - 1];
            if k < j {
                b.add_edge(s, grid[k + 1][r - 1]);
            } else {
                b.add_edge(s, targets[r - 1]);
            }
            if r < height(k) {
                b.add_edge(s, grid[k][r]);
            }
        }
    }
    let start = grid[1][0];
    b.add_edge(big_b, start).add_edge(bbar, start);
    b.initial = Some(start);
    let game = b.build_sorted()?;
    let initial = game.resolve(&grid_id(1, 1))?;
    let objective = Objective::Buchi(game.set_of([game.resolve("B")?]));
    Ok(ThreeSatGame {
        game,
        objective,
        initial,
        k: n,
    })
}

/// Reads an assignment off a fair-edge set of the hardness game: variable
/// `i` is true iff `(l_i, B)` is fair. Returns `None` unless every variable
/// gets exactly one of `(l_i, B)`, `(nl_i, B)`.
pub fn decode_assignment(g: &ThreeSatGame, f: &Cnf, fair: &EdgeSet) -> Option<Vec<bool>> {
    let b = g.game.lookup("B")?;
    (1..=f.num_vars)
        .map(|i| {
            let pos = fair.contains(&(g.game.lookup(&format!("l{i}"))?, b));
            let neg = fair.contains(&(g.game.lookup(&format!("nl{i}"))?, b));
            (pos != neg).then_some(pos)
        })
        .collect()
}

/// Parameters of [`random_game`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomParams {
    /// At least 1.
    pub num_states: usize,
    /// Probability of each ordered pair being an edge, in `(0, 1]`. A state
    /// that receives no edge gets one uniformly chosen successor.
    pub edge_density: f64,
    /// Priorities are drawn from `0..num_priorities`; at least 1.
    pub num_priorities: u32,
    /// Probability of a state being probabilistic, in `[0, 1]`.
    pub prob_fraction: f64,
}

impl RandomParams {
    pub fn validate(&self) -> Result<()> {
        if self.num_states == 0 {
            return Err(Error::validation("num_states", "must be at least 1"));
        }
        if !(self.edge_density > 0.0 && self.edge_density <= 1.0) {
            return Err(Error::validation("edge_density", "must lie in (0, 1]"));
        }
        if self.num_priorities == 0 {
            return Err(Error::validation("num_priorities", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.prob_fraction) {
            return Err(Error::validation("prob_fraction", "must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// A seeded random game with priorities stored on the states and uniform
/// distributions on probabilistic states. Ids are zero-padded `s<i>`.
pub fn random_game(params: &RandomParams, seed: u64) -> Result<GameGraph> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.num_states;
    let width = (n - 1).to_string().len();
    let mut b = GameBuilder::new();
    for i in 0..n {
        let owner = if rng.gen_bool(params.prob_fraction) {
            Owner::Prob
        } else if rng.gen_bool(0.5) {
            Owner::P1
        } else {
            Owner::P2
        };
        let prio = rng.gen_range(0..params.num_priorities);
        b.add_state(format!("s{i:0width$}"), owner, Some(prio), Letter::empty());
    }
    for s in 0..n {
        let mut any = false;
        for t in 0..n {
            if rng.gen_bool(params.edge_density) {
                b.add_edge(s, t);
                any = true;
            }
        }
        if !any {
            b.add_edge(s, rng.gen_range(0..n));
        }
    }
    b.build_sorted()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_family_counts() {
        let fs = small_cnfs(3, 4);
        assert_eq!(fs.len(), 503);
        assert_eq!(fs.iter().filter(|f| !f.is_satisfiable()).count(), 63);
    }

    #[test]
    fn dimacs_round_trip() {
        let f = Cnf::parse_dimacs("c demo\np cnf 2 2\n1 -2 0\n2 0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![1, -2], vec![2]]);
        assert_eq!(Cnf::parse_dimacs(&f.to_string()).unwrap(), f);
        assert!(f.is_satisfiable());
        assert!(Cnf::parse_dimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(Cnf::parse_dimacs("1 0\n").is_err());
        assert!(Cnf::parse_dimacs("p cnf 1 2\n1 0\n").is_err());
    }

    #[test]
    fn single_clause_game() {
        let f = Cnf::new(1, vec![vec![1]]).unwrap();
        let g = gen_3sat_game(&f).unwrap();
        assert_eq!(g.game.len(), 10);
        assert_eq!(g.game.id(g.initial), "11");
        assert_eq!(g.k, 1);
        assert_eq!(g.game.num_edges(), 15);
    }

    #[test]
    fn random_is_reproducible() {
        let p = RandomParams {
            num_states: 6,
            edge_density: 0.4,
            num_priorities: 3,
            prob_fraction: 0.0,
        };
        let a = random_game(&p, 1).unwrap();
        assert_eq!(a, random_game(&p, 1).unwrap());
        assert!(a.is_deterministic());
        let bad = RandomParams { edge_density: 0.0, ..p };
        assert!(random_game(&bad, 1).is_err());
    }
}
