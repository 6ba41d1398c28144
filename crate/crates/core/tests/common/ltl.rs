//! LTL over ultimately periodic words, evaluated on the finite lasso.

use assumekit::LassoWord;

#[derive(Debug, Clone)]
pub enum Ltl {
    True,
    Prop(String),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
}

pub fn p(name: &str) -> Ltl {
    Ltl::Prop(name.to_string())
}
pub fn not(a: Ltl) -> Ltl {
    Ltl::Not(Box::new(a))
}
pub fn and(a: Ltl, b: Ltl) -> Ltl {
    Ltl::And(Box::new(a), Box::new(b))
}
pub fn or(a: Ltl, b: Ltl) -> Ltl {
    Ltl::Or(Box::new(a), Box::new(b))
}
pub fn implies(a: Ltl, b: Ltl) -> Ltl {
    or(not(a), b)
}
pub fn next(a: Ltl) -> Ltl {
    Ltl::Next(Box::new(a))
}
pub fn until(a: Ltl, b: Ltl) -> Ltl {
    Ltl::Until(Box::new(a), Box::new(b))
}
pub fn eventually(a: Ltl) -> Ltl {
    until(Ltl::True, a)
}
pub fn always(a: Ltl) -> Ltl {
    not(eventually(not(a)))
}

/// Truth value at every lasso position; position `stem + cycle - 1` is
/// followed by position `stem`.
fn eval(f: &Ltl, w: &LassoWord) -> Vec<bool> {
    let n = w.stem.len() + w.cycle.len();
    let succ = |i: usize| if i + 1 < n { i + 1 } else { w.stem.len() };
    match f {
        Ltl::True => vec![true; n],
        Ltl::Prop(x) => (0..n).map(|i| w.at(i).contains(x)).collect(),
        Ltl::Not(a) => eval(a, w).into_iter().map(|b| !b).collect(),
        Ltl::And(a, b) => eval(a, w).into_iter().zip(eval(b, w)).map(|(x, y)| x && y).collect(),
        Ltl::Or(a, b) => eval(a, w).into_iter().zip(eval(b, w)).map(|(x, y)| x || y).collect(),
        Ltl::Next(a) => {
            let v = eval(a, w);
            (0..n).map(|i| v[succ(i)]).collect()
        }
        Ltl::Until(a, b) => {
            let (va, vb) = (eval(a, w), eval(b, w));
            let mut r = vb.clone();
            loop {
                let mut changed = false;
                for i in (0..n).rev() {
                    if !r[i] && va[i] && r[succ(i)] {
                        r[i] = true;
                        changed = true;
                    }
                }
                if !changed {
                    return r;
                }
            }
        }
    }
}

pub fn holds(f: &Ltl, w: &LassoWord) -> bool {
    eval(f, w)[0]
}

/// G(req -> X F grant) & G((cancel | grant) -> X !grant)
pub fn request_grant_spec() -> Ltl {
    and(
        always(implies(p("req"), next(eventually(p("grant"))))),
        always(implies(or(p("cancel"), p("grant")), next(not(p("grant"))))),
    )
}
