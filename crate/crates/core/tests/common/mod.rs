//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use loopcert::solver::{ExtendedMatchingProblem, IdentityProblem, MatchingProblem, Problem};
use loopcert::{Context, Position, Rule, Substitution, Term, Trs};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub const FUNS: [(&str, usize); 5] = [("f", 2), ("g", 1), ("h", 1), ("a", 0), ("b", 0)];
pub const VARS: [&str; 4] = ["x", "y", "z", "w"];

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}

pub fn rng(seed: u64) -> TestRng {
    TestRng::seed_from_u64(seed)
}

pub fn term(rng: &mut TestRng, depth: usize, vars: &[&str]) -> Term {
    if depth == 0 || rng.gen_bool(0.3) {
        if !vars.is_empty() && rng.gen_bool(0.6) {
            return Term::var(vars.choose(rng).unwrap());
        }
        return Term::constant(if rng.gen_bool(0.5) { "a" } else { "b" });
    }
    let (f, n) = FUNS[rng.gen_range(0..3)];
    Term::app(f, (0..n).map(|_| term(rng, depth - 1, vars)).collect())
}

pub fn context(rng: &mut TestRng, depth: usize, vars: &[&str]) -> Context {
    let mut body = term(rng, depth, vars);
    let positions = body.positions();
    let p = positions.choose(rng).unwrap().clone();
    body = body.replace_at(&p, Term::hole()).unwrap();
    Context::new(body).unwrap()
}

/// A substitution whose images contain every variable at most once overall,
/// so `tμ^n` grows at most linearly in `n`.
pub fn subst(rng: &mut TestRng) -> Substitution {
    let mut budget: Vec<&str> = VARS.to_vec();
    budget.shuffle(rng);
    let mut pairs = Vec::new();
    for x in VARS {
        if rng.gen_bool(0.35) {
            continue;
        }
        let image = linear_term(rng, 2, &mut budget);
        pairs.push((x, image));
    }
    Substitution::from_pairs(pairs)
}

fn linear_term(rng: &mut TestRng, depth: usize, budget: &mut Vec<&str>) -> Term {
    if depth == 0 || rng.gen_bool(0.4) {
        if !budget.is_empty() && rng.gen_bool(0.75) {
            return Term::var(budget.pop().unwrap());
        }
        return Term::constant(if rng.gen_bool(0.5) { "a" } else { "b" });
    }
    let (f, n) = FUNS[rng.gen_range(0..3)];
    Term::app(f, (0..n).map(|_| linear_term(rng, depth - 1, budget)).collect())
}

/// Replaces random subterms of `t` by pattern variables, sometimes reusing
/// one so that the result is non-linear.
pub fn generalize(rng: &mut TestRng, t: &Term) -> Term {
    let pvars = ["p", "q", "r"];
    let mut out = t.clone();
    for _ in 0..rng.gen_range(0..4) {
        let positions = out.positions();
        let p = positions.choose(rng).unwrap().clone();
        out = out.replace_at(&p, Term::var(pvars.choose(rng).unwrap())).unwrap();
    }
    out
}

pub fn matching_problem(rng: &mut TestRng) -> MatchingProblem {
    let mu = subst(rng);
    let pairs = (0..rng.gen_range(1..=2))
        .map(|_| {
            let u = term(rng, 3, &VARS);
            let l = if rng.gen_bool(0.6) {
                let k = rng.gen_range(0..6);
                generalize(rng, &u.apply_n(&mu, k))
            } else {
                term(rng, 3, &["p", "q"])
            };
            (u, l)
        })
        .collect();
    MatchingProblem {
        pairs,
        identities: Vec::new(),
        mu,
    }
}

pub fn identity_problem(rng: &mut TestRng) -> IdentityProblem {
    let mu = subst(rng);
    let u = term(rng, 3, &VARS);
    let v = if rng.gen_bool(0.5) {
        // agree after some steps more often than two unrelated terms
        let w = u.apply_n(&mu, rng.gen_range(0..4));
        let positions = w.positions();
        let p = positions.choose(rng).unwrap().clone();
        w.replace_at(&p, term(rng, 1, &VARS)).unwrap()
    } else {
        term(rng, 3, &VARS)
    };
    IdentityProblem { u, v, mu }
}

pub fn extended_problem(rng: &mut TestRng) -> ExtendedMatchingProblem {
    let mu = subst(rng);
    let d = if rng.gen_bool(0.1) {
        Context::empty()
    } else {
        context(rng, 2, &VARS)
    };
    let c = if rng.gen_bool(0.1) {
        Context::empty()
    } else {
        context(rng, 2, &VARS)
    };
    let t = term(rng, 2, &VARS);
    let mut emp = ExtendedMatchingProblem {
        d,
        pattern: Term::var("p"),
        c,
        t,
        mu,
    };
    emp.pattern = if rng.gen_bool(0.6) {
        let inst = emp.instance(rng.gen_range(0..4), rng.gen_range(0..4));
        generalize(rng, &inst)
    } else {
        term(rng, 3, &["p", "q"])
    };
    emp
}

pub fn problem(rng: &mut TestRng) -> Problem {
    match rng.gen_range(0..3) {
        0 => Problem::Matching(matching_problem(rng)),
        1 => Problem::Identity(identity_problem(rng)),
        _ => Problem::Extended(extended_problem(rng)),
    }
}

/// A rule `ℓ → r` and a position `q` of `t` with `t|_q` an instance of `ℓ`.
pub fn redex_instance(rng: &mut TestRng) -> (Term, Position, Rule) {
    loop {
        let lhs = term(rng, 2, &["p", "q"]);
        if lhs.is_var() {
            continue;
        }
        let lvars: Vec<String> = lhs.vars().iter().map(|v| v.to_string()).collect();
        let lv: Vec<&str> = lvars.iter().map(String::as_str).collect();
        let rhs = term(rng, 2, &lv);
        let Ok(rule) = Rule::new(lhs.clone(), rhs) else { continue };
        let sigma = Substitution::from_pairs(
            lv.iter().map(|v| (*v, term(rng, 2, &VARS))).collect::<Vec<_>>(),
        );
        let outer = term(rng, 3, &VARS);
        let positions = outer.positions();
        let q = positions.choose(rng).unwrap().clone();
        let t = outer.replace_at(&q, lhs.apply(&sigma)).unwrap();
        return (t, q, rule);
    }
}

/// A small random system whose rules tend to reproduce their left-hand
/// sides, so that loops are common.
pub fn looping_trs(rng: &mut TestRng) -> Trs {
    let vars = ["x", "y"];
    let mut rules = Vec::new();
    while rules.len() < rng.gen_range(1..=3) {
        let lhs = term(rng, 2, &vars);
        if lhs.is_var() {
            continue;
        }
        let lvars: Vec<String> = lhs.vars().iter().map(|v| v.to_string()).collect();
        let lv: Vec<&str> = lvars.iter().map(String::as_str).collect();
        let rhs = if rng.gen_bool(0.7) {
            // embed an instance of the lhs in a small context
            let c = context(rng, 2, &lv);
            let mut step = Substitution::new();
            for v in &lv {
                if rng.gen_bool(0.5) {
                    step.insert((*v).into(), term(rng, 1, &lv));
                }
            }
            c.plug(lhs.apply(&step))
        } else {
            term(rng, 2, &lv)
        };
        if let Ok(rule) = Rule::new(lhs, rhs) {
            rules.push(rule);
        }
    }
    let variables: BTreeSet<_> = vars.iter().map(|v| (*v).into()).collect();
    Trs::new(variables, rules).unwrap()
}
