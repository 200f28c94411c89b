//! Symbolic solver for matching and identity problems.
//!
//! Constraints are decomposed until only stuck ones remain: a variable
//! against a non-variable pattern, or an identity with a variable side. Then
//! `μ` is applied to every subject-side term and the exponent goes up by one.
//! A repeated state means the process never reaches a solved state.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::term::{Substitution, Symbol, Term};

use super::{
    Certificate, IdentityProblem, MatchingProblem, SolverConfig, SolverResult, Witness,
};

#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    pending: BTreeSet<(Term, Term)>,
    idents: BTreeSet<(Term, Term)>,
    bindings: BTreeMap<Symbol, Term>,
}

/// Does `xμ^k` stay a variable for every `k`?
fn orbit_is_variables(x: &Symbol, mu: &Substitution) -> bool {
    let mut seen = BTreeSet::new();
    let mut cur = x.clone();
    loop {
        if !seen.insert(cur.clone()) {
            return true;
        }
        match mu.image(&cur) {
            Term::Var(y) => cur = y,
            Term::App(..) => return false,
        }
    }
}

enum Outcome {
    Solved(usize),
    Refuted(Certificate),
    GaveUp(String),
}

fn run(
    pairs: &[(Term, Term)],
    identities: &[(Term, Term)],
    mu: &Substitution,
    config: &SolverConfig,
) -> Outcome {
    let mut m_work: Vec<(Term, Term)> = pairs.to_vec();
    let mut i_work: Vec<(Term, Term)> = identities.to_vec();
    let mut bindings: BTreeMap<Symbol, Term> = BTreeMap::new();
    let mut seen: HashSet<State> = HashSet::new();
    let mut offset = 0;
    loop {
        let mut pending = BTreeSet::new();
        let mut idents = BTreeSet::new();
        while let Some((u, l)) = m_work.pop() {
            match (&u, &l) {
                (_, Term::Var(x)) => match bindings.get(x) {
                    Some(b) => i_work.push((b.clone(), u)),
                    None => {
                        bindings.insert(x.clone(), u);
                    }
                },
                (Term::App(f, us), Term::App(g, ls)) => {
                    if f != g || us.len() != ls.len() {
                        return Outcome::Refuted(Certificate::RootClash);
                    }
                    m_work.extend(us.iter().cloned().zip(ls.iter().cloned()));
                }
                (Term::Var(y), Term::App(..)) => {
                    if orbit_is_variables(y, mu) {
                        return Outcome::Refuted(Certificate::VariableOrbit);
                    }
                    pending.insert((u, l));
                }
            }
        }
        while let Some((a, b)) = i_work.pop() {
            if a == b {
                continue;
            }
            match (&a, &b) {
                (Term::App(f, xs), Term::App(g, ys)) => {
                    if f != g || xs.len() != ys.len() {
                        return Outcome::Refuted(Certificate::RootClash);
                    }
                    i_work.extend(xs.iter().cloned().zip(ys.iter().cloned()));
                }
                (Term::Var(x), t @ Term::App(..)) | (t @ Term::App(..), Term::Var(x)) => {
                    if t.contains_var(x) {
                        return Outcome::Refuted(Certificate::OccursCheck);
                    }
                    if orbit_is_variables(x, mu) {
                        return Outcome::Refuted(Certificate::VariableOrbit);
                    }
                    idents.insert(if a <= b { (a, b) } else { (b, a) });
                }
                (Term::Var(_), Term::Var(_)) => {
                    idents.insert(if a <= b { (a, b) } else { (b, a) });
                }
            }
        }
        if pending.is_empty() && idents.is_empty() {
            return Outcome::Solved(offset);
        }
        let mut referenced = BTreeSet::new();
        for (_, l) in &pending {
            l.collect_vars(&mut referenced);
        }
        bindings.retain(|x, _| referenced.contains(x));
        let state = State {
            pending,
            idents,
            bindings,
        };
        if seen.contains(&state) {
            return Outcome::Refuted(Certificate::Cycle);
        }
        if offset >= config.bound {
            return Outcome::GaveUp("exponent bound reached".into());
        }
        let size: usize = state
            .pending
            .iter()
            .map(|(u, _)| u.size())
            .chain(state.idents.iter().map(|(a, b)| a.size() + b.size()))
            .chain(state.bindings.values().map(Term::size))
            .sum();
        if size > config.max_term_size {
            return Outcome::GaveUp("term size limit reached".into());
        }
        m_work = state
            .pending
            .iter()
            .map(|(u, l)| (u.apply(mu), l.clone()))
            .collect();
        i_work = state
            .idents
            .iter()
            .map(|(a, b)| (a.apply(mu), b.apply(mu)))
            .collect();
        bindings = state
            .bindings
            .iter()
            .map(|(x, t)| (x.clone(), t.apply(mu)))
            .collect();
        seen.insert(state);
        offset += 1;
    }
}

/// Finds the least `n` with `uᵢμ^n ⋗ ℓᵢ` for all pairs, or proves there is
/// none.
pub fn solve_matching(p: &MatchingProblem, config: &SolverConfig) -> SolverResult {
    match run(&p.pairs, &p.identities, &p.mu, config) {
        Outcome::Solved(n) => match p.check(n) {
            Some(sigma) => SolverResult::Solvable(Witness::Matching { n, sigma }),
            None => SolverResult::Unknown {
                bound: config.bound,
                reason: format!("candidate exponent {n} failed verification"),
            },
        },
        Outcome::Refuted(c) => SolverResult::Unsolvable(c),
        Outcome::GaveUp(reason) => SolverResult::Unknown {
            bound: config.bound,
            reason,
        },
    }
}

pub fn solve_identity(p: &IdentityProblem, config: &SolverConfig) -> SolverResult {
    match run(&[], &[(p.u.clone(), p.v.clone())], &p.mu, config) {
        Outcome::Solved(n) if p.check(n) => SolverResult::Solvable(Witness::Identity { n }),
        Outcome::Solved(n) => SolverResult::Unknown {
            bound: config.bound,
            reason: format!("candidate exponent {n} failed verification"),
        },
        Outcome::Refuted(c) => SolverResult::Unsolvable(c),
        Outcome::GaveUp(reason) => SolverResult::Unknown {
            bound: config.bound,
            reason,
        },
    }
}
