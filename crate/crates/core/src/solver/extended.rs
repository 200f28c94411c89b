//! Extended matching problems `D[t(C,μ)^m]μ^k = ℓσ`.
//!
//! Unfolding `t(C,μ)^m μ^k = Cμ^k[Cμ^(k+1)[… tμ^(k+m)]]` and walking `ℓ`
//! down the hole path turns the problem into one ordinary matching problem
//! (over `k`) per value of `m`. Since `ℓ` is finite, the walk reaches either
//! a clash or a pattern variable after finitely many layers, and all larger
//! `m` share a single problem from then on.

use crate::term::{Substitution, Symbol, Term};

use super::matching::solve_matching;
use super::{
    Certificate, ExtendedMatchingProblem, MatchingProblem, SolverConfig, SolverResult, Witness,
};

enum Walk {
    Clash,
    Var(Symbol),
    Hole(Term),
}

/// Walks `pat` down the hole path of `body`, pushing every sibling pair
/// (with the subject shifted by `μ^shift`) onto `pairs`.
fn walk(
    body: &Term,
    path: &[usize],
    pat: &Term,
    shift: usize,
    mu: &Substitution,
    pairs: &mut Vec<(Term, Term)>,
) -> Walk {
    let (mut cur, mut pat) = (body, pat);
    for &i in path {
        let (Term::App(f, us), Term::App(g, ls)) = (cur, pat) else {
            return match pat {
                Term::Var(x) => Walk::Var(x.clone()),
                Term::App(..) => unreachable!("hole paths run through function symbols"),
            };
        };
        if f != g || us.len() != ls.len() {
            return Walk::Clash;
        }
        for (k, (u, l)) in us.iter().zip(ls).enumerate() {
            if k + 1 != i {
                pairs.push((u.apply_n(mu, shift), l.clone()));
            }
        }
        cur = &us[i - 1];
        pat = &ls[i - 1];
    }
    match pat {
        Term::Var(x) => Walk::Var(x.clone()),
        _ => Walk::Hole(pat.clone()),
    }
}

enum Case {
    /// exactly this `m`
    At(usize, MatchingProblem),
    /// every `m ≥ from`; the hole content sits below a linear pattern variable
    From(usize, MatchingProblem),
    /// every `m ≥ from`, not reducible exactly; the problem is a relaxation
    Open(usize, Option<MatchingProblem>),
}

fn occurrences(pat: &Term, x: &Symbol) -> usize {
    match pat {
        Term::Var(y) => usize::from(y == x),
        Term::App(_, args) => args.iter().map(|a| occurrences(a, x)).sum(),
    }
}

fn cases(p: &ExtendedMatchingProblem) -> Result<Vec<Case>, Certificate> {
    let mp = |pairs: Vec<(Term, Term)>| MatchingProblem {
        pairs,
        identities: Vec::new(),
        mu: p.mu.clone(),
    };
    let tail = |from: usize, pairs: Vec<(Term, Term)>, x: &Symbol| {
        if occurrences(&p.pattern, x) == 1 {
            Case::From(from, mp(pairs))
        } else {
            Case::Open(from, Some(mp(pairs)))
        }
    };
    let mut out = Vec::new();
    let mut base = Vec::new();
    let mut pi = match walk(
        p.d.body(),
        p.d.hole_position().indices(),
        &p.pattern,
        0,
        &p.mu,
        &mut base,
    ) {
        Walk::Clash => return Err(Certificate::RootClash),
        Walk::Var(x) => return Ok(vec![tail(0, base, &x)]),
        Walk::Hole(pi) => pi,
    };
    let mut j = 0;
    loop {
        let mut at = base.clone();
        at.push((p.t.apply_n(&p.mu, j), pi.clone()));
        out.push(Case::At(j, mp(at)));
        if p.c.is_empty() {
            out.push(Case::Open(j + 1, None));
            return Ok(out);
        }
        match walk(p.c.body(), p.c.hole_position().indices(), &pi, j, &p.mu, &mut base) {
            Walk::Clash => return Ok(out),
            Walk::Var(x) => {
                out.push(tail(j + 1, base, &x));
                return Ok(out);
            }
            Walk::Hole(next) => {
                pi = next;
                j += 1;
            }
        }
    }
}

/// Least `(m, k)` in the order of `m + k`, then `m`, with `m + k ≤ limit`.
fn enumerate(
    p: &ExtendedMatchingProblem,
    limit: usize,
    config: &SolverConfig,
) -> Result<Option<Witness>, String> {
    // cur[m] = D[t(C,μ)^m]μ^(s-m)
    let mut cur: Vec<Term> = Vec::new();
    let mut tower = p.t.clone();
    for s in 0..=limit {
        for term in cur.iter_mut() {
            *term = term.apply(&p.mu);
        }
        if s > 0 {
            tower = p.c.plug(tower.apply(&p.mu));
        }
        cur.push(p.d.plug(tower.clone()));
        if cur.iter().map(Term::size).sum::<usize>() > config.max_term_size {
            return Err("term size limit reached".into());
        }
        for (m, term) in cur.iter().enumerate() {
            if let Some(sigma) = crate::rewrite::match_pattern(&p.pattern, term) {
                return Ok(Some(Witness::Extended { m, k: s - m, sigma }));
            }
        }
    }
    Ok(None)
}

pub fn solve_extended(p: &ExtendedMatchingProblem, config: &SolverConfig) -> SolverResult {
    let cases = match cases(p) {
        Ok(cases) => cases,
        Err(c) => return SolverResult::Unsolvable(c),
    };
    let mut best: Option<(usize, usize)> = None;
    let mut open = false;
    for case in &cases {
        let (m, problem, exact) = match case {
            Case::At(m, mp) => (*m, Some(mp), true),
            Case::From(m, mp) => (*m, Some(mp), true),
            Case::Open(m, relaxed) => (*m, relaxed.as_ref(), false),
        };
        let Some(problem) = problem else {
            open = true;
            continue;
        };
        match solve_matching(problem, config) {
            SolverResult::Solvable(Witness::Matching { n, .. }) if exact => {
                if best.is_none_or(|(bm, bk)| (m + n, m) < (bm + bk, bm)) {
                    best = Some((m, n));
                }
            }
            SolverResult::Unsolvable(_) => {}
            _ => open = true,
        }
    }
    if !open {
        return match best {
            Some((m, k)) => match p.check(m, k) {
                Some(sigma) => SolverResult::Solvable(Witness::Extended { m, k, sigma }),
                None => SolverResult::Unknown {
                    bound: config.bound,
                    reason: format!("candidate (m = {m}, k = {k}) failed verification"),
                },
            },
            None => SolverResult::Unsolvable(Certificate::ExtendedCases),
        };
    }
    // some case is not decided symbolically: search directly, but never past
    // a witness already known
    let limit = best.map_or(config.bound, |(m, k)| (m + k).min(config.bound));
    match enumerate(p, limit, config) {
        Ok(Some(w)) => SolverResult::Solvable(w),
        Ok(None) => match best {
            Some((m, k)) => match p.check(m, k) {
                Some(sigma) => SolverResult::Solvable(Witness::Extended { m, k, sigma }),
                None => SolverResult::Unknown {
                    bound: config.bound,
                    reason: "no verified witness".into(),
                },
            },
            None => SolverResult::Unknown {
                bound: config.bound,
                reason: "no witness up to the bound and no refutation".into(),
            },
        },
        Err(reason) => match best.and_then(|(m, k)| Some((m, k, p.check(m, k)?))) {
            Some((m, k, sigma)) => SolverResult::Solvable(Witness::Extended { m, k, sigma }),
            None => SolverResult::Unknown {
                bound: config.bound,
                reason,
            },
        },
    }
}
