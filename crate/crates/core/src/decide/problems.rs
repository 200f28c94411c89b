//! Problem sets for single loop steps.
//!
//! Each function takes one step `t →_q …` of a loop with closing
//! context-substitution `(C, μ)` and returns problems such that the step
//! respects the strategy at every level `n` iff none of them is solvable.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rewrite::{ForbiddenPattern, PatternKind, Trs};
use crate::solver::{ExtendedMatchingProblem, MatchingProblem};
use crate::term::{apply_context_substitution, variable_closure, Context, Position, Substitution, Term};

/// Which construction a problem comes from.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `t|q' ⋗ ℓ`, `q'` left of the redex
    LeftTerm,
    /// `u ⋗ ℓ`, `u ⊴ xμ`, `x` in the closure of a subterm left of the redex
    LeftTermVar,
    /// `C|p' ⋗ ℓ`, `p'` left of the hole
    LeftContext,
    LeftContextVar,
    /// as above with "parallel to every redex" / "parallel to the hole"
    ParallelTerm,
    ParallelTermVar,
    ParallelContext,
    ParallelContextVar,
    /// pattern `(ℓ, o, h)`
    Here,
    /// pattern `(ℓ, o, a)`, positions around the redex
    AboveTerm,
    /// pattern `(ℓ, o, a)`, subterms of the variable closure
    AboveVar,
    /// pattern `(ℓ, o, b)`, anchors above the redex inside `t`
    BelowTerm,
    /// pattern `(ℓ, o, b)`, anchors inside the context layers
    BelowContext,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::LeftTerm => "left-term",
            Family::LeftTermVar => "left-term-var",
            Family::LeftContext => "left-context",
            Family::LeftContextVar => "left-context-var",
            Family::ParallelTerm => "parallel-term",
            Family::ParallelTermVar => "parallel-term-var",
            Family::ParallelContext => "parallel-context",
            Family::ParallelContextVar => "parallel-context-var",
            Family::Here => "h",
            Family::AboveTerm => "a-term",
            Family::AboveVar => "a-var",
            Family::BelowTerm => "b-term",
            Family::BelowContext => "b-context",
        }
    }
}

fn check_position(t: &Term, q: &Position) -> Result<()> {
    t.subterm_at(q).map(|_| ())
}

/// `{u | u ⊴ xμ, x ∈ W}` for the union `W` of the closures of `terms`.
fn closure_subterms<'a>(terms: impl IntoIterator<Item = &'a Term>, mu: &Substitution) -> Vec<Term> {
    let mut vars = BTreeSet::new();
    for s in terms {
        vars.extend(variable_closure(s, mu));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for x in vars {
        for (_, u) in mu.image(&x).subterms() {
            if seen.insert(u.clone()) {
                out.push(u.clone());
            }
        }
    }
    out
}

/// The four families shared by the leftmost and max-parallel constructions.
fn side_problems(
    t: &Term,
    term_sel: impl Fn(&Position) -> bool,
    c: &Context,
    ctx_sel: impl Fn(&Position) -> bool,
    mu: &Substitution,
    trs: &Trs,
    families: [Family; 4],
) -> Vec<(Family, MatchingProblem)> {
    let term_side: Vec<&Term> = t
        .subterms()
        .into_iter()
        .filter(|(p, _)| term_sel(p))
        .map(|(_, s)| s)
        .collect();
    let ctx_side: Vec<&Term> = c
        .body()
        .subterms()
        .into_iter()
        .filter(|(p, _)| ctx_sel(p))
        .map(|(_, s)| s)
        .collect();
    let groups: [(Family, Vec<Term>); 4] = [
        (families[0], term_side.iter().map(|s| (*s).clone()).collect()),
        (families[1], closure_subterms(term_side.iter().copied(), mu)),
        (families[2], ctx_side.iter().map(|s| (*s).clone()).collect()),
        (families[3], closure_subterms(ctx_side.iter().copied(), mu)),
    ];
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (family, subjects) in groups {
        for u in subjects {
            for rule in trs.rules() {
                if seen.insert((family, u.clone(), rule.lhs.clone())) {
                    out.push((family, MatchingProblem::single(u.clone(), rule.lhs.clone(), mu.clone())));
                }
            }
        }
    }
    out
}

/// Problems whose solvability means some unrolled step is not leftmost.
pub fn leftmost_problems(
    t: &Term,
    q: &Position,
    c: &Context,
    mu: &Substitution,
    trs: &Trs,
) -> Result<Vec<(Family, MatchingProblem)>> {
    check_position(t, q)?;
    let p = c.hole_position();
    Ok(side_problems(
        t,
        |q1| q1.is_left_of(q),
        c,
        |p1| p1.is_left_of(p),
        mu,
        trs,
        [
            Family::LeftTerm,
            Family::LeftTermVar,
            Family::LeftContext,
            Family::LeftContextVar,
        ],
    ))
}

/// Problems whose solvability means some unrolled step leaves a redex
/// parallel to all of its redexes.
pub fn max_parallel_problems(
    t: &Term,
    qs: &[Position],
    c: &Context,
    mu: &Substitution,
    trs: &Trs,
) -> Result<Vec<(Family, MatchingProblem)>> {
    if qs.is_empty() {
        return Err(Error::EmptyStep);
    }
    crate::rewrite::check_pairwise_parallel(qs)?;
    for q in qs {
        check_position(t, q)?;
    }
    let p = c.hole_position();
    Ok(side_problems(
        t,
        |q1| qs.iter().all(|q| q1.is_parallel_to(q)),
        c,
        |p1| p1.is_parallel_to(p),
        mu,
        trs,
        [
            Family::ParallelTerm,
            Family::ParallelTermVar,
            Family::ParallelContext,
            Family::ParallelContextVar,
        ],
    ))
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Least `n₀` such that `p^n₀ q` is at least as long as `o`.
fn min_level(p: &Position, q: &Position, o: &Position) -> usize {
    if p.is_root() {
        0
    } else {
        ceil_div(o.len().saturating_sub(q.len()), p.len())
    }
}

/// Solves `p^n q = o' o` for `(n, o')`. All solutions are
/// `(n₀ + k, p^k o₀')`; this returns `(n₀, o₀')`.
pub fn solve_position_equation(p: &Position, q: &Position, o: &Position) -> Option<(usize, Position)> {
    let n0 = min_level(p, q, o);
    let o0 = p.pow(n0).concat(q).strip_suffix(o)?;
    Some((n0, o0))
}

/// The matching problem for a pattern `(ℓ, o, h)`, with the level `n₀` it
/// is anchored at.
pub fn h_problems(
    t: &Term,
    q: &Position,
    c: &Context,
    mu: &Substitution,
    pat: &ForbiddenPattern,
) -> Result<Vec<(usize, MatchingProblem)>> {
    check_position(t, q)?;
    let Some((n0, o0)) = solve_position_equation(c.hole_position(), q, &pat.pos) else {
        return Ok(Vec::new());
    };
    let tower = apply_context_substitution(t, c, mu, n0);
    // o₀' is a prefix of p^n₀ q, hence always a position of the tower
    let Ok(sub) = tower.subterm_at(&o0) else {
        return Ok(Vec::new());
    };
    Ok(vec![(n0, MatchingProblem::single(sub.clone(), pat.lhs.clone(), mu.clone()))])
}

/// Problems for a pattern `(ℓ, o, a)`: anchors around the redex in the level
/// `n₀` tower, and subterms reachable through the variables of the redex.
pub fn a_problems(
    t: &Term,
    q: &Position,
    c: &Context,
    mu: &Substitution,
    pat: &ForbiddenPattern,
) -> Result<(usize, Vec<MatchingProblem>, Vec<MatchingProblem>)> {
    let redex = t.subterm_at(q)?;
    if redex.is_var() {
        return Err(Error::VariableRedex(q.clone()));
    }
    let p = c.hole_position();
    let o = &pat.pos;
    let n0 = min_level(p, q, o);
    let tower = apply_context_substitution(t, c, mu, n0);
    let base = p.pow(n0).concat(q);
    let mut anchors: BTreeSet<Position> = base.prefixes().into_iter().collect();
    anchors.extend(redex.positions().iter().map(|q1| base.concat(q1)));
    let mut m1 = Vec::new();
    for o2 in anchors {
        let below = o2.concat(o);
        if base.is_strictly_above(&below) {
            let sub = tower.subterm_at(&o2)?;
            m1.push(MatchingProblem::single(sub.clone(), pat.lhs.clone(), mu.clone()));
        }
    }
    let m2 = closure_subterms([redex], mu)
        .into_iter()
        .map(|u| MatchingProblem::single(u, pat.lhs.clone(), mu.clone()))
        .collect();
    Ok((n0, m1, m2))
}

/// Problems for a pattern `(ℓ, o, b)`: `h`-problems at every position above
/// the redex inside `t`, and one extended problem per proper subcontext of
/// `C` whose hole lies below `o`. The levels are those the problems are
/// anchored at.
#[allow(clippy::type_complexity)]
pub fn b_problems(
    t: &Term,
    q: &Position,
    c: &Context,
    mu: &Substitution,
    pat: &ForbiddenPattern,
) -> Result<(Vec<(usize, MatchingProblem)>, Vec<(usize, ExtendedMatchingProblem)>)> {
    check_position(t, q)?;
    let here = ForbiddenPattern {
        kind: PatternKind::Here,
        ..pat.clone()
    };
    let mut m3 = Vec::new();
    for q_bar in q.prefixes() {
        if q_bar != *q {
            m3.extend(h_problems(t, &q_bar, c, mu, &here)?);
        }
    }
    let p = c.hole_position();
    let o = &pat.pos;
    let mut m4 = Vec::new();
    if !p.is_root() {
        let c_mu = c.apply(mu);
        for p3 in p.prefixes() {
            if p3 == *p {
                continue;
            }
            let p2 = p.strip_prefix(&p3).expect("prefix");
            let n0 = if p2.len() > o.len() {
                0
            } else {
                (o.len() - p2.len()) / p.len() + 1
            };
            if !o.is_strictly_above(&p2.concat(&p.pow(n0))) {
                continue;
            }
            let d = c.subcontext(&p3).expect("prefix of the hole");
            let inner = apply_context_substitution(t, c, mu, n0).apply(mu);
            m4.push((
                n0 + 1,
                ExtendedMatchingProblem {
                    d,
                    pattern: pat.lhs.clone(),
                    c: c_mu.clone(),
                    t: inner,
                    mu: mu.clone(),
                },
            ));
        }
    }
    Ok((m3, m4))
}
