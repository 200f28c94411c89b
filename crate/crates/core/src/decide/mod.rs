//! Deciding whether a validated loop is a loop under a strategy.
//!
//! Every step of the loop yields a finite set of problems; the loop respects
//! the strategy at every level iff none of them is solvable. Composite
//! strategies take the union of the problem sets of their parts.

pub mod problems;

use std::fmt;

use crate::error::{Error, Result};
use crate::loops::{unroll_loop, ValidatedLoop};
use crate::rewrite::{builtin_patterns, strategy_allows, ConcreteStrategy, ForbiddenPattern, PatternEncoding, PatternKind, Trs};
use crate::solver::{Problem, SolverConfig, SolverResult, Witness};
use crate::term::{Position, Term};

pub use problems::{
    a_problems, b_problems, h_problems, leftmost_problems, max_parallel_problems,
    solve_position_equation, Family,
};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StrategySpec {
    Full,
    Leftmost,
    Innermost,
    Outermost,
    LeftmostInnermost,
    LeftmostOutermost,
    Parallel,
    ParallelInnermost,
    ParallelOutermost,
    MaxParallel,
    MaxParallelInnermost,
    MaxParallelOutermost,
    ForbiddenSet(Vec<ForbiddenPattern>),
}

impl StrategySpec {
    pub const BUILTIN: [&'static str; 12] = [
        "full",
        "leftmost",
        "innermost",
        "outermost",
        "leftmost-innermost",
        "leftmost-outermost",
        "parallel",
        "parallel-innermost",
        "parallel-outermost",
        "max-parallel",
        "max-parallel-innermost",
        "max-parallel-outermost",
    ];

    /// The strategies that need no extra input.
    pub fn from_name(name: &str) -> Result<StrategySpec> {
        use StrategySpec::*;
        Ok(match name {
            "full" => Full,
            "leftmost" => Leftmost,
            "innermost" => Innermost,
            "outermost" => Outermost,
            "leftmost-innermost" => LeftmostInnermost,
            "leftmost-outermost" => LeftmostOutermost,
            "parallel" => Parallel,
            "parallel-innermost" => ParallelInnermost,
            "parallel-outermost" => ParallelOutermost,
            "max-parallel" => MaxParallel,
            "max-parallel-innermost" => MaxParallelInnermost,
            "max-parallel-outermost" => MaxParallelOutermost,
            other => return Err(Error::UnknownStrategy(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        use StrategySpec::*;
        match self {
            Full => "full",
            Leftmost => "leftmost",
            Innermost => "innermost",
            Outermost => "outermost",
            LeftmostInnermost => "leftmost-innermost",
            LeftmostOutermost => "leftmost-outermost",
            Parallel => "parallel",
            ParallelInnermost => "parallel-innermost",
            ParallelOutermost => "parallel-outermost",
            MaxParallel => "max-parallel",
            MaxParallelInnermost => "max-parallel-innermost",
            MaxParallelOutermost => "max-parallel-outermost",
            ForbiddenSet(_) => "forbidden-patterns",
        }
    }

    /// Strategies that only make sense for one redex per step.
    pub fn is_sequential(&self) -> bool {
        use StrategySpec::*;
        matches!(
            self,
            Full | Leftmost | Innermost | Outermost | LeftmostInnermost | LeftmostOutermost | ForbiddenSet(_)
        )
    }

    /// Per-term checks whose conjunction is this strategy.
    pub fn concrete_checks(&self) -> Vec<ConcreteStrategy> {
        use ConcreteStrategy as C;
        use StrategySpec::*;
        match self {
            Full | Parallel => vec![],
            Leftmost => vec![C::Leftmost],
            Innermost | ParallelInnermost => vec![C::Innermost],
            Outermost | ParallelOutermost => vec![C::Outermost],
            LeftmostInnermost => vec![C::Leftmost, C::Innermost],
            LeftmostOutermost => vec![C::Leftmost, C::Outermost],
            MaxParallel => vec![C::MaxParallel],
            MaxParallelInnermost => vec![C::MaxParallel, C::Innermost],
            MaxParallelOutermost => vec![C::MaxParallel, C::Outermost],
            ForbiddenSet(pats) => vec![C::Forbidden(pats.clone())],
        }
    }
}

impl fmt::Display for StrategySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One problem together with where it came from.
#[derive(Clone, Debug)]
pub struct Obligation {
    /// 0-based step index
    pub step: usize,
    /// redex position within the step the problem is about
    pub position: Position,
    pub family: Family,
    pub pattern: Option<ForbiddenPattern>,
    /// level of the unrolled loop the problem is anchored at
    pub level: usize,
    pub problem: Problem,
}

enum Part {
    Leftmost,
    MaxParallel,
    /// forbidden patterns checked at each redex of a step separately
    Patterns(Vec<ForbiddenPattern>),
}

fn parts(spec: &StrategySpec, trs: &Trs) -> Result<Vec<Part>> {
    use StrategySpec::*;
    let inner = || builtin_patterns(&PatternEncoding::Innermost, trs);
    let outer = || builtin_patterns(&PatternEncoding::Outermost, trs);
    Ok(match spec {
        Full | Parallel => vec![],
        Leftmost => vec![Part::Leftmost],
        Innermost | ParallelInnermost => vec![Part::Patterns(inner()?)],
        Outermost | ParallelOutermost => vec![Part::Patterns(outer()?)],
        LeftmostInnermost => vec![Part::Leftmost, Part::Patterns(inner()?)],
        LeftmostOutermost => vec![Part::Leftmost, Part::Patterns(outer()?)],
        MaxParallel => vec![Part::MaxParallel],
        MaxParallelInnermost => vec![Part::MaxParallel, Part::Patterns(inner()?)],
        MaxParallelOutermost => vec![Part::MaxParallel, Part::Patterns(outer()?)],
        ForbiddenSet(pats) => vec![Part::Patterns(pats.clone())],
    })
}

fn check_shape(lp: &ValidatedLoop, spec: &StrategySpec) -> Result<()> {
    if spec.is_sequential() && !lp.certificate().is_sequential() {
        let i = lp.steps().iter().position(|s| s.len() != 1).expect("not sequential");
        return Err(Error::ShapeMismatch {
            strategy: spec.name().to_string(),
            reason: format!("step {i} reduces {} redexes in parallel", lp.steps()[i].len()),
        });
    }
    Ok(())
}

fn pattern_obligations(
    step: usize,
    t: &Term,
    q: &Position,
    lp: &ValidatedLoop,
    pat: &ForbiddenPattern,
    out: &mut Vec<Obligation>,
) -> Result<()> {
    let (c, mu) = (lp.context(), lp.subst());
    let mut push = |family, level, problem| {
        out.push(Obligation {
            step,
            position: q.clone(),
            family,
            pattern: Some(pat.clone()),
            level,
            problem,
        })
    };
    match pat.kind {
        PatternKind::Here => {
            for (n0, mp) in h_problems(t, q, c, mu, pat)? {
                push(Family::Here, n0, Problem::Matching(mp));
            }
        }
        PatternKind::Above => {
            let (n0, m1, m2) = a_problems(t, q, c, mu, pat)?;
            for mp in m1 {
                push(Family::AboveTerm, n0, Problem::Matching(mp));
            }
            for mp in m2 {
                push(Family::AboveVar, n0, Problem::Matching(mp));
            }
        }
        PatternKind::Below => {
            let (m3, m4) = b_problems(t, q, c, mu, pat)?;
            for (n0, mp) in m3 {
                push(Family::BelowTerm, n0, Problem::Matching(mp));
            }
            for (n0, emp) in m4 {
                push(Family::BelowContext, n0, Problem::Extended(emp));
            }
        }
    }
    Ok(())
}

/// All problems for `spec`, ordered by step, then strategy component, then
/// pattern, then family.
pub fn build_obligations(trs: &Trs, lp: &ValidatedLoop, spec: &StrategySpec) -> Result<Vec<Obligation>> {
    check_shape(lp, spec)?;
    let parts = parts(spec, trs)?;
    let (c, mu) = (lp.context(), lp.subst());
    let mut out = Vec::new();
    for (i, step) in lp.steps().iter().enumerate() {
        let t = &lp.terms()[i];
        let qs: Vec<Position> = step.iter().map(|r| r.pos.clone()).collect();
        for part in &parts {
            match part {
                Part::Leftmost => {
                    for (family, mp) in leftmost_problems(t, &qs[0], c, mu, trs)? {
                        out.push(Obligation {
                            step: i,
                            position: qs[0].clone(),
                            family,
                            pattern: None,
                            level: 0,
                            problem: Problem::Matching(mp),
                        });
                    }
                }
                Part::MaxParallel => {
                    for (family, mp) in max_parallel_problems(t, &qs, c, mu, trs)? {
                        out.push(Obligation {
                            step: i,
                            position: qs[0].clone(),
                            family,
                            pattern: None,
                            level: 0,
                            problem: Problem::Matching(mp),
                        });
                    }
                }
                Part::Patterns(pats) => {
                    for q in &qs {
                        for pat in pats {
                            pattern_obligations(i, t, q, lp, pat, &mut out)?;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A level and step of the unrolled loop where a per-term check fails.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConcreteViolation {
    pub level: usize,
    pub step: usize,
    pub term: Term,
    pub positions: Vec<Position>,
    pub check: &'static str,
}

#[derive(Clone, Debug)]
pub struct Evidence {
    pub obligation: Obligation,
    pub witness: Witness,
    pub concrete: Option<ConcreteViolation>,
}

#[derive(Clone, Debug)]
pub struct OpenProblem {
    pub obligation: Obligation,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    IsStrategyLoop,
    NotStrategyLoop(Box<Evidence>),
    Unknown(Vec<OpenProblem>),
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::IsStrategyLoop => "yes",
            Verdict::NotStrategyLoop(_) => "no",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, serde::Serialize)]
pub struct Stats {
    /// problems constructed
    pub problems: usize,
    /// problems handed to the solver before the verdict was fixed
    pub attempted: usize,
    pub unsolvable: usize,
    pub unknown: usize,
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub strategy: String,
    pub verdict: Verdict,
    pub stats: Stats,
    pub config: SolverConfig,
    pub notes: Vec<String>,
}

/// Searches levels `0..=max_level` of the unrolled loop for a step that
/// fails one of the per-term checks of `spec`.
pub fn check_levels(
    trs: &Trs,
    lp: &ValidatedLoop,
    spec: &StrategySpec,
    max_level: usize,
) -> Result<Option<ConcreteViolation>> {
    let checks = spec.concrete_checks();
    if checks.is_empty() {
        return Ok(None);
    }
    for level in 0..=max_level {
        for (step, (term, redexes)) in unroll_loop(lp, level).into_iter().enumerate() {
            let positions: Vec<Position> = redexes.into_iter().map(|r| r.pos).collect();
            for check in &checks {
                if !strategy_allows(&term, &positions, trs, check)? {
                    return Ok(Some(ConcreteViolation {
                        level,
                        step,
                        term,
                        positions,
                        check: check.name(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

pub fn decide_loop(trs: &Trs, lp: &ValidatedLoop, spec: &StrategySpec, config: &SolverConfig) -> Result<Decision> {
    let obligations = build_obligations(trs, lp, spec)?;
    let mut stats = Stats {
        problems: obligations.len(),
        ..Stats::default()
    };
    let mut notes = Vec::new();
    let mut open = Vec::new();
    let mut verdict = None;
    for ob in obligations {
        stats.attempted += 1;
        match ob.problem.solve(config) {
            SolverResult::Solvable(witness) => {
                let max_level = ob.level + witness.exponent() + lp.len() + 4;
                let concrete = check_levels(trs, lp, spec, max_level)?;
                if concrete.is_none() {
                    notes.push(format!(
                        "no concrete violation found up to level {max_level}; the solvable problem is the evidence"
                    ));
                }
                verdict = Some(Verdict::NotStrategyLoop(Box::new(Evidence {
                    obligation: ob,
                    witness,
                    concrete,
                })));
                break;
            }
            SolverResult::Unsolvable(_) => stats.unsolvable += 1,
            SolverResult::Unknown { reason, .. } => {
                stats.unknown += 1;
                open.push(OpenProblem { obligation: ob, reason });
            }
        }
    }
    let verdict = verdict.unwrap_or(if open.is_empty() {
        Verdict::IsStrategyLoop
    } else {
        Verdict::Unknown(open)
    });
    Ok(Decision {
        strategy: spec.name().to_string(),
        verdict,
        stats,
        config: *config,
        notes,
    })
}
