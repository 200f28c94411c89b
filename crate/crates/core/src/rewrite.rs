//! Rewrite rules, single and parallel steps, and per-term strategy checks.
//!
//! The checks in [`strategy_allows`] evaluate a strategy on one concrete term
//! by enumerating redexes directly. They are the ground truth the symbolic
//! deciders are tested against.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::term::{Position, Substitution, Symbol, Term};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Rule {
    pub lhs: Term,
    pub rhs: Term,
}

impl Rule {
    pub fn new(lhs: Term, rhs: Term) -> Result<Rule> {
        let rule = Rule { lhs, rhs };
        rule.check()?;
        Ok(rule)
    }

    fn check(&self) -> Result<()> {
        if self.lhs.is_var() {
            return Err(Error::VariableLhs(self.to_string()));
        }
        let lhs_vars = self.lhs.vars();
        if let Some(x) = self.rhs.vars().into_iter().find(|x| !lhs_vars.contains(x)) {
            return Err(Error::ExtraRhsVariable {
                rule: self.to_string(),
                var: x.to_string(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

/// A finite, well-formed term rewrite system. Rule indices are 0-based and
/// stable.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Trs {
    rules: Vec<Rule>,
    signature: BTreeMap<Symbol, usize>,
    variables: BTreeSet<Symbol>,
}

impl Trs {
    pub fn new(variables: BTreeSet<Symbol>, rules: Vec<Rule>) -> Result<Trs> {
        let mut signature = BTreeMap::new();
        for rule in &rules {
            rule.check()?;
            extend_signature(&mut signature, &rule.lhs)?;
            extend_signature(&mut signature, &rule.rhs)?;
        }
        if let Some(x) = variables.iter().find(|x| signature.contains_key(*x)) {
            return Err(Error::ArityMismatch {
                symbol: x.to_string(),
                expected: 0,
                found: signature[x],
            });
        }
        Ok(Trs {
            rules,
            signature,
            variables,
        })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, index: usize) -> Result<&Rule> {
        self.rules.get(index).ok_or(Error::RuleIndexOutOfRange {
            index,
            count: self.rules.len(),
        })
    }

    pub fn signature(&self) -> &BTreeMap<Symbol, usize> {
        &self.signature
    }

    pub fn variables(&self) -> &BTreeSet<Symbol> {
        &self.variables
    }

    pub fn is_variable(&self, name: &str) -> bool {
        self.variables.contains(name)
    }

    /// Checks that `t` uses known symbols with their declared arities. Symbols
    /// outside the signature are accepted as long as they are used consistently.
    pub fn check_term(&self, t: &Term) -> Result<()> {
        let mut sig = self.signature.clone();
        extend_signature(&mut sig, t)
    }
}

pub(crate) fn extend_signature(sig: &mut BTreeMap<Symbol, usize>, t: &Term) -> Result<()> {
    for (_, s) in t.subterms() {
        if let Term::App(f, args) = s {
            if s.is_hole() {
                continue;
            }
            match sig.get(f) {
                Some(&n) if n != args.len() => {
                    return Err(Error::ArityMismatch {
                        symbol: f.to_string(),
                        expected: n,
                        found: args.len(),
                    })
                }
                Some(_) => {}
                None => {
                    sig.insert(f.clone(), args.len());
                }
            }
        }
    }
    Ok(())
}

/// Syntactic matching: the `σ` with `pattern σ = subject`, if any.
pub fn match_pattern(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut bindings = BTreeMap::new();
    match_into(pattern, subject, &mut bindings).then(|| {
        let mut sigma = Substitution::new();
        for (x, t) in bindings {
            sigma.insert(x, t);
        }
        sigma
    })
}

/// Extends `bindings` so that `pattern` matches `subject`. Bindings may map a
/// variable to itself, so consistency checks see every bound variable.
pub(crate) fn match_into(
    pattern: &Term,
    subject: &Term,
    bindings: &mut BTreeMap<Symbol, Term>,
) -> bool {
    match (pattern, subject) {
        (Term::Var(x), _) => match bindings.get(x) {
            Some(bound) => bound == subject,
            None => {
                bindings.insert(x.clone(), subject.clone());
                true
            }
        },
        (Term::App(f, ps), Term::App(g, ss)) => {
            f == g
                && ps.len() == ss.len()
                && ps.iter().zip(ss).all(|(p, s)| match_into(p, s, bindings))
        }
        (Term::App(..), Term::Var(_)) => false,
    }
}

pub fn is_redex(t: &Term, trs: &Trs) -> bool {
    trs.rules.iter().any(|r| match_pattern(&r.lhs, t).is_some())
}

/// All `(p, i)` such that `t|_p` is an instance of the left-hand side of rule `i`,
/// in pre-order and then rule order.
pub fn redex_positions(t: &Term, trs: &Trs) -> Vec<(Position, usize)> {
    let mut out = Vec::new();
    for (p, s) in t.subterms() {
        for (i, rule) in trs.rules.iter().enumerate() {
            if match_pattern(&rule.lhs, s).is_some() {
                out.push((p.clone(), i));
            }
        }
    }
    out
}

/// Positions of `t` holding some redex.
pub fn redex_set(t: &Term, trs: &Trs) -> Vec<Position> {
    t.subterms()
        .into_iter()
        .filter(|(_, s)| is_redex(s, trs))
        .map(|(p, _)| p)
        .collect()
}

pub fn rewrite_at(t: &Term, q: &Position, rule: &Rule, index: usize) -> Result<Term> {
    let redex = t.subterm_at(q)?;
    let sigma = match_pattern(&rule.lhs, redex).ok_or_else(|| Error::NotARedex {
        term: t.to_string(),
        pos: q.clone(),
        rule: index,
    })?;
    t.replace_at(q, rule.rhs.apply(&sigma))
}

/// Simultaneous rewriting at pairwise parallel positions.
pub fn parallel_rewrite(t: &Term, steps: &[(Position, usize)], trs: &Trs) -> Result<Term> {
    if steps.is_empty() {
        return Err(Error::EmptyStep);
    }
    check_pairwise_parallel(steps.iter().map(|(p, _)| p))?;
    let mut out = t.clone();
    for (q, i) in steps {
        // parallel positions are unaffected by rewriting elsewhere
        out = rewrite_at(&out, q, trs.rule(*i)?, *i).map_err(|e| match e {
            Error::NotARedex { pos, rule, .. } => Error::NotARedex {
                term: t.to_string(),
                pos,
                rule,
            },
            e => e,
        })?;
    }
    Ok(out)
}

pub(crate) fn check_pairwise_parallel<'a>(
    positions: impl IntoIterator<Item = &'a Position>,
) -> Result<()> {
    let ps: Vec<&Position> = positions.into_iter().collect();
    for (i, p) in ps.iter().enumerate() {
        for q in &ps[i + 1..] {
            if !p.is_parallel_to(q) {
                return Err(Error::NotParallel((*p).clone(), (*q).clone()));
            }
        }
    }
    Ok(())
}

/// Which positions a pattern forbids relative to `o' · o`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum PatternKind {
    /// exactly at `o'o`
    Here,
    /// strictly above `o'o`
    Above,
    /// strictly below `o'o`
    Below,
}

impl PatternKind {
    pub fn letter(self) -> char {
        match self {
            PatternKind::Here => 'h',
            PatternKind::Above => 'a',
            PatternKind::Below => 'b',
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ForbiddenPattern {
    pub lhs: Term,
    pub pos: Position,
    pub kind: PatternKind,
}

impl ForbiddenPattern {
    pub fn new(lhs: Term, pos: Position, kind: PatternKind) -> Result<ForbiddenPattern> {
        lhs.subterm_at(&pos)?;
        Ok(ForbiddenPattern { lhs, pos, kind })
    }

    /// Does this pattern forbid a reduction of `t` at `q`?
    pub fn forbids(&self, t: &Term, q: &Position) -> bool {
        t.subterms().into_iter().any(|(o1, s)| {
            match_pattern(&self.lhs, s).is_some() && {
                let anchor = o1.concat(&self.pos);
                match self.kind {
                    PatternKind::Here => *q == anchor,
                    PatternKind::Above => q.is_strictly_above(&anchor),
                    PatternKind::Below => anchor.is_strictly_above(q),
                }
            }
        })
    }
}

impl fmt::Display for ForbiddenPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {} : {}", self.lhs, self.pos, self.kind.letter())
    }
}

/// Per-term strategy checks; composite strategies are conjunctions of these.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ConcreteStrategy {
    Full,
    Leftmost,
    Innermost,
    Outermost,
    MaxParallel,
    Forbidden(Vec<ForbiddenPattern>),
}

impl ConcreteStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            ConcreteStrategy::Full => "full",
            ConcreteStrategy::Leftmost => "leftmost",
            ConcreteStrategy::Innermost => "innermost",
            ConcreteStrategy::Outermost => "outermost",
            ConcreteStrategy::MaxParallel => "max-parallel",
            ConcreteStrategy::Forbidden(_) => "forbidden-patterns",
        }
    }
}

/// Is the simultaneous reduction of `t` at `positions` allowed by `s`?
pub fn strategy_allows(
    t: &Term,
    positions: &[Position],
    trs: &Trs,
    s: &ConcreteStrategy,
) -> Result<bool> {
    for q in positions {
        if !is_redex(t.subterm_at(q)?, trs) {
            return Err(Error::NoRedexAt {
                term: t.to_string(),
                pos: q.clone(),
            });
        }
    }
    let redexes = || redex_set(t, trs);
    Ok(match s {
        ConcreteStrategy::Full => true,
        ConcreteStrategy::Leftmost => match positions {
            [q] => !redexes().iter().any(|r| r.is_left_of(q)),
            _ => false,
        },
        ConcreteStrategy::Innermost => {
            let rs = redexes();
            positions
                .iter()
                .all(|q| !rs.iter().any(|r| q.is_strictly_above(r)))
        }
        ConcreteStrategy::Outermost => {
            let rs = redexes();
            positions
                .iter()
                .all(|q| !rs.iter().any(|r| r.is_strictly_above(q)))
        }
        ConcreteStrategy::MaxParallel => {
            !positions.is_empty()
                && check_pairwise_parallel(positions).is_ok()
                && !redexes()
                    .iter()
                    .any(|r| positions.iter().all(|q| r.is_parallel_to(q)))
        }
        ConcreteStrategy::Forbidden(patterns) => match positions {
            [q] => !patterns.iter().any(|pat| pat.forbids(t, q)),
            _ => false,
        },
    })
}

/// Replacement map for context-sensitive rewriting; symbols without an entry
/// may be rewritten in every argument.
pub type ReplacementMap = BTreeMap<Symbol, BTreeSet<usize>>;

#[derive(Clone, Debug)]
pub enum PatternEncoding {
    Innermost,
    Outermost,
    QRestricted(Vec<Rule>),
    ContextSensitive(ReplacementMap),
}

/// Forbidden-pattern encodings of the classic strategies.
pub fn builtin_patterns(kind: &PatternEncoding, trs: &Trs) -> Result<Vec<ForbiddenPattern>> {
    let root = |lhs: &Term, kind| ForbiddenPattern {
        lhs: lhs.clone(),
        pos: Position::root(),
        kind,
    };
    Ok(match kind {
        PatternEncoding::Innermost => trs
            .rules
            .iter()
            .map(|r| root(&r.lhs, PatternKind::Above))
            .collect(),
        PatternEncoding::Outermost => trs
            .rules
            .iter()
            .map(|r| root(&r.lhs, PatternKind::Below))
            .collect(),
        PatternEncoding::QRestricted(q) => q
            .iter()
            .map(|r| root(&r.lhs, PatternKind::Above))
            .collect(),
        PatternEncoding::ContextSensitive(map) => {
            for (f, allowed) in map {
                let arity = *trs
                    .signature
                    .get(f)
                    .ok_or_else(|| Error::UnknownSymbol(f.to_string()))?;
                if let Some(&i) = allowed.iter().find(|&&i| i == 0 || i > arity) {
                    return Err(Error::ArityMismatch {
                        symbol: f.to_string(),
                        expected: arity,
                        found: i,
                    });
                }
            }
            let mut out = Vec::new();
            for (f, &arity) in &trs.signature {
                let Some(allowed) = map.get(f) else { continue };
                let lhs = Term::App(
                    f.clone(),
                    (1..=arity)
                        .map(|i| Term::Var(Arc::from(format!("x{i}"))))
                        .collect(),
                );
                for i in (1..=arity).filter(|i| !allowed.contains(i)) {
                    for kind in [PatternKind::Here, PatternKind::Below] {
                        out.push(ForbiddenPattern {
                            lhs: lhs.clone(),
                            pos: Position::new(vec![i]).expect("1-based"),
                            kind,
                        });
                    }
                }
            }
            out
        }
    })
}
