//! First-order terms, positions, substitutions and contexts.
//!
//! Positions are 1-based child indices, the empty position is the root.
//! A context is a term with exactly one occurrence of the reserved nullary
//! hole symbol `[]`. A context-substitution `(C, μ)` wraps a term `n` times:
//! `t(C,μ)^0 = t` and `t(C,μ)^(n+1) = C[t(C,μ)^n μ]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Symbol = Arc<str>;

/// Concrete syntax of the hole symbol.
pub const HOLE: &str = "[]";

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Term {
    Var(Symbol),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Arc::from(name))
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(Arc::from(name), args)
    }

    pub fn constant(name: &str) -> Term {
        Term::App(Arc::from(name), Vec::new())
    }

    pub fn hole() -> Term {
        Term::constant(HOLE)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_hole(&self) -> bool {
        matches!(self, Term::App(f, args) if args.is_empty() && &**f == HOLE)
    }

    /// Root function symbol and arity, `None` for variables.
    pub fn root(&self) -> Option<(&Symbol, usize)> {
        match self {
            Term::Var(_) => None,
            Term::App(f, args) => Some((f, args.len())),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn contains_var(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => &**y == x,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(x)),
        }
    }

    pub fn count_holes(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            t if t.is_hole() => 1,
            Term::App(_, args) => args.iter().map(Term::count_holes).sum(),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// All positions in pre-order (root first, children left to right).
    pub fn positions(&self) -> Vec<Position> {
        self.subterms().into_iter().map(|(p, _)| p).collect()
    }

    /// All subterms paired with their positions, in pre-order.
    pub fn subterms(&self) -> Vec<(Position, &Term)> {
        let mut out = Vec::new();
        let mut stack = vec![(Position::root(), self)];
        while let Some((pos, t)) = stack.pop() {
            if let Term::App(_, args) = t {
                for (i, a) in args.iter().enumerate().rev() {
                    stack.push((pos.child(i + 1), a));
                }
            }
            out.push((pos, t));
        }
        out
    }

    pub fn has_position(&self, p: &Position) -> bool {
        self.subterm_at(p).is_ok()
    }

    pub fn subterm_at(&self, p: &Position) -> Result<&Term> {
        let mut cur = self;
        for &i in p.indices() {
            cur = match cur {
                Term::App(_, args) if i >= 1 && i <= args.len() => &args[i - 1],
                _ => return Err(self.out_of_term(p)),
            };
        }
        Ok(cur)
    }

    pub fn replace_at(&self, p: &Position, s: Term) -> Result<Term> {
        fn go(t: &Term, idx: &[usize], s: Term) -> Option<Term> {
            let Some((&i, rest)) = idx.split_first() else {
                return Some(s);
            };
            match t {
                Term::App(f, args) if i >= 1 && i <= args.len() => {
                    let mut args = args.clone();
                    args[i - 1] = go(&args[i - 1], rest, s)?;
                    Some(Term::App(f.clone(), args))
                }
                _ => None,
            }
        }
        go(self, p.indices(), s).ok_or_else(|| self.out_of_term(p))
    }

    fn out_of_term(&self, p: &Position) -> Error {
        Error::PositionOutOfTerm {
            pos: p.clone(),
            term: self.to_string(),
        }
    }

    pub fn apply(&self, mu: &Substitution) -> Term {
        if mu.is_empty() {
            return self.clone();
        }
        match self {
            Term::Var(x) => mu.get(x).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.apply(mu)).collect()),
        }
    }

    /// `t μ^n`.
    pub fn apply_n(&self, mu: &Substitution, n: usize) -> Term {
        let mut cur = self.clone();
        for _ in 0..n {
            if mu.is_empty() {
                break;
            }
            cur = cur.apply(mu);
        }
        cur
    }

    /// Renames variables to `v0, v1, …` in order of first occurrence.
    pub fn canonical_renaming(&self, names: &mut BTreeMap<Symbol, Symbol>) -> Term {
        match self {
            Term::Var(x) => {
                let next = names.len();
                Term::Var(
                    names
                        .entry(x.clone())
                        .or_insert_with(|| Arc::from(format!("v{next}")))
                        .clone(),
                )
            }
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().map(|a| a.canonical_renaming(names)).collect(),
            ),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::App(g, args) if args.is_empty() => write!(f, "{g}"),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// How two positions lie relative to each other.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PositionRelation {
    Equal,
    StrictlyAbove,
    StrictlyBelow,
    LeftOf,
    RightOf,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position(Vec<usize>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    /// Builds a position from 1-based indices. Zero indices are rejected.
    pub fn new(indices: Vec<usize>) -> Option<Position> {
        indices.iter().all(|&i| i >= 1).then_some(Position(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// Depth below the root; the empty position is [`Position::is_root`].
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Position {
        let mut v = self.0.clone();
        v.push(i);
        Position(v)
    }

    pub fn concat(&self, other: &Position) -> Position {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Position(v)
    }

    /// `p^n`, with `p^0` the root.
    pub fn pow(&self, n: usize) -> Position {
        Position(self.0.repeat(n))
    }

    /// `self ≤ other`.
    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `self < other`.
    pub fn is_strictly_above(&self, other: &Position) -> bool {
        self.len() < other.len() && self.is_prefix_of(other)
    }

    pub fn is_parallel_to(&self, other: &Position) -> bool {
        matches!(
            self.relation(other),
            PositionRelation::LeftOf | PositionRelation::RightOf
        )
    }

    pub fn is_left_of(&self, other: &Position) -> bool {
        self.relation(other) == PositionRelation::LeftOf
    }

    pub fn relation(&self, other: &Position) -> PositionRelation {
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return PositionRelation::LeftOf;
            }
            if a > b {
                return PositionRelation::RightOf;
            }
        }
        match self.len().cmp(&other.len()) {
            std::cmp::Ordering::Equal => PositionRelation::Equal,
            std::cmp::Ordering::Less => PositionRelation::StrictlyAbove,
            std::cmp::Ordering::Greater => PositionRelation::StrictlyBelow,
        }
    }

    /// The `q` with `prefix · q = self`.
    pub fn strip_prefix(&self, prefix: &Position) -> Option<Position> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|s| Position(s.to_vec()))
    }

    /// The `o'` with `o' · suffix = self`.
    pub fn strip_suffix(&self, suffix: &Position) -> Option<Position> {
        self.0.strip_suffix(suffix.0.as_slice()).map(|s| Position(s.to_vec()))
    }

    /// All prefixes from the root up to and including `self`.
    pub fn prefixes(&self) -> Vec<Position> {
        (0..=self.len()).map(|k| Position(self.0[..k].to_vec())).collect()
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "eps");
        }
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

impl<const N: usize> From<[usize; N]> for Position {
    fn from(v: [usize; N]) -> Position {
        Position::new(v.to_vec()).expect("positions are 1-based")
    }
}

/// A substitution with finite explicit domain. Identity bindings are dropped.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Substitution(BTreeMap<Symbol, Term>);

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Substitution
    where
        I: IntoIterator<Item = (S, Term)>,
        S: AsRef<str>,
    {
        let mut s = Substitution::new();
        for (x, t) in pairs {
            s.insert(Arc::from(x.as_ref()), t);
        }
        s
    }

    pub fn insert(&mut self, x: Symbol, t: Term) {
        if matches!(&t, Term::Var(y) if *y == x) {
            self.0.remove(&x);
        } else {
            self.0.insert(x, t);
        }
    }

    pub fn get(&self, x: &str) -> Option<&Term> {
        self.0.get(x)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Term)> {
        self.0.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Symbol> {
        self.0.keys()
    }

    /// `xμ` for a variable name.
    pub fn image(&self, x: &Symbol) -> Term {
        self.0.get(x).cloned().unwrap_or_else(|| Term::Var(x.clone()))
    }

    pub fn range_contains_hole(&self) -> bool {
        self.0.values().any(|t| t.count_holes() > 0)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, t)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}/{t}")?;
        }
        write!(f, "}}")
    }
}

/// Least set `W ⊇ V(t)` closed under `x ∈ W ⇒ V(xμ) ⊆ W`, i.e. all variables
/// of `tμ^k` for every `k`.
pub fn variable_closure(t: &Term, mu: &Substitution) -> BTreeSet<Symbol> {
    let mut seen = BTreeSet::new();
    let mut todo: Vec<Symbol> = t.vars().into_iter().collect();
    while let Some(x) = todo.pop() {
        if !seen.insert(x.clone()) {
            continue;
        }
        if let Some(img) = mu.get(&x) {
            todo.extend(img.vars().into_iter().filter(|y| !seen.contains(y)));
        }
    }
    seen
}

/// A term with exactly one hole; the hole position is cached.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Context {
    body: Term,
    hole: Position,
}

impl Context {
    pub fn new(body: Term) -> Result<Context> {
        let holes = body.count_holes();
        if holes != 1 {
            return Err(Error::MalformedContext {
                body: body.to_string(),
                holes,
            });
        }
        let hole = hole_position(&body)?;
        Ok(Context { body, hole })
    }

    pub fn empty() -> Context {
        Context {
            body: Term::hole(),
            hole: Position::root(),
        }
    }

    pub fn body(&self) -> &Term {
        &self.body
    }

    pub fn hole_position(&self) -> &Position {
        &self.hole
    }

    pub fn is_empty(&self) -> bool {
        self.hole.is_root()
    }

    /// `C[t]`.
    pub fn plug(&self, t: Term) -> Term {
        self.body
            .replace_at(&self.hole, t)
            .expect("cached hole position is valid")
    }

    /// `Cμ`; the hole is untouched since `μ` never maps into it.
    pub fn apply(&self, mu: &Substitution) -> Context {
        Context {
            body: self.body.apply(mu),
            hole: self.hole.clone(),
        }
    }

    /// `C|_p` for a prefix `p` of the hole position, again a context.
    pub fn subcontext(&self, p: &Position) -> Option<Context> {
        let rest = self.hole.strip_prefix(p)?;
        let body = self.body.subterm_at(p).ok()?.clone();
        Some(Context { body, hole: rest })
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.body.fmt(f)
    }
}

/// Position of the unique hole in a context body.
pub fn hole_position(body: &Term) -> Result<Position> {
    let holes: Vec<Position> = body
        .subterms()
        .into_iter()
        .filter(|(_, t)| t.is_hole())
        .map(|(p, _)| p)
        .collect();
    match holes.as_slice() {
        [p] => Ok(p.clone()),
        _ => Err(Error::MalformedContext {
            body: body.to_string(),
            holes: holes.len(),
        }),
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ContextSubstitution {
    context: Context,
    subst: Substitution,
}

impl ContextSubstitution {
    pub fn new(context: Context, subst: Substitution) -> Result<ContextSubstitution> {
        if subst.range_contains_hole() {
            return Err(Error::HoleInTerm(subst.to_string()));
        }
        Ok(ContextSubstitution { context, subst })
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn subst(&self) -> &Substitution {
        &self.subst
    }

    /// `t(C,μ)^n`.
    pub fn apply(&self, t: &Term, n: usize) -> Term {
        apply_context_substitution(t, &self.context, &self.subst, n)
    }
}

/// `t(C,μ)^n`, computed as `C[t(C,μ)^(n-1) μ]`.
pub fn apply_context_substitution(t: &Term, c: &Context, mu: &Substitution, n: usize) -> Term {
    let mut cur = t.clone();
    for _ in 0..n {
        cur = c.plug(cur.apply(mu));
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_term_with_vars;

    fn t(s: &str) -> Term {
        parse_term_with_vars(s, &["x", "y", "z", "y1", "y2", "zs"]).unwrap()
    }

    fn mu(pairs: &[(&str, &str)]) -> Substitution {
        Substitution::from_pairs(pairs.iter().map(|(x, s)| (*x, t(s))))
    }

    #[test]
    fn position_relations() {
        use PositionRelation::*;
        let p = |v: &[usize]| Position::new(v.to_vec()).unwrap();
        assert_eq!(p(&[1, 2]).relation(&p(&[2])), LeftOf);
        assert_eq!(p(&[2]).relation(&p(&[1, 2])), RightOf);
        assert_eq!(Position::root().relation(&p(&[1, 1])), StrictlyAbove);
        assert_eq!(p(&[1, 1]).relation(&Position::root()), StrictlyBelow);
        assert_eq!(p(&[2, 1]).relation(&p(&[2, 1])), Equal);
        assert!(Position::new(vec![0]).is_none());
    }

    #[test]
    fn position_powers() {
        let p = Position::from([2]);
        assert_eq!(p.pow(0), Position::root());
        assert_eq!(p.pow(3), Position::from([2, 2, 2]));
        assert_eq!(
            Position::from([1, 2]).concat(&Position::from([3])),
            Position::from([1, 2, 3])
        );
        assert_eq!(
            Position::from([2, 2]).strip_suffix(&Position::from([2, 2])),
            Some(Position::root())
        );
    }

    #[test]
    fn subterm_examples() {
        let s = t("times(fact(s(x),y),s(x))");
        assert_eq!(s.subterm_at(&Position::from([1])).unwrap(), &t("fact(s(x),y)"));
        assert_eq!(t("x").subterm_at(&Position::root()).unwrap(), &t("x"));
        assert_eq!(t("f(a,g(b))").subterm_at(&Position::from([2, 1])).unwrap(), &t("b"));
        assert!(matches!(
            t("f(a)").subterm_at(&Position::from([2])),
            Err(Error::PositionOutOfTerm { .. })
        ));
    }

    #[test]
    fn replace_examples() {
        assert_eq!(
            t("f(a,b)").replace_at(&Position::from([2]), t("c")).unwrap(),
            t("f(a,c)")
        );
        assert_eq!(t("a").replace_at(&Position::root(), t("b")).unwrap(), t("b"));
        let c = t("times([],s(x))");
        let plugged = c
            .replace_at(&Position::from([1]), t("fact(x,y)").apply(&mu(&[("x", "s(x)")])))
            .unwrap();
        assert_eq!(plugged, t("times(fact(s(x),y),s(x))"));
        assert!(t("a").replace_at(&Position::from([1]), t("b")).is_err());
    }

    #[test]
    fn substitution_powers() {
        assert_eq!(
            t("g(x,y)").apply_n(&mu(&[("x", "y"), ("y", "z")]), 2),
            t("g(z,z)")
        );
        assert_eq!(t("g(x,y)").apply_n(&mu(&[("x", "y")]), 0), t("g(x,y)"));
        assert_eq!(
            t("g(x)").apply_n(&mu(&[("x", "y"), ("y", "z"), ("z", "s(x)")]), 9),
            t("g(s(s(s(x))))")
        );
    }

    #[test]
    fn identity_bindings_are_normalized() {
        let m = mu(&[("x", "x"), ("y", "z")]);
        assert_eq!(m.len(), 1);
        assert!(m.get("x").is_none());
    }

    #[test]
    fn closure_examples() {
        let m = mu(&[("y", "y1"), ("y1", "y2"), ("y2", "x"), ("x", "f(x)")]);
        let w: Vec<String> = variable_closure(&t("y"), &m).iter().map(|s| s.to_string()).collect();
        assert_eq!(w, vec!["x", "y", "y1", "y2"]);
        assert!(variable_closure(&t("f(a,b)"), &m).is_empty());
        let w = variable_closure(&t("x"), &Substitution::new());
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn context_substitution_examples() {
        let c = Context::new(t("cons(x,[])")).unwrap();
        let m = mu(&[("x", "s(x)")]);
        assert_eq!(
            apply_context_substitution(&t("inf(x)"), &c, &m, 2),
            t("cons(x,cons(s(x),inf(s(s(x)))))")
        );
        assert_eq!(
            apply_context_substitution(&t("f(x)"), &Context::empty(), &m, 1),
            t("f(s(x))")
        );
        let c = Context::new(t("times([],s(x))")).unwrap();
        assert_eq!(
            apply_context_substitution(&t("fact(x,y)"), &c, &m, 1),
            t("times(fact(s(x),y),s(x))")
        );
    }

    #[test]
    fn hole_positions() {
        assert_eq!(hole_position(&t("times([],s(x))")).unwrap(), Position::from([1]));
        assert_eq!(hole_position(&t("cons(x,[])")).unwrap(), Position::from([2]));
        assert_eq!(hole_position(&t("[]")).unwrap(), Position::root());
        assert!(matches!(
            Context::new(t("f([],[])")),
            Err(Error::MalformedContext { holes: 2, .. })
        ));
        assert!(Context::new(t("f(a)")).is_err());
    }

    #[test]
    fn subcontexts() {
        let c = Context::new(t("if(false,s(0),times([],s(x)))")).unwrap();
        let d = c.subcontext(&Position::from([3])).unwrap();
        assert_eq!(d.body(), &t("times([],s(x))"));
        assert_eq!(d.hole_position(), &Position::from([1]));
        assert!(c.subcontext(&Position::from([2])).is_none());
    }

    #[test]
    fn hole_not_allowed_in_substitution_range() {
        let m = mu(&[("x", "f([])")]);
        assert!(ContextSubstitution::new(Context::empty(), m).is_err());
    }
}
