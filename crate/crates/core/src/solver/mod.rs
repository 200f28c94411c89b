//! Matching, identity and extended matching problems over a fixed `μ`.
//!
//! * `u ⋗ ℓ` is solvable iff `uμ^n = ℓσ` for some `n` and `σ`.
//! * An identity problem `(u, v)` is solvable iff `uμ^n = vμ^n` for some `n`.
//! * An extended problem `(D, ℓ, C, t)` is solvable iff
//!   `D[t(C,μ)^m]μ^k = ℓσ` for some `m`, `k` and `σ`.
//!
//! The solvers are three-valued. `Unsolvable` always carries a reason that
//! holds for every exponent; `Unknown` means the bound ran out first.

mod extended;
mod matching;
mod oracle;

use std::fmt;

use serde::Serialize;

use crate::rewrite::match_into;
use crate::term::{apply_context_substitution, Context, Substitution, Term};

pub use extended::solve_extended;
pub use matching::{solve_identity, solve_matching};
pub use oracle::brute_force_check;

/// `uᵢ μ^n ⋗ ℓᵢ` for every pair and `aμ^n = bμ^n` for every identity, all
/// with one shared `n` and one shared `σ`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MatchingProblem {
    pub pairs: Vec<(Term, Term)>,
    pub identities: Vec<(Term, Term)>,
    pub mu: Substitution,
}

impl MatchingProblem {
    pub fn single(u: Term, lhs: Term, mu: Substitution) -> MatchingProblem {
        MatchingProblem {
            pairs: vec![(u, lhs)],
            identities: Vec::new(),
            mu,
        }
    }

    /// The `σ` solving the problem at exponent `n`, if there is one.
    pub fn check(&self, n: usize) -> Option<Substitution> {
        let mut bindings = Default::default();
        for (u, l) in &self.pairs {
            if !match_into(l, &u.apply_n(&self.mu, n), &mut bindings) {
                return None;
            }
        }
        for (a, b) in &self.identities {
            if a.apply_n(&self.mu, n) != b.apply_n(&self.mu, n) {
                return None;
            }
        }
        let mut sigma = Substitution::new();
        for (x, t) in bindings {
            sigma.insert(x, t);
        }
        Some(sigma)
    }
}

impl fmt::Display for MatchingProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.pairs.iter().map(|(u, l)| format!("{u} ⋗ {l}")).collect();
        parts.extend(self.identities.iter().map(|(a, b)| format!("{a} ≐ {b}")));
        write!(f, "{} under {}", parts.join(", "), self.mu)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IdentityProblem {
    pub u: Term,
    pub v: Term,
    pub mu: Substitution,
}

impl IdentityProblem {
    pub fn check(&self, n: usize) -> bool {
        self.u.apply_n(&self.mu, n) == self.v.apply_n(&self.mu, n)
    }
}

impl fmt::Display for IdentityProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ≐ {} under {}", self.u, self.v, self.mu)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExtendedMatchingProblem {
    pub d: Context,
    pub pattern: Term,
    pub c: Context,
    pub t: Term,
    pub mu: Substitution,
}

impl ExtendedMatchingProblem {
    /// `D[t(C,μ)^m]μ^k`.
    pub fn instance(&self, m: usize, k: usize) -> Term {
        self.d
            .plug(apply_context_substitution(&self.t, &self.c, &self.mu, m))
            .apply_n(&self.mu, k)
    }

    pub fn check(&self, m: usize, k: usize) -> Option<Substitution> {
        crate::rewrite::match_pattern(&self.pattern, &self.instance(m, k))
    }
}

impl fmt::Display for ExtendedMatchingProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{}({},μ)^m]μ^k ⋗ {} under μ = {}",
            self.d, self.t, self.c, self.pattern, self.mu
        )
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Problem {
    Matching(MatchingProblem),
    Identity(IdentityProblem),
    Extended(ExtendedMatchingProblem),
}

impl Problem {
    pub fn kind(&self) -> &'static str {
        match self {
            Problem::Matching(_) => "matching",
            Problem::Identity(_) => "identity",
            Problem::Extended(_) => "extended",
        }
    }

    pub fn solve(&self, config: &SolverConfig) -> SolverResult {
        match self {
            Problem::Matching(p) => solve_matching(p, config),
            Problem::Identity(p) => solve_identity(p, config),
            Problem::Extended(p) => solve_extended(p, config),
        }
    }

    /// Does `w` solve this problem? Exact recomputation.
    pub fn verify(&self, w: &Witness) -> bool {
        match (self, w) {
            (Problem::Matching(p), Witness::Matching { n, sigma }) => {
                p.check(*n).is_some_and(|s| agrees(&s, sigma, p.pairs.iter().map(|(_, l)| l)))
            }
            (Problem::Identity(p), Witness::Identity { n }) => p.check(*n),
            (Problem::Extended(p), Witness::Extended { m, k, sigma }) => p
                .check(*m, *k)
                .is_some_and(|s| agrees(&s, sigma, [&p.pattern])),
            _ => false,
        }
    }
}

/// Equal on the variables of the patterns.
fn agrees<'a>(a: &Substitution, b: &Substitution, pats: impl IntoIterator<Item = &'a Term>) -> bool {
    pats.into_iter()
        .all(|l| l.vars().iter().all(|x| a.image(x) == b.image(x)))
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::Matching(p) => p.fmt(f),
            Problem::Identity(p) => p.fmt(f),
            Problem::Extended(p) => p.fmt(f),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Witness {
    Matching { n: usize, sigma: Substitution },
    Identity { n: usize },
    Extended { m: usize, k: usize, sigma: Substitution },
}

impl Witness {
    /// Total number of `μ`/context applications in the witness.
    pub fn exponent(&self) -> usize {
        match self {
            Witness::Matching { n, .. } | Witness::Identity { n } => *n,
            Witness::Extended { m, k, .. } => m + k,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Matching { n, sigma } => write!(f, "n = {n}, σ = {sigma}"),
            Witness::Identity { n } => write!(f, "n = {n}"),
            Witness::Extended { m, k, sigma } => write!(f, "m = {m}, k = {k}, σ = {sigma}"),
        }
    }
}

/// Why a problem has no solution for any exponent.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// Two distinct function symbols meet; `μ` never changes either.
    RootClash,
    /// A variable whose `μ`-orbit never leaves the variables meets a
    /// function symbol.
    VariableOrbit,
    /// `x` against a non-variable term containing `x`.
    OccursCheck,
    /// The simplified state repeats without ever becoming solved.
    Cycle,
    /// Every case of the split on the context exponent is unsolvable.
    ExtendedCases,
}

impl Certificate {
    pub fn name(self) -> &'static str {
        match self {
            Certificate::RootClash => "root-clash",
            Certificate::VariableOrbit => "variable-orbit",
            Certificate::OccursCheck => "occurs-check",
            Certificate::Cycle => "cycle",
            Certificate::ExtendedCases => "extended-cases",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SolverResult {
    Solvable(Witness),
    Unsolvable(Certificate),
    Unknown { bound: usize, reason: String },
}

impl SolverResult {
    pub fn is_solvable(&self) -> bool {
        matches!(self, SolverResult::Solvable(_))
    }

    pub fn is_unsolvable(&self) -> bool {
        matches!(self, SolverResult::Unsolvable(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, SolverResult::Unknown { .. })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct SolverConfig {
    /// Largest exponent tried before answering `Unknown`.
    pub bound: usize,
    /// Largest total term size kept during symbolic stepping.
    pub max_term_size: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            bound: 64,
            max_term_size: 50_000,
        }
    }
}
