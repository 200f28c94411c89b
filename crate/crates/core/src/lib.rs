//! Checking rewrite loops against evaluation strategies.
//!
//! A loop `t → … → C[tμ]` of a term rewrite system gives rise to the infinite
//! derivation obtained by wrapping every step into `(C, μ)` again and again.
//! This crate validates such loop certificates and decides whether every
//! unrolled step respects a strategy (leftmost, innermost, outermost, their
//! combinations, parallel variants or forbidden patterns). Each decision is
//! reduced to finitely many matching problems, which are solved
//! symbolically.
//!
//! ```
//! use loopcert::{decide_loop, parse_certificate, parse_trs, validate_loop, SolverConfig, StrategySpec};
//!
//! let trs = parse_trs("(VAR x) (RULES f(x) -> g(f(s(x))))").unwrap();
//! let cert = parse_certificate(
//!     r#"{"start": "f(x)", "steps": [[{"pos": [], "rule": 0}]],
//!         "context": "g([])", "subst": {"x": "s(x)"}}"#,
//!     &trs,
//! )
//! .unwrap();
//! let lp = validate_loop(&trs, &cert).unwrap();
//! let d = decide_loop(&trs, &lp, &StrategySpec::Innermost, &SolverConfig::default()).unwrap();
//! assert_eq!(d.verdict.tag(), "yes");
//! ```

pub mod cli;
pub mod decide;
pub mod error;
pub mod finder;
pub mod io;
pub mod loops;
pub mod rewrite;
pub mod solver;
pub mod term;

#[cfg(test)]
pub(crate) mod test_corpus;

pub use decide::{check_levels, decide_loop, Decision, StrategySpec, Verdict};
pub use error::{Error, Result};
pub use finder::{find_loops, FinderConfig};
pub use io::{
    parse_certificate, parse_patterns, parse_replacement_map, parse_term, parse_trs,
    render_certificate, render_decision, render_trs, Format,
};
pub use loops::{unroll_loop, validate_loop, LoopCertificate, RedexRef, ValidatedLoop};
pub use rewrite::{ForbiddenPattern, PatternEncoding, PatternKind, Rule, Trs};
pub use solver::{SolverConfig, SolverResult, Witness};
pub use term::{Context, Position, Substitution, Term};
