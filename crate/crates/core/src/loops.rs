//! Loop certificates `t₁ → t₂ → … → t_{m+1} = t₁(C,μ)` and their unrolling.
//!
//! Sequential loops are parallel loops whose steps all have one redex.

use crate::error::{Error, Result};
use crate::rewrite::{parallel_rewrite, Trs};
use crate::term::{ContextSubstitution, Context, Position, Substitution, Term};

/// One redex of a (parallel) step: a position and the rule applied there.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RedexRef {
    pub pos: Position,
    pub rule: usize,
}

pub type Step = Vec<RedexRef>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LoopCertificate {
    pub start: Term,
    pub steps: Vec<Step>,
    pub context: Context,
    pub subst: Substitution,
}

impl LoopCertificate {
    pub fn is_sequential(&self) -> bool {
        self.steps.iter().all(|s| s.len() == 1)
    }
}

/// A certificate whose derivation has been replayed and closes.
#[derive(Clone, Debug)]
pub struct ValidatedLoop {
    cert: LoopCertificate,
    terms: Vec<Term>,
    wrap: ContextSubstitution,
}

impl ValidatedLoop {
    pub fn certificate(&self) -> &LoopCertificate {
        &self.cert
    }

    /// `t₁ … t_{m+1}`.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn steps(&self) -> &[Step] {
        &self.cert.steps
    }

    pub fn context(&self) -> &Context {
        &self.cert.context
    }

    pub fn subst(&self) -> &Substitution {
        &self.cert.subst
    }

    pub fn context_substitution(&self) -> &ContextSubstitution {
        &self.wrap
    }

    /// Position of the hole in `C`.
    pub fn hole(&self) -> &Position {
        self.cert.context.hole_position()
    }

    pub fn len(&self) -> usize {
        self.cert.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cert.steps.is_empty()
    }

    /// `tᵢ(C,μ)^n` for every `i ≤ m+1`.
    pub fn level_terms(&self, n: usize) -> Vec<Term> {
        self.terms.iter().map(|t| self.wrap.apply(t, n)).collect()
    }
}

pub fn validate_loop(trs: &Trs, cert: &LoopCertificate) -> Result<ValidatedLoop> {
    if cert.steps.is_empty() {
        return Err(Error::EmptyLoop);
    }
    let wrap = ContextSubstitution::new(cert.context.clone(), cert.subst.clone())?;
    let mut terms = vec![cert.start.clone()];
    for (i, step) in cert.steps.iter().enumerate() {
        let redexes: Vec<(Position, usize)> =
            step.iter().map(|r| (r.pos.clone(), r.rule)).collect();
        let cur = terms.last().expect("nonempty");
        let next = parallel_rewrite(cur, &redexes, trs).map_err(|e| e.at_step(i))?;
        terms.push(next);
    }
    let expected = wrap.apply(&cert.start, 1);
    let actual = terms.last().expect("nonempty");
    if *actual != expected {
        return Err(Error::ClosingMismatch {
            expected: expected.to_string(),
            actual: actual.to_string(),
        });
    }
    Ok(ValidatedLoop {
        cert: cert.clone(),
        terms,
        wrap,
    })
}

/// The level-`n` derivation: `tᵢ(C,μ)^n` reduced at `p^n qᵢ`.
pub fn unroll_loop(lp: &ValidatedLoop, n: usize) -> Vec<(Term, Step)> {
    let prefix = lp.hole().pow(n);
    lp.terms[..lp.len()]
        .iter()
        .zip(lp.steps())
        .map(|(t, step)| {
            let shifted = step
                .iter()
                .map(|r| RedexRef {
                    pos: prefix.concat(&r.pos),
                    rule: r.rule,
                })
                .collect();
            (lp.wrap.apply(t, n), shifted)
        })
        .collect()
}
