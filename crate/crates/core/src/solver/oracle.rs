//! Exhaustive search over small exponents, using nothing but substitution
//! application and syntactic matching. Serves as an independent reference
//! for the symbolic solvers.

use crate::rewrite::match_pattern;
use crate::term::{apply_context_substitution, Substitution};

use super::{Problem, Witness};

/// The least witness with all exponents summing to at most `bound`.
/// Extended problems are searched by `m + k`, then `m`.
pub fn brute_force_check(problem: &Problem, bound: usize) -> Option<Witness> {
    match problem {
        Problem::Matching(p) => (0..=bound).find_map(|n| {
            let mut sigma = Substitution::new();
            let mut bindings = Default::default();
            let ok = p
                .pairs
                .iter()
                .all(|(u, l)| crate::rewrite::match_into(l, &u.apply_n(&p.mu, n), &mut bindings))
                && p
                    .identities
                    .iter()
                    .all(|(a, b)| a.apply_n(&p.mu, n) == b.apply_n(&p.mu, n));
            ok.then(|| {
                for (x, t) in bindings {
                    sigma.insert(x, t);
                }
                Witness::Matching { n, sigma }
            })
        }),
        Problem::Identity(p) => (0..=bound)
            .find(|&n| p.u.apply_n(&p.mu, n) == p.v.apply_n(&p.mu, n))
            .map(|n| Witness::Identity { n }),
        Problem::Extended(p) => (0..=bound).find_map(|s| {
            (0..=s).find_map(|m| {
                let k = s - m;
                let inner = apply_context_substitution(&p.t, &p.c, &p.mu, m);
                let term = p.d.plug(inner).apply_n(&p.mu, k);
                match_pattern(&p.pattern, &term).map(|sigma| Witness::Extended { m, k, sigma })
            })
        }),
    }
}
