//! Bounded breadth-first search for loops.
//!
//! From a start term `t₀`, every derived term `s` is checked for subterms
//! `s|_p = t₀μ`; each hit gives the candidate loop `t₀ →⁺ s = C[t₀μ]` with `C`
//! the context of `s` around `p`.

use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::loops::{validate_loop, LoopCertificate, RedexRef, Step};
use crate::rewrite::{match_pattern, redex_positions, rewrite_at, Trs};
use crate::term::{Context, Symbol, Term};

#[derive(Clone, Debug)]
pub struct FinderConfig {
    /// Longest derivation explored.
    pub depth: usize,
    /// Terms larger than this are not explored.
    pub max_size: usize,
    /// Start from this term only, instead of every left-hand side.
    pub start: Option<Term>,
    /// Terms visited per start term before giving up.
    pub max_nodes: usize,
}

impl Default for FinderConfig {
    fn default() -> Self {
        FinderConfig {
            depth: 6,
            max_size: 200,
            start: None,
            max_nodes: 100_000,
        }
    }
}

/// Renames `t₀`, `C` and `μ` jointly, so equal loops up to renaming get equal
/// keys.
fn dedupe_key(cert: &LoopCertificate) -> String {
    let mut names: BTreeMap<Symbol, Symbol> = BTreeMap::new();
    let start = cert.start.canonical_renaming(&mut names);
    let body = cert.context.body().canonical_renaming(&mut names);
    // domain variables all occur in t₀, so they are already renamed
    let mut pairs: Vec<(Term, &Term)> = cert
        .subst
        .iter()
        .map(|(x, t)| (Term::Var(x.clone()).canonical_renaming(&mut names), t))
        .collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let subst: Vec<String> = pairs
        .into_iter()
        .map(|(x, t)| format!("{x}/{}", t.canonical_renaming(&mut names)))
        .collect();
    format!("{start} | {body} | {}", subst.join(","))
}

fn starts(trs: &Trs, config: &FinderConfig) -> Vec<Term> {
    match &config.start {
        Some(t) => vec![t.clone()],
        None => {
            let mut seen = HashSet::new();
            trs.rules()
                .iter()
                .filter(|r| seen.insert(r.lhs.clone()))
                .map(|r| r.lhs.clone())
                .collect()
        }
    }
}

/// Loops closing somewhere in `s`, for the derivation `path` from `t0`.
fn closing_loops(trs: &Trs, t0: &Term, s: &Term, path: &[Step], out: &mut Vec<LoopCertificate>) {
    for (p, sub) in s.subterms() {
        let Some(mu) = match_pattern(t0, sub) else { continue };
        let Ok(body) = s.replace_at(&p, Term::hole()) else { continue };
        let Ok(context) = Context::new(body) else { continue };
        let cert = LoopCertificate {
            start: t0.clone(),
            steps: path.to_vec(),
            context,
            subst: mu,
        };
        if validate_loop(trs, &cert).is_ok() {
            out.push(cert);
        }
    }
}

/// Every loop found within the limits, in order of discovery, without
/// duplicates up to variable renaming.
pub fn find_loops(trs: &Trs, config: &FinderConfig) -> Vec<LoopCertificate> {
    let mut found = Vec::new();
    let mut keys = HashSet::new();
    for t0 in starts(trs, config) {
        let mut visited: HashSet<Term> = HashSet::from([t0.clone()]);
        let mut queue: VecDeque<(Term, Vec<Step>)> = VecDeque::from([(t0.clone(), Vec::new())]);
        while let Some((s, path)) = queue.pop_front() {
            if path.len() >= config.depth {
                continue;
            }
            for (pos, rule) in redex_positions(&s, trs) {
                let next = rewrite_at(&s, &pos, &trs.rules()[rule], rule).expect("redex");
                if next.size() > config.max_size || visited.len() >= config.max_nodes {
                    continue;
                }
                if !visited.insert(next.clone()) {
                    continue;
                }
                let mut next_path = path.clone();
                next_path.push(vec![RedexRef { pos, rule }]);
                let mut loops = Vec::new();
                closing_loops(trs, &t0, &next, &next_path, &mut loops);
                for cert in loops {
                    if keys.insert(dedupe_key(&cert)) {
                        found.push(cert);
                    }
                }
                queue.push_back((next, next_path));
            }
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{parse_term, parse_trs};
    use crate::test_corpus as corpus;

    #[test]
    fn finds_the_factorial_loop() {
        let trs = corpus::ex1_trs();
        let cfg = FinderConfig {
            start: Some(parse_term("fact(x,y)", &trs).unwrap()),
            ..FinderConfig::default()
        };
        let loops = find_loops(&trs, &cfg);
        assert!(loops.iter().any(|c| c.context.to_string() == "times([],s(x))"
            && c.subst.to_string() == "{x/s(x)}"
            && c.steps.len() == 5));
        for c in &loops {
            assert!(validate_loop(&trs, c).is_ok());
        }
    }

    #[test]
    fn terminating_systems_have_no_loops() {
        let trs = parse_trs("(RULES a -> b)").unwrap();
        let cfg = FinderConfig { depth: 8, ..FinderConfig::default() };
        assert!(find_loops(&trs, &cfg).is_empty());
    }

    #[test]
    fn self_embedding_rule() {
        let trs = parse_trs("(VAR x) (RULES f(x) -> f(f(x)))").unwrap();
        let cfg = FinderConfig { depth: 2, ..FinderConfig::default() };
        let loops = find_loops(&trs, &cfg);
        assert!(loops
            .iter()
            .any(|c| c.context.to_string() == "f([])" && c.subst.is_empty() && c.steps.len() == 1));
    }

    #[test]
    fn renamed_duplicates_are_dropped() {
        let trs = parse_trs("(VAR x y) (RULES f(x) -> f(f(x)) g(y) -> g(g(y)))").unwrap();
        let cfg = FinderConfig { depth: 1, ..FinderConfig::default() };
        let keys: Vec<String> = find_loops(&trs, &cfg).iter().map(dedupe_key).collect();
        let unique: HashSet<&String> = keys.iter().collect();
        assert_eq!(keys.len(), unique.len());
    }
}
