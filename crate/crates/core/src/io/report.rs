//! Verdict reports as text or JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::decide::{ConcreteViolation, Decision, Obligation, Stats, Verdict};
use crate::solver::{Problem, SolverConfig, Witness};
use crate::term::Substitution;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Text,
    Json,
}

#[derive(Serialize)]
struct ProblemReport {
    kind: &'static str,
    text: String,
    /// `[subject, pattern]` pairs; for extended problems `[D, ℓ, C, t]`
    terms: Vec<Vec<String>>,
    mu: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct ConcreteReport {
    level: usize,
    step: usize,
    term: String,
    positions: Vec<String>,
    check: &'static str,
}

#[derive(Serialize)]
struct EvidenceReport {
    step: usize,
    position: String,
    family: &'static str,
    pattern: Option<String>,
    level: usize,
    problem: ProblemReport,
    witness: Value,
    concrete: Option<ConcreteReport>,
}

#[derive(Serialize)]
struct OpenReport {
    step: usize,
    position: String,
    family: &'static str,
    pattern: Option<String>,
    problem: ProblemReport,
    reason: String,
}

/// The machine-readable form of a [`Decision`].
#[derive(Serialize)]
pub struct VerdictReport {
    strategy: String,
    verdict: &'static str,
    evidence: Option<EvidenceReport>,
    open_problems: Vec<OpenReport>,
    stats: Stats,
    bounds: SolverConfig,
    notes: Vec<String>,
}

fn subst_map(mu: &Substitution) -> BTreeMap<String, String> {
    mu.iter().map(|(x, t)| (x.to_string(), t.to_string())).collect()
}

fn problem_report(p: &Problem) -> ProblemReport {
    let (terms, mu) = match p {
        Problem::Matching(mp) => (
            mp.pairs
                .iter()
                .chain(&mp.identities)
                .map(|(a, b)| vec![a.to_string(), b.to_string()])
                .collect(),
            &mp.mu,
        ),
        Problem::Identity(ip) => (vec![vec![ip.u.to_string(), ip.v.to_string()]], &ip.mu),
        Problem::Extended(ep) => (
            vec![vec![
                ep.d.to_string(),
                ep.pattern.to_string(),
                ep.c.to_string(),
                ep.t.to_string(),
            ]],
            &ep.mu,
        ),
    };
    ProblemReport {
        kind: p.kind(),
        text: p.to_string(),
        terms,
        mu: subst_map(mu),
    }
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Matching { n, sigma } => json!({"n": n, "sigma": subst_map(sigma)}),
        Witness::Identity { n } => json!({"n": n}),
        Witness::Extended { m, k, sigma } => json!({"m": m, "k": k, "sigma": subst_map(sigma)}),
    }
}

fn concrete_report(c: &ConcreteViolation) -> ConcreteReport {
    ConcreteReport {
        level: c.level,
        step: c.step,
        term: c.term.to_string(),
        positions: c.positions.iter().map(ToString::to_string).collect(),
        check: c.check,
    }
}

fn pattern_text(ob: &Obligation) -> Option<String> {
    ob.pattern.as_ref().map(ToString::to_string)
}

impl VerdictReport {
    pub fn new(d: &Decision) -> VerdictReport {
        let (evidence, open_problems) = match &d.verdict {
            Verdict::IsStrategyLoop => (None, Vec::new()),
            Verdict::NotStrategyLoop(ev) => {
                let ob = &ev.obligation;
                (
                    Some(EvidenceReport {
                        step: ob.step,
                        position: ob.position.to_string(),
                        family: ob.family.name(),
                        pattern: pattern_text(ob),
                        level: ob.level,
                        problem: problem_report(&ob.problem),
                        witness: witness_json(&ev.witness),
                        concrete: ev.concrete.as_ref().map(concrete_report),
                    }),
                    Vec::new(),
                )
            }
            Verdict::Unknown(open) => (
                None,
                open.iter()
                    .map(|o| OpenReport {
                        step: o.obligation.step,
                        position: o.obligation.position.to_string(),
                        family: o.obligation.family.name(),
                        pattern: pattern_text(&o.obligation),
                        problem: problem_report(&o.obligation.problem),
                        reason: o.reason.clone(),
                    })
                    .collect(),
            ),
        };
        VerdictReport {
            strategy: d.strategy.clone(),
            verdict: d.verdict.tag(),
            evidence,
            open_problems,
            stats: d.stats,
            bounds: d.config,
            notes: d.notes.clone(),
        }
    }
}

fn render_text(d: &Decision) -> String {
    let mut out = String::new();
    let s = &d.strategy;
    match &d.verdict {
        Verdict::IsStrategyLoop => {
            let _ = writeln!(out, "YES: loop under strategy {s}");
        }
        Verdict::NotStrategyLoop(ev) => {
            let ob = &ev.obligation;
            let _ = writeln!(out, "NO: not a loop under strategy {s}");
            let _ = write!(out, "  step {} at position {}, family {}", ob.step, ob.position, ob.family.name());
            if let Some(p) = &ob.pattern {
                let _ = write!(out, ", pattern {p}");
            }
            let _ = writeln!(out);
            let _ = writeln!(out, "  problem: {}", ob.problem);
            let _ = writeln!(out, "  witness: {}", ev.witness);
            match &ev.concrete {
                Some(c) => {
                    let ps: Vec<String> = c.positions.iter().map(ToString::to_string).collect();
                    let _ = writeln!(
                        out,
                        "  concrete: level {}, step {} reduces {} at {{{}}}, violating {}",
                        c.level,
                        c.step,
                        c.term,
                        ps.join(", "),
                        c.check
                    );
                }
                None => {
                    let _ = writeln!(out, "  concrete: none found");
                }
            }
        }
        Verdict::Unknown(open) => {
            let _ = writeln!(out, "UNKNOWN: undecided for strategy {s}");
            for o in open {
                let _ = writeln!(
                    out,
                    "  step {} at {}, family {}: {} ({})",
                    o.obligation.step,
                    o.obligation.position,
                    o.obligation.family.name(),
                    o.obligation.problem,
                    o.reason
                );
            }
        }
    }
    let st = &d.stats;
    let _ = writeln!(
        out,
        "  problems: {} built, {} attempted ({} unsolvable, {} unknown)",
        st.problems, st.attempted, st.unsolvable, st.unknown
    );
    let _ = writeln!(
        out,
        "  bounds: exponent {}, term size {}",
        d.config.bound, d.config.max_term_size
    );
    for note in &d.notes {
        let _ = writeln!(out, "  note: {note}");
    }
    out
}

pub fn render_decision(d: &Decision, format: Format) -> String {
    match format {
        Format::Text => render_text(d),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&VerdictReport::new(d)).expect("serializable");
            s.push('\n');
            s
        }
    }
}
