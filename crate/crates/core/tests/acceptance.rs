//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use loopcert::decide::{build_obligations, solve_position_equation, Family};
use loopcert::rewrite::{builtin_patterns, rewrite_at, strategy_allows};
use loopcert::solver::{brute_force_check, Problem, SolverResult, Witness};
use loopcert::term::apply_context_substitution;
use loopcert::{
    check_levels, decide_loop, find_loops, parse_certificate, parse_patterns, parse_trs, render_trs,
    validate_loop, Decision, FinderConfig, LoopCertificate, PatternEncoding, Position,
    SolverConfig, StrategySpec, Trs, ValidatedLoop, Verdict,
};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn load(trs: &str, cert: &str) -> (Trs, ValidatedLoop) {
    let trs = parse_trs(&read_data(trs)).unwrap();
    let cert = parse_certificate(&read_data(cert), &trs).unwrap();
    let lp = validate_loop(&trs, &cert).unwrap();
    (trs, lp)
}

fn decide(trs: &Trs, lp: &ValidatedLoop, spec: &StrategySpec, config: &SolverConfig) -> Decision {
    decide_loop(trs, lp, spec, config).unwrap()
}

fn tag(trs: &Trs, lp: &ValidatedLoop, name: &str) -> &'static str {
    let spec = StrategySpec::from_name(name).unwrap();
    decide(trs, lp, &spec, &SolverConfig::default()).verdict.tag()
}

fn expect_tags(trs: &Trs, lp: &ValidatedLoop, want: &[(&str, &str)]) -> Result<(), String> {
    for (name, expected) in want {
        let got = tag(trs, lp, name);
        ensure!(got == *expected, "{name}: expected {expected}, got {got}");
    }
    Ok(())
}

fn evidence_witness(d: &Decision) -> Result<(&loopcert::decide::Evidence, &Witness), String> {
    match &d.verdict {
        Verdict::NotStrategyLoop(ev) => Ok((ev, &ev.witness)),
        other => Err(format!("expected a negative verdict, got {}", other.tag())),
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (trs, lp) = load("ex1.trs", "ex1-loop.json");
    ensure!(lp.len() == 5, "expected 5 steps, got {}", lp.len());
    ensure!(lp.context().to_string() == "times([],s(x))", "context {}", lp.context());
    ensure!(lp.subst().to_string() == "{x/s(x)}", "substitution {}", lp.subst());
    expect_tags(
        &trs,
        &lp,
        &[
            ("leftmost", "yes"),
            ("outermost", "yes"),
            ("innermost", "no"),
            ("leftmost-outermost", "yes"),
            ("leftmost-innermost", "no"),
        ],
    )?;
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(1), "took {took:?}");
    Ok(format!("5 verdicts in {took:?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (trs, lp) = load("ex1.trs", "ex6-loop.json");
    let obs = build_obligations(&trs, &lp, &StrategySpec::Leftmost).map_err(|e| e.to_string())?;
    let families: BTreeSet<(Family, String)> = obs
        .iter()
        .map(|ob| match &ob.problem {
            Problem::Matching(mp) => (ob.family, mp.pairs[0].0.to_string()),
            other => (ob.family, other.to_string()),
        })
        .collect();
    let want: BTreeSet<(Family, String)> = [
        (Family::LeftTerm, "false"),
        (Family::LeftContext, "false"),
        (Family::LeftContext, "0"),
        (Family::LeftContext, "s(0)"),
    ]
    .into_iter()
    .map(|(f, s)| (f, s.to_string()))
    .collect();
    ensure!(families == want, "leftmost families {families:?}");
    expect_tags(
        &trs,
        &lp,
        &[
            ("leftmost", "yes"),
            ("innermost", "yes"),
            ("outermost", "no"),
            ("leftmost-innermost", "yes"),
            ("leftmost-outermost", "no"),
        ],
    )?;
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(1), "took {took:?}");
    Ok(format!("{} leftmost problems, 5 verdicts in {took:?}", obs.len()))
}

fn criterion_3() -> Outcome {
    let (trs, lp) = load("ex7.trs", "ex7-loop.json");
    let d = decide(&trs, &lp, &StrategySpec::Leftmost, &SolverConfig::default());
    let (ev, w) = evidence_witness(&d)?;
    let problem = ev.obligation.problem.to_string();
    ensure!(problem.starts_with("g(x,y) ⋗ g(x,x)"), "problem {problem}");
    match w {
        Witness::Matching { n, sigma } => {
            ensure!(*n == 2, "n = {n}");
            ensure!(sigma.to_string() == "{x/z}", "σ = {sigma}");
        }
        other => return Err(format!("witness {other:?}")),
    }
    Ok("n = 2, σ = {x/z}".into())
}

fn criterion_4() -> Outcome {
    let (trs, lp) = load("ex8.trs", "ex8-loop.json");
    let config = SolverConfig::default();
    ensure!(config.bound >= 9, "default bound {}", config.bound);
    let d = decide(&trs, &lp, &StrategySpec::Leftmost, &config);
    let (_, w) = evidence_witness(&d)?;
    ensure!(matches!(w, Witness::Matching { n: 9, .. }), "witness {w:?}");
    Ok(format!("n = 9 at bound {}", config.bound))
}

fn criterion_5() -> Outcome {
    let (trs, two) = load("ex1.trs", "ex9-two-step.json");
    let got = tag(&trs, &two, "max-parallel-outermost");
    ensure!(got == "yes", "two-step loop, max-parallel-outermost: {got}");
    let (_, one) = load("ex1.trs", "ex9-one-step.json");
    let got = tag(&trs, &one, "max-parallel-innermost");
    ensure!(got == "yes", "one-step loop, max-parallel-innermost: {got}");
    for file in ["ex1-loop.json", "ex6-loop.json"] {
        let (_, lp) = load("ex1.trs", file);
        let v = check_levels(&trs, &lp, &StrategySpec::MaxParallel, 0)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("{file}: no max-parallel violation at level 0"))?;
        // steps are counted from 0 in reports
        ensure!(v.level == 0 && v.step == 1, "{file}: violation at level {} step {}", v.level, v.step);
        let got = tag(&trs, &lp, "max-parallel");
        ensure!(got == "no", "{file}: max-parallel verdict {got}");
    }
    Ok("both parallel loops accepted; sequential loops fail at the second step".into())
}

fn criterion_6() -> Outcome {
    let (trs, lp) = load("inf.trs", "inf-loop.json");
    let (n0, o0) = solve_position_equation(lp.hole(), &Position::root(), &Position::from([2, 2]))
        .ok_or("position equation has no solution")?;
    ensure!(n0 == 2 && o0.is_root(), "n₀ = {n0}, o₀′ = {o0}");
    let pats = parse_patterns(&read_data("inf-patterns.txt"), &trs).map_err(|e| e.to_string())?;
    let d = decide(&trs, &lp, &StrategySpec::ForbiddenSet(pats), &SolverConfig::default());
    let (ev, w) = evidence_witness(&d)?;
    ensure!(ev.obligation.family == Family::Here, "family {}", ev.obligation.family.name());
    ensure!(ev.obligation.level == 2, "level {}", ev.obligation.level);
    match w {
        Witness::Matching { n, sigma } => {
            ensure!(*n == 0, "n = {n}");
            ensure!(
                sigma.get("y").map(ToString::to_string).as_deref() == Some("s(x)")
                    && sigma.get("z").map(ToString::to_string).as_deref() == Some("s(s(x))"),
                "σ = {sigma}"
            );
        }
        other => return Err(format!("witness {other:?}")),
    }
    Ok("h-problem solved with n = 0 via n₀ = 2, o₀′ = eps".into())
}

fn criterion_7() -> Outcome {
    let mut rng = rng(7);
    let instances = 1200;
    for i in 0..instances {
        let t = term(&mut rng, 3, &VARS);
        let c = context(&mut rng, 2, &VARS);
        let mu = subst(&mut rng);
        let n = rng.gen_range(0..=5);
        // (i)
        let lhs = apply_context_substitution(&t, &c, &mu, n).apply(&mu);
        let rhs = apply_context_substitution(&t.apply(&mu), &c.apply(&mu), &mu, n);
        ensure!(lhs == rhs, "(i) fails for t={t}, C={c}, μ={mu}, n={n}");
        // (ii)
        let m = rng.gen_range(0..=6 - n.min(6));
        let lhs = apply_context_substitution(&apply_context_substitution(&t, &c, &mu, m), &c, &mu, n);
        let rhs = apply_context_substitution(&t, &c, &mu, m + n);
        ensure!(lhs == rhs, "(ii) fails for t={t}, C={c}, μ={mu}, m={m}, n={n}");
        // (iii)
        let p = c.hole_position().pow(n);
        let sub = apply_context_substitution(&t, &c, &mu, n);
        let got = sub.subterm_at(&p).map_err(|e| e.to_string())?;
        ensure!(*got == t.apply_n(&mu, n), "(iii) fails for t={t}, C={c}, μ={mu}, n={n}");
        // (iv)
        let (t, q, rule) = redex_instance(&mut rng);
        let n = n.min(4);
        let s = rewrite_at(&t, &q, &rule, 0).map_err(|e| e.to_string())?;
        let lifted = apply_context_substitution(&t, &c, &mu, n);
        let pos = c.hole_position().pow(n).concat(&q);
        let got = rewrite_at(&lifted, &pos, &rule, 0).map_err(|e| format!("(iv) instance {i}: {e}"))?;
        ensure!(
            got == apply_context_substitution(&s, &c, &mu, n),
            "(iv) fails for t={t}, q={q}, rule {rule}, C={c}, μ={mu}, n={n}"
        );
    }
    Ok(format!("{instances} instances of each identity"))
}

fn criterion_8() -> Outcome {
    let mut rng = rng(8);
    let count = 600;
    let config = SolverConfig::default();
    let (mut solvable, mut unsolvable, mut unknown) = (0, 0, 0);
    for _ in 0..count {
        let p = problem(&mut rng);
        let oracle = brute_force_check(&p, 32);
        match p.solve(&config) {
            SolverResult::Solvable(w) => {
                solvable += 1;
                ensure!(p.verify(&w), "witness {w:?} does not verify for {p}");
                if let (Some(o), Problem::Matching(_) | Problem::Identity(_)) = (&oracle, &p) {
                    ensure!(o.exponent() == w.exponent(), "least exponent {} but solver gave {} for {p}", o.exponent(), w.exponent());
                }
            }
            SolverResult::Unsolvable(cert) => {
                unsolvable += 1;
                ensure!(oracle.is_none(), "{} certificate but oracle found {oracle:?} for {p}", cert.name());
            }
            SolverResult::Unknown { .. } => unknown += 1,
        }
    }
    Ok(format!(
        "{count} problems: {solvable} solvable, {unsolvable} unsolvable, {unknown} unknown"
    ))
}

const CORPUS: [(&str, &str); 7] = [
    ("ex1.trs", "ex1-loop.json"),
    ("ex1.trs", "ex6-loop.json"),
    ("ex1.trs", "ex9-one-step.json"),
    ("ex1.trs", "ex9-two-step.json"),
    ("ex7.trs", "ex7-loop.json"),
    ("ex8.trs", "ex8-loop.json"),
    ("inf.trs", "inf-loop.json"),
];

fn coherence(trs: &Trs, lp: &ValidatedLoop, config: &SolverConfig, what: &str) -> Result<(), String> {
    let sequential = lp.certificate().is_sequential();
    let mut tags = std::collections::BTreeMap::new();
    for name in StrategySpec::BUILTIN {
        let spec = StrategySpec::from_name(name).unwrap();
        if spec.is_sequential() && !sequential {
            continue;
        }
        let d = decide_loop(trs, lp, &spec, config).map_err(|e| format!("{what}, {name}: {e}"))?;
        if let Verdict::IsStrategyLoop = d.verdict {
            let v = check_levels(trs, lp, &spec, 4).map_err(|e| e.to_string())?;
            ensure!(v.is_none(), "{what}: {name} accepted but violated at {v:?}");
        }
        if let Verdict::NotStrategyLoop(ev) = &d.verdict {
            ensure!(ev.obligation.problem.verify(&ev.witness), "{what}, {name}: witness does not verify");
            if let Some(c) = &ev.concrete {
                let check = spec
                    .concrete_checks()
                    .into_iter()
                    .find(|s| s.name() == c.check)
                    .ok_or("unknown check")?;
                let allowed = strategy_allows(&c.term, &c.positions, trs, &check).map_err(|e| e.to_string())?;
                ensure!(!allowed, "{what}, {name}: concrete violation does not reproduce");
            }
        }
        tags.insert(name, d.verdict.tag());
    }
    if sequential {
        for (name, enc) in [("innermost", PatternEncoding::Innermost), ("outermost", PatternEncoding::Outermost)] {
            let pats = builtin_patterns(&enc, trs).map_err(|e| e.to_string())?;
            let d = decide_loop(trs, lp, &StrategySpec::ForbiddenSet(pats), config).map_err(|e| e.to_string())?;
            ensure!(d.verdict.tag() == tags[name], "{what}: {name} {} but its encoding {}", tags[name], d.verdict.tag());
        }
    }
    for (both, a, b) in [
        ("leftmost-innermost", "leftmost", "innermost"),
        ("leftmost-outermost", "leftmost", "outermost"),
        ("max-parallel-innermost", "max-parallel", "parallel-innermost"),
        ("max-parallel-outermost", "max-parallel", "parallel-outermost"),
    ] {
        let (Some(x), Some(y), Some(z)) = (tags.get(both), tags.get(a), tags.get(b)) else { continue };
        if [x, y, z].iter().any(|t| **t == "unknown") {
            continue;
        }
        ensure!((*x == "yes") == (*y == "yes" && *z == "yes"), "{what}: {both}={x}, {a}={y}, {b}={z}");
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    let config = SolverConfig::default();
    for (trs, cert) in CORPUS {
        let (trs, lp) = load(trs, cert);
        coherence(&trs, &lp, &config, cert)?;
    }
    let mut rng = rng(9);
    let config = SolverConfig {
        bound: 24,
        max_term_size: 5_000,
    };
    let finder = FinderConfig {
        depth: 3,
        max_size: 40,
        start: None,
        max_nodes: 400,
    };
    let (mut loops, mut systems) = (0, 0);
    while loops < 120 {
        systems += 1;
        ensure!(systems < 5_000, "only {loops} loops found");
        let trs = looping_trs(&mut rng);
        for cert in find_loops(&trs, &finder).into_iter().take(3) {
            let lp = validate_loop(&trs, &cert).map_err(|e| format!("finder emitted an invalid loop: {e}"))?;
            coherence(&trs, &lp, &config, &format!("{cert:?} in {}", render_trs(&trs)))?;
            loops += 1;
        }
    }
    Ok(format!("{} corpus loops and {loops} loops from {systems} random systems", CORPUS.len()))
}

fn criterion_10() -> Outcome {
    let trs_path = data("ex1.trs");
    let trs_arg = trs_path.to_str().unwrap();
    let found = loopcert::cli::run(["loopcert", "find", "--trs", trs_arg, "--depth", "6", "--start", "fact(x,y)"]);
    ensure!(found.code == 0, "find exited with {}: {}", found.code, found.stderr);
    let trs = parse_trs(&read_data("ex1.trs")).unwrap();
    let items: Vec<serde_json::Value> = serde_json::from_str(&found.stdout).map_err(|e| e.to_string())?;
    let wanted = items
        .iter()
        .map(|v| parse_certificate(&v.to_string(), &trs).unwrap())
        .position(|c: LoopCertificate| closes_like_ex1(&c))
        .ok_or("no certificate closes with (times([],s(x)), {x/s(x)})")?;
    let dir = std::env::temp_dir().join(format!("loopcert-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let loop_path = dir.join("found.json");
    std::fs::write(&loop_path, &found.stdout).map_err(|e| e.to_string())?;
    let checked = loopcert::cli::run([
        "loopcert",
        "check",
        "--trs",
        trs_arg,
        "--loop",
        loop_path.to_str().unwrap(),
        "--index",
        &wanted.to_string(),
        "--strategy",
        "leftmost-outermost",
    ]);
    let _ = std::fs::remove_dir_all(&dir);
    ensure!(checked.code == 0, "check exited with {}: {}{}", checked.code, checked.stdout, checked.stderr);
    Ok(format!("{} loops found, loop {wanted} checked with exit 0", items.len()))
}

/// Equal to `(times(□,s(x)), {x/s(x)})` up to renaming `x`.
fn closes_like_ex1(c: &LoopCertificate) -> bool {
    let vars = c.start.vars();
    vars.iter().any(|v| {
        let want_ctx = format!("times([],s({v}))");
        let want_mu = format!("{{{v}/s({v})}}");
        c.context.to_string() == want_ctx && c.subst.to_string() == want_mu
    })
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("factorial loop verdicts", criterion_1),
        ("second factorial loop verdicts and leftmost problems", criterion_2),
        ("non-linear rule witness", criterion_3),
        ("witness needing nine wraps", criterion_4),
        ("max-parallel loops", criterion_5),
        ("infinite list forbidden pattern", criterion_6),
        ("context-substitution identities", criterion_7),
        ("solver soundness against the oracle", criterion_8),
        ("decider coherence", criterion_9),
        ("finder output piped to check", criterion_10),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}; {took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed in {:.2?}", criteria.len() - failed, criteria.len(), total.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
