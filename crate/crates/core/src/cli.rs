//! The `loopcert` command line.
//!
//! `check` exits with 0 (a loop under the strategy), 1 (not a loop),
//! 2 (undecided) or 3 (invalid input). `find` exits with 0 if it found a
//! loop and 1 otherwise.

use std::ffi::OsString;
use std::io::Read as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::decide::{check_levels, decide_loop, StrategySpec, Verdict};
use crate::error::{Error, Result};
use crate::finder::{find_loops, FinderConfig};
use crate::io::{
    parse_certificate, parse_patterns, parse_replacement_map, parse_term, parse_trs, read_file,
    render_certificate, render_decision, Format,
};
use crate::loops::{validate_loop, LoopCertificate};
use crate::rewrite::{builtin_patterns, PatternEncoding, Trs};
use crate::solver::SolverConfig;

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "loopcert", version, about = "Check rewrite loops against evaluation strategies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether a loop is a loop under a strategy.
    Check {
        /// Rewrite system in VAR/RULES syntax.
        #[arg(long)]
        trs: PathBuf,
        /// Certificate file, `-` for stdin. May hold a single certificate or
        /// an array of them (see --index).
        #[arg(long = "loop")]
        loop_file: PathBuf,
        /// A builtin name, or forbidden:<file>, context-sensitive:<file>,
        /// q-restricted:<file>.
        #[arg(long)]
        strategy: String,
        /// Largest exponent the solver tries.
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
        bound: u32,
        /// Levels of the unrolled loop replayed after a positive verdict.
        #[arg(long, default_value_t = 4)]
        unroll: usize,
        /// Which certificate of an array to check.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Search for loops by bounded breadth-first rewriting.
    Find {
        /// Rewrite system in VAR/RULES syntax.
        #[arg(long)]
        trs: PathBuf,
        /// Longest derivation explored.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,
        #[arg(long = "max-size", default_value_t = 200, value_parser = clap::value_parser!(u32).range(1..))]
        max_size: u32,
        /// Start term; by default every left-hand side is tried.
        #[arg(long)]
        start: Option<String>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
}

/// Exit status and the text for stdout and stderr.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn invalid(e: Error) -> Outcome {
    Outcome {
        code: EXIT_INVALID,
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        read_file(path)
    }
}

/// Resolves a strategy string; file arguments are read relative to the
/// working directory.
pub fn parse_strategy(s: &str, trs: &Trs) -> Result<StrategySpec> {
    if let Some(file) = s.strip_prefix("forbidden:") {
        let pats = parse_patterns(&read_file(Path::new(file))?, trs)?;
        return Ok(StrategySpec::ForbiddenSet(pats));
    }
    if let Some(file) = s.strip_prefix("context-sensitive:") {
        let map = parse_replacement_map(&read_file(Path::new(file))?)?;
        let pats = builtin_patterns(&PatternEncoding::ContextSensitive(map), trs)?;
        return Ok(StrategySpec::ForbiddenSet(pats));
    }
    if let Some(file) = s.strip_prefix("q-restricted:") {
        let q = parse_trs(&read_file(Path::new(file))?)?;
        let pats = builtin_patterns(&PatternEncoding::QRestricted(q.rules().to_vec()), trs)?;
        return Ok(StrategySpec::ForbiddenSet(pats));
    }
    StrategySpec::from_name(s)
}

/// Reads one certificate from a file holding a certificate or an array.
pub fn select_certificate(text: &str, index: usize, trs: &Trs) -> Result<LoopCertificate> {
    if !text.trim_start().starts_with('[') {
        return parse_certificate(text, trs);
    }
    let all: Vec<serde_json::Value> = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        col: e.column(),
        msg: e.to_string(),
    })?;
    let item = all
        .get(index)
        .ok_or_else(|| Error::Io(format!("no certificate at index {index} ({} in file)", all.len())))?;
    parse_certificate(&item.to_string(), trs)
}

#[allow(clippy::too_many_arguments)]
fn check(
    trs: &Path,
    loop_file: &Path,
    strategy: &str,
    bound: usize,
    unroll: usize,
    index: usize,
    format: OutputFormat,
) -> Result<Outcome> {
    let trs = parse_trs(&read_file(trs)?)?;
    let cert = select_certificate(&read_input(loop_file)?, index, &trs)?;
    let lp = validate_loop(&trs, &cert)?;
    let spec = parse_strategy(strategy, &trs)?;
    let config = SolverConfig {
        bound,
        ..SolverConfig::default()
    };
    let mut decision = decide_loop(&trs, &lp, &spec, &config)?;
    decision.strategy = strategy.to_string();
    let mut stderr = String::new();
    if let Verdict::IsStrategyLoop = decision.verdict {
        if let Some(v) = check_levels(&trs, &lp, &spec, unroll)? {
            // cannot happen for a correct decision procedure
            stderr = format!(
                "warning: level {} step {} violates {} although the verdict is positive\n",
                v.level, v.step, v.check
            );
            decision.notes.push(stderr.trim_end().to_string());
        }
    }
    let code = match decision.verdict {
        Verdict::IsStrategyLoop => EXIT_YES,
        Verdict::NotStrategyLoop(_) => EXIT_NO,
        Verdict::Unknown(_) => EXIT_UNKNOWN,
    };
    let fmt = match format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    Ok(Outcome {
        code,
        stdout: render_decision(&decision, fmt),
        stderr,
    })
}

fn find(trs: &Path, depth: usize, max_size: usize, start: Option<&str>, format: OutputFormat) -> Result<Outcome> {
    let trs = parse_trs(&read_file(trs)?)?;
    let start = start.map(|s| parse_term(s, &trs)).transpose()?;
    let config = FinderConfig {
        depth,
        max_size,
        start,
        ..FinderConfig::default()
    };
    let loops = find_loops(&trs, &config);
    let stdout = match format {
        OutputFormat::Json => {
            let items: Vec<serde_json::Value> = loops
                .iter()
                .map(|c| serde_json::from_str(&render_certificate(c)).expect("valid json"))
                .collect();
            let mut s = serde_json::to_string_pretty(&items).expect("serializable");
            s.push('\n');
            s
        }
        OutputFormat::Text => loops
            .iter()
            .enumerate()
            .map(|(i, c)| {
                format!(
                    "loop {i}: {} steps from {}, context {}, substitution {}\n",
                    c.steps.len(),
                    c.start,
                    c.context,
                    c.subst
                )
            })
            .collect(),
    };
    Ok(Outcome {
        code: if loops.is_empty() { 1 } else { 0 },
        stdout,
        stderr: String::new(),
    })
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let res = match &cli.command {
        Command::Check {
            trs,
            loop_file,
            strategy,
            bound,
            unroll,
            index,
            format,
        } => check(trs, loop_file, strategy, *bound as usize, *unroll, *index, *format),
        Command::Find {
            trs,
            depth,
            max_size,
            start,
            format,
        } => find(trs, *depth as usize, *max_size as usize, start.as_deref(), *format),
    };
    res.unwrap_or_else(invalid)
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_cli(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}
