//! Concrete syntax for terms, rewrite systems, forbidden patterns and
//! replacement maps.
//!
//! ```text
//! term    := ident | ident '(' term (',' term)* ')'
//! trs     := ('(' 'VAR' ident* ')')? '(' 'RULES' (term '->' term)* ')'
//! pattern := term '@' (eps | int ('.' int)*) ':' ('h' | 'a' | 'b')
//! ```
//!
//! Identifiers are runs of `[A-Za-z0-9_'+*.-]`; the two-character sequence
//! `->` always ends an identifier. `[]` is the hole and is only accepted where
//! a context is expected.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rewrite::{ForbiddenPattern, PatternKind, ReplacementMap, Rule, Trs};
use crate::term::{Context, Position, Symbol, Term};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Arrow,
    Hole,
    Ident(String),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "_'+*.-".contains(c)
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

fn tokenize(text: &str, line0: usize, col0: usize) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (line0, col0);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l, k) = (line, col);
        let mut push = |tok| out.push(Spanned { tok, line: l, col: k });
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '(' => push(Tok::LParen),
            ')' => push(Tok::RParen),
            ',' => push(Tok::Comma),
            '[' if chars.get(i + 1) == Some(&']') => {
                push(Tok::Hole);
                i += 2;
                col += 2;
                continue;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                push(Tok::Arrow);
                i += 2;
                col += 2;
                continue;
            }
            c if is_ident_char(c) => {
                let start = i;
                while i < chars.len()
                    && is_ident_char(chars[i])
                    && !(chars[i] == '-' && chars.get(i + 1) == Some(&'>'))
                {
                    i += 1;
                }
                let ident: String = chars[start..i].iter().collect();
                col += i - start;
                push(Tok::Ident(ident));
                continue;
            }
            other => return Err(syntax(line, col, format!("unexpected character {other:?}"))),
        }
        i += 1;
        col += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    at: usize,
    vars: &'a dyn Fn(&str) -> bool,
    allow_hole: bool,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn new(text: &str, vars: &'a dyn Fn(&str) -> bool, allow_hole: bool) -> Result<Parser<'a>> {
        Parser::at_offset(text, 1, 1, vars, allow_hole)
    }

    fn at_offset(
        text: &str,
        line: usize,
        col: usize,
        vars: &'a dyn Fn(&str) -> bool,
        allow_hole: bool,
    ) -> Result<Parser<'a>> {
        let toks = tokenize(text, line, col)?;
        let lines: Vec<&str> = text.split('\n').collect();
        let end = (
            line + lines.len() - 1,
            if lines.len() == 1 { col } else { 1 } + lines.last().map_or(0, |l| l.chars().count()),
        );
        Ok(Parser {
            toks,
            at: 0,
            vars,
            allow_hole,
            end,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.at)
            .map_or(self.end, |s| (s.line, s.col))
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        syntax(line, col, msg)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|s| s.tok.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => Err(self.error("expected identifier")),
        }
    }

    fn term(&mut self) -> Result<Term> {
        if self.peek() == Some(&Tok::Hole) {
            if !self.allow_hole {
                return Err(self.error("the hole [] is only allowed in contexts"));
            }
            self.at += 1;
            return Ok(Term::hole());
        }
        let name = self.ident()?;
        if self.peek() != Some(&Tok::LParen) {
            return Ok(if (self.vars)(&name) {
                Term::var(&name)
            } else {
                Term::constant(&name)
            });
        }
        if (self.vars)(&name) {
            return Err(self.error(format!("variable {name} cannot take arguments")));
        }
        self.at += 1;
        let mut args = vec![self.term()?];
        loop {
            match self.next() {
                Some(Tok::Comma) => args.push(self.term()?),
                Some(Tok::RParen) => break,
                _ => {
                    self.at -= 1;
                    return Err(self.error("expected ',' or ')'"));
                }
            }
        }
        Ok(Term::app(&name, args))
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("unexpected trailing input")),
        }
    }
}

fn parse_in(text: &str, vars: &dyn Fn(&str) -> bool, allow_hole: bool) -> Result<Term> {
    let mut p = Parser::new(text, vars, allow_hole)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a term, treating exactly the listed names as variables. The hole is
/// accepted.
pub fn parse_term_with_vars(text: &str, vars: &[&str]) -> Result<Term> {
    parse_in(text, &|s| vars.contains(&s), true)
}

/// Parses a term over the variables and signature of `trs`.
pub fn parse_term(text: &str, trs: &Trs) -> Result<Term> {
    let t = parse_in(text, &|s| trs.is_variable(s), false)?;
    trs.check_term(&t)?;
    Ok(t)
}

pub fn parse_context(text: &str, trs: &Trs) -> Result<Context> {
    let t = parse_in(text, &|s| trs.is_variable(s), true)?;
    trs.check_term(&t)?;
    Context::new(t)
}

pub fn parse_trs(text: &str) -> Result<Trs> {
    let mut vars: BTreeSet<Symbol> = BTreeSet::new();
    // the variable set grows while parsing, so scan sections by hand
    let toks = tokenize(text, 1, 1)?;
    let mut rules = Vec::new();
    let mut seen_rules = false;
    let mut at = 0;
    let pos_of = |at: usize| -> (usize, usize) {
        toks.get(at)
            .map_or((text.lines().count().max(1), 1), |s| (s.line, s.col))
    };
    while at < toks.len() {
        let (l, c) = pos_of(at);
        if toks[at].tok != Tok::LParen {
            return Err(syntax(l, c, "expected '('"));
        }
        at += 1;
        let section = match toks.get(at).map(|s| &s.tok) {
            Some(Tok::Ident(s)) => s.clone(),
            _ => {
                let (l, c) = pos_of(at);
                return Err(syntax(l, c, "expected section name"));
            }
        };
        at += 1;
        match section.as_str() {
            "VAR" => {
                if seen_rules {
                    return Err(syntax(l, c, "VAR must precede RULES"));
                }
                loop {
                    match toks.get(at).map(|s| &s.tok) {
                        Some(Tok::Ident(x)) => {
                            vars.insert(Arc::from(x.as_str()));
                            at += 1;
                        }
                        Some(Tok::RParen) => {
                            at += 1;
                            break;
                        }
                        _ => {
                            let (l, c) = pos_of(at);
                            return Err(syntax(l, c, "expected variable name or ')'"));
                        }
                    }
                }
            }
            "RULES" => {
                seen_rules = true;
                let is_var = |s: &str| vars.contains(s);
                let mut p = Parser {
                    toks: toks[at..].to_vec(),
                    at: 0,
                    vars: &is_var,
                    allow_hole: false,
                    end: pos_of(toks.len()),
                };
                while p.peek() != Some(&Tok::RParen) {
                    if p.peek().is_none() {
                        return Err(p.error("unterminated RULES section"));
                    }
                    let lhs = p.term()?;
                    p.expect(Tok::Arrow, "'->'")?;
                    let rhs = p.term()?;
                    rules.push(Rule::new(lhs, rhs)?);
                }
                at += p.at + 1;
            }
            "COMMENT" => {
                let mut depth = 1;
                while depth > 0 {
                    match toks.get(at).map(|s| &s.tok) {
                        Some(Tok::LParen) => depth += 1,
                        Some(Tok::RParen) => depth -= 1,
                        Some(_) => {}
                        None => {
                            let (l, c) = pos_of(at);
                            return Err(syntax(l, c, "unterminated COMMENT"));
                        }
                    }
                    at += 1;
                }
            }
            other => return Err(syntax(l, c, format!("unknown section {other}"))),
        }
    }
    Trs::new(vars, rules)
}

pub fn render_trs(trs: &Trs) -> String {
    let vars: Vec<&str> = trs.variables().iter().map(|s| &**s).collect();
    let mut out = format!("(VAR {})\n(RULES\n", vars.join(" "));
    for rule in trs.rules() {
        out.push_str(&format!("  {rule}\n"));
    }
    out.push_str(")\n");
    out
}

fn parse_position(text: &str, line: usize, col: usize) -> Result<Position> {
    let text = text.trim();
    if text == "eps" {
        return Ok(Position::root());
    }
    let indices = text
        .split('.')
        .map(|s| s.parse::<usize>().ok().filter(|&i| i >= 1))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| syntax(line, col, format!("bad position {text:?}")))?;
    Ok(Position::new(indices).expect("checked"))
}

fn var_header(line: &str) -> Option<Vec<&str>> {
    let inner = line.trim().strip_prefix('(')?.strip_suffix(')')?.trim();
    let rest = inner.strip_prefix("VAR")?;
    Some(rest.split_whitespace().collect())
}

/// One pattern per line; blank lines and `#` comments are skipped. A
/// `(VAR …)` line adds pattern variables beyond those of `trs`.
pub fn parse_patterns(text: &str, trs: &Trs) -> Result<Vec<ForbiddenPattern>> {
    let mut extra: BTreeSet<String> = BTreeSet::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(names) = var_header(trimmed) {
            extra.extend(names.into_iter().map(String::from));
            continue;
        }
        let at = line
            .find('@')
            .ok_or_else(|| syntax(line_no, 1, "expected '@'"))?;
        let colon = line[at..]
            .find(':')
            .map(|k| k + at)
            .ok_or_else(|| syntax(line_no, at + 1, "expected ':'"))?;
        let is_var = |s: &str| trs.is_variable(s) || extra.contains(s);
        let mut p = Parser::at_offset(&line[..at], line_no, 1, &is_var, false)?;
        let lhs = p.term()?;
        p.finish()?;
        trs.check_term(&lhs)?;
        let pos = parse_position(&line[at + 1..colon], line_no, at + 2)?;
        let kind = match line[colon + 1..].trim() {
            "h" => PatternKind::Here,
            "a" => PatternKind::Above,
            "b" => PatternKind::Below,
            other => {
                return Err(syntax(
                    line_no,
                    colon + 2,
                    format!("expected h, a or b, found {other:?}"),
                ))
            }
        };
        out.push(ForbiddenPattern::new(lhs, pos, kind)?);
    }
    Ok(out)
}

pub fn render_patterns(patterns: &[ForbiddenPattern]) -> String {
    patterns.iter().map(|p| format!("{p}\n")).collect()
}

/// Lines `symbol: 1,3`; an empty list forbids every argument.
pub fn parse_replacement_map(text: &str) -> Result<ReplacementMap> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (sym, rest) = line
            .rsplit_once(':')
            .ok_or_else(|| syntax(i + 1, 1, "expected 'symbol: indices'"))?;
        let sym = sym.trim();
        if sym.is_empty() || !sym.chars().all(is_ident_char) {
            return Err(syntax(i + 1, 1, format!("bad symbol {sym:?}")));
        }
        let mut allowed = BTreeSet::new();
        for part in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let k: usize = part
                .parse()
                .map_err(|_| syntax(i + 1, sym.len() + 2, format!("bad index {part:?}")))?;
            allowed.insert(k);
        }
        map.insert(Arc::from(sym), allowed);
    }
    Ok(map)
}
