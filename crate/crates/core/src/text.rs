// Copyright 2026 The scbsynth Authors
// SPDX-License-Identifier: Apache-2.0

//! Text formats: the operator grammar, problem files and JSON reports.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := [coeff '*'] factor+ ['+' 'h.c.']
//! coeff  := float | '(' float ('+' | '-') float 'i' ')'
//! factor := ('I' | 'X' | 'Y' | 'Z' | 'n' | 'o' | 's' | 'sd') index
//! ```

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, Formalism, HamiltonianExpr, Symbol, Term};
use crate::circuit::{count, Circuit, CountReport};
use crate::fd::{BoundaryOverride, CoefficientTable, FdProblem, GridSpec};
use crate::fermion::FermionTerm;
use crate::hubo::HuboProblem;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// 1-based position of a byte offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Factor(Symbol, usize),
    Imag,
    Hc,
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(x) => write!(f, "number {x}"),
            Tok::Factor(s, q) => write!(f, "factor {s}{q}"),
            Tok::Imag => f.write_str("'i'"),
            Tok::Hc => f.write_str("'h.c.'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

fn position(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn error_at(src: &str, offset: usize, message: impl Into<String>) -> ParseError {
    let (line, col) = position(src, offset);
    ParseError {
        line,
        col,
        message: message.into(),
    }
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        while let Some(t) = lx.next_token()? {
            out.push(t);
        }
        Ok(out)
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn next_token(&mut self) -> Result<Option<(Tok, usize, usize)>, ParseError> {
        while let Some(ch) = self.peek() {
            if ch == '#' {
                // comment to end of line
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.pos += c.len_utf8();
                }
            } else if ch.is_whitespace() {
                self.pos += ch.len_utf8();
            } else {
                break;
            }
        }
        let start = self.pos;
        let Some(ch) = self.peek() else {
            return Ok(None);
        };
        let single = |t| Some((t, start, start + 1));
        let tok = match ch {
            '+' => {
                self.pos += 1;
                single(Tok::Plus)
            }
            '-' => {
                self.pos += 1;
                single(Tok::Minus)
            }
            '*' => {
                self.pos += 1;
                single(Tok::Star)
            }
            '(' => {
                self.pos += 1;
                single(Tok::LParen)
            }
            ')' => {
                self.pos += 1;
                single(Tok::RParen)
            }
            c if c.is_ascii_digit() || c == '.' => {
                let x = self.number()?;
                Some((Tok::Num(x), start, self.pos))
            }
            c if c.is_ascii_alphabetic() => Some(self.word()?),
            c => return Err(error_at(self.src, start, format!("unexpected character '{c}'"))),
        };
        Ok(tok)
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = self.pos;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
            i += 1;
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if j < bytes.len() && bytes[j].is_ascii_digit() {
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        self.pos = i;
        self.src[start..i]
            .parse::<f64>()
            .map_err(|_| error_at(self.src, start, format!("malformed number '{}'", &self.src[start..i])))
    }

    fn word(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        let start = self.pos;
        if self.src[start..].starts_with("h.c.") {
            self.pos += 4;
            return Ok((Tok::Hc, start, self.pos));
        }
        let bytes = self.src.as_bytes();
        let mut i = start;
        while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
            i += 1;
        }
        let letters = &self.src[start..i];
        let mut j = i;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        self.pos = j;
        if j == i {
            if letters == "i" {
                return Ok((Tok::Imag, start, j));
            }
            return Err(error_at(self.src, start, format!("factor '{letters}' needs a qubit index")));
        }
        let sym = Symbol::from_token(letters)
            .ok_or_else(|| error_at(self.src, start, format!("unknown factor '{letters}'")))?;
        let idx = self.src[i..j]
            .parse::<usize>()
            .map_err(|_| error_at(self.src, i, "qubit index too large"))?;
        Ok((Tok::Factor(sym, idx), start, j))
    }
}

/// Parsed expression with per-term source spans (before merging).
#[derive(Debug, Clone, PartialEq)]
pub struct SourceExpr {
    pub raw: String,
    pub expr: HamiltonianExpr,
    pub spans: Vec<Span>,
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize, usize)>,
    at: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.at).map_or(self.src.len(), |t| t.1)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(error_at(self.src, self.offset(), msg))
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.0.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.at += 1;
                Ok(())
            }
            Some(t) => self.fail(format!("expected {want}, found {t}")),
            None => self.fail(format!("expected {want}, found end of input")),
        }
    }

    fn signed_float(&mut self) -> Result<f64, ParseError> {
        let mut sign = 1.0;
        while let Some(Tok::Minus | Tok::Plus) = self.peek() {
            if self.bump() == Some(Tok::Minus) {
                sign = -sign;
            }
        }
        match self.bump() {
            Some(Tok::Num(x)) => Ok(sign * x),
            _ => {
                self.at -= 1;
                self.fail("expected a number")
            }
        }
    }

    fn coefficient(&mut self) -> Result<Option<Complex64>, ParseError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.at += 1;
                let re = self.signed_float()?;
                let sign = match self.bump() {
                    Some(Tok::Plus) => 1.0,
                    Some(Tok::Minus) => -1.0,
                    _ => {
                        self.at -= 1;
                        return self.fail("expected '+' or '-' in complex coefficient");
                    }
                };
                let im = self.signed_float()?;
                self.expect(Tok::Imag)?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Star)?;
                Ok(Some(Complex64::new(re, sign * im)))
            }
            Some(Tok::Num(_) | Tok::Minus) => {
                let x = self.signed_float()?;
                self.expect(Tok::Star)?;
                Ok(Some(Complex64::new(x, 0.0)))
            }
            _ => Ok(None),
        }
    }

    fn term(&mut self, sign: f64) -> Result<(Term, Span), ParseError> {
        let start = self.offset();
        let z = self.coefficient()?.unwrap_or(Complex64::new(1.0, 0.0)) * sign;
        let mut factors = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        while let Some(Tok::Factor(s, q)) = self.peek().cloned() {
            if !seen.insert(q) {
                return self.fail(format!("qubit {q} appears twice in one term"));
            }
            factors.push((q, s));
            self.at += 1;
        }
        if factors.is_empty() {
            return match self.peek() {
                Some(t) => self.fail(format!("expected a factor, found {t}")),
                None => self.fail("expected a factor, found end of input"),
            };
        }
        let mut herm = false;
        if self.peek() == Some(&Tok::Plus) && matches!(self.toks.get(self.at + 1), Some((Tok::Hc, _, _))) {
            self.at += 2;
            herm = true;
        }
        let end = self.toks.get(self.at.saturating_sub(1)).map_or(start, |t| t.2);
        let (line, col) = position(self.src, start);
        let span = Span { line, col, start, end };
        let term = Term::new(z, factors, herm).map_err(|e| error_at(self.src, start, e.to_string()))?;
        Ok((term, span))
    }
}

pub fn parse_source(text: &str) -> Result<SourceExpr, ParseError> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser { src: text, toks, at: 0 };
    let mut terms = Vec::new();
    let mut spans = Vec::new();
    let mut sign = 1.0;
    if p.peek() == Some(&Tok::Minus) && !matches!(p.toks.get(1), Some((Tok::Num(_), _, _))) {
        p.at += 1;
        sign = -1.0;
    }
    loop {
        let (t, s) = p.term(sign)?;
        terms.push(t);
        spans.push(s);
        match p.bump() {
            None => break,
            Some(Tok::Plus) => sign = 1.0,
            Some(Tok::Minus) => sign = -1.0,
            Some(t) => {
                p.at -= 1;
                return p.fail(format!("expected '+' or '-' between terms, found {t}"));
            }
        }
    }
    let n = terms.iter().filter_map(Term::max_index).max().map_or(1, |m| m + 1);
    let expr = HamiltonianExpr::new(n, terms)
        .map_err(|e| error_at(text, 0, e.to_string()))?
        .merged();
    Ok(SourceExpr {
        raw: text.to_string(),
        expr,
        spans,
    })
}

pub fn parse(text: &str) -> Result<HamiltonianExpr, ParseError> {
    Ok(parse_source(text)?.expr)
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn line_error(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col: 1,
        message: message.into(),
    }
}

fn num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T, ParseError> {
    tok.parse::<T>()
        .map_err(|_| line_error(line, format!("cannot read '{tok}' as a number")))
}

/// `vars N`, `form Z|n`, then `i,j,k : weight` lines.
pub fn parse_hubo(text: &str) -> Result<HuboProblem, ParseError> {
    let mut vars = None;
    let mut form = None;
    let mut problem: Option<HuboProblem> = None;
    for (ln, l) in lines(text) {
        if let Some(rest) = l.strip_prefix("vars") {
            vars = Some(num::<usize>(ln, rest.trim())?);
            continue;
        }
        if let Some(rest) = l.strip_prefix("form") {
            form = Some(match rest.trim() {
                "Z" => Formalism::ZForm,
                "n" => Formalism::NForm,
                f => return Err(line_error(ln, format!("unknown formalism '{f}', use Z or n"))),
            });
            continue;
        }
        let (Some(v), Some(f)) = (vars, form) else {
            return Err(line_error(ln, "weights must follow the 'vars' and 'form' header lines"));
        };
        let p = problem.get_or_insert_with(|| HuboProblem::new(v, f));
        let (subset, w) = l
            .split_once(':')
            .ok_or_else(|| line_error(ln, "expected 'i,j,... : weight'"))?;
        let idx = subset
            .split(',')
            .map(|s| num::<usize>(ln, s.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        p.add(&idx, num(ln, w.trim())?)
            .map_err(|e| line_error(ln, e.to_string()))?;
    }
    match (problem, vars, form) {
        (Some(p), _, _) => Ok(p),
        (None, Some(v), Some(f)) => Ok(HuboProblem::new(v, f)),
        _ => Err(line_error(1, "missing 'vars' or 'form' header")),
    }
}

/// `1B i j h`, `2B i j k l h` and `B alpha beta` lines.
pub fn parse_fermion(text: &str) -> Result<Vec<FermionTerm>, ParseError> {
    let mut out = Vec::new();
    for (ln, l) in lines(text) {
        let w: Vec<&str> = l.split_whitespace().collect();
        let t = match (w[0], w.len()) {
            ("1B", 4) => FermionTerm::OneBody {
                i: num(ln, w[1])?,
                j: num(ln, w[2])?,
                h: num(ln, w[3])?,
            },
            ("2B", 6) => FermionTerm::TwoBody {
                i: num(ln, w[1])?,
                j: num(ln, w[2])?,
                k: num(ln, w[3])?,
                l: num(ln, w[4])?,
                h: num(ln, w[5])?,
            },
            ("B", 3) => FermionTerm::Pair {
                alpha: num(ln, w[1])?,
                beta: num(ln, w[2])?,
            },
            _ => return Err(line_error(ln, format!("cannot read fermion line '{l}'"))),
        };
        out.push(t);
    }
    Ok(out)
}

/// Grid file: `dim d`, `q n`, optional `lines n` / `layers n` (qubits of each
/// selector), `a laplacian` or `a <diag> <neighbor>`, per-line tables
/// `diag ...`, `neighbor ...`, `inter_line ...`, `inter_layer ...`, and
/// `override set r c v` / `override periodic line v` / `override second line v`.
pub fn parse_grid(text: &str) -> Result<FdProblem, ParseError> {
    let mut dim = None;
    let mut q = None;
    let mut line_q = None;
    let mut layer_q = None;
    let mut uniform: Option<Option<(f64, f64)>> = None;
    let mut tables: Vec<(usize, String, Vec<f64>)> = Vec::new();
    let mut overrides = Vec::new();
    for (ln, l) in lines(text) {
        let w: Vec<&str> = l.split_whitespace().collect();
        let nums = |from: usize| w[from..].iter().map(|s| num::<f64>(ln, s)).collect::<Result<Vec<_>, _>>();
        match w[0] {
            "dim" if w.len() == 2 => dim = Some(num::<usize>(ln, w[1])?),
            "q" if w.len() == 2 => q = Some(num::<usize>(ln, w[1])?),
            "lines" if w.len() == 2 => line_q = Some(num::<usize>(ln, w[1])?),
            "layers" if w.len() == 2 => layer_q = Some(num::<usize>(ln, w[1])?),
            "a" if w.len() == 2 && w[1] == "laplacian" => uniform = Some(None),
            "a" if w.len() == 3 => {
                let v = nums(1)?;
                uniform = Some(Some((v[0], v[1])));
            }
            "diag" | "neighbor" | "inter_line" | "inter_layer" => tables.push((ln, w[0].to_string(), nums(1)?)),
            "override" if w.len() == 5 && w[1] == "set" => overrides.push(BoundaryOverride::ComponentSet {
                row: num(ln, w[2])?,
                col: num(ln, w[3])?,
                value: num(ln, w[4])?,
            }),
            "override" if w.len() == 4 && (w[1] == "periodic" || w[1] == "second") => {
                let line = num(ln, w[2])?;
                let value = num(ln, w[3])?;
                overrides.push(if w[1] == "periodic" {
                    BoundaryOverride::PeriodicWrap { line, value }
                } else {
                    BoundaryOverride::SecondNeighbor { line, value }
                });
            }
            _ => return Err(line_error(ln, format!("cannot read grid line '{l}'"))),
        }
    }
    let d = dim.ok_or_else(|| line_error(1, "missing 'dim' line"))?;
    let q = q.ok_or_else(|| line_error(1, "missing 'q' line"))?;
    let grid = match d {
        1 => GridSpec::line(q),
        2 => GridSpec::plane(q, line_q.unwrap_or(1)),
        3 => GridSpec::volume(q, line_q.unwrap_or(1), layer_q.unwrap_or(1)),
        _ => return Err(line_error(1, format!("unsupported dimension {d}"))),
    };
    let mut problem = match uniform {
        None | Some(None) => FdProblem::laplacian(grid).map_err(|e| line_error(1, e.to_string()))?,
        Some(Some((a, b))) => FdProblem::new(grid, CoefficientTable::uniform(&grid, a, b)),
    };
    for (ln, name, v) in tables {
        let slot = match name.as_str() {
            "diag" => &mut problem.coefficients.diagonal,
            "neighbor" => &mut problem.coefficients.neighbor,
            "inter_line" => &mut problem.coefficients.inter_line,
            _ => &mut problem.coefficients.inter_layer,
        };
        if v.len() != slot.len() {
            return Err(line_error(ln, format!("'{name}' needs {} values, got {}", slot.len(), v.len())));
        }
        *slot = v;
    }
    problem.overrides = overrides;
    Ok(problem)
}

/// Outcome of comparing a circuit with its exact evolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verification {
    pub distance: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Verification {
    pub fn new(distance: f64, tolerance: f64) -> Self {
        Verification {
            distance,
            tolerance,
            pass: distance < tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub counts: CountReport,
    pub depth: usize,
    pub rotations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
}

impl Report {
    pub fn of(circuit: &Circuit, verification: Option<Verification>) -> Self {
        let counts = count(circuit);
        Report {
            depth: counts.depth,
            rotations: counts.rotation_count,
            counts,
            verification,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Wraps algebra errors that surface while building expressions from text.
impl From<AlgebraError> for ParseError {
    fn from(e: AlgebraError) -> Self {
        line_error(1, e.to_string())
    }
}
