//! Closed-form group laws on `R^n` and numerical checks built on them.
//!
//! A law is `n` expressions in the variables `a1..an` (left argument) and
//! `b1..bn` (right argument); the origin is the identity. Expressions use
//! `+`, `-`, `*`, `exp(...)`, decimal literals, parentheses and `let`-bound
//! names.
//!
//! ```text
//! grouplaw
//! dim 2
//! law:
//! a1 + exp(a2)*b1
//! a2 + b2
//! ```

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{ratio, BilinearMap, Rational};

/// Step schedule for central differences, halved twice.
pub const STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];
pub const NEWTON_MAX_STEPS: usize = 50;
pub const NEWTON_THRESHOLD: f64 = 1e-12;
/// Floor for the distance between an extracted entry and its rational value.
pub const RATIONALIZE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupLawError {
    #[error("syntax error at line {line}, column {col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("unknown variable `{name}` at line {line}, column {col}")]
    UnknownVariable { name: String, line: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Newton iteration diverged at {point:?}")]
    NewtonDivergence { point: Vec<f64> },
    #[error("entry ({}, {}, {}) = {value} has no rational within tolerance", .index.0 + 1, .index.1 + 1, .index.2 + 1)]
    NoRationalWithinBound { index: (usize, usize, usize), value: f64 },
    #[error("entry ({}, {}, {}) = {value} is within tolerance of several rationals", .index.0 + 1, .index.1 + 1, .index.2 + 1)]
    AmbiguousRational { index: (usize, usize, usize), value: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Zero-based component of the left argument.
    A(usize),
    /// Zero-based component of the right argument.
    B(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
}

impl Expr {
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::A(i) => a[*i],
            Expr::B(i) => b[*i],
            Expr::Neg(e) => -e.eval(a, b),
            Expr::Add(l, r) => l.eval(a, b) + r.eval(a, b),
            Expr::Sub(l, r) => l.eval(a, b) - r.eval(a, b),
            Expr::Mul(l, r) => l.eval(a, b) * r.eval(a, b),
            Expr::Exp(e) => e.eval(a, b).exp(),
        }
    }

    /// Exchanges the roles of the two arguments.
    pub fn swapped(&self) -> Expr {
        let bx = |e: &Expr| Box::new(e.swapped());
        match self {
            Expr::Num(v) => Expr::Num(*v),
            Expr::A(i) => Expr::B(*i),
            Expr::B(i) => Expr::A(*i),
            Expr::Neg(e) => Expr::Neg(bx(e)),
            Expr::Add(l, r) => Expr::Add(bx(l), bx(r)),
            Expr::Sub(l, r) => Expr::Sub(bx(l), bx(r)),
            Expr::Mul(l, r) => Expr::Mul(bx(l), bx(r)),
            Expr::Exp(e) => Expr::Exp(bx(e)),
        }
    }

    fn max_index(&self) -> Option<usize> {
        match self {
            Expr::Num(_) => None,
            Expr::A(i) | Expr::B(i) => Some(*i),
            Expr::Neg(e) | Expr::Exp(e) => e.max_index(),
            Expr::Add(l, r) | Expr::Sub(l, r) | Expr::Mul(l, r) => l.max_index().max(r.max_index()),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::A(i) => write!(f, "a{}", i + 1),
            Expr::B(i) => write!(f, "b{}", i + 1),
            Expr::Neg(e) => write!(f, "-({e})"),
            Expr::Add(l, r) => write!(f, "({l} + {r})"),
            Expr::Sub(l, r) => write!(f, "({l} - {r})"),
            Expr::Mul(l, r) => write!(f, "{l}*{r}"),
            Expr::Exp(e) => write!(f, "exp({e})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {v}"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of line".into(),
    }
}

fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, GroupLawError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '+' => out.push((Tok::Plus, col)),
            '-' | '−' => out.push((Tok::Minus, col)),
            '*' | '·' => out.push((Tok::Star, col)),
            '(' => out.push((Tok::LParen, col)),
            ')' => out.push((Tok::RParen, col)),
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let lit: String = chars[start..i].iter().collect();
                let v = lit.parse::<f64>().map_err(|_| GroupLawError::Syntax {
                    line,
                    col,
                    expected: "a decimal literal".into(),
                })?;
                out.push((Tok::Num(v), col));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), col));
                continue;
            }
            _ => {
                return Err(GroupLawError::Syntax {
                    line,
                    col,
                    expected: "an operator, number, name or parenthesis".into(),
                })
            }
        }
        i += 1;
    }
    out.push((Tok::End, col0 + chars.len()));
    Ok(out)
}

/// Parses `a<k>` / `b<k>` into a side flag and a zero-based index.
fn argument_variable(name: &str) -> Option<(bool, usize)> {
    let (side, digits) = name.split_at(1);
    let left = match side {
        "a" => true,
        "b" => false,
        _ => return None,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse::<usize>().ok().map(|k| (left, k - 1))
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    dim: usize,
    lets: &'a HashMap<String, Expr>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, GroupLawError> {
        Err(GroupLawError::Syntax {
            line: self.line,
            col: self.col(),
            expected: format!("{expected}, found {}", describe(self.peek())),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), GroupLawError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&describe(&tok))
        }
    }

    fn expr(&mut self) -> Result<Expr, GroupLawError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, GroupLawError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, GroupLawError> {
        let col = self.col();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Tok::Minus => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) if name == "exp" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Exp(Box::new(e)))
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some(e) = self.lets.get(&name) {
                    return Ok(e.clone());
                }
                match argument_variable(&name) {
                    Some((left, k)) if k < self.dim => Ok(if left { Expr::A(k) } else { Expr::B(k) }),
                    _ => Err(GroupLawError::UnknownVariable {
                        name,
                        line: self.line,
                        col,
                    }),
                }
            }
            _ => self.fail("a number, name, `exp`, `-` or `(`"),
        }
    }
}

/// Parses one expression. `line` and `col0` locate `text` in its source
/// for error messages (both one-based).
pub fn parse_expr(
    text: &str,
    dim: usize,
    lets: &HashMap<String, Expr>,
    line: usize,
    col0: usize,
) -> Result<Expr, GroupLawError> {
    let toks = tokenize(text, line, col0)?;
    let mut p = Parser {
        toks,
        pos: 0,
        line,
        dim,
        lets,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("an operator or end of line");
    }
    Ok(e)
}

fn valid_let_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_alphanumeric() || c == '_')
        && name != "exp"
        && name != "let"
        && argument_variable(name).is_none()
}

/// A group law on `R^dim` with the origin as identity.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupLaw {
    dim: usize,
    components: Vec<Expr>,
}

impl GroupLaw {
    pub fn new(dim: usize, components: Vec<Expr>) -> Result<Self, GroupLawError> {
        if components.len() != dim {
            return Err(GroupLawError::DimensionMismatch {
                expected: dim,
                found: components.len(),
            });
        }
        if let Some(k) = components.iter().filter_map(Expr::max_index).max() {
            if k >= dim {
                return Err(GroupLawError::DimensionMismatch {
                    expected: dim,
                    found: k + 1,
                });
            }
        }
        Ok(GroupLaw { dim, components })
    }

    /// Parses component expressions, one per entry, without `let` bindings.
    pub fn parse(dim: usize, components: &[&str]) -> Result<Self, GroupLawError> {
        let lines: Vec<(usize, &str)> = components.iter().enumerate().map(|(i, s)| (i + 1, *s)).collect();
        parse_block(&lines, dim)
    }

    pub fn addition(dim: usize) -> Self {
        let components = (0..dim)
            .map(|i| Expr::Add(Box::new(Expr::A(i)), Box::new(Expr::B(i))))
            .collect();
        GroupLaw { dim, components }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn eval(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        self.components.iter().map(|e| e.eval(a, b)).collect()
    }

    /// The law `(a, b) -> b a`.
    pub fn opposite(&self) -> Self {
        GroupLaw {
            dim: self.dim,
            components: self.components.iter().map(Expr::swapped).collect(),
        }
    }

    /// Solves `x y = 0` for `y` by Newton iteration started at the origin.
    pub fn inverse(&self, x: &[f64]) -> Result<Vec<f64>, GroupLawError> {
        newton(|y| self.eval(x, y), self.dim).ok_or_else(|| GroupLawError::NewtonDivergence { point: x.to_vec() })
    }
}

/// Parses `let` lines followed by exactly `dim` expression lines.
/// Each entry carries its one-based source line.
pub fn parse_block(lines: &[(usize, &str)], dim: usize) -> Result<GroupLaw, GroupLawError> {
    let mut lets: HashMap<String, Expr> = HashMap::new();
    let mut components = Vec::new();
    for &(line, raw) in lines {
        let indent = raw.len() - raw.trim_start().len();
        let text = raw.trim();
        if let Some(rest) = text.strip_prefix("let ") {
            if !components.is_empty() {
                return Err(GroupLawError::Syntax {
                    line,
                    col: indent + 1,
                    expected: "an expression (let bindings come first)".into(),
                });
            }
            let Some((name, body)) = rest.split_once('=') else {
                return Err(GroupLawError::Syntax {
                    line,
                    col: indent + text.len() + 1,
                    expected: "`=`".into(),
                });
            };
            let name = name.trim();
            if !valid_let_name(name) {
                return Err(GroupLawError::Syntax {
                    line,
                    col: indent + 5,
                    expected: "a fresh name".into(),
                });
            }
            let body_col = indent + text.len() - body.len() + 1;
            let e = parse_expr(body, dim, &lets, line, body_col)?;
            lets.insert(name.to_string(), e);
        } else {
            components.push(parse_expr(text, dim, &lets, line, indent + 1)?);
        }
    }
    GroupLaw::new(dim, components)
}

/// A pair of laws on the same space, the additive `dot` and the
/// multiplicative `circ`.
#[derive(Clone, Debug, PartialEq)]
pub struct BraceLaw {
    pub dot: GroupLaw,
    pub circ: GroupLaw,
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(head, _)| head)
}

fn header_dim<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    keyword: &str,
) -> Result<usize, GroupLawError> {
    let (line, text) = lines.next().ok_or(GroupLawError::Syntax {
        line: 1,
        col: 1,
        expected: format!("`{keyword}`"),
    })?;
    if text.trim() != keyword {
        return Err(GroupLawError::Syntax {
            line,
            col: 1,
            expected: format!("`{keyword}`"),
        });
    }
    let (line, text) = lines.next().ok_or(GroupLawError::Syntax {
        line: line + 1,
        col: 1,
        expected: "`dim N`".into(),
    })?;
    text.trim()
        .strip_prefix("dim ")
        .and_then(|d| d.trim().parse::<usize>().ok())
        .filter(|&d| d > 0)
        .ok_or(GroupLawError::Syntax {
            line,
            col: 1,
            expected: "`dim N` with N a positive integer".into(),
        })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.trim().is_empty())
}

/// Parses a `grouplaw` file.
pub fn parse_grouplaw_file(text: &str) -> Result<GroupLaw, GroupLawError> {
    let mut lines = content_lines(text);
    let dim = header_dim(&mut lines, "grouplaw")?;
    let rest: Vec<(usize, &str)> = lines.collect();
    let law_at = rest.iter().position(|(_, l)| l.trim() == "law:").ok_or(GroupLawError::Syntax {
        line: rest.last().map_or(2, |(l, _)| l + 1),
        col: 1,
        expected: "`law:`".into(),
    })?;
    // `let` lines may precede `law:`.
    let mut block: Vec<(usize, &str)> = rest[..law_at].to_vec();
    block.extend_from_slice(&rest[law_at + 1..]);
    parse_block(&block, dim)
}

/// Parses a `bracelaw` file with `dot:` and `circ:` blocks.
pub fn parse_bracelaw_file(text: &str) -> Result<BraceLaw, GroupLawError> {
    let mut lines = content_lines(text);
    let dim = header_dim(&mut lines, "bracelaw")?;
    let rest: Vec<(usize, &str)> = lines.collect();
    let find = |label: &str| rest.iter().position(|(_, l)| l.trim() == label);
    let end_line = rest.last().map_or(3, |(l, _)| l + 1);
    let dot_at = find("dot:").ok_or(GroupLawError::Syntax {
        line: rest.first().map_or(end_line, |(l, _)| *l),
        col: 1,
        expected: "`dot:`".into(),
    })?;
    let circ_at = find("circ:").ok_or(GroupLawError::Syntax {
        line: end_line,
        col: 1,
        expected: "`circ:`".into(),
    })?;
    if dot_at != 0 || circ_at < dot_at {
        return Err(GroupLawError::Syntax {
            line: rest[0].0,
            col: 1,
            expected: "`dot:` block followed by `circ:` block".into(),
        });
    }
    let dot = parse_block(&rest[1..circ_at], dim)?;
    let circ = parse_block(&rest[circ_at + 1..], dim)?;
    Ok(BraceLaw { dot, circ })
}

/// Newton iteration for `f(y) = 0` from the origin.
fn newton(f: impl Fn(&[f64]) -> Vec<f64>, n: usize) -> Option<Vec<f64>> {
    let mut y = vec![0.0; n];
    let mut residual = max_abs(&f(&y));
    let mut polish = 0;
    for _ in 0..NEWTON_MAX_STEPS {
        if residual == 0.0 || polish == 3 {
            break;
        }
        let fy = f(&y);
        let h = 1e-6;
        let mut jac = vec![vec![0.0; n]; n];
        for j in 0..n {
            let mut yp = y.clone();
            let mut ym = y.clone();
            yp[j] += h;
            ym[j] -= h;
            let (fp, fm) = (f(&yp), f(&ym));
            for i in 0..n {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let delta = solve_dense(jac, fy.iter().map(|v| -v).collect())?;
        let next: Vec<f64> = y.iter().zip(&delta).map(|(a, d)| a + d).collect();
        if !next.iter().all(|v| v.is_finite()) {
            return None;
        }
        let next_residual = max_abs(&f(&next));
        if residual < NEWTON_THRESHOLD {
            // Converged; keep refining only while it helps.
            if next_residual >= residual {
                break;
            }
            polish += 1;
        }
        y = next;
        residual = next_residual;
    }
    (residual < NEWTON_THRESHOLD).then_some(y)
}

/// Gaussian elimination with partial pivoting.
fn solve_dense(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in col + 1..n {
            let factor = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= factor * m[col][c];
            }
            rhs[r] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (rhs[r] - s) / m[r][r];
    }
    Some(x)
}

/// Determinant by elimination.
pub fn determinant(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let Some(pivot) = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())) else {
            return 0.0;
        };
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let factor = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= factor * m[col][c];
            }
        }
    }
    det
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Two levels of Richardson extrapolation over [`STEPS`] for a difference
/// quotient whose error expands in even powers of the step. Returns the
/// estimate and the size of the last correction.
fn richardson(quotient: impl Fn(f64) -> Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    let d: Vec<Vec<f64>> = STEPS.iter().map(|&h| quotient(h)).collect();
    let n = d[0].len();
    let mut value = Vec::with_capacity(n);
    let mut error = Vec::with_capacity(n);
    for k in 0..n {
        let r1a = (4.0 * d[1][k] - d[0][k]) / 3.0;
        let r1b = (4.0 * d[2][k] - d[1][k]) / 3.0;
        let r2 = (16.0 * r1b - r1a) / 15.0;
        value.push(r2);
        error.push((r2 - r1b).abs());
    }
    (value, error)
}

/// Mixed second derivative `d²/ds dt f(s, t)` at the origin.
fn mixed_derivative(f: impl Fn(f64, f64) -> Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    richardson(|h| {
        let (pp, pm, mp, mm) = (f(h, h), f(h, -h), f(-h, h), f(-h, -h));
        (0..pp.len())
            .map(|k| (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * h * h))
            .collect()
    })
}

fn sample_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupCheckReport {
    pub samples: usize,
    pub tol: f64,
    pub identity_residual: f64,
    pub associativity_residual: f64,
    pub inverse_residual: f64,
}

impl GroupCheckReport {
    pub fn max_residual(&self) -> f64 {
        self.identity_residual
            .max(self.associativity_residual)
            .max(self.inverse_residual)
    }

    pub fn passed(&self) -> bool {
        self.max_residual() < self.tol
    }
}

/// Identity, associativity and two-sided inverses at seeded samples in
/// `[-1, 1]^n`.
pub fn check_group_numeric(law: &GroupLaw, samples: usize, tol: f64, seed: u64) -> Result<GroupCheckReport, GroupLawError> {
    let n = law.dim();
    let zero = vec![0.0; n];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = GroupCheckReport {
        samples,
        tol,
        identity_residual: 0.0,
        associativity_residual: 0.0,
        inverse_residual: 0.0,
    };
    for _ in 0..samples {
        let x = sample_point(&mut rng, n);
        let y = sample_point(&mut rng, n);
        let z = sample_point(&mut rng, n);
        let id = max_diff(&law.eval(&zero, &x), &x).max(max_diff(&law.eval(&x, &zero), &x));
        report.identity_residual = report.identity_residual.max(id);
        let lhs = law.eval(&law.eval(&x, &y), &z);
        let rhs = law.eval(&x, &law.eval(&y, &z));
        report.associativity_residual = report.associativity_residual.max(max_diff(&lhs, &rhs));
        let inv = law.inverse(&x)?;
        let res = max_abs(&law.eval(&x, &inv)).max(max_abs(&law.eval(&inv, &x)));
        report.inverse_residual = report.inverse_residual.max(res);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BraceCheckReport {
    pub dot: GroupCheckReport,
    pub circ: GroupCheckReport,
    pub samples: usize,
    pub tol: f64,
    /// Largest deviation of `a∘(b·c)` from `(a∘b)·a⁻¹·(a∘c)`.
    pub brace_residual: f64,
}

impl BraceCheckReport {
    pub fn passed(&self) -> bool {
        self.dot.passed() && self.circ.passed() && self.brace_residual < self.tol
    }
}

pub fn check_brace_numeric(
    dot: &GroupLaw,
    circ: &GroupLaw,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<BraceCheckReport, GroupLawError> {
    if dot.dim() != circ.dim() {
        return Err(GroupLawError::DimensionMismatch {
            expected: dot.dim(),
            found: circ.dim(),
        });
    }
    let dot_report = check_group_numeric(dot, samples, tol, seed)?;
    let circ_report = check_group_numeric(circ, samples, tol, seed)?;
    let n = dot.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut residual: f64 = 0.0;
    for _ in 0..samples {
        let a = sample_point(&mut rng, n);
        let b = sample_point(&mut rng, n);
        let c = sample_point(&mut rng, n);
        let lhs = circ.eval(&a, &dot.eval(&b, &c));
        let a_inv = dot.inverse(&a)?;
        let rhs = dot.eval(&dot.eval(&circ.eval(&a, &b), &a_inv), &circ.eval(&a, &c));
        residual = residual.max(max_diff(&lhs, &rhs));
    }
    Ok(BraceCheckReport {
        dot: dot_report,
        circ: circ_report,
        samples,
        tol,
        brace_residual: residual,
    })
}

/// A square matrix of floats with an error estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericMatrix {
    dim: usize,
    entries: Vec<f64>,
    error_bound: f64,
}

impl NumericMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn error_bound(&self) -> f64 {
        self.error_bound
    }

    pub fn max_deviation(&self, expected: &[Vec<f64>]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in expected.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                worst = worst.max((self.get(i, j) - v).abs());
            }
        }
        worst
    }
}

/// Jacobian at the origin of `b -> a⁻¹·(a∘b)`; column `j` is the image of `e_j`.
pub fn lambda_numeric(dot: &GroupLaw, circ: &GroupLaw, a: &[f64]) -> Result<NumericMatrix, GroupLawError> {
    let n = dot.dim();
    if circ.dim() != n || a.len() != n {
        return Err(GroupLawError::DimensionMismatch {
            expected: n,
            found: if circ.dim() != n { circ.dim() } else { a.len() },
        });
    }
    let a_inv = dot.inverse(a)?;
    let g = |b: &[f64]| dot.eval(&a_inv, &circ.eval(a, b));
    let mut entries = vec![0.0; n * n];
    let mut error_bound: f64 = 0.0;
    for j in 0..n {
        let (col, err) = richardson(|h| {
            let mut bp = vec![0.0; n];
            let mut bm = vec![0.0; n];
            bp[j] = h;
            bm[j] = -h;
            let (gp, gm) = (g(&bp), g(&bm));
            (0..n).map(|i| (gp[i] - gm[i]) / (2.0 * h)).collect()
        });
        for i in 0..n {
            entries[i * n + j] = col[i];
        }
        error_bound = error_bound.max(max_abs(&err));
    }
    Ok(NumericMatrix {
        dim: n,
        entries,
        error_bound,
    })
}

/// Floating structure constants `t[i][j][k]` with per-entry error estimates.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericTensor {
    dim: usize,
    values: Vec<f64>,
    errors: Vec<f64>,
}

impl NumericTensor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[self.index(i, j, k)]
    }

    pub fn error(&self, i: usize, j: usize, k: usize) -> f64 {
        self.errors[self.index(i, j, k)]
    }

    pub fn error_bound(&self) -> f64 {
        max_abs(&self.errors)
    }

    /// Largest entrywise distance to an exact tensor.
    pub fn max_deviation(&self, exact: &BilinearMap) -> f64 {
        let mut worst: f64 = 0.0;
        for (v, e) in self.values.iter().zip(exact.entries()) {
            worst = worst.max((v - rational_to_f64(e)).abs());
        }
        worst
    }

    /// Replaces every entry by the unique rational with denominator at most
    /// `max_den` within `max(tol, entry error)`.
    pub fn rationalize(&self, max_den: u64, tol: f64) -> Result<BilinearMap, GroupLawError> {
        let n = self.dim;
        let mut out = BilinearMap::zero(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    let within = tol.max(self.error(i, j, k));
                    match rationalize_value(v, within, max_den) {
                        RationalFit::Unique(r) => out.set(i, j, k, r),
                        RationalFit::None => {
                            return Err(GroupLawError::NoRationalWithinBound { index: (i, j, k), value: v })
                        }
                        RationalFit::Ambiguous => {
                            return Err(GroupLawError::AmbiguousRational { index: (i, j, k), value: v })
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RationalFit {
    Unique(Rational),
    None,
    Ambiguous,
}

/// Rationals `p/q` with `q <= max_den` and `|v - p/q| <= tol`.
pub fn rationalize_value(v: f64, tol: f64, max_den: u64) -> RationalFit {
    let mut found: Option<Rational> = None;
    for q in 1..=max_den.max(1) {
        let p = (v * q as f64).round();
        if (v - p / q as f64).abs() > tol || p.abs() > i64::MAX as f64 {
            continue;
        }
        let r = ratio(p as i64, q as i64);
        match &found {
            None => found = Some(r),
            Some(prev) if *prev == r => {}
            Some(_) => return RationalFit::Ambiguous,
        }
    }
    found.map_or(RationalFit::None, RationalFit::Unique)
}

/// `[e_i, e_j] = d²/ds dt (m(s e_i, t e_j) - m(t e_j, s e_i))` at the origin.
pub fn extract_bracket(law: &GroupLaw) -> NumericTensor {
    let n = law.dim();
    let mut values = vec![0.0; n * n * n];
    let mut errors = vec![0.0; n * n * n];
    for i in 0..n {
        for j in i + 1..n {
            let (v, e) = mixed_derivative(|s, t| {
                let (mut x, mut y) = (vec![0.0; n], vec![0.0; n]);
                x[i] = s;
                y[j] = t;
                let (p, q) = (law.eval(&x, &y), law.eval(&y, &x));
                p.iter().zip(&q).map(|(a, b)| a - b).collect()
            });
            for k in 0..n {
                values[(i * n + j) * n + k] = v[k];
                values[(j * n + i) * n + k] = -v[k];
                errors[(i * n + j) * n + k] = e[k];
                errors[(j * n + i) * n + k] = e[k];
            }
        }
    }
    NumericTensor { dim: n, values, errors }
}

/// `e_i ▷ e_j = d/ds λ_{s e_i}(e_j)` at `s = 0`.
pub fn extract_triangle(dot: &GroupLaw, circ: &GroupLaw) -> Result<NumericTensor, GroupLawError> {
    let n = dot.dim();
    if circ.dim() != n {
        return Err(GroupLawError::DimensionMismatch {
            expected: n,
            found: circ.dim(),
        });
    }
    let mut values = vec![0.0; n * n * n];
    let mut errors = vec![0.0; n * n * n];
    for i in 0..n {
        let mut inverses = HashMap::new();
        for &h in &STEPS {
            for s in [h, -h] {
                let mut x = vec![0.0; n];
                x[i] = s;
                inverses.insert(s.to_bits(), dot.inverse(&x)?);
            }
        }
        for j in 0..n {
            let (v, e) = mixed_derivative(|s, t| {
                let (mut x, mut y) = (vec![0.0; n], vec![0.0; n]);
                x[i] = s;
                y[j] = t;
                let x_inv = &inverses[&s.to_bits()];
                dot.eval(x_inv, &circ.eval(&x, &y))
            });
            for k in 0..n {
                values[(i * n + j) * n + k] = v[k];
                errors[(i * n + j) * n + k] = e[k];
            }
        }
    }
    Ok(NumericTensor { dim: n, values, errors })
}

/// Built-in brace laws by name.
pub fn preset_brace_law(name: &str) -> Option<BraceLaw> {
    if let Some(n) = name.strip_prefix("abelian_").and_then(|d| d.parse::<usize>().ok()) {
        if n == 0 {
            return None;
        }
        return Some(BraceLaw {
            dot: GroupLaw::addition(n),
            circ: GroupLaw::addition(n),
        });
    }
    let text = preset_source(name)?;
    Some(parse_bracelaw_file(text).expect("built-in law parses"))
}

/// Names accepted by [`preset_brace_law`], with `abelian_n` standing for
/// every positive `n`.
pub const PRESET_LAWS: [&str; 5] = ["a1_1_model", "a1_1_model_xyz", "affine2d", "affine2d_almost_trivial", "abelian_n"];

/// Source text of a built-in `bracelaw`.
pub fn preset_source(name: &str) -> Option<&'static str> {
    Some(match name {
        "a1_1_model" => A1_1_MODEL,
        "a1_1_model_xyz" => A1_1_MODEL_XYZ,
        "affine2d" => AFFINE2D,
        "affine2d_almost_trivial" => AFFINE2D_ALMOST_TRIVIAL,
        _ => return None,
    })
}

const A1_1_MODEL: &str = "bracelaw
dim 3
dot:
a1 + b1
a2 + b2
a3 + b3
circ:
let s = a1 - a2*a3
a1 + b1 + a3*exp(s)*b2 + a2*exp(-s)*b3
a2 + exp(s)*b2
a3 + exp(-s)*b3
";

const A1_1_MODEL_XYZ: &str = "bracelaw
dim 3
# coordinates x = X - YZ, y = Y, z = Z
dot:
a1 + b1 - a2*b3 - b2*a3
a2 + b2
a3 + b3
circ:
a1 + b1
a2 + exp(a1)*b2
a3 + exp(-a1)*b3
";

const AFFINE2D: &str = "bracelaw
dim 2
dot:
a1 + b1
a2 + b2
circ:
a1 + exp(a2)*b1
a2 + b2
";

const AFFINE2D_ALMOST_TRIVIAL: &str = "bracelaw
dim 2
dot:
a1 + exp(a2)*b1
a2 + b2
circ:
b1 + exp(b2)*a1
a2 + b2
";

/// Every entry below `tol` in absolute value.
pub fn is_numerically_zero(t: &NumericTensor, tol: f64) -> bool {
    max_abs(&t.values) < tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn a11() -> BraceLaw {
        preset_brace_law("a1_1_model").unwrap()
    }

    #[test]
    fn parses_simple_laws() {
        let law = GroupLaw::parse(1, &["a1 + b1"]).unwrap();
        assert_eq!(law.eval(&[2.0], &[3.0]), vec![5.0]);
        let law = GroupLaw::parse(1, &["-a1*-2 + 1.5e1"]).unwrap();
        assert_eq!(law.eval(&[1.0], &[0.0]), vec![17.0]);
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = GroupLaw::parse(1, &["exp("]).unwrap_err();
        assert!(matches!(err, GroupLawError::Syntax { line: 1, col: 5, .. }), "{err:?}");
        let err = GroupLaw::parse(1, &["a1 + b2"]).unwrap_err();
        assert_eq!(
            err,
            GroupLawError::UnknownVariable {
                name: "b2".into(),
                line: 1,
                col: 6
            }
        );
        let err = GroupLaw::parse(2, &["a1"]).unwrap_err();
        assert_eq!(err, GroupLawError::DimensionMismatch { expected: 2, found: 1 });
        assert!(matches!(GroupLaw::parse(1, &["a1 b1"]), Err(GroupLawError::Syntax { col: 4, .. })));
        assert!(matches!(GroupLaw::parse(1, &["a1 / b1"]), Err(GroupLawError::Syntax { .. })));
    }

    #[test]
    fn file_round_trip() {
        let law = parse_grouplaw_file("grouplaw\ndim 2\nlet s = a2  # shift\nlaw:\na1 + exp(s)*b1\na2 + b2\n").unwrap();
        assert_eq!(law, preset_brace_law("affine2d").unwrap().circ);
        assert!(matches!(
            parse_grouplaw_file("grouplaw\ndim 2\nlaw:\na1\n"),
            Err(GroupLawError::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn group_checks() {
        let r = check_group_numeric(&GroupLaw::addition(3), 100, 1e-12, 1).unwrap();
        assert!(r.max_residual() < 1e-15);
        let r = check_group_numeric(&a11().circ, 1000, 1e-9, 42).unwrap();
        assert!(r.passed(), "{r:?}");
        let shifted = GroupLaw::parse(1, &["a1 + b1 + 1"]).unwrap();
        let r = check_group_numeric(&shifted, 10, 1e-8, 3).unwrap();
        assert!(!r.passed());
        assert!((r.identity_residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn brace_checks() {
        let add = GroupLaw::addition(3);
        assert!(check_brace_numeric(&add, &add, 50, 1e-12, 0).unwrap().brace_residual < 1e-15);
        let b = a11();
        let r = check_brace_numeric(&b.dot, &b.circ, 1000, 1e-9, 42).unwrap();
        assert!(r.passed(), "{r:?}");
        for name in ["a1_1_model_xyz", "affine2d", "affine2d_almost_trivial"] {
            let b = preset_brace_law(name).unwrap();
            let r = check_brace_numeric(&b.dot, &b.circ, 500, 1e-9, 7).unwrap();
            assert!(r.passed(), "{name}: {r:?}");
        }
        // The opposite affine law is not a brace over addition.
        let opposite = preset_brace_law("affine2d").unwrap().circ.opposite();
        let r = check_brace_numeric(&GroupLaw::addition(2), &opposite, 50, 1e-9, 0).unwrap();
        assert!(r.brace_residual > 1e-3);
    }

    #[test]
    fn lambda_matrices() {
        let b = a11();
        let e = std::f64::consts::E;
        let m = lambda_numeric(&b.dot, &b.circ, &[1.0, 0.0, 0.0]).unwrap();
        let expected = vec![vec![1.0, 0.0, 0.0], vec![0.0, e, 0.0], vec![0.0, 0.0, 1.0 / e]];
        assert!(m.max_deviation(&expected) < 1e-9, "{m:?}");
        let m = lambda_numeric(&b.dot, &b.circ, &[0.0; 3]).unwrap();
        let id = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        assert!(m.max_deviation(&id) < 1e-9);
        let m = lambda_numeric(&b.dot, &b.circ, &[0.0, 1.0, 1.0]).unwrap();
        let expected = vec![vec![1.0, 1.0 / e, e], vec![0.0, 1.0 / e, 0.0], vec![0.0, 0.0, e]];
        assert!(m.max_deviation(&expected) < 1e-9, "{m:?}");
    }

    #[test]
    fn lambda_is_invertible_at_samples() {
        let b = a11();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let a = sample_point(&mut rng, 3);
            let m = lambda_numeric(&b.dot, &b.circ, &a).unwrap();
            assert!((determinant(&m.rows()) - 1.0).abs() < 1e-8);
        }
    }

    fn a11_circ_exact() -> BilinearMap {
        let mut c = BilinearMap::zero(3);
        c.set(0, 1, 1, rat(1));
        c.set(1, 0, 1, rat(-1));
        c.set(0, 2, 2, rat(-1));
        c.set(2, 0, 2, rat(1));
        c
    }

    fn a11_triangle_exact() -> BilinearMap {
        let mut t = BilinearMap::zero(3);
        t.set(0, 1, 1, rat(1));
        t.set(0, 2, 2, rat(-1));
        t.set(1, 2, 0, rat(1));
        t.set(2, 1, 0, rat(1));
        t
    }

    #[test]
    fn a1_1_tensors() {
        for name in ["a1_1_model", "a1_1_model_xyz"] {
            let b = preset_brace_law(name).unwrap();
            let c = extract_bracket(&b.circ);
            assert!(c.max_deviation(&a11_circ_exact()) < 1e-6, "{name}");
            assert_eq!(c.rationalize(64, RATIONALIZE_TOLERANCE).unwrap(), a11_circ_exact());
            let t = extract_triangle(&b.dot, &b.circ).unwrap();
            assert!(t.max_deviation(&a11_triangle_exact()) < 1e-6, "{name}");
            assert_eq!(t.rationalize(64, RATIONALIZE_TOLERANCE).unwrap(), a11_triangle_exact());
        }
    }

    #[test]
    fn affine_tensors() {
        let b = preset_brace_law("affine2d").unwrap();
        let c = extract_bracket(&b.circ).rationalize(64, RATIONALIZE_TOLERANCE).unwrap();
        assert_eq!(*c.get(1, 0, 0), rat(1));
        assert_eq!(*c.get(0, 1, 0), rat(-1));
        assert!(extract_bracket(&b.dot).rationalize(64, RATIONALIZE_TOLERANCE).unwrap().is_zero());
        let pair = preset_brace_law("affine2d_almost_trivial").unwrap();
        let t = extract_triangle(&pair.dot, &pair.circ).unwrap();
        let dot = extract_bracket(&pair.dot).rationalize(64, RATIONALIZE_TOLERANCE).unwrap();
        assert_eq!(t.rationalize(64, RATIONALIZE_TOLERANCE).unwrap(), dot.map_entries(|x| -x));
        let add = GroupLaw::addition(2);
        assert!(is_numerically_zero(&extract_triangle(&add, &add).unwrap(), 1e-12));
    }

    #[test]
    fn rationalize_examples() {
        assert_eq!(rationalize_value(0.9999999997, 1e-6, 10), RationalFit::Unique(rat(1)));
        assert_eq!(rationalize_value(-1.0000000002, 1e-6, 10), RationalFit::Unique(rat(-1)));
        assert_eq!(rationalize_value(0.3333333329, 1e-6, 10), RationalFit::Unique(ratio(1, 3)));
        assert_eq!(rationalize_value(0.123456, 1e-9, 10), RationalFit::None);
        assert_eq!(rationalize_value(0.5, 0.2, 10), RationalFit::Ambiguous);
    }
}
