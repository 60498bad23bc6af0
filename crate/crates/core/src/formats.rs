//! Plain-text file formats for finite groups, braces, Lie algebras and
//! post-Lie algebras.
//!
//! Group elements are numbered from 0, and 0 must be the identity. Basis
//! vectors of Lie and post-Lie files are numbered from 1. `#` starts a
//! comment and blank lines are ignored.

use std::collections::HashSet;

use thiserror::Error;

use crate::brace::{verify_brace_tables, BraceError, FiniteSkewBrace};
use crate::group::{FiniteGroup, GroupError};
use crate::lie::{antisymmetric_completion, LieError};
use crate::linalg::{format_rational, parse_rational, BilinearMap, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Brace(#[from] BraceError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

fn syntax<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Syntax {
        line,
        message: message.into(),
    })
}

/// Non-blank lines with comments removed, paired with one-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_once('#').map_or(l, |(h, _)| h).trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

/// The keyword on the first content line (`group`, `brace`, `liealg`, ...).
pub fn detect_kind(text: &str) -> Option<&str> {
    content_lines(text).first().map(|(_, l)| *l)
}

fn header(lines: &[(usize, &str)], keyword: &str, size_word: &str) -> Result<usize, FormatError> {
    match lines.first() {
        Some((_, l)) if *l == keyword => {}
        Some((line, _)) => return syntax(*line, format!("expected `{keyword}`")),
        None => return syntax(1, format!("expected `{keyword}`")),
    }
    let Some((line, l)) = lines.get(1) else {
        return syntax(lines[0].0 + 1, format!("expected `{size_word} N`"));
    };
    let value = l
        .strip_prefix(size_word)
        .and_then(|rest| rest.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    match value {
        Some(n) => Ok(n),
        None => syntax(*line, format!("expected `{size_word} N` with N a positive integer")),
    }
}

fn parse_table(lines: &[(usize, &str)], n: usize) -> Result<Vec<Vec<usize>>, FormatError> {
    if lines.len() != n {
        let line = lines.last().map_or(0, |(l, _)| *l);
        return syntax(line, format!("expected {n} table rows, found {}", lines.len()));
    }
    let mut rows = Vec::with_capacity(n);
    for (line, l) in lines {
        let row: Result<Vec<usize>, _> = l.split_whitespace().map(str::parse::<usize>).collect();
        let Ok(row) = row else {
            return syntax(*line, "table entries must be non-negative integers");
        };
        if row.len() != n {
            return syntax(*line, format!("expected {n} entries, found {}", row.len()));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Raw multiplication table of a `group` file.
pub fn parse_group_table(text: &str) -> Result<Vec<Vec<usize>>, FormatError> {
    let lines = content_lines(text);
    let n = header(&lines, "group", "order")?;
    parse_table(&lines[2..], n)
}

pub fn parse_group(text: &str) -> Result<FiniteGroup, FormatError> {
    Ok(FiniteGroup::from_table(parse_group_table(text)?)?)
}

fn write_table(out: &mut String, rows: &[Vec<usize>]) {
    let width = rows.len().saturating_sub(1).to_string().len();
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>width$}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
}

pub fn write_group(g: &FiniteGroup) -> String {
    let mut out = format!("group\norder {}\n", g.order());
    write_table(&mut out, &g.rows());
    out
}

pub type Table = Vec<Vec<usize>>;

/// Raw `(dot, circ)` tables of a `brace` file.
pub fn parse_brace_tables(text: &str) -> Result<(Table, Table), FormatError> {
    let lines = content_lines(text);
    let n = header(&lines, "brace", "order")?;
    let rest = &lines[2..];
    match rest.first() {
        Some((_, "dot:")) => {}
        Some((line, _)) => return syntax(*line, "expected `dot:`"),
        None => return syntax(lines[1].0 + 1, "expected `dot:`"),
    }
    let Some(circ_at) = rest.iter().position(|(_, l)| *l == "circ:") else {
        return syntax(rest.last().map_or(0, |(l, _)| *l) + 1, "expected `circ:`");
    };
    let dot = parse_table(&rest[1..circ_at], n)?;
    let circ = parse_table(&rest[circ_at + 1..], n)?;
    Ok((dot, circ))
}

pub fn parse_brace(text: &str) -> Result<FiniteSkewBrace, FormatError> {
    let (dot, circ) = parse_brace_tables(text)?;
    Ok(verify_brace_tables(dot, circ)?)
}

pub fn write_brace(b: &FiniteSkewBrace) -> String {
    let mut out = format!("brace\norder {}\ndot:\n", b.order());
    write_table(&mut out, &b.dot().rows());
    out.push_str("circ:\n");
    write_table(&mut out, &b.circ().rows());
    out
}

/// A structure-constant line `tag i j k p/q` with one-based indices,
/// returned zero-based.
fn parse_constant(line: usize, l: &str, dim: usize) -> Result<(String, usize, usize, usize, Rational), FormatError> {
    let parts: Vec<&str> = l.split_whitespace().collect();
    if parts.len() != 5 {
        return syntax(line, "expected `tag i j k p/q`");
    }
    let mut idx = [0usize; 3];
    for (slot, s) in idx.iter_mut().zip(&parts[1..4]) {
        match s.parse::<usize>() {
            Ok(v) if (1..=dim).contains(&v) => *slot = v - 1,
            _ => return syntax(line, format!("index `{s}` is not in 1..={dim}")),
        }
    }
    let Some(c) = parse_rational(parts[4]) else {
        return syntax(line, format!("`{}` is not a rational number", parts[4]));
    };
    Ok((parts[0].to_string(), idx[0], idx[1], idx[2], c))
}

/// Bracket tensor of a `liealg` file, completed antisymmetrically but not
/// checked for the Jacobi identity.
pub fn parse_liealg(text: &str) -> Result<BilinearMap, FormatError> {
    let lines = content_lines(text);
    let dim = header(&lines, "liealg", "dim")?;
    let (c, _) = parse_constants(&lines[2..], dim, false)?;
    Ok(c)
}

/// `(dot bracket, ▷)` of a `postlie` file; no axioms are checked.
pub fn parse_postlie(text: &str) -> Result<(BilinearMap, BilinearMap), FormatError> {
    let lines = content_lines(text);
    let dim = header(&lines, "postlie", "dim")?;
    parse_constants(&lines[2..], dim, true)
}

fn parse_constants(
    lines: &[(usize, &str)],
    dim: usize,
    allow_triangle: bool,
) -> Result<(BilinearMap, BilinearMap), FormatError> {
    let mut upper = Vec::new();
    let mut triangle = BilinearMap::zero(dim);
    let mut seen = HashSet::new();
    for &(line, l) in lines {
        let (tag, i, j, k, c) = parse_constant(line, l, dim)?;
        match tag.as_str() {
            "c" => {
                if i >= j {
                    return syntax(line, "bracket lines need i < j");
                }
                upper.push((i, j, k, c));
            }
            "t" if allow_triangle => triangle.set(i, j, k, c),
            _ => {
                let allowed = if allow_triangle { "`c` or `t`" } else { "`c`" };
                return syntax(line, format!("expected {allowed}, found `{tag}`"));
            }
        }
        if !seen.insert((tag, i, j, k)) {
            return syntax(line, "duplicate entry");
        }
    }
    Ok((antisymmetric_completion(dim, &upper)?, triangle))
}

fn write_constants(out: &mut String, tag: &str, t: &BilinearMap, upper_only: bool) {
    for (i, j, k, v) in t.nonzero_entries() {
        if !upper_only || i < j {
            out.push_str(&format!("{tag} {} {} {} {}\n", i + 1, j + 1, k + 1, format_rational(v)));
        }
    }
}

pub fn write_liealg(bracket: &BilinearMap) -> String {
    let mut out = format!("liealg\ndim {}\n", bracket.dim());
    write_constants(&mut out, "c", bracket, true);
    out
}

pub fn write_postlie(dot: &BilinearMap, triangle: &BilinearMap) -> String {
    let mut out = format!("postlie\ndim {}\n", dot.dim());
    write_constants(&mut out, "c", dot, true);
    write_constants(&mut out, "t", triangle, false);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{LieAlgebra, PostLieAlgebra};
    use crate::linalg::rat;

    #[test]
    fn group_round_trip() {
        for g in [FiniteGroup::cyclic(5), FiniteGroup::symmetric(3), FiniteGroup::quaternion()] {
            assert_eq!(parse_group(&write_group(&g)).unwrap(), g);
        }
        let text = "# C2\ngroup\norder 2\n0 1\n1 0 # swap\n";
        assert_eq!(parse_group(text).unwrap(), FiniteGroup::cyclic(2));
    }

    #[test]
    fn group_errors() {
        assert!(matches!(parse_group("grp\norder 2\n"), Err(FormatError::Syntax { line: 1, .. })));
        assert!(matches!(parse_group("group\norder 2\n0 1\n"), Err(FormatError::Syntax { .. })));
        assert!(matches!(parse_group("group\norder 2\n0 1\n1 x\n"), Err(FormatError::Syntax { line: 4, .. })));
        assert!(matches!(parse_group("group\norder 2\n0 1\n0 1\n"), Err(FormatError::Group(_))));
    }

    #[test]
    fn brace_round_trip() {
        let b = FiniteSkewBrace::almost_trivial(&FiniteGroup::symmetric(3));
        let parsed = parse_brace(&write_brace(&b)).unwrap();
        assert_eq!(parsed.dot(), b.dot());
        assert_eq!(parsed.circ(), b.circ());
    }

    #[test]
    fn lie_round_trip() {
        let sl2 = LieAlgebra::sl2();
        let text = write_liealg(sl2.bracket());
        assert_eq!(text, "liealg\ndim 3\nc 1 2 2 2\nc 1 3 3 -2\nc 2 3 1 1\n");
        assert_eq!(parse_liealg(&text).unwrap(), *sl2.bracket());
        let p = PostLieAlgebra::a1_1();
        let text = write_postlie(p.dot().bracket(), p.triangle());
        assert_eq!(parse_postlie(&text).unwrap(), (p.dot().bracket().clone(), p.triangle().clone()));
    }

    #[test]
    fn lie_errors() {
        assert!(matches!(parse_liealg("liealg\ndim 2\nc 2 1 1 1\n"), Err(FormatError::Syntax { line: 3, .. })));
        assert!(matches!(parse_liealg("liealg\ndim 2\nc 1 2 3 1\n"), Err(FormatError::Syntax { .. })));
        assert!(matches!(parse_liealg("liealg\ndim 2\nt 1 2 1 1\n"), Err(FormatError::Syntax { .. })));
        assert!(matches!(
            parse_liealg("liealg\ndim 2\nc 1 2 1 1\nc 1 2 1 2\n"),
            Err(FormatError::Syntax { line: 4, .. })
        ));
        let (_, t) = parse_postlie("postlie\ndim 2\nt 2 1 1 1/2\n").unwrap();
        assert_eq!(*t.get(1, 0, 0), crate::linalg::ratio(1, 2));
        assert_eq!(*t.get(0, 1, 0), rat(0));
    }

    #[test]
    fn detects_kind() {
        assert_eq!(detect_kind("# x\n\nliealg\ndim 1\n"), Some("liealg"));
        assert_eq!(detect_kind(""), None);
    }
}
