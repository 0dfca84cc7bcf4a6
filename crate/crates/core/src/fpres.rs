//! The `fpres v1` text format.
//!
//! ```text
//! fpres v1
//! field 2
//! generators 2
//! 0 2
//! 2 0
//! relations 1
//! 4 4 ; 0:1 1:1
//! ```

use std::fmt::Write as _;

use crate::field::PrimeField;
use crate::presentation::{Column, Grade, Presentation, PresentationError};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FpresError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unexpected end of input: {0}")]
    UnexpectedEof(String),
    #[error("input is not valid UTF-8")]
    Utf8,
    #[error(transparent)]
    Invalid(#[from] PresentationError),
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)>> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Lines { inner: it.peekable() }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), FpresError> {
        self.inner.next().ok_or_else(|| FpresError::UnexpectedEof(what.to_string()))
    }
}

fn syntax(line: usize, message: impl Into<String>) -> FpresError {
    FpresError::Syntax { line, message: message.into() }
}

fn keyword_count(lines: &mut Lines<'_>, key: &str) -> Result<(usize, u64), FpresError> {
    let (n, l) = lines.next(&format!("`{key}` line"))?;
    let mut parts = l.split_whitespace();
    if parts.next() != Some(key) {
        return Err(syntax(n, format!("expected `{key} <count>`")));
    }
    let v = parts
        .next()
        .and_then(|s| s.parse::<u64>().ok())
        .ok_or_else(|| syntax(n, format!("expected `{key} <count>`")))?;
    if parts.next().is_some() {
        return Err(syntax(n, "trailing tokens"));
    }
    Ok((n, v))
}

fn parse_grade(n: usize, s: &str) -> Result<Grade, FpresError> {
    let toks: Vec<&str> = s.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(syntax(n, "expected a grade `<x> <y>`"));
    }
    let x: Rational = toks[0].parse().map_err(|e| syntax(n, format!("{e}")))?;
    let y: Rational = toks[1].parse().map_err(|e| syntax(n, format!("{e}")))?;
    Ok(Grade { x, y })
}

/// Parses and validates an `fpres v1` document.
pub fn parse_presentation(text: &str) -> Result<Presentation, FpresError> {
    let mut lines = Lines::new(text);
    let (n, header) = lines.next("header")?;
    if header.split_whitespace().collect::<Vec<_>>() != ["fpres", "v1"] {
        return Err(syntax(n, "expected header `fpres v1`"));
    }
    let (n, p) = keyword_count(&mut lines, "field")?;
    let field = PrimeField::new(p).map_err(|e| syntax(n, e.to_string()))?;

    let (_, m) = keyword_count(&mut lines, "generators")?;
    let mut generators = Vec::new();
    for _ in 0..m {
        let (n, l) = lines.next("generator grade")?;
        generators.push(parse_grade(n, l)?);
    }

    let (_, m2) = keyword_count(&mut lines, "relations")?;
    let mut relations = Vec::new();
    let mut columns = Vec::new();
    for _ in 0..m2 {
        let (n, l) = lines.next("relation line")?;
        let (grade_part, entries) = match l.split_once(';') {
            Some((g, e)) => (g, e),
            None => (l, ""),
        };
        relations.push(parse_grade(n, grade_part)?);
        let mut col: Column = Vec::new();
        for tok in entries.split_whitespace() {
            let (r, c) = tok
                .split_once(':')
                .ok_or_else(|| syntax(n, format!("expected `<row>:<coeff>`, found `{tok}`")))?;
            let row: usize = r.parse().map_err(|_| syntax(n, format!("bad row index `{r}`")))?;
            let coeff: i64 = c.parse().map_err(|_| syntax(n, format!("bad coefficient `{c}`")))?;
            if row >= generators.len() {
                return Err(syntax(n, format!("row {row} out of range (generators: {})", generators.len())));
            }
            if col.iter().any(|&(r0, _)| r0 == row) {
                return Err(syntax(n, format!("row {row} listed twice")));
            }
            let v = field.from_i64(coeff);
            if !v.is_zero() {
                col.push((row, v));
            }
        }
        col.sort_unstable_by_key(|&(r, _)| r);
        columns.push(col);
    }
    if let Some(&(n, _)) = lines.inner.peek() {
        return Err(syntax(n, "unexpected content after the last relation"));
    }
    Ok(Presentation::new(field, generators, relations, columns)?)
}

/// Parses raw bytes, rejecting invalid UTF-8.
pub fn parse_presentation_bytes(bytes: &[u8]) -> Result<Presentation, FpresError> {
    let text = std::str::from_utf8(bytes).map_err(|_| FpresError::Utf8)?;
    parse_presentation(text)
}

/// Canonical `fpres v1` text.
pub fn serialize_presentation(q: &Presentation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "fpres v1");
    let _ = writeln!(out, "field {}", q.field.characteristic());
    let _ = writeln!(out, "generators {}", q.generators.len());
    for g in &q.generators {
        let _ = writeln!(out, "{} {}", g.grade.x, g.grade.y);
    }
    let _ = writeln!(out, "relations {}", q.relations.len());
    for (r, col) in q.relations.iter().zip(&q.columns) {
        let _ = write!(out, "{} {}", r.grade.x, r.grade.y);
        if !col.is_empty() {
            out.push_str(" ;");
            for (row, c) in col {
                let _ = write!(out, " {row}:{c}");
            }
        }
        out.push('\n');
    }
    out
}
