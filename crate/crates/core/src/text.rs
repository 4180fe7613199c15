//! Plain-text matrix format.
//!
//! ```text
//! # comment
//! 2 3 GF3
//! 0 1 2
//! 2 2 0
//! ```
//!
//! The header is `rows cols [field]` with field `Q` (default), `GF2`, `GF3` or
//! `GF5`. Rational entries are written `a` or `a/b` with `b > 0`; prime-field
//! entries are canonical residues. Blank lines and anything after `#` are ignored.

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::matrix::Matrix;

/// A parsed matrix whose field is only known at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Rational(Matrix<Rationals>),
    Prime(Matrix<PrimeField>),
}

impl AnyMatrix {
    pub fn spec(&self) -> FieldSpec {
        match self {
            AnyMatrix::Rational(m) => m.spec(),
            AnyMatrix::Prime(m) => m.spec(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            AnyMatrix::Rational(m) => m.shape(),
            AnyMatrix::Prime(m) => m.shape(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            AnyMatrix::Rational(m) => m.rank(),
            AnyMatrix::Prime(m) => m.rank(),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            AnyMatrix::Rational(m) => format_matrix(m),
            AnyMatrix::Prime(m) => format_matrix(m),
        }
    }

    /// Reinterpret the entries over another field. Rationals map into GF(p) only
    /// when they are integers; residues map into ℚ as integers.
    pub fn convert(&self, target: FieldSpec) -> Result<AnyMatrix> {
        if self.spec() == target {
            return Ok(self.clone());
        }
        let text = self.to_text();
        let body = text.split_once('\n').map_or("", |(_, rest)| rest);
        let (rows, cols) = self.shape();
        let mut reduced = format!("{rows} {cols} {target}\n");
        for line in body.lines() {
            let entries: Vec<String> = line
                .split_whitespace()
                .map(|tok| match target {
                    FieldSpec::Prime(p) => tok
                        .parse::<i64>()
                        .map(|v| v.rem_euclid(i64::from(p)).to_string())
                        .map_err(|_| Error::Field(format!("cannot map `{tok}` into {target}"))),
                    FieldSpec::Rationals => Ok(tok.to_string()),
                })
                .collect::<Result<_>>()?;
            reduced.push_str(&entries.join(" "));
            reduced.push('\n');
        }
        parse_matrix(&reduced)
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(before, _)| before).trim()
}

pub fn parse_matrix(text: &str) -> Result<AnyMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "missing header `rows cols [field]`".into(),
    })?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(Error::Parse {
            line: header_line,
            message: format!("header must be `rows cols [field]`, got `{header}`"),
        });
    }
    let dim = |tok: &str| {
        tok.parse::<usize>().map_err(|_| Error::Parse {
            line: header_line,
            message: format!("invalid dimension `{tok}`"),
        })
    };
    let rows = dim(parts[0])?;
    let cols = dim(parts[1])?;
    let spec = match parts.get(2) {
        Some(tok) => tok.parse::<FieldSpec>().map_err(|e| Error::Parse {
            line: header_line,
            message: e.to_string(),
        })?,
        None => FieldSpec::Rationals,
    };
    let body: Vec<(usize, &str)> = lines.collect();
    match spec {
        FieldSpec::Rationals => parse_body(Rationals, rows, cols, &body, header_line).map(AnyMatrix::Rational),
        FieldSpec::Prime(p) => {
            let field = PrimeField::new(p)?;
            parse_body(field, rows, cols, &body, header_line).map(AnyMatrix::Prime)
        }
    }
}

fn parse_body<F: Field>(
    field: F,
    rows: usize,
    cols: usize,
    body: &[(usize, &str)],
    header_line: usize,
) -> Result<Matrix<F>> {
    // A matrix without columns has no entry lines at all.
    let expected_lines = if cols == 0 { 0 } else { rows };
    if body.len() != expected_lines {
        let line = body.get(expected_lines).map_or(header_line, |(l, _)| *l);
        return Err(Error::Parse {
            line,
            message: format!("expected {expected_lines} rows of entries, found {}", body.len()),
        });
    }
    let mut data = Vec::with_capacity(rows * cols);
    for &(line, text) in body {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != cols {
            return Err(Error::Parse {
                line,
                message: format!("expected {cols} entries, found {}", tokens.len()),
            });
        }
        for tok in tokens {
            data.push(field.parse_elem(tok).map_err(|message| Error::Parse { line, message })?);
        }
    }
    Matrix::new(field, rows, cols, data)
}

pub fn format_matrix<F: Field>(m: &Matrix<F>) -> String {
    let mut out = format!("{} {} {}\n", m.rows(), m.cols(), m.spec());
    if m.cols() > 0 {
        for r in 0..m.rows() {
            let row: Vec<String> = m.row(r).iter().map(|x| m.field().format_elem(x)).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}
