//! Text formats for polynomials, matrices, centers and discs.
//!
//! All formats are line based, use `.` as the decimal separator and treat
//! everything after `#` on a line as a comment.
//!
//! ```text
//! # polynomial: degree, then d+1 coefficients "re im", lowest degree first
//! 2
//! 6 0
//! -5 0
//! 1 0
//! ```
//!
//! Matrices give `n`, then `n` rows of `n` entries written `re,im` or `re`.
//! Center lists hold one `re im` pair per line.

use std::fmt::Write as _;

use crate::companion::Matrix;
use crate::error::{Error, Result};
use crate::poly::{Disc, Poly, C64, ZERO};

/// Non-empty lines with comments removed, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn number(line: usize, s: &str) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::parse(line, format!("bad number {s:?}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::parse(line, format!("non-finite number {s:?}")))
    }
}

/// `re im`, or a lone `re`.
fn pair(line: usize, l: &str) -> Result<C64> {
    let toks: Vec<&str> = l.split_whitespace().collect();
    match toks[..] {
        [re] => Ok(C64::new(number(line, re)?, 0.0)),
        [re, im] => Ok(C64::new(number(line, re)?, number(line, im)?)),
        _ => Err(Error::parse(line, format!("expected \"re im\", found {l:?}"))),
    }
}

fn count(line: usize, l: &str, what: &str) -> Result<usize> {
    l.parse()
        .map_err(|_| Error::parse(line, format!("expected the {what}, found {l:?}")))
}

pub fn parse_poly(text: &str) -> Result<Poly> {
    let mut lines = content_lines(text);
    let (ln, first) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let d = count(ln, first, "degree")?;
    let mut coeffs = Vec::with_capacity(d + 1);
    let mut last = ln;
    for (ln, l) in lines {
        if coeffs.len() == d + 1 {
            return Err(Error::parse(ln, format!("more than {} coefficients", d + 1)));
        }
        coeffs.push(pair(ln, l)?);
        last = ln;
    }
    if coeffs.len() != d + 1 {
        return Err(Error::parse(
            last,
            format!("degree {d} needs {} coefficients, found {}", d + 1, coeffs.len()),
        ));
    }
    if coeffs[d] == ZERO {
        return Err(Error::parse(last, "leading coefficient is zero"));
    }
    Ok(Poly::new(coeffs))
}

fn entry(line: usize, s: &str) -> Result<C64> {
    match s.split_once(',') {
        Some((re, im)) => Ok(C64::new(number(line, re)?, number(line, im)?)),
        None => Ok(C64::new(number(line, s)?, 0.0)),
    }
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = content_lines(text);
    let (ln, first) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let n = count(ln, first, "dimension")?;
    if n == 0 {
        return Err(Error::parse(ln, "dimension must be positive"));
    }
    let mut rows = Vec::with_capacity(n);
    let mut last = ln;
    for (ln, l) in lines {
        if rows.len() == n {
            return Err(Error::parse(ln, format!("more than {n} rows")));
        }
        let row = l
            .split_whitespace()
            .map(|s| entry(ln, s))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(Error::parse(ln, format!("expected {n} entries, found {}", row.len())));
        }
        rows.push(row);
        last = ln;
    }
    if rows.len() != n {
        return Err(Error::parse(last, format!("expected {n} rows, found {}", rows.len())));
    }
    Ok(Matrix::from_rows(rows))
}

pub fn parse_centers(text: &str) -> Result<Vec<C64>> {
    content_lines(text).map(|(ln, l)| pair(ln, l)).collect()
}

/// `"cx cy r"` with `r > 0`.
pub fn parse_disc(s: &str) -> Result<Disc> {
    let toks: Vec<&str> = s.split_whitespace().collect();
    let [cx, cy, r] = toks[..] else {
        return Err(Error::parse(1, format!("expected \"cx cy r\", found {s:?}")));
    };
    Disc::new(C64::new(number(1, cx)?, number(1, cy)?), number(1, r)?)
        .map_err(|e| Error::parse(1, e.to_string()))
}

pub fn format_matrix(m: &Matrix) -> String {
    let mut out = format!("{}\n", m.dim());
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|c| format!("{},{}", c.re, c.im)).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

pub fn format_centers(cs: &[C64]) -> String {
    cs.iter().map(|c| format!("{} {}\n", c.re, c.im)).collect()
}
