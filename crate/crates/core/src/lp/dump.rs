//! Plain-text LP dump.
//!
//! ```text
//! <min|max> <n_vars> <n_rows>
//! <objective coefficients>
//! <row coefficients> <<=|>=|=> <rhs>      (one line per row)
//! <lower bounds>
//! <upper bounds>                          (`inf` for an open bound)
//! ```
//!
//! Numbers are written in plain decimal with enough digits to round-trip.

use std::io::{BufRead, Write};

use super::model::{DenseLp, Relation, Sense};
use crate::error::{Error, Result};

pub fn write_lp<W: Write>(lp: &DenseLp, mut out: W) -> Result<()> {
    writeln!(out, "{} {} {}", lp.sense().as_str(), lp.n_vars(), lp.n_rows())?;
    writeln!(out, "{}", join(lp.objective()))?;
    for (r, row) in lp.rows().iter().enumerate() {
        writeln!(out, "{} {} {}", join(row), lp.relations()[r].as_str(), num(lp.rhs()[r]))?;
    }
    writeln!(out, "{}", join(lp.var_lower()))?;
    writeln!(out, "{}", join(lp.var_upper()))?;
    Ok(())
}

pub fn read_lp<R: BufRead>(input: R) -> Result<DenseLp> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|s| (i + 1, s)))
        .filter(|l| l.as_ref().map_or(true, |(_, s)| !s.trim().is_empty()));
    let mut next = |what: &str| -> Result<(usize, String)> {
        match lines.next() {
            Some(l) => Ok(l?),
            None => Err(Error::Parse { line: 0, msg: format!("unexpected end of input, expected {what}") }),
        }
    };

    let (ln, header) = next("header")?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(Error::Parse { line: ln, msg: "header must be `sense n_vars n_rows`".into() });
    }
    let sense: Sense = fields[0].parse().map_err(|e: Error| Error::Parse { line: ln, msg: e.to_string() })?;
    let n: usize = parse_count(fields[1], ln)?;
    let m: usize = parse_count(fields[2], ln)?;

    let (ln, obj) = next("objective")?;
    let objective = parse_numbers(&obj, ln, n)?;
    let mut lp = DenseLp::new(sense, objective).map_err(|e| Error::Parse { line: ln, msg: e.to_string() })?;

    for _ in 0..m {
        let (ln, line) = next("row")?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != n + 2 {
            return Err(Error::Parse { line: ln, msg: format!("row needs {} coefficients, a relation and a rhs", n) });
        }
        let coeffs = toks[..n].iter().map(|t| parse_num(t, ln)).collect::<Result<Vec<_>>>()?;
        let rel: Relation = toks[n].parse().map_err(|e: Error| Error::Parse { line: ln, msg: e.to_string() })?;
        let rhs = parse_num(toks[n + 1], ln)?;
        lp.add_row(coeffs, rel, rhs).map_err(|e| Error::Parse { line: ln, msg: e.to_string() })?;
    }

    let (ln, lo) = next("lower bounds")?;
    let lower = parse_numbers(&lo, ln, n)?;
    let (ln, up) = next("upper bounds")?;
    let upper = parse_numbers(&up, ln, n)?;
    lp.set_bounds(lower, upper).map_err(|e| Error::Parse { line: ln, msg: e.to_string() })?;
    Ok(lp)
}

fn num(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else {
        // Display for f64 is the shortest round-tripping decimal, never exponent form.
        format!("{v}")
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|&x| num(x)).collect::<Vec<_>>().join(" ")
}

fn parse_count(s: &str, line: usize) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse { line, msg: format!("`{s}` is not a count") })
}

fn parse_num(s: &str, line: usize) -> Result<f64> {
    match s {
        "inf" | "+inf" => Ok(f64::INFINITY),
        _ => s.parse().map_err(|_| Error::Parse { line, msg: format!("`{s}` is not a number") }),
    }
}

fn parse_numbers(line_str: &str, line: usize, n: usize) -> Result<Vec<f64>> {
    let v = line_str.split_whitespace().map(|t| parse_num(t, line)).collect::<Result<Vec<_>>>()?;
    if v.len() != n {
        return Err(Error::Parse { line, msg: format!("expected {n} numbers, found {}", v.len()) });
    }
    Ok(v)
}
