//! The four parameterized LP families, built exactly as printed, and the
//! tight-constraint recurrences that solve the toy and RANKING families in
//! linear time.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{DenseLp, FamilyTag, Relation, Sense};
use crate::{INV_E, ONE_MINUS_INV_E};

/// Largest size handed to the dense simplex.
pub const SIMPLEX_SIZE_CAP: usize = 2048;
/// Largest size accepted by the recurrence oracles.
pub const RECURRENCE_SIZE_CAP: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Toy,
    Balance,
    Ranking,
    Secretary,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] =
        [FamilyKind::Toy, FamilyKind::Balance, FamilyKind::Ranking, FamilyKind::Secretary];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::Toy => "toy",
            FamilyKind::Balance => "balance",
            FamilyKind::Ranking => "ranking",
            FamilyKind::Secretary => "secretary",
        }
    }

    /// Value of the family as its size grows without bound.
    pub fn limit(self) -> f64 {
        match self {
            FamilyKind::Toy | FamilyKind::Ranking => ONE_MINUS_INV_E,
            FamilyKind::Balance | FamilyKind::Secretary => INV_E,
        }
    }

    pub fn sense(self) -> Sense {
        match self {
            FamilyKind::Toy | FamilyKind::Ranking => Sense::Minimize,
            FamilyKind::Balance | FamilyKind::Secretary => Sense::Maximize,
        }
    }

    /// Whether a closed-form tight recurrence solves this family.
    pub fn has_recurrence(self) -> bool {
        matches!(self, FamilyKind::Toy | FamilyKind::Ranking)
    }

    pub fn tag(self) -> FamilyTag {
        match self {
            FamilyKind::Toy => FamilyTag::Toy,
            FamilyKind::Balance => FamilyTag::Balance,
            FamilyKind::Ranking => FamilyTag::Ranking,
            FamilyKind::Secretary => FamilyTag::Secretary,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "toy" => Ok(FamilyKind::Toy),
            "balance" => Ok(FamilyKind::Balance),
            "ranking" => Ok(FamilyKind::Ranking),
            "secretary" => Ok(FamilyKind::Secretary),
            other => Err(Error::invalid(format!("unknown family `{other}`"))),
        }
    }
}

/// A family and its size, written `kind:n` on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub size: usize,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid("family size must be at least 1"));
        }
        Ok(Self { kind, size })
    }

    pub fn build(&self) -> Result<DenseLp> {
        build(self.kind, self.size)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind, self.size)
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, size) = s
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("expected `kind:n`, got `{s}`")))?;
        let size: usize = size
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("`{size}` is not a positive integer")))?;
        FamilySpec::new(kind.trim().parse()?, size)
    }
}

pub fn build(kind: FamilyKind, n: usize) -> Result<DenseLp> {
    match kind {
        FamilyKind::Toy => build_toy(n),
        FamilyKind::Balance => build_balance(n),
        FamilyKind::Ranking => build_ranking(n),
        FamilyKind::Secretary => build_secretary(n),
    }
}

fn check_simplex_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("family size must be at least 1"));
    }
    if n > SIMPLEX_SIZE_CAP {
        return Err(Error::invalid(format!("size {n} exceeds the simplex cap {SIMPLEX_SIZE_CAP}")));
    }
    Ok(())
}

fn unit_box(lp: &mut DenseLp, n: usize) -> Result<()> {
    lp.set_bounds(vec![0.0; n], vec![1.0; n])
}

/// Toy LP: minimize `(1/n) sum x_i` subject to
/// `1 - x_i <= (1/n) sum_{l<i} x_l` and `x_i >= x_{i+1}`, `x` in `[0,1]^n`.
///
/// Rows `0..n` are the cumulative constraints, written as
/// `(1/n) sum_{l<i} x_l + x_i >= 1`; rows `n..2n-1` are the monotonicity
/// constraints `x_i - x_{i+1} >= 0`.
pub fn build_toy(n: usize) -> Result<DenseLp> {
    check_simplex_size(n)?;
    let inv = 1.0 / n as f64;
    let mut lp = DenseLp::new(Sense::Minimize, vec![inv; n])?;
    for i in 0..n {
        let mut row = vec![0.0; n];
        row[..i].iter_mut().for_each(|a| *a = inv);
        row[i] = 1.0;
        lp.add_row(row, Relation::Ge, 1.0)?;
    }
    for i in 0..n.saturating_sub(1) {
        let mut row = vec![0.0; n];
        row[i] = 1.0;
        row[i + 1] = -1.0;
        lp.add_row(row, Relation::Ge, 0.0)?;
    }
    unit_box(&mut lp, n)?;
    Ok(lp.with_family(FamilyTag::Toy))
}

/// BALANCE LP: maximize `sum x_i (1 - i/N)` subject to
/// `sum_{i<=p} x_i (1 + (p-i)/N) <= p/N` for every `p`, `x` in `[0,1]^N`.
pub fn build_balance(big_n: usize) -> Result<DenseLp> {
    check_simplex_size(big_n)?;
    let nf = big_n as f64;
    let objective = (1..=big_n).map(|i| 1.0 - i as f64 / nf).collect();
    let mut lp = DenseLp::new(Sense::Maximize, objective)?;
    for p in 1..=big_n {
        let mut row = vec![0.0; big_n];
        for i in 1..=p {
            row[i - 1] = 1.0 + (p - i) as f64 / nf;
        }
        lp.add_row(row, Relation::Le, p as f64 / nf)?;
    }
    unit_box(&mut lp, big_n)?;
    Ok(lp.with_family(FamilyTag::Balance))
}

/// RANKING LP: minimize `(1/n) sum x_i` subject to
/// `x_i + (1/n) sum_{j<=i} x_j >= 1`, `x` in `[0,1]^n`.
pub fn build_ranking(n: usize) -> Result<DenseLp> {
    check_simplex_size(n)?;
    let inv = 1.0 / n as f64;
    let mut lp = DenseLp::new(Sense::Minimize, vec![inv; n])?;
    for i in 0..n {
        let mut row = vec![0.0; n];
        row[..i].iter_mut().for_each(|a| *a = inv);
        row[i] = 1.0 + inv;
        lp.add_row(row, Relation::Ge, 1.0)?;
    }
    unit_box(&mut lp, n)?;
    Ok(lp.with_family(FamilyTag::Ranking))
}

/// Secretary LP: maximize `sum x_i (i/n)` subject to
/// `i x_i + sum_{l<i} x_l <= 1`, `x` in `[0,1]^n`.
///
/// The upper bound `x_i <= 1` is kept although `x_i <= 1/i` is implied.
pub fn build_secretary(n: usize) -> Result<DenseLp> {
    check_simplex_size(n)?;
    let nf = n as f64;
    let objective = (1..=n).map(|i| i as f64 / nf).collect();
    let mut lp = DenseLp::new(Sense::Maximize, objective)?;
    for i in 1..=n {
        let mut row = vec![0.0; n];
        row[..i - 1].iter_mut().for_each(|a| *a = 1.0);
        row[i - 1] = i as f64;
        lp.add_row(row, Relation::Le, 1.0)?;
    }
    unit_box(&mut lp, n)?;
    Ok(lp.with_family(FamilyTag::Secretary))
}

fn check_recurrence_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("family size must be at least 1"));
    }
    if n > RECURRENCE_SIZE_CAP {
        return Err(Error::invalid(format!("size {n} exceeds the recurrence cap {RECURRENCE_SIZE_CAP}")));
    }
    Ok(())
}

/// Unique optimum of the RANKING LP: every main row held tight,
/// `x_i (1 + 1/n) = 1 - (1/n) sum_{j<i} x_j`.
pub fn tight_solution_ranking(n: usize) -> Result<Vec<f64>> {
    check_recurrence_size(n)?;
    let nf = n as f64;
    let scale = nf / (nf + 1.0);
    let mut prefix = 0.0;
    Ok((0..n)
        .map(|_| {
            let x = (1.0 - prefix / nf) * scale;
            prefix += x;
            x
        })
        .collect())
}

/// Optimum of the toy LP: `x_1 = 1`, then `1 - x_i = (1/n) sum_{l<i} x_l`.
pub fn tight_solution_toy(n: usize) -> Result<Vec<f64>> {
    check_recurrence_size(n)?;
    let nf = n as f64;
    let mut prefix = 0.0;
    Ok((0..n)
        .map(|_| {
            let x = 1.0 - prefix / nf;
            prefix += x;
            x
        })
        .collect())
}

/// Objective of a recurrence solution, `(1/n) sum x_i`, with compensated
/// summation so that 10^7 terms stay accurate to ~1e-16.
pub fn mean_objective(x: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for &v in x {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    (sum + c) / x.len() as f64
}

/// Optimal value through the tight recurrence (toy and RANKING only).
pub fn recurrence_value(kind: FamilyKind, n: usize) -> Result<f64> {
    let x = match kind {
        FamilyKind::Toy => tight_solution_toy(n)?,
        FamilyKind::Ranking => tight_solution_ranking(n)?,
        other => return Err(Error::invalid(format!("no tight recurrence for the {other} family"))),
    };
    Ok(mean_objective(&x))
}
