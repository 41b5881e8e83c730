use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    pub fn as_str(self) -> &'static str {
        match self {
            Sense::Minimize => "min",
            Sense::Maximize => "max",
        }
    }
}

impl FromStr for Sense {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" | "minimize" => Ok(Sense::Minimize),
            "max" | "maximize" => Ok(Sense::Maximize),
            other => Err(Error::invalid(format!("unknown sense `{other}`"))),
        }
    }
}

/// Relation between a row activity and its right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }

    /// Amount by which `activity` fails the relation against `rhs` (0 if satisfied).
    pub fn violation(self, activity: f64, rhs: f64) -> f64 {
        match self {
            Relation::Le => (activity - rhs).max(0.0),
            Relation::Ge => (rhs - activity).max(0.0),
            Relation::Eq => (activity - rhs).abs(),
        }
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "<=" => Ok(Relation::Le),
            ">=" => Ok(Relation::Ge),
            "=" | "==" => Ok(Relation::Eq),
            other => Err(Error::invalid(format!("unknown relation `{other}`"))),
        }
    }
}

/// Which constructor produced an LP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyTag {
    Toy,
    Balance,
    Ranking,
    Secretary,
    Custom,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyTag::Toy => "toy",
            FamilyTag::Balance => "balance",
            FamilyTag::Ranking => "ranking",
            FamilyTag::Secretary => "secretary",
            FamilyTag::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// A linear program in explicit dense row form:
///
/// ```text
/// optimize   objective . x
/// subject to rows[r] . x  (relations[r])  rhs[r]
///            var_lower <= x <= var_upper
/// ```
///
/// Lower bounds must be finite; upper bounds may be `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLp {
    sense: Sense,
    objective: Vec<f64>,
    rows: Vec<Vec<f64>>,
    relations: Vec<Relation>,
    rhs: Vec<f64>,
    var_lower: Vec<f64>,
    var_upper: Vec<f64>,
    family: Option<FamilyTag>,
}

impl DenseLp {
    /// New LP with no rows and every variable bounded to `[0, +inf)`.
    pub fn new(sense: Sense, objective: Vec<f64>) -> Result<Self> {
        if objective.is_empty() {
            return Err(Error::invalid("an LP needs at least one variable"));
        }
        if let Some(j) = objective.iter().position(|c| !c.is_finite()) {
            return Err(Error::invalid(format!("objective coefficient {j} is not finite")));
        }
        let n = objective.len();
        Ok(Self {
            sense,
            objective,
            rows: Vec::new(),
            relations: Vec::new(),
            rhs: Vec::new(),
            var_lower: vec![0.0; n],
            var_upper: vec![f64::INFINITY; n],
            family: None,
        })
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Result<()> {
        if coeffs.len() != self.n_vars() {
            return Err(Error::LengthMismatch { expected: self.n_vars(), got: coeffs.len() });
        }
        if coeffs.iter().any(|a| !a.is_finite()) || !rhs.is_finite() {
            return Err(Error::invalid(format!("row {} has a non-finite entry", self.rows.len())));
        }
        self.rows.push(coeffs);
        self.relations.push(relation);
        self.rhs.push(rhs);
        Ok(())
    }

    pub fn set_bounds(&mut self, lower: Vec<f64>, upper: Vec<f64>) -> Result<()> {
        let n = self.n_vars();
        for v in [&lower, &upper] {
            if v.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: v.len() });
            }
        }
        for j in 0..n {
            let (l, u) = (lower[j], upper[j]);
            if !l.is_finite() {
                return Err(Error::invalid(format!("lower bound of x[{j}] must be finite")));
            }
            if u.is_nan() || u == f64::NEG_INFINITY {
                return Err(Error::invalid(format!("upper bound of x[{j}] is invalid")));
            }
            if l > u {
                return Err(Error::invalid(format!("x[{j}] has lower bound {l} above upper bound {u}")));
            }
        }
        self.var_lower = lower;
        self.var_upper = upper;
        Ok(())
    }

    pub fn with_family(mut self, tag: FamilyTag) -> Self {
        self.family = Some(tag);
        self
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.rows[r]
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn var_lower(&self) -> &[f64] {
        &self.var_lower
    }

    pub fn var_upper(&self) -> &[f64] {
        &self.var_upper
    }

    pub fn family(&self) -> Option<FamilyTag> {
        self.family
    }

    /// `objective . x` in the caller's sense.
    pub fn objective_at(&self, x: &[f64]) -> f64 {
        dot(&self.objective, x)
    }

    /// Multiply row `r` and its right-hand side by `factor` (> 0).
    pub fn scale_row(&mut self, r: usize, factor: f64) -> Result<()> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::invalid("row scale factor must be positive and finite"));
        }
        self.rows[r].iter_mut().for_each(|a| *a *= factor);
        self.rhs[r] *= factor;
        Ok(())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(DenseLp::new(Sense::Minimize, vec![]).is_err());
        assert!(DenseLp::new(Sense::Minimize, vec![f64::NAN]).is_err());
        let mut lp = DenseLp::new(Sense::Minimize, vec![1.0, 2.0]).unwrap();
        assert!(lp.add_row(vec![1.0], Relation::Le, 1.0).is_err());
        assert!(lp.add_row(vec![1.0, f64::INFINITY], Relation::Le, 1.0).is_err());
        assert!(lp.add_row(vec![1.0, 1.0], Relation::Le, f64::NAN).is_err());
        assert!(lp.set_bounds(vec![0.0, 2.0], vec![1.0, 1.0]).is_err());
        assert!(lp.set_bounds(vec![f64::NEG_INFINITY, 0.0], vec![1.0, 1.0]).is_err());
        assert_eq!(lp.n_rows(), 0);
    }

    #[test]
    fn relation_violation() {
        assert_eq!(Relation::Le.violation(2.0, 1.0), 1.0);
        assert_eq!(Relation::Le.violation(0.5, 1.0), 0.0);
        assert_eq!(Relation::Ge.violation(0.5, 1.0), 0.5);
        assert_eq!(Relation::Eq.violation(0.5, 1.0), 0.5);
    }
}
