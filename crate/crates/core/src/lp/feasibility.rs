use serde::Serialize;

use super::model::DenseLp;
use crate::error::{Error, Result};

/// Worst constraint and bound residuals of a candidate point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    /// Maximum over all row and bound residuals.
    pub max_violation: f64,
    pub max_row_violation: f64,
    /// Row attaining `max_row_violation`, if any row is violated at all.
    pub worst_row: Option<usize>,
    pub max_bound_violation: f64,
    /// Variables whose bounds are violated by more than the tolerance.
    pub bound_violations: Vec<usize>,
    pub tol: f64,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.max_violation <= self.tol
    }
}

pub fn check_feasibility(lp: &DenseLp, x: &[f64], tol: f64) -> Result<FeasibilityReport> {
    if x.len() != lp.n_vars() {
        return Err(Error::LengthMismatch { expected: lp.n_vars(), got: x.len() });
    }
    let mut max_row_violation = 0.0f64;
    let mut worst_row = None;
    for (r, row) in lp.rows().iter().enumerate() {
        let activity: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum();
        let v = lp.relations()[r].violation(activity, lp.rhs()[r]);
        if v > max_row_violation {
            max_row_violation = v;
            worst_row = Some(r);
        }
    }
    let mut max_bound_violation = 0.0f64;
    let mut bound_violations = Vec::new();
    for (j, &v) in x.iter().enumerate() {
        let excess = (lp.var_lower()[j] - v).max(v - lp.var_upper()[j]).max(0.0);
        max_bound_violation = max_bound_violation.max(excess);
        if excess > tol {
            bound_violations.push(j);
        }
    }
    Ok(FeasibilityReport {
        max_violation: max_row_violation.max(max_bound_violation),
        max_row_violation,
        worst_row,
        max_bound_violation,
        bound_violations,
        tol,
    })
}
