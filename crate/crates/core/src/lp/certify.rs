//! Optimality certificates from LP duality.
//!
//! Given a primal point `x` and row multipliers `y`, the bound multipliers
//! are recovered from the reduced costs `d = c - A^T y` (positive part on the
//! lower bound, negative part on the upper bound). The certificate then
//! checks primal feasibility, dual sign feasibility, complementary slackness
//! and the gap between the two objectives.

use serde::Serialize;

use super::feasibility::check_feasibility;
use super::model::{DenseLp, Relation, Sense};
use super::simplex::{LpSolution, SolveStatus};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// `|primal_objective - dual_objective|`.
    pub gap: f64,
    pub max_primal_violation: f64,
    pub max_dual_violation: f64,
    pub max_complementarity: f64,
    pub passed: bool,
}

/// Certify `sol` against `lp`. The gap is compared relatively,
/// `gap <= tol * (1 + |objective|)`; the residuals absolutely.
pub fn certify(lp: &DenseLp, sol: &LpSolution, tol: f64) -> Result<Certificate> {
    if sol.status != SolveStatus::Optimal {
        return Err(Error::NotOptimal(sol.status));
    }
    if sol.x.len() != lp.n_vars() {
        return Err(Error::LengthMismatch { expected: lp.n_vars(), got: sol.x.len() });
    }
    if sol.dual.len() != lp.n_rows() {
        return Err(Error::LengthMismatch { expected: lp.n_rows(), got: sol.dual.len() });
    }
    let mut cert = certificate_parts(lp, &sol.x, &sol.dual);
    cert.passed = cert.gap <= tol * (1.0 + cert.primal_objective.abs())
        && cert.max_complementarity <= tol
        && cert.max_primal_violation <= tol
        && cert.max_dual_violation <= tol;
    Ok(cert)
}

/// Residuals of the pair `(x, dual)`; `passed` is left false.
pub(crate) fn certificate_parts(lp: &DenseLp, x: &[f64], dual: &[f64]) -> Certificate {
    // Work in minimization form.
    let s = match lp.sense() {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let y: Vec<f64> = dual.iter().map(|v| s * v).collect();

    let mut max_dual_violation = 0.0f64;
    let mut max_complementarity = 0.0f64;
    let mut dual_obj = 0.0;

    let mut d: Vec<f64> = lp.objective().iter().map(|c| s * c).collect();
    for (r, row) in lp.rows().iter().enumerate() {
        let yr = y[r];
        let sign_violation = match lp.relations()[r] {
            Relation::Le => yr.max(0.0),
            Relation::Ge => (-yr).max(0.0),
            Relation::Eq => 0.0,
        };
        max_dual_violation = max_dual_violation.max(sign_violation);
        dual_obj += yr * lp.rhs()[r];
        let activity: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum();
        max_complementarity = max_complementarity.max((yr * (activity - lp.rhs()[r])).abs());
        if yr != 0.0 {
            for (dj, a) in d.iter_mut().zip(row) {
                *dj -= yr * a;
            }
        }
    }
    for (j, &dj) in d.iter().enumerate() {
        let (l, u) = (lp.var_lower()[j], lp.var_upper()[j]);
        if dj > 0.0 {
            dual_obj += dj * l;
            max_complementarity = max_complementarity.max((dj * (x[j] - l)).abs());
        } else if dj < 0.0 {
            if u.is_finite() {
                dual_obj += dj * u;
                max_complementarity = max_complementarity.max((dj * (u - x[j])).abs());
            } else {
                max_dual_violation = max_dual_violation.max(-dj);
            }
        }
    }

    let primal_min: f64 = lp.objective().iter().zip(x).map(|(c, v)| s * c * v).sum();
    let max_primal_violation =
        check_feasibility(lp, x, 0.0).map(|r| r.max_violation).unwrap_or(f64::INFINITY);
    Certificate {
        primal_objective: s * primal_min,
        dual_objective: s * dual_obj,
        gap: (primal_min - dual_obj).abs(),
        max_primal_violation,
        max_dual_violation,
        max_complementarity,
        passed: false,
    }
}
