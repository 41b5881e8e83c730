//! Dense-tableau primal simplex on the bounded-variable standard form.
//!
//! Every row becomes an equality by adding a slack (`<=`) or surplus (`>=`)
//! column; rows whose starting residual has the wrong sign get an
//! artificial column and are handled by a phase-1 pass. Variables are shifted
//! so that their lower bound is zero, and finite upper bounds are handled in
//! the ratio test (bound flips) rather than as extra rows.
//!
//! Entering and leaving choices follow Bland's rule (lowest index), which
//! makes every solve deterministic and prevents cycling on the highly
//! degenerate family LPs.

use serde::{Deserialize, Serialize};

use super::certify::certificate_parts;
use super::feasibility::check_feasibility;
use super::model::{DenseLp, Relation, Sense};
use crate::error::{Error, Result};

/// Absolute primal feasibility tolerance.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Smallest tableau entry accepted as a pivot.
pub const PIVOT_TOL: f64 = 1e-10;
/// Relative duality-gap tolerance used when certifying optimality.
pub const CERTIFICATION_TOL: f64 = 1e-8;

const REDUCED_COST_TOL: f64 = 1e-11;
const RATIO_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::IterationLimit => "iteration_limit",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Cap on pivots plus bound flips across both phases.
    pub max_iterations: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { max_iterations: 1_000_000 }
    }
}

/// Outcome of [`solve`].
///
/// `dual` holds one multiplier per row in the caller's sense: at an optimum
/// `objective = A^T dual + z` where `z` are bound multipliers. For a
/// minimization this means `<=` rows carry non-positive and `>=` rows
/// non-negative multipliers; the signs flip for a maximization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: SolveStatus,
    pub x: Vec<f64>,
    pub objective_value: f64,
    pub dual: Vec<f64>,
    pub max_primal_violation: f64,
    pub duality_gap: f64,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

pub fn solve(lp: &DenseLp, options: SolveOptions) -> Result<LpSolution> {
    if lp.n_vars() == 0 {
        return Err(Error::invalid("an LP needs at least one variable"));
    }
    let mut tab = Tableau::build(lp);
    let mut iterations = 0;

    let phase1 = tab.run(options.max_iterations, &mut iterations);
    if phase1 == Phase::IterationLimit {
        return Ok(tab.unfinished(lp, SolveStatus::IterationLimit, iterations));
    }
    if tab.artificial_mass() > FEASIBILITY_TOL * (1.0 + tab.rhs_scale) {
        return Ok(tab.unfinished(lp, SolveStatus::Infeasible, iterations));
    }
    tab.drive_out_artificials();
    tab.start_phase2(lp);

    match tab.run(options.max_iterations, &mut iterations) {
        Phase::IterationLimit => Ok(tab.unfinished(lp, SolveStatus::IterationLimit, iterations)),
        Phase::Unbounded => Ok(tab.unfinished(lp, SolveStatus::Unbounded, iterations)),
        Phase::Optimal => {
            let x = tab.primal(lp);
            let dual = tab.dual(lp);
            let cert = certificate_parts(lp, &x, &dual);
            let feas = check_feasibility(lp, &x, FEASIBILITY_TOL)?;
            Ok(LpSolution {
                status: SolveStatus::Optimal,
                objective_value: lp.objective_at(&x),
                x,
                dual,
                max_primal_violation: feas.max_violation,
                duality_gap: cert.gap,
                iterations,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Optimal,
    Unbounded,
    IterationLimit,
}

struct Tableau {
    m: usize,
    n_struct: usize,
    ncols: usize,
    width: usize,
    /// Row-major `m x (ncols + 1)`; the last column holds basic values.
    a: Vec<f64>,
    /// Reduced costs of the current phase.
    d: Vec<f64>,
    upper: Vec<f64>,
    at_upper: Vec<bool>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    blocked: Vec<bool>,
    is_artificial: Vec<bool>,
    /// Column that formed the identity basis in row `r` at start.
    initial_col: Vec<usize>,
    row_sign: Vec<f64>,
    rhs_scale: f64,
}

impl Tableau {
    fn build(lp: &DenseLp) -> Self {
        let m = lp.n_rows();
        let n = lp.n_vars();
        let lower = lp.var_lower();

        let shifted_rhs: Vec<f64> = (0..m)
            .map(|r| lp.rhs()[r] - lp.row(r).iter().zip(lower).map(|(a, l)| a * l).sum::<f64>())
            .collect();

        let mut logical = vec![None; m];
        let mut ncols = n;
        for (r, rel) in lp.relations().iter().enumerate() {
            if *rel != Relation::Eq {
                logical[r] = Some(ncols);
                ncols += 1;
            }
        }

        // Decide per row whether the slack/surplus can start basic.
        let mut row_sign = vec![1.0; m];
        let mut needs_art = vec![false; m];
        for r in 0..m {
            let b = shifted_rhs[r];
            match lp.relations()[r] {
                Relation::Le if b >= 0.0 => {}
                Relation::Ge if b <= 0.0 => row_sign[r] = -1.0,
                _ => {
                    row_sign[r] = if b < 0.0 { -1.0 } else { 1.0 };
                    needs_art[r] = true;
                }
            }
        }
        let n_art = needs_art.iter().filter(|&&x| x).count();
        let first_art = ncols;
        ncols += n_art;
        let width = ncols + 1;

        let mut a = vec![0.0; m * width];
        let mut upper = vec![f64::INFINITY; ncols];
        for j in 0..n {
            upper[j] = lp.var_upper()[j] - lower[j];
        }
        let mut is_artificial = vec![false; ncols];
        let mut initial_col = vec![0; m];
        let mut next_art = first_art;
        for r in 0..m {
            let s = row_sign[r];
            let row = &mut a[r * width..(r + 1) * width];
            for (dst, src) in row[..n].iter_mut().zip(lp.row(r)) {
                *dst = s * src;
            }
            if let Some(c) = logical[r] {
                let coeff = if lp.relations()[r] == Relation::Le { 1.0 } else { -1.0 };
                row[c] = s * coeff;
                initial_col[r] = c;
            }
            if needs_art[r] {
                row[next_art] = 1.0;
                is_artificial[next_art] = true;
                initial_col[r] = next_art;
                next_art += 1;
            }
            row[ncols] = s * shifted_rhs[r];
        }

        let mut is_basic = vec![false; ncols];
        for &c in &initial_col {
            is_basic[c] = true;
        }

        // Phase-1 reduced costs: minimize the sum of artificials.
        let mut d = vec![0.0; ncols];
        for (j, dj) in d.iter_mut().enumerate() {
            if is_artificial[j] {
                *dj = 1.0;
            }
        }
        for r in 0..m {
            if needs_art[r] {
                let row = &a[r * width..r * width + ncols];
                for (dj, arj) in d.iter_mut().zip(row) {
                    *dj -= arj;
                }
            }
        }

        let rhs_scale = shifted_rhs.iter().fold(0.0f64, |acc, b| acc.max(b.abs()));
        Tableau {
            m,
            n_struct: n,
            ncols,
            width,
            a,
            d,
            upper,
            at_upper: vec![false; ncols],
            basis: initial_col.clone(),
            is_basic,
            blocked: vec![false; ncols],
            is_artificial,
            initial_col,
            row_sign,
            rhs_scale,
        }
    }

    #[inline]
    fn beta(&self, r: usize) -> f64 {
        self.a[r * self.width + self.ncols]
    }

    fn artificial_mass(&self) -> f64 {
        (0..self.m)
            .filter(|&r| self.is_artificial[self.basis[r]])
            .map(|r| self.beta(r).abs())
            .sum()
    }

    fn entering(&self) -> Option<usize> {
        (0..self.ncols).find(|&j| {
            !self.is_basic[j]
                && !self.blocked[j]
                && self.upper[j] > 0.0
                && if self.at_upper[j] {
                    self.d[j] > REDUCED_COST_TOL
                } else {
                    self.d[j] < -REDUCED_COST_TOL
                }
        })
    }

    fn run(&mut self, max_iterations: usize, iterations: &mut usize) -> Phase {
        loop {
            let Some(j) = self.entering() else {
                return Phase::Optimal;
            };
            if *iterations >= max_iterations {
                return Phase::IterationLimit;
            }
            *iterations += 1;

            let dir = if self.at_upper[j] { -1.0 } else { 1.0 };
            let mut theta = self.upper[j];
            // (row, leaving goes to its upper bound)
            let mut leaving: Option<(usize, bool)> = None;
            for r in 0..self.m {
                let alpha = dir * self.a[r * self.width + j];
                let bvar = self.basis[r];
                let beta = self.beta(r);
                let (t, to_upper) = if alpha > PIVOT_TOL {
                    (beta / alpha, false)
                } else if alpha < -PIVOT_TOL && self.upper[bvar].is_finite() {
                    ((self.upper[bvar] - beta) / -alpha, true)
                } else {
                    continue;
                };
                let t = t.max(0.0);
                let better = match leaving {
                    None => t < theta - RATIO_TIE_TOL,
                    Some((lr, _)) => {
                        t < theta - RATIO_TIE_TOL
                            || (t <= theta + RATIO_TIE_TOL && bvar < self.basis[lr])
                    }
                };
                if better {
                    theta = t;
                    leaving = Some((r, to_upper));
                }
            }
            if theta.is_infinite() {
                return Phase::Unbounded;
            }

            let step = dir * theta;
            if step != 0.0 {
                let (w, nc) = (self.width, self.ncols);
                for r in 0..self.m {
                    let arj = self.a[r * w + j];
                    if arj != 0.0 {
                        self.a[r * w + nc] -= step * arj;
                    }
                }
            }

            match leaving {
                None => self.at_upper[j] = !self.at_upper[j],
                Some((r, to_upper)) => {
                    let start = if self.at_upper[j] { self.upper[j] } else { 0.0 };
                    let leaving_var = self.basis[r];
                    self.pivot(r, j);
                    self.a[r * self.width + self.ncols] = start + step;
                    self.at_upper[leaving_var] = to_upper;
                }
            }
        }
    }

    /// Basis change on `(r, j)`. Eliminates column `j` from every other row
    /// and from the reduced costs; the basic-value column is left to the caller.
    fn pivot(&mut self, r: usize, j: usize) {
        let (w, nc) = (self.width, self.ncols);
        let piv = self.a[r * w + j];
        {
            let prow = &mut self.a[r * w..r * w + nc];
            for v in prow.iter_mut() {
                *v /= piv;
            }
            prow[j] = 1.0;
        }
        let prow: Vec<f64> = self.a[r * w..r * w + nc].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.a[i * w + j];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.a[i * w..i * w + nc];
            for (v, p) in row.iter_mut().zip(&prow) {
                *v -= f * p;
            }
            row[j] = 0.0;
        }
        let f = self.d[j];
        if f != 0.0 {
            for (v, p) in self.d.iter_mut().zip(&prow) {
                *v -= f * p;
            }
            self.d[j] = 0.0;
        }

        let old = self.basis[r];
        self.is_basic[old] = false;
        self.is_basic[j] = true;
        self.at_upper[j] = false;
        self.basis[r] = j;
    }

    /// Swap zero-level artificials out of the basis where some real column
    /// can take their place. Rows where none can are redundant.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.m {
            if !self.is_artificial[self.basis[r]] {
                continue;
            }
            let row = &self.a[r * self.width..r * self.width + self.ncols];
            let mut best: Option<(usize, f64)> = None;
            for (j, &v) in row.iter().enumerate() {
                if self.is_basic[j] || self.is_artificial[j] || v.abs() <= 1e-9 {
                    continue;
                }
                if best.is_none_or(|(_, bv)| v.abs() > bv) {
                    best = Some((j, v.abs()));
                }
            }
            if let Some((j, _)) = best {
                let value = if self.at_upper[j] { self.upper[j] } else { 0.0 };
                let leaving_var = self.basis[r];
                self.pivot(r, j);
                self.a[r * self.width + self.ncols] = value;
                self.at_upper[leaving_var] = false;
            }
        }
    }

    fn start_phase2(&mut self, lp: &DenseLp) {
        let sign = match lp.sense() {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        for j in 0..self.ncols {
            self.blocked[j] = self.is_artificial[j];
            self.d[j] = if j < self.n_struct { sign * lp.objective()[j] } else { 0.0 };
        }
        for r in 0..self.m {
            let b = self.basis[r];
            let cb = if b < self.n_struct { sign * lp.objective()[b] } else { 0.0 };
            if cb == 0.0 {
                continue;
            }
            let row = &self.a[r * self.width..r * self.width + self.ncols];
            for (dj, arj) in self.d.iter_mut().zip(row) {
                *dj -= cb * arj;
            }
        }
        for r in 0..self.m {
            self.d[self.basis[r]] = 0.0;
        }
    }

    fn primal(&self, lp: &DenseLp) -> Vec<f64> {
        let mut y: Vec<f64> = (0..self.n_struct)
            .map(|j| if self.at_upper[j] { self.upper[j] } else { 0.0 })
            .collect();
        for r in 0..self.m {
            let b = self.basis[r];
            if b < self.n_struct {
                y[b] = self.beta(r);
            }
        }
        y.iter()
            .enumerate()
            .map(|(j, v)| {
                let (l, u) = (lp.var_lower()[j], lp.var_upper()[j]);
                let x = l + v;
                // Round-off can leave a basic value a hair outside its box.
                if x < l && x > l - FEASIBILITY_TOL {
                    l
                } else if x > u && x < u + FEASIBILITY_TOL {
                    u
                } else {
                    x
                }
            })
            .collect()
    }

    fn dual(&self, lp: &DenseLp) -> Vec<f64> {
        let sense = match lp.sense() {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        (0..self.m)
            .map(|r| -sense * self.row_sign[r] * self.d[self.initial_col[r]])
            .collect()
    }

    fn unfinished(&self, lp: &DenseLp, status: SolveStatus, iterations: usize) -> LpSolution {
        let x = self.primal(lp);
        let max_primal_violation = check_feasibility(lp, &x, FEASIBILITY_TOL)
            .map(|r| r.max_violation)
            .unwrap_or(f64::INFINITY);
        LpSolution {
            status,
            objective_value: lp.objective_at(&x),
            x,
            dual: vec![0.0; self.m],
            max_primal_violation,
            duality_gap: f64::INFINITY,
            iterations,
        }
    }
}
