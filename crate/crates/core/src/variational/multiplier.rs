//! Numeric check of the Lagrange-multiplier conditions for the secretary
//! continuum problem written with slack functions,
//!
//! ```text
//! u + w^2 t + v^2 = 1,   u' = w^2,   u(0) = 0,
//! ```
//!
//! whose optimizers must satisfy
//!
//! ```text
//! mu2' - mu1 = 0,   v mu1 = 0,   w (mu2 - t (1 + mu1)) = 0.
//! ```
//!
//! Given samples of a candidate `u`, the slacks are recovered from finite
//! differences and the multipliers are constructed explicitly: where `u`
//! increases, `mu1 = -ln t - 1` and `mu2 = t (1 + mu1)`; where it is flat,
//! `mu1 = 0` and `mu2` is held at its value from the adjacent active region.
//! The constant in `mu1` is fixed by requiring `mu1` to vanish where the
//! optimizer starts increasing (at `t = 1/e`).
//!
//! The products with `v` and `w` are evaluated in squared form (`v^2 mu1`,
//! `w^2 (...)`), which vanish exactly when the originals do and do not
//! amplify finite-difference noise through a square root. `mu2'` is compared
//! with the average of `mu1` over each grid cell, a difference centered on
//! the cell midpoint.

use serde::Serialize;

use super::ode::Trajectory;
use crate::error::{Error, Result};
use crate::INV_E;

/// `u' > ACTIVITY_THRESHOLD` marks the active region.
pub const ACTIVITY_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierProfile {
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub u_dot: Vec<f64>,
    pub w_sq: Vec<f64>,
    pub v_sq: Vec<f64>,
    pub mu1: Vec<f64>,
    pub mu2: Vec<f64>,
    pub active: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierReport {
    /// `max |mu2' - mu1|`.
    pub stationarity: f64,
    /// `max |v^2 mu1|`.
    pub slack_v: f64,
    /// `max |w^2 (mu2 - t (1 + mu1))|`.
    pub slack_w: f64,
    /// How far `v^2` or `w^2` dips below zero (0 if neither does).
    pub negative_square: f64,
    pub max_residual: f64,
    /// First grid point of the active region, if there is one.
    pub active_start: Option<f64>,
    pub tol: f64,
    pub passed: bool,
}

pub fn multiplier_check(candidate: &Trajectory, tol: f64) -> Result<(MultiplierProfile, MultiplierReport)> {
    let grid = &candidate.t;
    let u = &candidate.values;
    let n = grid.len();
    if n != u.len() {
        return Err(Error::LengthMismatch { expected: n, got: u.len() });
    }
    if n < 3 {
        return Err(Error::invalid("multiplier check needs at least 3 grid points"));
    }
    if !(grid[0] > 0.0 && grid[n - 1] <= 1.0) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("grid must be strictly increasing inside (0, 1]"));
    }
    if let Some(k) = u.windows(2).position(|w| w[1] < w[0]) {
        return Err(Error::invalid(format!(
            "candidate decreases between t={} and t={}",
            grid[k],
            grid[k + 1]
        )));
    }

    let u_dot = derivative(grid, u);
    let w_sq = u_dot.clone();
    let v_sq: Vec<f64> = (0..n).map(|k| 1.0 - u[k] - u_dot[k] * grid[k]).collect();
    let active: Vec<bool> = u_dot.iter().map(|&d| d > ACTIVITY_THRESHOLD).collect();

    let mu1: Vec<f64> = (0..n).map(|k| if active[k] { -grid[k].ln() - 1.0 } else { 0.0 }).collect();
    let mut mu2: Vec<f64> = (0..n).map(|k| grid[k] * (1.0 + mu1[k])).collect();
    hold_inactive_runs(&active, &mut mu2);

    let stationarity = (0..n - 1)
        .map(|k| ((mu2[k + 1] - mu2[k]) / (grid[k + 1] - grid[k]) - 0.5 * (mu1[k] + mu1[k + 1])).abs())
        .fold(0.0, f64::max);
    let slack_v = (0..n).map(|k| (v_sq[k] * mu1[k]).abs()).fold(0.0, f64::max);
    let slack_w = (0..n)
        .map(|k| (w_sq[k] * (mu2[k] - grid[k] * (1.0 + mu1[k]))).abs())
        .fold(0.0, f64::max);
    let negative_square = v_sq.iter().chain(&w_sq).map(|&s| (-s).max(0.0)).fold(0.0, f64::max);

    let max_residual = stationarity.max(slack_v).max(slack_w).max(negative_square);
    let report = MultiplierReport {
        stationarity,
        slack_v,
        slack_w,
        negative_square,
        max_residual,
        active_start: active.iter().position(|&a| a).map(|k| grid[k]),
        tol,
        passed: max_residual <= tol,
    };
    let profile = MultiplierProfile { grid: grid.clone(), u: u.clone(), u_dot, w_sq, v_sq, mu1, mu2, active };
    Ok((profile, report))
}

/// Flat stretches take `mu2` from the preceding active point, or from the
/// following one when no active point precedes them.
fn hold_inactive_runs(active: &[bool], mu2: &mut [f64]) {
    let n = active.len();
    let mut k = 0;
    while k < n {
        if active[k] {
            k += 1;
            continue;
        }
        let start = k;
        while k < n && !active[k] {
            k += 1;
        }
        let held = if start > 0 {
            mu2[start - 1]
        } else if k < n {
            mu2[k]
        } else {
            0.0
        };
        mu2[start..k].iter_mut().for_each(|m| *m = held);
    }
}

/// Second-order finite differences on a possibly non-uniform grid:
/// three-point centered in the interior, three-point one-sided at the ends.
fn derivative(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len();
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        let h1 = t[k] - t[k - 1];
        let h2 = t[k + 1] - t[k];
        d[k] = -h2 / (h1 * (h1 + h2)) * y[k - 1] + (h2 - h1) / (h1 * h2) * y[k] + h1 / (h2 * (h1 + h2)) * y[k + 1];
    }
    let (h1, h2) = (t[1] - t[0], t[2] - t[1]);
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1] - h1 / (h2 * (h1 + h2)) * y[2];
    let (h1, h2) = (t[n - 2] - t[n - 3], t[n - 1] - t[n - 2]);
    d[n - 1] = h2 / (h1 * (h1 + h2)) * y[n - 3] - (h1 + h2) / (h1 * h2) * y[n - 2] + (2.0 * h2 + h1) / (h2 * (h1 + h2)) * y[n - 1];
    d
}

/// `points` grid nodes in `(0, 1]`, ending at 1, that contain every
/// breakpoint and are uniformly spaced between consecutive breakpoints.
pub fn conforming_grid(points: usize, breakpoints: &[f64]) -> Result<Vec<f64>> {
    let mut knots: Vec<f64> = breakpoints.iter().copied().filter(|&b| b > 0.0 && b < 1.0).collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    knots.insert(0, 0.0);
    knots.push(1.0);
    let pieces = knots.len() - 1;
    if points < 3 * pieces {
        return Err(Error::invalid(format!("grid needs at least {} points", 3 * pieces)));
    }
    let mut grid = Vec::with_capacity(points);
    let mut assigned = 0;
    for (p, w) in knots.windows(2).enumerate() {
        let count = if p + 1 == pieces {
            points - assigned
        } else {
            ((w[1] - w[0]) * points as f64).round().max(3.0) as usize
        };
        assigned += count;
        let h = (w[1] - w[0]) / count as f64;
        grid.extend((1..count).map(|k| w[0] + k as f64 * h));
        grid.push(w[1]);
    }
    Ok(grid)
}

/// The secretary optimizer `u*` plus `perturbation * t (1 - t)`, sampled on
/// a grid conforming to its kink at `1/e`.
pub fn secretary_candidate(points: usize, perturbation: f64) -> Result<Trajectory> {
    let grid = conforming_grid(points, &[INV_E])?;
    Ok(Trajectory::from_fn(grid, |t| {
        let base = if t <= INV_E { 0.0 } else { 1.0 - INV_E / t };
        base + perturbation * t * (1.0 - t)
    }))
}
