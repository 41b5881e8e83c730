//! Fixed-step classical Runge-Kutta integration of the tight-constraint ODEs.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{INV_E, ONE_MINUS_INV_E};

/// Samples of a scalar function on an increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub values: Vec<f64>,
}

impl Trajectory {
    pub fn from_fn<F: Fn(f64) -> f64>(grid: Vec<f64>, f: F) -> Self {
        let values = grid.iter().map(|&t| f(t)).collect();
        Self { t: grid, values }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// Two-column CSV with a `t,value` header.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,value")?;
        for (t, v) in self.t.iter().zip(&self.values) {
            writeln!(out, "{t},{v}")?;
        }
        Ok(())
    }
}

/// Classical RK4 for `y' = f(t, y)` on `[t0, t1]` with `steps` equal steps.
pub fn rk4<F: Fn(f64, f64) -> f64>(f: F, t0: f64, y0: f64, t1: f64, steps: usize) -> Trajectory {
    let steps = steps.max(1);
    let h = (t1 - t0) / steps as f64;
    let mut t = Vec::with_capacity(steps + 1);
    let mut values = Vec::with_capacity(steps + 1);
    let mut y = y0;
    t.push(t0);
    values.push(y);
    for k in 0..steps {
        let tk = t0 + k as f64 * h;
        let k1 = f(tk, y);
        let k2 = f(tk + 0.5 * h, y + 0.5 * h * k1);
        let k3 = f(tk + 0.5 * h, y + 0.5 * h * k2);
        let k4 = f(tk + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t.push(t0 + (k + 1) as f64 * h);
        values.push(y);
    }
    Trajectory { t, values }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TightOde {
    /// `v + v' = t`, `v(0) = 0`.
    Balance,
    /// `u + u' = 1`, `u(0) = 0`.
    Ranking,
}

impl TightOde {
    pub fn rhs(self, t: f64, y: f64) -> f64 {
        match self {
            TightOde::Balance => t - y,
            TightOde::Ranking => 1.0 - y,
        }
    }

    pub fn closed_form(self, t: f64) -> f64 {
        match self {
            TightOde::Balance => (-t).exp_m1() + t,
            TightOde::Ranking => -(-t).exp_m1(),
        }
    }

    pub fn terminal_target(self) -> f64 {
        match self {
            TightOde::Balance => INV_E,
            TightOde::Ranking => ONE_MINUS_INV_E,
        }
    }
}

impl std::str::FromStr for TightOde {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "balance" => Ok(TightOde::Balance),
            "ranking" => Ok(TightOde::Ranking),
            other => Err(Error::invalid(format!("unknown ODE kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdeRun {
    pub kind: TightOde,
    pub step: f64,
    pub trajectory: Trajectory,
    pub terminal: f64,
    /// `terminal - closed_form(1)`.
    pub terminal_error: f64,
    /// Largest deviation from the closed form over the grid.
    pub max_error: f64,
}

/// Integrate a tight ODE on `[0, 1]`.
///
/// The step is snapped to `1 / round(1 / step)` so the grid is uniform and
/// ends exactly at 1.
pub fn integrate_tight_ode(kind: TightOde, step: f64) -> Result<OdeRun> {
    if !(step > 0.0 && step <= 1e-2) {
        return Err(Error::invalid(format!("ODE step must lie in (0, 1e-2], got {step}")));
    }
    let steps = (1.0 / step).round() as usize;
    let trajectory = rk4(|t, y| kind.rhs(t, y), 0.0, 0.0, 1.0, steps);
    let terminal = trajectory.last().unwrap_or(0.0);
    let max_error = trajectory
        .t
        .iter()
        .zip(&trajectory.values)
        .map(|(&t, &v)| (v - kind.closed_form(t)).abs())
        .fold(0.0, f64::max);
    Ok(OdeRun {
        kind,
        step: 1.0 / steps as f64,
        terminal_error: terminal - kind.closed_form(1.0),
        terminal,
        trajectory,
        max_error,
    })
}
