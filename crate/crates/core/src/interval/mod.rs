//! Interval-sequence analysis of the secretary continuum problem.
//!
//! A candidate optimizer is described by disjoint intervals
//! `0 < a_1 < b_1 < ... < a_K < b_K <= 1`: on each `[a_l, b_l]` the
//! constraint `u + u' t = 1` is tight, elsewhere `u` is flat. Its objective
//! reduces to
//!
//! ```text
//! g(s) = sum_l  prod_{i<l} (a_i / b_i) * a_l * ln(b_l / a_l).
//! ```

mod search;

pub use search::{search_best, SearchResult};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::variational::Trajectory;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSequence {
    points: Vec<f64>,
}

impl IntervalSequence {
    /// `points = [a_1, b_1, ..., a_K, b_K]`, strictly increasing in `(0, 1]`.
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() || !points.len().is_multiple_of(2) {
            return Err(Error::invalid("an interval sequence needs an even, non-zero number of points"));
        }
        if !(points[0] > 0.0 && points[points.len() - 1] <= 1.0) {
            return Err(Error::invalid("interval endpoints must lie in (0, 1]"));
        }
        if points.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
            return Err(Error::invalid("interval endpoints must be strictly increasing"));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Number of intervals `K`.
    pub fn len(&self) -> usize {
        self.points.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.chunks_exact(2).map(|c| (c[0], c[1]))
    }
}

/// `g(s)` for a validated sequence.
pub fn objective_g(s: &IntervalSequence) -> f64 {
    objective_raw(s.points())
}

/// Formula evaluation without validation; the grid search calls this in its
/// inner loop on sequences it constructs to be valid.
pub(crate) fn objective_raw(points: &[f64]) -> f64 {
    let mut carry = 1.0;
    let mut total = 0.0;
    for c in points.chunks_exact(2) {
        let (a, b) = (c[0], c[1]);
        total += carry * a * (b / a).ln();
        carry *= a / b;
    }
    total
}

/// The profile `u_s` induced by an interval sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalProfile {
    sequence: IntervalSequence,
    /// `prod_{i<l} (a_i/b_i) * a_l`, so that `u = 1 - coeff / t` on interval `l`.
    coeffs: Vec<f64>,
}

pub fn reconstruct_u(s: &IntervalSequence) -> IntervalProfile {
    let mut carry = 1.0;
    let coeffs = s
        .intervals()
        .map(|(a, b)| {
            let c = carry * a;
            carry *= a / b;
            c
        })
        .collect();
    IntervalProfile { sequence: s.clone(), coeffs }
}

impl IntervalProfile {
    pub fn sequence(&self) -> &IntervalSequence {
        &self.sequence
    }

    pub fn value(&self, t: f64) -> f64 {
        let mut u = 0.0;
        for ((a, b), c) in self.sequence.intervals().zip(&self.coeffs) {
            if t < a {
                break;
            }
            u = 1.0 - c / t.min(b);
        }
        u
    }

    pub fn derivative(&self, t: f64) -> f64 {
        for ((a, b), c) in self.sequence.intervals().zip(&self.coeffs) {
            if t >= a && t <= b {
                return c / (t * t);
            }
        }
        0.0
    }

    /// Residual of `u + u' t = 1` at `t`, meaningful inside an interval.
    pub fn tight_residual(&self, t: f64) -> f64 {
        self.value(t) + self.derivative(t) * t - 1.0
    }

    pub fn sample(&self, grid: Vec<f64>) -> Trajectory {
        Trajectory::from_fn(grid, |t| self.value(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variational::{ContinuumProfile, ProfileTag};
    use crate::INV_E;

    fn seq(p: &[f64]) -> IntervalSequence {
        IntervalSequence::new(p.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(IntervalSequence::new(vec![]).is_err());
        assert!(IntervalSequence::new(vec![0.2]).is_err());
        assert!(IntervalSequence::new(vec![0.0, 0.5]).is_err());
        assert!(IntervalSequence::new(vec![0.5, 0.5]).is_err());
        assert!(IntervalSequence::new(vec![0.2, 0.5, 0.4, 0.9]).is_err());
        assert!(IntervalSequence::new(vec![0.2, 1.1]).is_err());
        assert!(IntervalSequence::new(vec![0.2, f64::NAN]).is_err());
        assert_eq!(seq(&[0.1, 0.2, 0.3, 1.0]).len(), 2);
    }

    #[test]
    fn optimal_sequence_value() {
        assert!((objective_g(&seq(&[INV_E, 1.0])) - INV_E).abs() < 1e-16);
    }

    #[test]
    fn vanishing_interval() {
        let v = objective_g(&seq(&[0.4, 0.4 + 1e-12]));
        assert!(v.abs() < 1e-11);
    }

    #[test]
    fn two_interval_value() {
        let v = objective_g(&seq(&[0.2, 0.5, 0.6, 1.0]));
        let expected = 0.2 * 2.5f64.ln() + 0.4 * 0.6 * (1.0 / 0.6f64).ln();
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.305_856).abs() < 1e-6);
    }

    #[test]
    fn profile_matches_secretary_optimizer() {
        let u = reconstruct_u(&seq(&[INV_E, 1.0]));
        let star = ContinuumProfile::new(ProfileTag::SecretaryU);
        for k in 0..=100 {
            let t = k as f64 / 100.0;
            assert!((u.value(t) - star.value(t)).abs() < 1e-15, "t={t}");
        }
    }

    #[test]
    fn profile_shape() {
        let u = reconstruct_u(&seq(&[0.2, 0.5, 0.6, 0.9]));
        assert_eq!(u.value(0.1), 0.0);
        assert_eq!(u.value(0.2), 0.0);
        // flat between intervals and continuous at their ends
        assert!((u.value(0.55) - u.value(0.5)).abs() < 1e-15);
        assert!((u.value(0.6) - u.value(0.5)).abs() < 1e-15);
        assert!((u.value(0.95) - u.value(0.9)).abs() < 1e-15);
        assert_eq!(u.derivative(0.55), 0.0);
        for t in [0.25, 0.4, 0.61, 0.8] {
            assert!(u.tight_residual(t).abs() < 1e-14);
        }
        let h = u.sample((0..=1000).map(|k| k as f64 / 1000.0).collect());
        assert!(h.values.windows(2).all(|w| w[1] >= w[0]));
        let half = reconstruct_u(&seq(&[0.5, 1.0]));
        assert!((half.value(1.0) - 0.5).abs() < 1e-15);
    }
}
