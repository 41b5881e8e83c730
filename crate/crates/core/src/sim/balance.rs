//! BALANCE on b-matching instances and the slab accounting used to audit it.
//!
//! All spend is tracked as integer assignment counts. A bidder with final
//! count `c` has spent the fraction `rho = c / b` of its unit budget. With `N`
//! slabs, it belongs to group `floor(c N / b) + 1` (a fraction exactly on a
//! boundary `i/N` joins the upper group, and a full budget is group `N + 1`)
//! and has spent `clamp(c N - (j-1) b, 0, b) / (b N)` inside slab `j`.

use serde::Serialize;

use super::SimInstance;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlabStats {
    pub n_slabs: usize,
    pub capacity: u32,
    /// Bidder counts per group `1..=N+1`.
    pub alpha: Vec<u64>,
    /// Spend per slab `1..=N`, in units of `1 / (b N)`.
    pub beta_scaled: Vec<u64>,
    /// Final assignment count per bidder.
    pub loads: Vec<u64>,
}

impl SlabStats {
    pub fn from_loads(loads: Vec<u64>, capacity: u32, n_slabs: usize) -> Result<Self> {
        if n_slabs == 0 {
            return Err(Error::invalid("slab count N must be at least 1"));
        }
        if capacity == 0 {
            return Err(Error::invalid("capacity b must be at least 1"));
        }
        let b = u64::from(capacity);
        let big_n = n_slabs as u64;
        if let Some(c) = loads.iter().find(|&&c| c > b) {
            return Err(Error::invalid(format!("load {c} exceeds capacity {b}")));
        }
        let mut alpha = vec![0u64; n_slabs + 1];
        let mut beta_scaled = vec![0u64; n_slabs];
        for &c in &loads {
            alpha[(c * big_n / b) as usize] += 1;
            for (j, beta) in beta_scaled.iter_mut().enumerate() {
                *beta += (c * big_n).saturating_sub(j as u64 * b).min(b);
            }
        }
        Ok(Self { n_slabs, capacity, alpha, beta_scaled, loads })
    }

    /// Stats built from group counts and scaled slab spend directly, e.g. to
    /// exercise the audit on hand-made data.
    pub fn from_parts(n_slabs: usize, capacity: u32, alpha: Vec<u64>, beta_scaled: Vec<u64>) -> Result<Self> {
        if alpha.len() != n_slabs + 1 {
            return Err(Error::LengthMismatch { expected: n_slabs + 1, got: alpha.len() });
        }
        if beta_scaled.len() != n_slabs {
            return Err(Error::LengthMismatch { expected: n_slabs, got: beta_scaled.len() });
        }
        Ok(Self { n_slabs, capacity, alpha, beta_scaled, loads: Vec::new() })
    }

    fn unit(&self) -> u64 {
        u64::from(self.capacity) * self.n_slabs as u64
    }

    /// Slab spend in budget units.
    pub fn beta(&self) -> Vec<f64> {
        let unit = self.unit() as f64;
        self.beta_scaled.iter().map(|&v| v as f64 / unit).collect()
    }

    /// Final spent fraction per bidder.
    pub fn rho(&self) -> Vec<f64> {
        let b = f64::from(self.capacity);
        self.loads.iter().map(|&c| c as f64 / b).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceOutcome {
    /// Matched value in budget units (assignments divided by `b`).
    pub value: f64,
    pub assignments: u64,
    pub stats: SlabStats,
}

/// Runs BALANCE: each arrival goes to the neighbor with the most remaining
/// capacity, lowest index on ties, and is dropped if every neighbor is full.
pub fn run_balance(instance: &SimInstance, n_slabs: usize) -> Result<BalanceOutcome> {
    let b = u64::from(instance.capacity());
    let mut loads = vec![0u64; instance.n_offline()];
    let mut assignments = 0;
    for nbrs in instance.arrivals() {
        let pick = nbrs
            .iter()
            .copied()
            .filter(|&u| loads[u] < b)
            .min_by_key(|&u| (loads[u], u));
        if let Some(u) = pick {
            loads[u] += 1;
            assignments += 1;
        }
    }
    let stats = SlabStats::from_loads(loads, instance.capacity(), n_slabs)?;
    Ok(BalanceOutcome { value: assignments as f64 / b as f64, assignments, stats })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlabAudit {
    pub passed: bool,
    /// First prefix `p` (1-based) where slab spend falls short of the group
    /// count.
    pub first_violation: Option<usize>,
    /// Prefix with the smallest margin, and that margin in units of `1 / (b N)`.
    pub tightest_prefix: usize,
    pub tightest_margin: i128,
}

/// Checks `sum_{j<=p} beta_j >= sum_{i<=p} alpha_i` for every `p` in `1..=N`,
/// in exact integer arithmetic.
///
/// The inequality is only guaranteed when the offline optimum exhausts every
/// budget, so the caller has to vouch for that. At finite `b` it is also only
/// guaranteed when `N` divides `b`: then a bidder below `p/N` before an
/// assignment is still at or below `p/N` after it.
pub fn slab_audit(stats: &SlabStats, opt_exhausts_budgets: bool) -> Result<SlabAudit> {
    if !opt_exhausts_budgets {
        return Err(Error::invalid(
            "slab audit requires an instance whose offline optimum exhausts every budget",
        ));
    }
    let unit = i128::from(stats.unit());
    let (mut lhs, mut rhs) = (0i128, 0i128);
    let mut first_violation = None;
    let (mut tightest_prefix, mut tightest_margin) = (0, i128::MAX);
    for p in 0..stats.n_slabs {
        lhs += i128::from(stats.beta_scaled[p]);
        rhs += i128::from(stats.alpha[p]) * unit;
        let margin = lhs - rhs;
        if margin < 0 && first_violation.is_none() {
            first_violation = Some(p + 1);
        }
        if margin < tightest_margin {
            (tightest_prefix, tightest_margin) = (p + 1, margin);
        }
    }
    Ok(SlabAudit { passed: first_violation.is_none(), first_violation, tightest_prefix, tightest_margin })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_forced_assignment() {
        let inst = SimInstance::new(1, 1, vec![vec![0]]).unwrap();
        let out = run_balance(&inst, 4).unwrap();
        assert_eq!(out.value, 1.0);
        assert_eq!(out.stats.alpha, vec![0, 0, 0, 0, 1]);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let inst = SimInstance::new(3, 2, vec![vec![2, 1], vec![1, 2], vec![0, 1, 2]]).unwrap();
        let out = run_balance(&inst, 2).unwrap();
        assert_eq!(out.stats.loads, vec![1, 1, 1]);
        let inst = SimInstance::new(2, 1, vec![vec![1, 0], vec![0]]).unwrap();
        assert_eq!(run_balance(&inst, 1).unwrap().stats.loads, vec![1, 0]);
    }

    #[test]
    fn empty_arrivals() {
        let inst = SimInstance::new(4, 3, vec![]).unwrap();
        let out = run_balance(&inst, 3).unwrap();
        assert_eq!(out.value, 0.0);
        assert_eq!(out.stats.alpha, vec![4, 0, 0, 0]);
        assert!(out.stats.beta_scaled.iter().all(|&b| b == 0));
    }

    #[test]
    fn slab_accounting() {
        // b = 4, N = 2: loads 0..=4
        let s = SlabStats::from_loads(vec![0, 1, 2, 3, 4], 4, 2).unwrap();
        // groups: c*2/4 -> 0,0,1,1,2
        assert_eq!(s.alpha, vec![2, 2, 1]);
        // slab 1 spend per bidder: min(2c, 4) = 0,2,4,4,4; slab 2: clamp(2c-4,0,4) = 0,0,0,2,4
        assert_eq!(s.beta_scaled, vec![14, 6]);
        assert_eq!(s.beta(), vec![14.0 / 8.0, 6.0 / 8.0]);
        assert_eq!(s.alpha.iter().sum::<u64>(), 5);
        let total: u64 = s.beta_scaled.iter().sum();
        assert_eq!(total, s.loads.iter().sum::<u64>() * 2);
    }

    #[test]
    fn audit_cases() {
        let tri = SimInstance::triangular(40, 20).unwrap();
        let out = run_balance(&tri, 20).unwrap();
        assert!(slab_audit(&out.stats, true).unwrap().passed);
        assert!(slab_audit(&out.stats, false).is_err());

        let fake = SlabStats::from_parts(3, 3, vec![5, 0, 0, 0], vec![0, 0, 0]).unwrap();
        assert_eq!(slab_audit(&fake, true).unwrap().first_violation, Some(1));

        let full = SlabStats::from_loads(vec![3; 5], 3, 3).unwrap();
        let audit = slab_audit(&full, true).unwrap();
        assert!(audit.passed);
        assert_eq!(full.alpha, vec![0, 0, 0, 5]);
    }

    #[test]
    fn triangular_ratio() {
        let out = run_balance(&SimInstance::triangular(100, 100).unwrap(), 10).unwrap();
        let ratio = out.value / 100.0;
        assert!((ratio - crate::ONE_MINUS_INV_E).abs() < 0.02, "{ratio}");
    }
}
