//! Convergence sweeps over LP sizes and limit extrapolation.

mod consistency;

pub use consistency::{consistency_report, ConsistencyReport};

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{self, recurrence_value, FamilyKind, RECURRENCE_SIZE_CAP, SIMPLEX_SIZE_CAP};
use crate::lp::{certify, solve, SolveOptions, SolveStatus, CERTIFICATION_TOL};

/// Largest allowed disagreement between simplex and recurrence values.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueSource {
    Simplex,
    Recurrence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub value: f64,
    pub status: SolveStatus,
    pub ms: f64,
    pub source: ValueSource,
    /// Relative duality gap of the simplex solve.
    pub relative_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub kind: FamilyKind,
    pub rows: Vec<SweepRow>,
    pub limit_target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitEstimate {
    /// `L` in `value(n) ~ L + C / n`.
    pub limit: f64,
    pub constant: f64,
    /// Largest fit residual over the rows used.
    pub error_bar: f64,
    pub rows_used: usize,
    pub target: f64,
    pub deviation: f64,
}

/// Solves the family at each size, in parallel, and returns rows ordered by
/// size. Toy and RANKING use the simplex up to its size cap (cross-checked
/// against the recurrence) and the recurrence beyond it.
pub fn sweep_family(kind: FamilyKind, sizes: &[usize]) -> Result<SweepTable> {
    if sizes.is_empty() {
        return Err(Error::invalid("no sizes to sweep"));
    }
    let cap = if kind.has_recurrence() { RECURRENCE_SIZE_CAP } else { SIMPLEX_SIZE_CAP };
    if let Some(&n) = sizes.iter().find(|&&n| n == 0 || n > cap) {
        return Err(Error::invalid(format!("size {n} is outside 1..={cap} for the {kind} family")));
    }
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    let rows = sizes.par_iter().map(|&n| sweep_one(kind, n)).collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { kind, rows, limit_target: kind.limit() })
}

fn sweep_one(kind: FamilyKind, n: usize) -> Result<SweepRow> {
    let start = Instant::now();
    if n > SIMPLEX_SIZE_CAP {
        let value = recurrence_value(kind, n)?;
        return Ok(SweepRow {
            n,
            value,
            status: SolveStatus::Optimal,
            ms: start.elapsed().as_secs_f64() * 1e3,
            source: ValueSource::Recurrence,
            relative_gap: None,
        });
    }
    let lp = families::build(kind, n)?;
    let sol = solve(&lp, SolveOptions::default())?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    if !sol.is_optimal() {
        return Err(Error::invalid(format!("{kind}:{n} did not solve to optimality ({:?})", sol.status)));
    }
    let cert = certify(&lp, &sol, CERTIFICATION_TOL)?;
    if kind.has_recurrence() {
        let rec = recurrence_value(kind, n)?;
        if (rec - sol.objective_value).abs() > CROSS_CHECK_TOL {
            return Err(Error::invalid(format!(
                "{kind}:{n}: simplex value {} disagrees with recurrence value {rec}",
                sol.objective_value
            )));
        }
    }
    Ok(SweepRow {
        n,
        value: sol.objective_value,
        status: sol.status,
        ms,
        source: ValueSource::Simplex,
        relative_gap: Some(cert.gap / (1.0 + cert.primal_objective.abs())),
    })
}

/// Least-squares fit of `L + C / n` over the largest half of the sizes (at
/// least three rows).
pub fn limit_estimate(table: &SweepTable) -> Result<LimitEstimate> {
    let rows = &table.rows;
    if rows.len() < 3 {
        return Err(Error::invalid(format!("limit fit needs at least 3 rows, got {}", rows.len())));
    }
    let used = rows.len().div_ceil(2).max(3);
    let tail = &rows[rows.len() - used..];
    let h: Vec<f64> = tail.iter().map(|r| 1.0 / r.n as f64).collect();
    let y: Vec<f64> = tail.iter().map(|r| r.value).collect();
    let m = used as f64;
    let h_mean = h.iter().sum::<f64>() / m;
    let y_mean = y.iter().sum::<f64>() / m;
    let sxx: f64 = h.iter().map(|x| (x - h_mean).powi(2)).sum();
    let sxy: f64 = h.iter().zip(&y).map(|(x, v)| (x - h_mean) * (v - y_mean)).sum();
    let constant = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let limit = y_mean - constant * h_mean;
    let error_bar = h.iter().zip(&y).map(|(x, v)| (v - limit - constant * x).abs()).fold(0.0, f64::max);
    Ok(LimitEstimate {
        limit,
        constant,
        error_bar,
        rows_used: used,
        target: table.limit_target,
        deviation: (limit - table.limit_target).abs(),
    })
}

/// Sizes, beyond the smallest two, where `|value(n) - L| > 2 |C| / n`.
pub fn rate_violations(table: &SweepTable, fit: &LimitEstimate) -> Vec<usize> {
    table
        .rows
        .iter()
        .skip(2)
        .filter(|r| (r.value - fit.limit).abs() > 2.0 * fit.constant.abs() / r.n as f64)
        .map(|r| r.n)
        .collect()
}

/// CSV with the fixed header `family,n,value,status,ms`.
pub fn write_csv<W: Write>(table: &SweepTable, mut out: W) -> Result<()> {
    writeln!(out, "family,n,value,status,ms")?;
    for r in &table.rows {
        writeln!(out, "{},{},{},{},{:.3}", table.kind, r.n, r.value, r.status.as_str(), r.ms)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ONE_MINUS_INV_E;

    fn synthetic(values: &[(usize, f64)]) -> SweepTable {
        SweepTable {
            kind: FamilyKind::Toy,
            limit_target: 0.5,
            rows: values
                .iter()
                .map(|&(n, value)| SweepRow {
                    n,
                    value,
                    status: SolveStatus::Optimal,
                    ms: 0.0,
                    source: ValueSource::Simplex,
                    relative_gap: None,
                })
                .collect(),
        }
    }

    #[test]
    fn constant_table() {
        let fit = limit_estimate(&synthetic(&[(1, 0.5), (2, 0.5), (4, 0.5), (8, 0.5)])).unwrap();
        assert_eq!((fit.limit, fit.constant, fit.error_bar), (0.5, 0.0, 0.0));
        assert_eq!(fit.rows_used, 3);
    }

    #[test]
    fn exact_model_is_recovered() {
        let t = synthetic(&[(10, 0.5 + 3.0 / 10.0), (20, 0.5 + 3.0 / 20.0), (40, 0.5 + 3.0 / 40.0), (80, 0.5 + 3.0 / 80.0)]);
        let fit = limit_estimate(&t).unwrap();
        assert!((fit.limit - 0.5).abs() < 1e-14);
        assert!((fit.constant - 3.0).abs() < 1e-12);
        assert!(rate_violations(&t, &fit).is_empty());
        assert!(limit_estimate(&synthetic(&[(1, 0.5), (2, 0.5)])).is_err());
    }

    #[test]
    fn toy_size_one() {
        let t = sweep_family(FamilyKind::Toy, &[1]).unwrap();
        assert_eq!(t.rows[0].value, 1.0);
    }

    #[test]
    fn ranking_sweep_mixes_sources() {
        let t = sweep_family(FamilyKind::Ranking, &[100_000, 16, 4, 32]).unwrap();
        let ns: Vec<usize> = t.rows.iter().map(|r| r.n).collect();
        assert_eq!(ns, vec![4, 16, 32, 100_000]);
        assert_eq!(t.rows[3].source, ValueSource::Recurrence);
        // 1 - (n/(n+1))^n increases toward its limit
        assert!(t.rows.windows(2).all(|w| w[1].value > w[0].value));
        assert!((t.rows[3].value - ONE_MINUS_INV_E).abs() < 1e-5);
        let mut csv = Vec::new();
        write_csv(&t, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("family,n,value,status,ms\nranking,4,"));
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn sizes_outside_caps_rejected() {
        assert!(sweep_family(FamilyKind::Balance, &[SIMPLEX_SIZE_CAP + 1]).is_err());
        assert!(sweep_family(FamilyKind::Toy, &[0]).is_err());
        assert!(sweep_family(FamilyKind::Toy, &[]).is_err());
    }
}
