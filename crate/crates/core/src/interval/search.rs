use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::objective_raw;
use crate::error::{Error, Result};

const MAX_RESOLUTION: f64 = 1e-2;
const REFINE_TOL: f64 = 1e-12;
const REFINE_ROUNDS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    #[serde(rename = "K")]
    pub k: usize,
    pub resolution: f64,
    pub min_separation: f64,
    pub best_s: Vec<f64>,
    pub best_value: f64,
    /// Best value found on the grid, before any refinement.
    pub grid_best_value: f64,
    pub grid_points_evaluated: u64,
}

#[derive(Debug, Clone)]
struct Best {
    value: f64,
    s: Vec<f64>,
    count: u64,
}

impl Best {
    fn empty() -> Self {
        Self { value: f64::NEG_INFINITY, s: Vec::new(), count: 0 }
    }

    fn offer(&mut self, value: f64, s: &[f64]) {
        self.count += 1;
        if better(value, s, self.value, &self.s) {
            self.value = value;
            self.s.clear();
            self.s.extend_from_slice(s);
        }
    }

    fn merge(mut self, other: Best) -> Best {
        let count = self.count + other.count;
        if better(other.value, &other.s, self.value, &self.s) {
            self = other;
        }
        self.count = count;
        self
    }
}

/// Higher value wins; ties go to the lexicographically smaller sequence so
/// the outcome does not depend on how the grid was sharded.
fn better(value: f64, s: &[f64], incumbent: f64, incumbent_s: &[f64]) -> bool {
    match value.partial_cmp(&incumbent) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Equal) => incumbent_s.is_empty() || lex_less(s, incumbent_s),
        _ => false,
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).find(|(x, y)| x != y).is_some_and(|(x, y)| x < y)
}

/// Exhaustive search for the best `K`-interval sequence whose endpoints lie
/// on multiples of `resolution` and are at least `min_separation` apart. For
/// `K = 1` the grid optimum is then refined by coordinate ascent.
pub fn search_best(k: usize, resolution: f64, min_separation: f64) -> Result<SearchResult> {
    if !(1..=2).contains(&k) {
        return Err(Error::invalid(format!("K must be 1 or 2, got {k}")));
    }
    if !(resolution > 0.0 && resolution <= MAX_RESOLUTION) {
        return Err(Error::invalid(format!("resolution must lie in (0, {MAX_RESOLUTION}], got {resolution}")));
    }
    if !(min_separation >= resolution && min_separation < 1.0) {
        return Err(Error::invalid(format!(
            "min separation must lie in [resolution, 1), got {min_separation}"
        )));
    }
    let m = (1.0 / resolution).round() as usize;
    // Gap in grid steps; the small slack absorbs representation error in the ratio.
    let gap = ((min_separation / resolution) - 1e-9).ceil().max(1.0) as usize;
    let at = |j: usize| j as f64 / m as f64;

    let grid = match k {
        1 => (1..=m)
            .into_par_iter()
            .map(|i| {
                let mut best = Best::empty();
                let a = at(i);
                for j in i + gap..=m {
                    let s = [a, at(j)];
                    best.offer(objective_raw(&s), &s);
                }
                best
            })
            .reduce(Best::empty, Best::merge),
        _ => (1..=m)
            .into_par_iter()
            .map(|i1| {
                let mut best = Best::empty();
                for j1 in i1 + gap..=m {
                    for i2 in j1 + gap..=m {
                        for j2 in i2 + gap..=m {
                            let s = [at(i1), at(j1), at(i2), at(j2)];
                            best.offer(objective_raw(&s), &s);
                        }
                    }
                }
                best
            })
            .reduce(Best::empty, Best::merge),
    };
    if grid.count == 0 {
        return Err(Error::invalid("no sequence fits on the grid with this separation"));
    }

    let (best_s, best_value) = if k == 1 {
        refine(&grid.s, resolution, min_separation)
    } else {
        (grid.s.clone(), grid.value)
    };
    Ok(SearchResult {
        k,
        resolution,
        min_separation,
        best_value: best_value.max(grid.value),
        best_s: if best_value >= grid.value { best_s } else { grid.s },
        grid_best_value: grid.value,
        grid_points_evaluated: grid.count,
    })
}

/// Coordinate ascent: maximize over one endpoint at a time by golden-section
/// search inside the window its neighbours allow.
fn refine(start: &[f64], lowest: f64, sep: f64) -> (Vec<f64>, f64) {
    let mut s = start.to_vec();
    let mut value = objective_raw(&s);
    for _ in 0..REFINE_ROUNDS {
        let before = value;
        for c in 0..s.len() {
            let lo = if c == 0 { lowest } else { s[c - 1] + sep };
            let hi = if c + 1 == s.len() { 1.0 } else { s[c + 1] - sep };
            if hi <= lo {
                continue;
            }
            let mut eval = |x: f64| {
                let mut t = s.clone();
                t[c] = x;
                objective_raw(&t)
            };
            let (x, v) = golden_max(&mut eval, lo, hi);
            if v > value {
                s[c] = x;
                value = v;
            }
        }
        if value - before <= REFINE_TOL {
            break;
        }
    }
    (s, value)
}

fn golden_max<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > REFINE_TOL {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    // Monotone objectives peak at a window edge, which the bracket never samples.
    [(x1, f1), (x2, f2), (lo, f(lo)), (hi, f(hi))]
        .into_iter()
        .fold((lo, f64::NEG_INFINITY), |acc, p| if p.1 > acc.1 { p } else { acc })
}
