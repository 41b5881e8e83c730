use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::{run_trials, SimReport};
use crate::error::{Error, Result};
use crate::families::build_secretary;
use crate::lp::check_feasibility;

/// Largest constraint violation tolerated in an LP vector turned into a policy.
pub const POLICY_FEASIBILITY_TOL: f64 = 1e-6;
const UNREACHABLE_MASS: f64 = 1e-12;
const CLAMP_SLACK: f64 = 1e-9;

/// Acceptance probabilities for a best-so-far secretary policy, by position.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyTable {
    pub n: usize,
    pub accept_prob: Vec<f64>,
    pub reachable: Vec<bool>,
}

impl PolicyTable {
    pub fn new(accept_prob: Vec<f64>) -> Result<Self> {
        if let Some(p) = accept_prob.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::invalid(format!("acceptance probability {p} is outside [0, 1]")));
        }
        Ok(Self { n: accept_prob.len(), reachable: vec![true; accept_prob.len()], accept_prob })
    }
}

/// Turns a feasible secretary LP vector into the policy that accepts a
/// best-so-far candidate at position `i` with probability
/// `x_i i / (1 - sum_{l<i} x_l)`. Positions the policy never reaches (no
/// probability mass left) get probability 0.
pub fn secretary_policy_from_lp(x: &[f64]) -> Result<PolicyTable> {
    let n = x.len();
    let lp = build_secretary(n)?;
    let report = check_feasibility(&lp, x, POLICY_FEASIBILITY_TOL)?;
    if !report.is_feasible() {
        return Err(Error::invalid(format!(
            "vector violates the secretary LP by {:e}",
            report.max_violation
        )));
    }
    let mut accept_prob = Vec::with_capacity(n);
    let mut reachable = Vec::with_capacity(n);
    let mut used = 0.0;
    for (k, &xi) in x.iter().enumerate() {
        let remaining = 1.0 - used;
        if remaining <= UNREACHABLE_MASS {
            accept_prob.push(0.0);
            reachable.push(false);
        } else {
            let p = xi * (k + 1) as f64 / remaining;
            if !(-CLAMP_SLACK..=1.0 + CLAMP_SLACK).contains(&p) {
                return Err(Error::invalid(format!(
                    "position {} needs acceptance probability {p}, outside [0, 1]",
                    k + 1
                )));
            }
            accept_prob.push(p.clamp(0.0, 1.0));
            reachable.push(true);
        }
        used += xi;
    }
    Ok(PolicyTable { n, accept_prob, reachable })
}

/// Probability that the policy selects the overall best of `n` candidates in
/// uniformly random order, estimated over `trials` runs.
pub fn run_secretary(policy: &PolicyTable, trials: u64, seed: u64) -> Result<SimReport> {
    let n = policy.n;
    if n == 0 {
        return Err(Error::invalid("policy has no positions"));
    }
    run_trials(trials, seed, 1.0, |rng| {
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.shuffle(rng);
        let best = n as u32 - 1;
        let mut best_so_far = None;
        for (i, &cand) in order.iter().enumerate() {
            if best_so_far.is_some_and(|b| cand < b) {
                continue;
            }
            best_so_far = Some(cand);
            // One draw per best-so-far position keeps the stream layout fixed.
            let u: f64 = rng.gen();
            if policy.reachable[i] && u < policy.accept_prob[i] {
                return u64::from(cand == best);
            }
        }
        0
    })
}

/// Success probability of "reject the first `k`, then take the first
/// candidate better than all of them", as an exact fraction.
pub fn threshold_policy_value(n: usize, k: usize) -> Result<BigRational> {
    if k >= n {
        return Err(Error::invalid(format!("threshold k={k} must be below n={n}")));
    }
    let int = |v: usize| BigInt::from(v);
    if k == 0 {
        return Ok(BigRational::new(int(1), int(n)));
    }
    let mut harmonic = BigRational::zero();
    for i in k + 1..=n {
        harmonic += BigRational::new(int(1), int(i - 1));
    }
    Ok(harmonic * BigRational::new(int(k), int(n)))
}

/// Best threshold for `n` candidates (smallest `k` on ties) and its value.
pub fn best_threshold(n: usize) -> Result<(usize, BigRational)> {
    if n == 0 {
        return Err(Error::invalid("need at least one candidate"));
    }
    let mut best = (0, threshold_policy_value(n, 0)?);
    for k in 1..n {
        let v = threshold_policy_value(n, k)?;
        if v > best.1 {
            best = (k, v);
        }
    }
    Ok(best)
}

/// Nearest `f64` to an exact value.
pub fn to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}
