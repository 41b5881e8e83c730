//! Simulations of RANKING, BALANCE and LP-derived secretary policies.
//!
//! Monte Carlo trials run in parallel. Trial `k` draws from its own ChaCha
//! stream `(seed, k)` and contributes an integer outcome, so estimates are
//! bit-identical regardless of how trials are split across threads.

mod balance;
mod flow;
mod instance;
mod ranking;
mod secretary;

pub use balance::{run_balance, slab_audit, BalanceOutcome, SlabAudit, SlabStats};
pub use flow::{offline_optimum, FLOW_ORACLE_CAP};
pub use instance::SimInstance;
pub use ranking::run_ranking;
pub use secretary::{
    best_threshold, run_secretary, secretary_policy_from_lp, threshold_policy_value, to_f64, PolicyTable,
    POLICY_FEASIBILITY_TOL,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Trials used by the CLI when none are given.
pub const DEFAULT_TRIALS: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub trials: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<SlabStats>,
}

/// Runs `trials` independent trials of `trial` and summarizes the integer
/// outcomes. `scale` divides every outcome (e.g. to report a ratio).
pub(crate) fn run_trials<F>(trials: u64, seed: u64, scale: f64, trial: F) -> Result<SimReport>
where
    F: Fn(&mut ChaCha8Rng) -> u64 + Sync,
{
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let (sum, sum_sq) = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let x = trial(&mut rng);
            (u128::from(x), u128::from(x) * u128::from(x))
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let t = trials as f64;
    let mean = sum as f64 / t;
    let std_error = if trials > 1 {
        // Exact integer numerator of the sample variance times t (t - 1).
        let num = u128::from(trials) * sum_sq - sum * sum;
        (num as f64 / (t * (t - 1.0)) / t).sqrt()
    } else {
        0.0
    };
    Ok(SimReport { trials, estimate: mean / scale, std_error: std_error / scale, seed, extra: None })
}
