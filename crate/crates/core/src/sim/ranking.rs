use rand::seq::SliceRandom;

use super::{run_trials, SimInstance, SimReport};
use crate::error::{Error, Result};

/// RANKING: each trial ranks the offline vertices by a fresh uniform random
/// permutation and matches every arrival to its free neighbor of best rank.
/// The estimate is the mean matching size.
pub fn run_ranking(instance: &SimInstance, trials: u64, seed: u64) -> Result<SimReport> {
    if instance.capacity() != 1 {
        return Err(Error::invalid(format!("RANKING needs b = 1, got b = {}", instance.capacity())));
    }
    let n = instance.n_offline();
    run_trials(trials, seed, 1.0, |rng| {
        let mut rank: Vec<u32> = (0..n as u32).collect();
        rank.shuffle(rng);
        let mut taken = vec![false; n];
        let mut size = 0;
        for nbrs in instance.arrivals() {
            if let Some(u) = nbrs.iter().copied().filter(|&u| !taken[u]).min_by_key(|&u| rank[u]) {
                taken[u] = true;
                size += 1;
            }
        }
        size
    })
}
