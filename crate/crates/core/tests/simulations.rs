use std::fs::File;
use std::io::{BufReader, BufWriter, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use revealing::families::build_secretary;
use revealing::lp::{solve, SolveOptions};
use revealing::sim::{
    offline_optimum, run_balance, run_ranking, run_secretary, secretary_policy_from_lp, slab_audit, SimInstance,
};
use revealing::ONE_MINUS_INV_E;

fn random_instance(rng: &mut ChaCha8Rng, n: usize, m: usize, b: u32) -> SimInstance {
    let arrivals = (0..m)
        .map(|_| (0..n).filter(|_| rng.gen_bool(0.4)).collect())
        .collect();
    SimInstance::new(n, b, arrivals).unwrap()
}

/// Exhaustive search over every choice of neighbor (or none) per arrival.
fn brute_force_optimum(inst: &SimInstance) -> u64 {
    fn go(inst: &SimInstance, j: usize, loads: &mut [u32]) -> u64 {
        if j == inst.n_online() {
            return 0;
        }
        let mut best = go(inst, j + 1, loads);
        for &u in &inst.arrivals()[j] {
            if loads[u] < inst.capacity() {
                loads[u] += 1;
                best = best.max(1 + go(inst, j + 1, loads));
                loads[u] -= 1;
            }
        }
        best
    }
    go(inst, 0, &mut vec![0; inst.n_offline()])
}

#[test]
fn flow_optimum_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..150 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(0..=7);
        let b = rng.gen_range(1..=2);
        let inst = random_instance(&mut rng, n, m, b);
        assert_eq!(offline_optimum(&inst), Some(brute_force_optimum(&inst)), "{inst:?}");
    }
}

#[test]
fn balance_never_beats_the_offline_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..200 {
        let n = rng.gen_range(1..=20);
        let b = rng.gen_range(1..=4);
        let m = rng.gen_range(0..=3 * n);
        let inst = random_instance(&mut rng, n, m, b);
        let out = run_balance(&inst, 4).unwrap();
        let opt = offline_optimum(&inst).unwrap();
        assert!(out.assignments <= opt);
        assert!(out.value <= n as f64);
        // greedy is maximal, so it gets at least half the optimum
        assert!(2 * out.assignments >= opt, "{} vs {opt}", out.assignments);
    }
}

#[test]
fn slab_audit_holds_on_planted_instances() {
    for seed in 0..60u64 {
        let slabs = [2, 4, 5][seed as usize % 3];
        let b = slabs as u32 * (1 + seed as u32 % 3);
        let inst = SimInstance::planted(10 + seed as usize % 30, b, 3, seed).unwrap();
        assert_eq!(offline_optimum(&inst), Some(inst.n_offline() as u64 * u64::from(b)));
        let out = run_balance(&inst, slabs).unwrap();
        let audit = slab_audit(&out.stats, true).unwrap();
        assert!(audit.passed, "seed {seed}: {audit:?}");
        assert!(audit.tightest_margin >= 0);
    }
}

#[test]
fn ranking_is_reproducible_and_seed_stable() {
    let inst = SimInstance::triangular(40, 1).unwrap();
    let a = run_ranking(&inst, 20_000, 7).unwrap();
    let b = run_ranking(&inst, 20_000, 7).unwrap();
    assert_eq!(a, b);
    let c = run_ranking(&inst, 20_000, 8).unwrap();
    let se = (a.std_error.powi(2) + c.std_error.powi(2)).sqrt();
    assert!((a.estimate - c.estimate).abs() <= 4.0 * se, "{} vs {}", a.estimate, c.estimate);
    // RANKING is (1 - 1/e)-competitive in expectation; the triangle's optimum is n
    assert!(a.estimate / 40.0 >= ONE_MINUS_INV_E - 4.0 * a.std_error / 40.0);
    assert!(a.estimate <= 40.0);
}

#[test]
fn ranking_matches_a_perfect_matching_on_complete_graphs() {
    // every arrival sees every offline vertex, so RANKING never misses
    let inst = SimInstance::complete(12, 1).unwrap();
    let r = run_ranking(&inst, 500, 3).unwrap();
    assert_eq!(r.estimate, 12.0);
    assert_eq!(r.std_error, 0.0);
}

#[test]
fn lp_secretary_policy_achieves_the_lp_value() {
    for n in [10, 50, 100, 200] {
        let sol = solve(&build_secretary(n).unwrap(), SolveOptions::default()).unwrap();
        let policy = secretary_policy_from_lp(&sol.x).unwrap();
        let r = run_secretary(&policy, 200_000, n as u64).unwrap();
        let z = (r.estimate - sol.objective_value) / r.std_error;
        assert!(z.abs() <= 3.0, "n = {n}: {} vs {} (z = {z:.2})", r.estimate, sol.objective_value);
    }
}

#[test]
fn instance_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("planted.txt");
    let inst = SimInstance::planted(15, 3, 2, 99).unwrap();
    let mut w = BufWriter::new(File::create(&path).unwrap());
    inst.write(&mut w).unwrap();
    w.flush().unwrap();
    drop(w);
    let back = SimInstance::read(BufReader::new(File::open(&path).unwrap())).unwrap();
    assert_eq!(back, inst);
}

#[test]
fn malformed_instance_files_are_rejected() {
    for text in ["", "2 1 1\n3\n", "2 2 1\n1 1\n2\n", "2 1 0\n1\n", "2 1 1\n1\n2\n", "x 1 1\n1\n"] {
        assert!(SimInstance::read(text.as_bytes()).is_err(), "accepted {text:?}");
    }
    let ok = SimInstance::read("2 2 1\n\n1 2\n".as_bytes()).unwrap();
    assert_eq!(ok.arrivals(), &[vec![], vec![0, 1]]);
}
