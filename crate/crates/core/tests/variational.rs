use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use revealing::families::FamilyKind;
use revealing::interval::{objective_g, reconstruct_u, search_best, IntervalSequence};
use revealing::variational::quadrature::integrate_piecewise;
use revealing::variational::{continuum_objective, ContinuumProfile, ProfileTag};
use revealing::INV_E;

const STEPS: usize = 2000;

/// One RK4 step of `y' = f(t, y)`.
fn rk4_step(f: impl Fn(f64, f64) -> f64, t: f64, y: f64, h: f64) -> f64 {
    let k1 = f(t, y);
    let k2 = f(t + h / 2.0, y + h / 2.0 * k1);
    let k3 = f(t + h / 2.0, y + h / 2.0 * k2);
    let k4 = f(t + h, y + h * k3);
    y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

#[test]
fn balance_trajectories_stay_below_the_tight_one() {
    let tight = ContinuumProfile::new(ProfileTag::BalanceV);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = 1.0 / STEPS as f64;
    for trial in 0..100 {
        // the first trial runs at full rate to pin the comparison
        let mut v = 0.0;
        for k in 0..STEPS {
            let r: f64 = if trial == 0 { 1.0 } else { rng.gen() };
            let t = k as f64 * h;
            v = rk4_step(|t, v| (t - v).min(1.0) * r, t, v, h);
            let t1 = (k + 1) as f64 * h;
            assert!(v <= tight.value(t1) + 1e-9, "trial {trial}: v({t1}) = {v}");
        }
        assert!(v <= INV_E + 1e-9);
    }
}

#[test]
fn ranking_trajectories_stay_above_the_tight_one() {
    let tight = ContinuumProfile::new(ProfileTag::RankingU);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let h = 1.0 / STEPS as f64;
    for trial in 0..100 {
        let mut u = 0.0;
        for k in 0..STEPS {
            let noise: f64 = if trial == 0 { 0.0 } else { rng.gen_range(0.0..0.5) };
            let t = k as f64 * h;
            u = rk4_step(|_, u| (1.0 - u).max(0.0) + noise, t, u, h).min(1.0);
            let t1 = (k + 1) as f64 * h;
            assert!(u >= tight.value(t1) - 1e-9, "trial {trial}: u({t1}) = {u}");
        }
    }
}

#[test]
fn balance_density_is_feasible() {
    let g = ContinuumProfile::new(ProfileTag::BalanceG);
    for k in 1..=200 {
        let t = k as f64 / 200.0;
        let lhs = integrate_piecewise(|z| g.value(z) * (1.0 - z + t), 0.0, t, &[], 1e-2);
        assert!(lhs <= t + 1e-8, "t = {t}: {lhs}");
    }
}

#[test]
fn secretary_density_is_feasible() {
    let g = ContinuumProfile::new(ProfileTag::SecretaryG);
    let breaks = g.breakpoints();
    for k in 1..=200 {
        let t = k as f64 / 200.0;
        let seen = integrate_piecewise(|z| g.value(z) / z, 0.0, t, &breaks, 1e-3);
        let gt = g.value(t);
        assert!(gt >= 0.0);
        assert!(gt <= 1.0 - seen + 1e-8, "t = {t}: g = {gt}, budget = {}", 1.0 - seen);
    }
}

#[test]
fn density_objectives_reach_their_limits() {
    for tag in [ProfileTag::ToyG, ProfileTag::BalanceG, ProfileTag::RankingG, ProfileTag::SecretaryG] {
        let kind = tag.g_family().unwrap();
        let g = ContinuumProfile::new(tag);
        let value = continuum_objective(kind, &g.breakpoints(), |t| g.value(t));
        assert!((value - kind.limit()).abs() < 1e-8, "{tag:?}: {value}");
    }
    assert!((FamilyKind::Balance.limit() - INV_E).abs() < 1e-15);
}

#[test]
fn antiderivatives_match_their_densities() {
    let pairs = [(ProfileTag::RankingG, ProfileTag::RankingU), (ProfileTag::SecretaryG, ProfileTag::SecretaryU)];
    for (g_tag, u_tag) in pairs {
        let g = ContinuumProfile::new(g_tag);
        let u = ContinuumProfile::new(u_tag);
        for k in 1..=20 {
            let t = k as f64 / 20.0;
            // secretary density integrates against 1/z
            let integral = if g_tag == ProfileTag::SecretaryG {
                integrate_piecewise(|z| g.value(z) / z, 0.0, t, &g.breakpoints(), 1e-3)
            } else {
                integrate_piecewise(|z| g.value(z), 0.0, t, &[], 1e-2)
            };
            assert!((integral - u.value(t)).abs() < 1e-10, "{u_tag:?} at {t}");
        }
    }
}

fn random_sequence(rng: &mut ChaCha8Rng, k: usize) -> IntervalSequence {
    loop {
        let mut pts: Vec<f64> = (0..2 * k).map(|_| rng.gen_range(1e-3..=1.0)).collect();
        pts.sort_by(f64::total_cmp);
        if pts.windows(2).all(|w| w[1] - w[0] > 1e-6) {
            return IntervalSequence::new(pts).unwrap();
        }
    }
}

#[test]
fn interval_objective_equals_weighted_derivative_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for trial in 0..100 {
        let s = random_sequence(&mut rng, 1 + trial % 3);
        let u = reconstruct_u(&s);
        let by_derivative = integrate_piecewise(|t| u.derivative(t) * t, 0.0, 1.0, s.points(), 1e-3);
        let by_parts = u.value(1.0) - integrate_piecewise(|t| u.value(t), 0.0, 1.0, s.points(), 1e-3);
        let g = objective_g(&s);
        assert!((g - by_derivative).abs() < 1e-6, "{:?}: {g} vs {by_derivative}", s.points());
        assert!((g - by_parts).abs() < 1e-6, "{:?}: {g} vs {by_parts}", s.points());
    }
}

#[test]
fn single_interval_objective_grows_with_its_right_end() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let a = rng.gen_range(0.01..INV_E);
        let b1 = rng.gen_range(a + 1e-4..1.0);
        let b2 = rng.gen_range(b1..=1.0);
        let g1 = objective_g(&IntervalSequence::new(vec![a, b1]).unwrap());
        let g2 = objective_g(&IntervalSequence::new(vec![a, b2]).unwrap());
        assert!(g2 >= g1, "a = {a}, b = {b1} -> {g1}, b = {b2} -> {g2}");
    }
}

#[test]
fn two_intervals_do_not_beat_one() {
    let one = search_best(1, 1e-3, 1e-3).unwrap();
    let two = search_best(2, 1e-2, 1e-2).unwrap();
    assert!(two.best_value <= one.best_value + 1e-12, "{} > {}", two.best_value, one.best_value);
    assert!((one.best_value - INV_E).abs() < 1e-6);
    // a single interval should start near 1/e and run to 1
    assert!((one.best_s[0] - INV_E).abs() < 1e-3);
    assert_eq!(one.best_s[1], 1.0);
}
