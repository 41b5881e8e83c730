use rayon::prelude::*;

use revealing::families::{build, build_ranking, build_secretary, recurrence_value, FamilyKind};
use revealing::lp::{certify, check_feasibility, solve, Relation, SolveOptions, SolveStatus, CERTIFICATION_TOL};
use revealing::sim::{best_threshold, to_f64};
use revealing::studies::{limit_estimate, rate_violations, sweep_family};

fn optimum(kind: FamilyKind, n: usize) -> f64 {
    let lp = build(kind, n).unwrap();
    let sol = solve(&lp, SolveOptions::default()).unwrap();
    assert_eq!(sol.status, SolveStatus::Optimal, "{kind:?} n = {n}");
    assert!(check_feasibility(&lp, &sol.x, 1e-9).unwrap().is_feasible());
    sol.objective_value
}

#[test]
fn small_instances_have_known_values() {
    assert!((optimum(FamilyKind::Toy, 1) - 1.0).abs() < 1e-12);
    assert!((optimum(FamilyKind::Toy, 2) - 0.75).abs() < 1e-12);
    assert!((optimum(FamilyKind::Balance, 1) - 0.0).abs() < 1e-12);
    assert!((optimum(FamilyKind::Balance, 2) - 0.25).abs() < 1e-12);
    assert!((optimum(FamilyKind::Ranking, 1) - 0.5).abs() < 1e-12);
    assert!((optimum(FamilyKind::Ranking, 2) - 5.0 / 9.0).abs() < 1e-12);
    for (n, v) in [(1, 1.0), (2, 0.5), (3, 0.5)] {
        assert!((optimum(FamilyKind::Secretary, n) - v).abs() < 1e-12, "secretary n = {n}");
    }
}

#[test]
fn ranking_coefficients() {
    let lp = build_ranking(5).unwrap();
    // row p: x_p + (1/n) sum_{i<=p} x_i >= 1
    for (p, row) in lp.rows().iter().enumerate() {
        for (i, &a) in row.iter().enumerate() {
            let want = if i < p { 0.2 } else if i == p { 1.2 } else { 0.0 };
            assert!((a - want).abs() < 1e-15, "row {p} col {i}");
        }
        assert_eq!(lp.relations()[p], Relation::Ge);
        assert_eq!(lp.rhs()[p], 1.0);
    }
}

#[test]
fn secretary_coefficients_and_optimum() {
    let n = 40;
    let lp = build_secretary(n).unwrap();
    let row = &lp.rows()[9];
    assert!((row[9] - 10.0).abs() < 1e-12);
    assert!(row[..9].iter().all(|&a| (a - 1.0).abs() < 1e-12));
    assert!(row[10..].iter().all(|&a| a == 0.0));

    let sol = solve(&lp, SolveOptions::default()).unwrap();
    assert!(certify(&lp, &sol, CERTIFICATION_TOL).unwrap().passed);
    for (i, &x) in sol.x.iter().enumerate() {
        assert!(x * (i + 1) as f64 <= 1.0 + 1e-9, "x_{} = {x}", i + 1);
    }
    let (_, best) = best_threshold(n).unwrap();
    assert!((sol.objective_value - to_f64(&best)).abs() < 1e-9);
}

#[test]
fn ranking_simplex_matches_closed_form() {
    let worst = (1..=512usize)
        .into_par_iter()
        .map(|n| {
            let closed = 1.0 - (n as f64 / (n as f64 + 1.0)).powi(n as i32);
            let lp = optimum(FamilyKind::Ranking, n);
            let rec = recurrence_value(FamilyKind::Ranking, n).unwrap();
            assert!((rec - closed).abs() < 1e-12, "n = {n}: recurrence {rec} vs {closed}");
            (lp - closed).abs()
        })
        .reduce(|| 0.0, f64::max);
    assert!(worst < 1e-9, "worst deviation {worst}");
}

#[test]
fn toy_values_do_not_increase_and_ranking_values_do() {
    let sizes: Vec<usize> = (1..=60).collect();
    let toy = sweep_family(FamilyKind::Toy, &sizes).unwrap();
    let ranking = sweep_family(FamilyKind::Ranking, &sizes).unwrap();
    for w in toy.rows.windows(2) {
        assert!(w[1].value <= w[0].value + 1e-12, "toy n = {}", w[1].n);
    }
    for w in ranking.rows.windows(2) {
        assert!(w[1].value > w[0].value, "ranking n = {}", w[1].n);
    }
}

#[test]
fn convergence_rate_is_one_over_n() {
    let sizes = [16, 32, 64, 128, 256, 512, 1024];
    for kind in FamilyKind::ALL {
        let table = sweep_family(kind, &sizes).unwrap();
        let fit = limit_estimate(&table).unwrap();
        assert!(fit.deviation < 1e-3, "{kind:?}: limit {} vs {}", fit.limit, kind.limit());
        assert!(rate_violations(&table, &fit).is_empty(), "{kind:?}: {:?}", rate_violations(&table, &fit));
    }
}

#[test]
fn recurrence_matches_simplex_where_both_exist() {
    for kind in FamilyKind::ALL.into_iter().filter(|k| k.has_recurrence()) {
        for n in [1, 2, 3, 7, 50, 300] {
            let rec = recurrence_value(kind, n).unwrap();
            assert!((optimum(kind, n) - rec).abs() < 1e-9, "{kind:?} n = {n}");
        }
    }
}
