//! Bridge from a continuum density `g` back to a finite LP solution.
//!
//! Sampling rules per family:
//!
//! | family    | rule               |
//! |-----------|--------------------|
//! | toy       | `x_i = g(i/n)`     |
//! | ranking   | `x_i = g(i/n)`     |
//! | balance   | `x_i = g(i/N) / N` |
//! | secretary | `x_i = g(i/n) / i` |

use serde::Serialize;

use super::profile::ContinuumProfile;
use super::quadrature::integrate_piecewise;
use crate::error::{Error, Result};
use crate::families::{FamilyKind, FamilySpec};
use crate::lp::check_feasibility;

/// Constant `C` in the `C / n` bound on both discretization gaps.
pub const DISCRETIZATION_GAP_CONSTANT: f64 = 2.0;

const QUADRATURE_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discretization {
    pub family: FamilySpec,
    pub x: Vec<f64>,
    pub max_violation: f64,
    pub worst_row: Option<usize>,
    pub lp_objective: f64,
    pub continuum_objective: f64,
    pub objective_gap: f64,
    /// `C / n` with the frozen constant.
    pub bound: f64,
    pub within_bound: bool,
}

/// Sample a density profile into the matching family's LP variables.
pub fn discretize_profile(profile: &ContinuumProfile, family: FamilySpec) -> Result<Discretization> {
    match profile.tag.g_family() {
        Some(kind) if kind == family.kind => {}
        Some(kind) => {
            return Err(Error::invalid(format!(
                "profile {} belongs to the {kind} family, not {}",
                profile.tag, family.kind
            )))
        }
        None => return Err(Error::invalid(format!("{} is not a density profile", profile.tag))),
    }
    discretize_with(family, &profile.breakpoints(), |t| profile.value(t))
}

/// Same as [`discretize_profile`] for an arbitrary density `g`, smooth
/// between `breaks`.
pub fn discretize_with<G: Fn(f64) -> f64>(family: FamilySpec, breaks: &[f64], g: G) -> Result<Discretization> {
    let n = family.size;
    let nf = n as f64;
    let x: Vec<f64> = (1..=n)
        .map(|i| {
            let v = g(i as f64 / nf);
            match family.kind {
                FamilyKind::Toy | FamilyKind::Ranking => v,
                FamilyKind::Balance => v / nf,
                FamilyKind::Secretary => v / i as f64,
            }
        })
        .collect();

    let lp = family.build()?;
    let feas = check_feasibility(&lp, &x, 0.0)?;
    let lp_objective = lp.objective_at(&x);
    let continuum_objective = continuum_objective(family.kind, breaks, &g);
    let objective_gap = (lp_objective - continuum_objective).abs();
    let bound = DISCRETIZATION_GAP_CONSTANT / nf;
    Ok(Discretization {
        family,
        within_bound: feas.max_violation <= bound && objective_gap <= bound,
        x,
        max_violation: feas.max_violation,
        worst_row: feas.worst_row,
        lp_objective,
        continuum_objective,
        objective_gap,
        bound,
    })
}

/// Value of the continuum objective functional at `g`.
pub fn continuum_objective<G: Fn(f64) -> f64>(kind: FamilyKind, breaks: &[f64], g: G) -> f64 {
    match kind {
        FamilyKind::Balance => integrate_piecewise(|t| g(t) * (1.0 - t), 0.0, 1.0, breaks, QUADRATURE_STEP),
        _ => integrate_piecewise(&g, 0.0, 1.0, breaks, QUADRATURE_STEP),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variational::ProfileTag;
    use crate::{INV_E, ONE_MINUS_INV_E};

    fn spec(kind: FamilyKind, n: usize) -> FamilySpec {
        FamilySpec::new(kind, n).unwrap()
    }

    #[test]
    fn ranking_profile_at_1000() {
        let d = discretize_profile(&ContinuumProfile::new(ProfileTag::RankingG), spec(FamilyKind::Ranking, 1000)).unwrap();
        assert!((d.lp_objective - ONE_MINUS_INV_E).abs() < 2e-3);
        assert!(d.max_violation <= 2.0 / 1000.0);
        assert!(d.within_bound);
    }

    #[test]
    fn secretary_profile_at_1000() {
        let d = discretize_profile(&ContinuumProfile::new(ProfileTag::SecretaryG), spec(FamilyKind::Secretary, 1000)).unwrap();
        assert!((d.lp_objective - INV_E).abs() < 2e-3);
        assert!((d.continuum_objective - INV_E).abs() < 1e-10);
        assert!(d.within_bound);
    }

    #[test]
    fn zero_density_fails_the_toy_lp() {
        let d = discretize_with(spec(FamilyKind::Toy, 10), &[], |_| 0.0).unwrap();
        assert_eq!(d.max_violation, 1.0);
        assert_eq!(d.worst_row, Some(0));
        assert!(!d.within_bound);
    }

    #[test]
    fn mismatched_profile_rejected() {
        let g = ContinuumProfile::new(ProfileTag::BalanceG);
        assert!(discretize_profile(&g, spec(FamilyKind::Ranking, 10)).is_err());
        let u = ContinuumProfile::new(ProfileTag::BalanceU);
        assert!(discretize_profile(&u, spec(FamilyKind::Balance, 10)).is_err());
    }
}
