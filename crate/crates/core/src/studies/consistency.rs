use serde::Serialize;

use crate::error::Result;
use crate::families::{self, recurrence_value, FamilyKind, FamilySpec, SIMPLEX_SIZE_CAP};
use crate::lp::{solve, SolveOptions};
use crate::sim::{run_secretary, secretary_policy_from_lp, SimReport};
use crate::variational::{
    discretize_profile, integrate_tight_ode, ContinuumProfile, ProfileTag, TightOde, DISCRETIZATION_GAP_CONSTANT,
};

const ODE_STEP: f64 = 1e-4;
const ODE_TOL: f64 = 1e-8;
const SIM_SIGMAS: f64 = 3.0;

/// Independent routes to a family's limit, each judged by its own tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub kind: FamilyKind,
    pub n: usize,
    pub limit: f64,
    /// LP optimum at `n`; must sit within `C / n` of the limit.
    pub solver_value: f64,
    pub solver_ok: bool,
    /// Objective of the sampled continuum optimizer; the discretization must
    /// be within its gap bound and its objective within `C / n` of the limit.
    pub discretized_objective: f64,
    pub discretization_ok: bool,
    /// Terminal value of the tight ODE (BALANCE and RANKING only).
    pub ode_terminal: Option<f64>,
    pub ode_ok: bool,
    /// Simulated LP policy (secretary only); must match the LP value within
    /// three standard errors.
    pub simulation: Option<SimReport>,
    pub simulation_ok: bool,
    pub agree: bool,
}

pub fn consistency_report(kind: FamilyKind, n: usize, trials: u64, seed: u64) -> Result<ConsistencyReport> {
    let limit = kind.limit();
    let bound = DISCRETIZATION_GAP_CONSTANT / n as f64;

    let (solver_value, lp_x) = if n > SIMPLEX_SIZE_CAP && kind.has_recurrence() {
        (recurrence_value(kind, n)?, None)
    } else {
        let sol = solve(&families::build(kind, n)?, SolveOptions::default())?;
        if !sol.is_optimal() {
            return Err(crate::Error::NotOptimal(sol.status));
        }
        (sol.objective_value, Some(sol.x))
    };
    let solver_ok = (solver_value - limit).abs() <= bound;

    let tag = match kind {
        FamilyKind::Toy => ProfileTag::ToyG,
        FamilyKind::Balance => ProfileTag::BalanceG,
        FamilyKind::Ranking => ProfileTag::RankingG,
        FamilyKind::Secretary => ProfileTag::SecretaryG,
    };
    let disc = discretize_profile(&ContinuumProfile::new(tag), FamilySpec::new(kind, n.min(SIMPLEX_SIZE_CAP))?)?;
    let discretization_ok = disc.within_bound && (disc.lp_objective - limit).abs() <= disc.bound;

    let ode = match kind {
        FamilyKind::Balance => Some(integrate_tight_ode(TightOde::Balance, ODE_STEP)?),
        FamilyKind::Ranking => Some(integrate_tight_ode(TightOde::Ranking, ODE_STEP)?),
        _ => None,
    };
    let ode_ok = ode.as_ref().is_none_or(|r| r.terminal_error <= ODE_TOL && (r.terminal - limit).abs() <= ODE_TOL);

    let simulation = match (kind, &lp_x) {
        (FamilyKind::Secretary, Some(x)) => Some(run_secretary(&secretary_policy_from_lp(x)?, trials, seed)?),
        _ => None,
    };
    let simulation_ok = simulation
        .as_ref()
        .is_none_or(|s| (s.estimate - solver_value).abs() <= SIM_SIGMAS * s.std_error);

    Ok(ConsistencyReport {
        kind,
        n,
        limit,
        solver_value,
        solver_ok,
        discretized_objective: disc.lp_objective,
        discretization_ok,
        ode_terminal: ode.map(|r| r.terminal),
        ode_ok,
        simulation,
        simulation_ok,
        agree: solver_ok && discretization_ok && ode_ok && simulation_ok,
    })
}
