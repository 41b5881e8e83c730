//! Dense linear programs, a bounded-variable simplex solver and duality
//! certificates.

mod certify;
mod dump;
mod feasibility;
mod model;
mod simplex;

pub use certify::{certify, Certificate};
pub use dump::{read_lp, write_lp};
pub use feasibility::{check_feasibility, FeasibilityReport};
pub use model::{DenseLp, FamilyTag, Relation, Sense};
pub use simplex::{
    solve, LpSolution, SolveOptions, SolveStatus, CERTIFICATION_TOL, FEASIBILITY_TOL, PIVOT_TOL,
};
