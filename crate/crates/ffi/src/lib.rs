//! C interface to the `revealing` library.
//!
//! Every fallible function returns an [`RvStatus`]; on failure a message is
//! kept per thread and can be read with [`rv_last_error_message`]. Objects
//! are handed out as opaque pointers and must be released with the matching
//! `*_free` function.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use revealing::families::{self, FamilyKind};
use revealing::interval::{objective_g, IntervalSequence};
use revealing::lp::{certify, solve, DenseLp, LpSolution, Relation, Sense, SolveOptions, SolveStatus};
use revealing::sim::{threshold_policy_value, to_f64};
use revealing::variational::{ContinuumProfile, ProfileTag};
use revealing::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    LengthMismatch = 3,
    NotOptimal = 4,
    Parse = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RvSense {
    Minimize = 0,
    Maximize = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RvRelation {
    Le = 0,
    Ge = 1,
    Eq = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RvSolveStatus {
    Optimal = 0,
    Infeasible = 1,
    Unbounded = 2,
    IterationLimit = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RvCertificate {
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub gap: f64,
    pub max_primal_violation: f64,
    pub max_dual_violation: f64,
    pub max_complementarity: f64,
    pub passed: bool,
}

/// Opaque LP handle.
pub struct RvLp(DenseLp);

/// Opaque solution handle.
pub struct RvSolution(LpSolution);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> RvStatus {
    match err {
        Error::InvalidInput(_) => RvStatus::InvalidInput,
        Error::LengthMismatch { .. } => RvStatus::LengthMismatch,
        Error::NotOptimal(_) => RvStatus::NotOptimal,
        Error::Parse { .. } => RvStatus::Parse,
        Error::Io(_) => RvStatus::Io,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), RvStatusError>>(f: F) -> RvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            RvStatus::Ok
        }
        Ok(Err(RvStatusError(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RvStatus::Panic
        }
    }
}

struct RvStatusError(RvStatus, String);

impl From<Error> for RvStatusError {
    fn from(e: Error) -> Self {
        RvStatusError(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> RvStatusError {
    RvStatusError(RvStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, RvStatusError> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| RvStatusError(RvStatus::InvalidInput, format!("{what} is not valid UTF-8")))
}

unsafe fn slice_arg<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], RvStatusError> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), RvStatusError> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn rv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds family `family` ("toy", "balance", "ranking" or "secretary") at size `n`.
#[no_mangle]
pub unsafe extern "C" fn rv_family_build(family: *const c_char, n: usize, out: *mut *mut RvLp) -> RvStatus {
    guard(|| {
        let kind: FamilyKind = str_arg(family, "family")?.parse()?;
        let lp = families::build(kind, n)?;
        write_out(out, Box::into_raw(Box::new(RvLp(lp))))
    })
}

/// New LP with `n_vars` variables in `[0, inf)` and no rows.
#[no_mangle]
pub unsafe extern "C" fn rv_lp_new(
    sense: RvSense,
    objective: *const f64,
    n_vars: usize,
    out: *mut *mut RvLp,
) -> RvStatus {
    guard(|| {
        let c = slice_arg(objective, n_vars, "objective")?.to_vec();
        let sense = match sense {
            RvSense::Minimize => Sense::Minimize,
            RvSense::Maximize => Sense::Maximize,
        };
        let lp = DenseLp::new(sense, c)?;
        write_out(out, Box::into_raw(Box::new(RvLp(lp))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn rv_lp_add_row(
    lp: *mut RvLp,
    coeffs: *const f64,
    len: usize,
    relation: RvRelation,
    rhs: f64,
) -> RvStatus {
    guard(|| {
        let lp = lp.as_mut().ok_or_else(|| null("lp"))?;
        let row = slice_arg(coeffs, len, "coeffs")?.to_vec();
        let rel = match relation {
            RvRelation::Le => Relation::Le,
            RvRelation::Ge => Relation::Ge,
            RvRelation::Eq => Relation::Eq,
        };
        lp.0.add_row(row, rel, rhs)?;
        Ok(())
    })
}

/// Sets variable bounds; an upper bound of `INFINITY` leaves the variable
/// unbounded above.
#[no_mangle]
pub unsafe extern "C" fn rv_lp_set_bounds(
    lp: *mut RvLp,
    lower: *const f64,
    upper: *const f64,
    len: usize,
) -> RvStatus {
    guard(|| {
        let lp = lp.as_mut().ok_or_else(|| null("lp"))?;
        let lo = slice_arg(lower, len, "lower")?.to_vec();
        let hi = slice_arg(upper, len, "upper")?.to_vec();
        lp.0.set_bounds(lo, hi)?;
        Ok(())
    })
}

/// Number of variables, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn rv_lp_n_vars(lp: *const RvLp) -> usize {
    lp.as_ref().map_or(0, |lp| lp.0.n_vars())
}

/// Number of rows, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn rv_lp_n_rows(lp: *const RvLp) -> usize {
    lp.as_ref().map_or(0, |lp| lp.0.n_rows())
}

#[no_mangle]
pub unsafe extern "C" fn rv_lp_free(lp: *mut RvLp) {
    if !lp.is_null() {
        drop(Box::from_raw(lp));
    }
}

/// Solves `lp`. Infeasible or unbounded problems still succeed; read the
/// outcome with `rv_solution_status`.
#[no_mangle]
pub unsafe extern "C" fn rv_lp_solve(lp: *const RvLp, out: *mut *mut RvSolution) -> RvStatus {
    guard(|| {
        let lp = lp.as_ref().ok_or_else(|| null("lp"))?;
        let sol = solve(&lp.0, SolveOptions::default())?;
        write_out(out, Box::into_raw(Box::new(RvSolution(sol))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn rv_solution_status(sol: *const RvSolution, out: *mut RvSolveStatus) -> RvStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("solution"))?;
        let s = match sol.0.status {
            SolveStatus::Optimal => RvSolveStatus::Optimal,
            SolveStatus::Infeasible => RvSolveStatus::Infeasible,
            SolveStatus::Unbounded => RvSolveStatus::Unbounded,
            SolveStatus::IterationLimit => RvSolveStatus::IterationLimit,
        };
        write_out(out, s)
    })
}

#[no_mangle]
pub unsafe extern "C" fn rv_solution_objective(sol: *const RvSolution, out: *mut f64) -> RvStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("solution"))?;
        write_out(out, sol.0.objective_value)
    })
}

/// Copies the primal vector into `buf`, which must hold exactly the number
/// of variables.
#[no_mangle]
pub unsafe extern "C" fn rv_solution_copy_x(sol: *const RvSolution, buf: *mut f64, len: usize) -> RvStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("solution"))?;
        copy_into(&sol.0.x, buf, len)
    })
}

/// Copies the row multipliers into `buf`, which must hold exactly the number
/// of rows.
#[no_mangle]
pub unsafe extern "C" fn rv_solution_copy_dual(sol: *const RvSolution, buf: *mut f64, len: usize) -> RvStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("solution"))?;
        copy_into(&sol.0.dual, buf, len)
    })
}

unsafe fn copy_into(src: &[f64], buf: *mut f64, len: usize) -> Result<(), RvStatusError> {
    if len != src.len() {
        return Err(Error::LengthMismatch { expected: src.len(), got: len }.into());
    }
    if len > 0 {
        if buf.is_null() {
            return Err(null("buffer"));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), buf, len);
    }
    Ok(())
}

#[no_mangle]
pub unsafe extern "C" fn rv_solution_free(sol: *mut RvSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Duality certificate of an optimal solution at tolerance `tol`.
#[no_mangle]
pub unsafe extern "C" fn rv_certify(
    lp: *const RvLp,
    sol: *const RvSolution,
    tol: f64,
    out: *mut RvCertificate,
) -> RvStatus {
    guard(|| {
        let lp = lp.as_ref().ok_or_else(|| null("lp"))?;
        let sol = sol.as_ref().ok_or_else(|| null("solution"))?;
        let c = certify(&lp.0, &sol.0, tol)?;
        write_out(
            out,
            RvCertificate {
                primal_objective: c.primal_objective,
                dual_objective: c.dual_objective,
                gap: c.gap,
                max_primal_violation: c.max_primal_violation,
                max_dual_violation: c.max_dual_violation,
                max_complementarity: c.max_complementarity,
                passed: c.passed,
            },
        )
    })
}

/// Optimal value of the toy or RANKING family through its tight recurrence.
#[no_mangle]
pub unsafe extern "C" fn rv_recurrence_value(family: *const c_char, n: usize, out: *mut f64) -> RvStatus {
    guard(|| {
        let kind: FamilyKind = str_arg(family, "family")?.parse()?;
        write_out(out, families::recurrence_value(kind, n)?)
    })
}

/// Evaluates a continuum profile such as "BalanceV" at `t` in `[0, 1]`.
#[no_mangle]
pub unsafe extern "C" fn rv_profile_eval(tag: *const c_char, t: f64, out: *mut f64) -> RvStatus {
    guard(|| {
        let tag: ProfileTag = str_arg(tag, "profile")?.parse()?;
        write_out(out, ContinuumProfile::new(tag).eval(t)?)
    })
}

/// Interval objective for `points = a_1, b_1, ..., a_K, b_K`.
#[no_mangle]
pub unsafe extern "C" fn rv_interval_objective(points: *const f64, len: usize, out: *mut f64) -> RvStatus {
    guard(|| {
        let s = IntervalSequence::new(slice_arg(points, len, "points")?.to_vec())?;
        write_out(out, objective_g(&s))
    })
}

/// Success probability of the threshold rule that skips `k` of `n`
/// candidates, rounded from the exact fraction.
#[no_mangle]
pub unsafe extern "C" fn rv_threshold_policy_value(n: usize, k: usize, out: *mut f64) -> RvStatus {
    guard(|| write_out(out, to_f64(&threshold_policy_value(n, k)?)))
}
