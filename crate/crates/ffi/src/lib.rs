//! C ABI over `dpll_growth`.
//!
//! Instances live behind an opaque [`DgInstance`] handle. Every call
//! returns a [`DgStatus`]; on failure the message is kept per thread and
//! read back with [`dg_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dpll_growth::cnf::{self, dimacs};
use dpll_growth::{growth, ode, oracle, Error, Heuristic, Instance};

/// Opaque CNF instance.
pub struct DgInstance {
    inner: Instance,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Resource = 4,
    Satisfiable = 5,
    Unsupported = 6,
    Numeric = 7,
    NoHalt = 8,
    Io = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DgHeuristic {
    Uc = 0,
    Guc = 1,
    Sc1 = 2,
}

impl From<DgHeuristic> for Heuristic {
    fn from(h: DgHeuristic) -> Self {
        match h {
            DgHeuristic::Uc => Heuristic::Uc,
            DgHeuristic::Guc => Heuristic::Guc,
            DgHeuristic::Sc1 => Heuristic::Sc1,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DgSolveResult {
    pub satisfiable: bool,
    pub q_splits: u64,
    pub b_leaves: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> DgStatus {
    match e {
        Error::InvalidArgument(_) => DgStatus::InvalidArgument,
        Error::Parse { .. } => DgStatus::Parse,
        Error::Resource(_) => DgStatus::Resource,
        Error::Satisfiable => DgStatus::Satisfiable,
        Error::Unsupported(_) | Error::UnsupportedDomain(_) => DgStatus::Unsupported,
        Error::NoHalt { .. } => DgStatus::NoHalt,
        Error::Io(_) | Error::Json(_) => DgStatus::Io,
        _ => DgStatus::Numeric,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (DgStatus, String)>) -> DgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            DgStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside dpll_growth".into());
            DgStatus::Panic
        }
    }
}

fn lib<T>(r: dpll_growth::Result<T>) -> Result<T, (DgStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), (DgStatus, String)> {
    if p.is_null() {
        Err((DgStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// Parses DIMACS text into a new instance.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_instance_from_dimacs(text: *const c_char, out: *mut *mut DgInstance) -> DgStatus {
    guard(|| {
        non_null(text, "text")?;
        non_null(out, "out")?;
        let s = CStr::from_ptr(text).to_str().map_err(|e| (DgStatus::Parse, e.to_string()))?;
        let inner = lib(dimacs::parse_str(s))?;
        *out = Box::into_raw(Box::new(DgInstance { inner }));
        Ok(())
    })
}

/// Random 3-SAT with round(alpha·n) clauses.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_instance_random_3sat(n_vars: usize, alpha: f64, seed: u64, out: *mut *mut DgInstance) -> DgStatus {
    guard(|| {
        non_null(out, "out")?;
        let inner = lib(cnf::random_3sat(n_vars, alpha, seed))?;
        *out = Box::into_raw(Box::new(DgInstance { inner }));
        Ok(())
    })
}

/// # Safety
/// `inst` must come from this library and not be used afterwards. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn dg_instance_free(inst: *mut DgInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// # Safety
/// `inst` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn dg_instance_n_vars(inst: *const DgInstance, out: *mut usize) -> DgStatus {
    guard(|| {
        non_null(inst, "inst")?;
        non_null(out, "out")?;
        *out = (*inst).inner.n_vars();
        Ok(())
    })
}

/// Runs DPLL once.
///
/// # Safety
/// `inst` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn dg_solve(inst: *const DgInstance, heuristic: DgHeuristic, seed: u64, out: *mut DgSolveResult) -> DgStatus {
    guard(|| {
        non_null(inst, "inst")?;
        non_null(out, "out")?;
        let st = dpll_growth::solve(&(*inst).inner, heuristic.into(), seed);
        *out = DgSolveResult { satisfiable: st.result.is_sat(), q_splits: st.q_splits, b_leaves: st.b_leaves };
        Ok(())
    })
}

/// Exact stationary tree size of an unsatisfiable instance. The rational
/// B* is written as "num/den" into `buf` when it is non-null.
///
/// # Safety
/// `inst`, `t_star` and `b_star` must be valid; `buf` must hold `buf_len`
/// bytes when non-null.
#[no_mangle]
pub unsafe extern "C" fn dg_oracle_stationary(
    inst: *const DgInstance,
    heuristic: DgHeuristic,
    t_star: *mut usize,
    b_star: *mut f64,
    buf: *mut c_char,
    buf_len: usize,
) -> DgStatus {
    guard(|| {
        non_null(inst, "inst")?;
        non_null(t_star, "t_star")?;
        non_null(b_star, "b_star")?;
        let inner = &(*inst).inner;
        if inner.n_vars() > oracle::DEFAULT_MAX_VARS {
            return Err((DgStatus::Resource, format!("{} variables exceed the oracle cap", inner.n_vars())));
        }
        let st = lib(oracle::stationary_tree_size(inner, heuristic.into()))?;
        *t_star = st.t_star;
        *b_star = oracle::to_f64(&st.b_star);
        if !buf.is_null() {
            write_c_string(&st.b_star.to_string(), buf, buf_len)?;
        }
        Ok(())
    })
}

unsafe fn write_c_string(s: &str, buf: *mut c_char, buf_len: usize) -> Result<(), (DgStatus, String)> {
    let bytes = s.as_bytes();
    if bytes.len() + 1 > buf_len {
        return Err((DgStatus::BufferTooSmall, format!("need {} bytes", bytes.len() + 1)));
    }
    ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, bytes.len());
    *buf.add(bytes.len()) = 0;
    Ok(())
}

/// Search-tree growth exponent in bits per variable for 3-SAT at `alpha0`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_omega_theory(alpha0: f64, heuristic: DgHeuristic, out: *mut f64) -> DgStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lib(growth::omega_theory(alpha0, heuristic.into()))?;
        Ok(())
    })
}

/// Largest 3-SAT ratio whose branch trajectory stays in the sat phase.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dg_alpha_l(heuristic: DgHeuristic, out: *mut f64) -> DgStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lib(ode::find_alpha_l(heuristic.into(), 1e-6))?;
        Ok(())
    })
}

/// Copies the calling thread's last error message into `buf` and returns
/// its length without the terminator, or -1 when `buf` is too small.
///
/// # Safety
/// `buf` must hold `buf_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn dg_last_error_message(buf: *mut c_char, buf_len: usize) -> isize {
    if buf.is_null() {
        return -1;
    }
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        match write_c_string(&e, buf, buf_len) {
            Ok(()) => e.len() as isize,
            Err(_) => -1,
        }
    })
}
