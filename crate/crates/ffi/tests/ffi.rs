use std::ffi::{c_char, CStr, CString};
use std::ptr;

use dpll_growth::cnf::{dimacs, examples};
use dpll_growth_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    let n = unsafe { dg_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(n >= 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn dimacs_solve_and_oracle() {
    let text = CString::new(dimacs::to_string(&examples::three_variables())).unwrap();
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { dg_instance_from_dimacs(text.as_ptr(), &mut inst) }, DgStatus::Ok);
    let mut n = 0;
    assert_eq!(unsafe { dg_instance_n_vars(inst, &mut n) }, DgStatus::Ok);
    assert_eq!(n, 3);

    let mut r = DgSolveResult::default();
    assert_eq!(unsafe { dg_solve(inst, DgHeuristic::Guc, 7, &mut r) }, DgStatus::Ok);
    assert!(!r.satisfiable);
    assert_eq!(r.q_splits + 1, r.b_leaves);

    let (mut t, mut b) = (0usize, 0.0f64);
    let mut buf = vec![0 as c_char; 64];
    let s = unsafe { dg_oracle_stationary(inst, DgHeuristic::Guc, &mut t, &mut b, buf.as_mut_ptr(), buf.len()) };
    assert_eq!(s, DgStatus::Ok);
    assert_eq!((t, b), (2, 2.4));
    assert_eq!(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap(), "12/5");

    let mut small = vec![0 as c_char; 3];
    let s = unsafe { dg_oracle_stationary(inst, DgHeuristic::Guc, &mut t, &mut b, small.as_mut_ptr(), small.len()) };
    assert_eq!(s, DgStatus::BufferTooSmall);
    unsafe { dg_instance_free(inst) };
}

#[test]
fn error_codes() {
    let bad = CString::new("p cnf 2 1\n1 5 0\n").unwrap();
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { dg_instance_from_dimacs(bad.as_ptr(), &mut inst) }, DgStatus::Parse);
    assert!(inst.is_null());
    assert!(last_error().contains("line"));

    assert_eq!(unsafe { dg_instance_from_dimacs(ptr::null(), &mut inst) }, DgStatus::NullPointer);
    let mut x = 0.0;
    assert_eq!(unsafe { dg_omega_theory(3.0, DgHeuristic::Guc, &mut x) }, DgStatus::Unsupported);
    assert_eq!(unsafe { dg_omega_theory(10.0, DgHeuristic::Sc1, &mut x) }, DgStatus::Unsupported);

    assert_eq!(unsafe { dg_instance_random_3sat(4, 1.0, 1, &mut inst) }, DgStatus::Ok);
    let (mut t, mut b) = (0usize, 0.0f64);
    let s = unsafe { dg_oracle_stationary(inst, DgHeuristic::Uc, &mut t, &mut b, ptr::null_mut(), 0) };
    assert_eq!(s, DgStatus::Satisfiable);
    unsafe { dg_instance_free(inst) };
    unsafe { dg_instance_free(ptr::null_mut()) };
}

#[test]
fn analytic_values() {
    let mut w = 0.0;
    assert_eq!(unsafe { dg_omega_theory(10.0, DgHeuristic::Guc, &mut w) }, DgStatus::Ok);
    assert!((w - 0.0323).abs() < 0.0015);
    let mut a = 0.0;
    assert_eq!(unsafe { dg_alpha_l(DgHeuristic::Uc, &mut a) }, DgStatus::Ok);
    assert!((a - 8.0 / 3.0).abs() < 0.01);
    assert_eq!(last_error(), "");
}

#[test]
fn header_declares_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/dpll_growth.h")).unwrap();
    for name in [
        "dg_instance_from_dimacs",
        "dg_solve",
        "dg_oracle_stationary",
        "dg_omega_theory",
        "dg_alpha_l",
        "dg_last_error_message",
        "DgInstance",
        "DG_STATUS_OK",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = tempfile_dir();
    let src = dir.join("use_header.c");
    std::fs::write(
        &src,
        "#include \"dpll_growth.h\"\nint main(void) { DgInstance *i = 0; DgSolveResult r; (void)r; return dg_instance_random_3sat(5, 4.0, 1, &i) == DG_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let status = match std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I", concat!(env!("CARGO_MANIFEST_DIR"), "/include")])
        .arg(&src)
        .status()
    {
        Ok(s) => s,
        Err(_) => return,
    };
    assert!(status.success());
}

fn tempfile_dir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("dg-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
