use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use geoquant_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(gq_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn sphere_integrality() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(gq_manifold_sphere(0.5, 1.0, &mut m), GqStatus::Ok);
        let mut ok = false;
        let mut len = 0;
        let mut ratio = [0.0; 1];
        assert_eq!(
            gq_check_pc1(m, &mut ok, ratio.as_mut_ptr(), 1, &mut len),
            GqStatus::Ok
        );
        assert!(ok);
        assert_eq!(len, 1);
        assert!((ratio[0] - 1.0).abs() < 1e-12);
        gq_manifold_free(m);

        assert_eq!(
            gq_manifold_product_spheres(0.5, std::f64::consts::FRAC_1_SQRT_2, 1.0, &mut m),
            GqStatus::Ok
        );
        assert_eq!(
            gq_check_pc1(m, &mut ok, ptr::null_mut(), 0, &mut len),
            GqStatus::Ok
        );
        assert!(!ok);
        assert_eq!(len, 2);
        gq_manifold_free(m);
    }
}

#[test]
fn torus_and_projective_line() {
    unsafe {
        let lattice = [1.0, 0.0, 0.0, 1.0];
        let mut m = ptr::null_mut();
        assert_eq!(
            gq_manifold_torus(1.0, lattice.as_ptr(), 1.0, &mut m),
            GqStatus::Ok
        );
        let mut ok = false;
        let mut len = 0;
        assert_eq!(
            gq_check_pc1(m, &mut ok, ptr::null_mut(), 0, &mut len),
            GqStatus::Ok
        );
        assert!(ok);
        gq_manifold_free(m);
        let degenerate = [1.0, 0.0, 2.0, 0.0];
        assert_eq!(
            gq_manifold_torus(1.0, degenerate.as_ptr(), 1.0, &mut m),
            GqStatus::DegenerateLattice
        );
        assert_eq!(gq_manifold_projective_line(1.0, &mut m), GqStatus::Ok);
        assert_eq!(
            gq_check_pc1(m, &mut ok, ptr::null_mut(), 0, &mut len),
            GqStatus::Ok
        );
        assert!(ok);
        gq_manifold_free(m);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(
            gq_manifold_sphere(-1.0, 1.0, &mut m),
            GqStatus::InvalidParameter
        );
        assert!(!last_error().is_empty());
        assert_eq!(
            gq_manifold_sphere(1.0, 1.0, ptr::null_mut()),
            GqStatus::NullPointer
        );
        let mut ok = false;
        let mut len = 0;
        assert_eq!(
            gq_check_pc1(ptr::null(), &mut ok, ptr::null_mut(), 0, &mut len),
            GqStatus::NullPointer
        );
        let mut buf = [0.0; 2];
        assert_eq!(
            gq_oscillator_spectrum(8, 1.0, false, buf.as_mut_ptr(), 2, &mut len),
            GqStatus::BufferTooSmall
        );
        assert_eq!(len, 8);
        assert_eq!(
            gq_oscillator_spectrum(8, 1.0, false, ptr::null_mut(), 0, &mut len),
            GqStatus::Ok
        );
        assert!(last_error().is_empty());
        gq_manifold_free(ptr::null_mut());
        gq_report_free(ptr::null_mut());
    }
}

#[test]
fn spectra_and_levels_agree() {
    unsafe {
        let mut spec = [0.0; 8];
        let mut levels = [0.0; 8];
        let mut len = 0;
        assert_eq!(
            gq_oscillator_spectrum(8, 1.0, true, spec.as_mut_ptr(), 8, &mut len),
            GqStatus::Ok
        );
        assert_eq!(
            gq_bohr_levels(0.5, 7, 1.0, levels.as_mut_ptr(), 8, &mut len),
            GqStatus::Ok
        );
        assert_eq!(spec, levels);
        let mut d = f64::NAN;
        assert_eq!(gq_dirac_defect_qp(12, 1.0, &mut d), GqStatus::Ok);
        assert!(d <= 1e-10);
    }
}

#[test]
fn fresnel_and_szego() {
    unsafe {
        let (mut re, mut im, mut c) = (0.0, 0.0, 0);
        assert_eq!(
            gq_fresnel_gaussian(2, 1.0, &mut re, &mut im, &mut c),
            GqStatus::Ok
        );
        assert_eq!(c, 2);
        assert!(re.abs() < 1e-12 && (im - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        let ks = [8u32, 12, 16, 24, 32, 48, 64];
        let mut fit = GqAsymptoticFit::default();
        assert_eq!(
            gq_szego_fit_p1(ks.as_ptr(), ks.len(), &mut fit),
            GqStatus::Ok
        );
        assert!((fit.n_hat - 1.0).abs() < 0.02);
        assert!((fit.normalized_a0 - 1.0).abs() < 0.02);
        assert_eq!(
            gq_szego_fit_p1(ks.as_ptr(), 3, &mut fit),
            GqStatus::InvalidParameter
        );
    }
}

#[test]
fn suite_report_round_trip() {
    unsafe {
        let cmd = CString::new("pairing fourier").unwrap();
        let mut r = ptr::null_mut();
        assert_eq!(gq_run_suite(cmd.as_ptr(), 1.0, &mut r), GqStatus::Ok);
        assert!(gq_report_passed(r));
        let json = CStr::from_ptr(gq_report_json(r)).to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(json).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["command"], "pairing fourier");
        gq_report_free(r);
        let bad = CString::new("nonsense").unwrap();
        assert_eq!(
            gq_run_suite(bad.as_ptr(), 1.0, &mut r),
            GqStatus::InvalidParameter
        );
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok()
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(crate_dir().join("include/geoquant.h")).unwrap();
    for name in [
        "gq_manifold_sphere",
        "gq_check_pc1",
        "gq_run_suite",
        "gq_report_free",
        "GQ_STATUS_OK = 0",
        "GqAsymptoticFit",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
    if have_cc() {
        let status = Command::new("cc")
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
            .arg(crate_dir().join("include/geoquant.h"))
            .status()
            .unwrap();
        assert!(status.success());
    }
}

fn static_library() -> Option<PathBuf> {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().ok()?;
    let profile = exe.parent()?.parent()?;
    let lib = profile.join("libgeoquant_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_and_runs() {
    let (Some(lib), true) = (static_library(), have_cc()) else {
        eprintln!("static library or C compiler unavailable; skipping");
        return;
    };
    let dir = tempfile_dir();
    let exe = dir.join("smoke");
    let status = Command::new("cc")
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).contains("invalid parameter"));
}

fn tempfile_dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("geoquant-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
