//! C ABI over the geoquant library.
//!
//! Every fallible function returns a [`GqStatus`]; `GQ_STATUS_OK` is zero.
//! Results are written through caller-provided pointers. Objects created by
//! the library are opaque and must be released with the matching `*_free`.
//! Array outputs take `(buf, cap, len)`: the full length is always stored in
//! `len`, `buf` may be null to query it, and a short buffer yields
//! `GQ_STATUS_BUFFER_TOO_SMALL`.
//! The text of the most recent error on the calling thread is available from
//! [`gq_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use geoquant::cli;
use geoquant::fresnel::{fresnel_gaussian, FresnelSpec};
use geoquant::operators::{
    corrected_operator, dirac_defect, prequantum_operator, spectrum, BasisSpec,
};
use geoquant::phase_space::{HermitianForm, ModelKind, ModelManifold, Observable};
use geoquant::prequant::{bohr_sommerfeld_levels, check_pc1};
use geoquant::report::Report;
use geoquant::szego::{
    bargmann_normalization, default_points, fit_expansion, ladder_values, KernelModel,
};
use geoquant::Error;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    UnsupportedManifold = 3,
    DimensionMismatch = 4,
    FlowBlowup = 5,
    PolarizationNotPreserved = 6,
    NonHermitian = 7,
    QuadratureNonconvergence = 8,
    TailMass = 9,
    SingularSum = 10,
    IllConditionedFit = 11,
    StencilOutOfDomain = 12,
    OpenLoop = 13,
    DegenerateLattice = 14,
    BufferTooSmall = 15,
    Panic = 16,
}

impl From<&Error> for GqStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::UnsupportedManifold(_) => Self::UnsupportedManifold,
            Error::DimensionMismatch { .. } => Self::DimensionMismatch,
            Error::InvalidParameter(_) => Self::InvalidParameter,
            Error::FlowBlowup { .. } => Self::FlowBlowup,
            Error::PolarizationNotPreserved(_) => Self::PolarizationNotPreserved,
            Error::NonHermitian(_) => Self::NonHermitian,
            Error::QuadratureNonconvergence { .. } => Self::QuadratureNonconvergence,
            Error::TailMass { .. } => Self::TailMass,
            Error::SingularSum(_) => Self::SingularSum,
            Error::IllConditionedFit(_) => Self::IllConditionedFit,
            Error::StencilOutOfDomain { .. } => Self::StencilOutOfDomain,
            Error::OpenLoop(_) => Self::OpenLoop,
            Error::DegenerateLattice => Self::DegenerateLattice,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Failure {
    Status(GqStatus, String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Core(e)
    }
}

fn null() -> Failure {
    Failure::Status(GqStatus::NullPointer, "null pointer argument".into())
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> GqStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            GqStatus::Ok
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(&e.to_string());
            GqStatus::from(&e)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_last_error(&msg);
            s
        }
        Err(_) => {
            set_last_error("internal panic");
            GqStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

/// Copies `values` into `(buf, cap)` and stores the full length in `len`.
/// With `buf` null only the length is reported.
unsafe fn write_slice(
    values: &[f64],
    buf: *mut f64,
    cap: usize,
    len: *mut usize,
) -> Result<(), Failure> {
    write(len, values.len())?;
    if buf.is_null() {
        return Ok(());
    }
    if cap < values.len() {
        return Err(Failure::Status(
            GqStatus::BufferTooSmall,
            format!("need {} entries, buffer holds {cap}", values.len()),
        ));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn gq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Opaque model manifold.
pub struct GqManifold(ModelManifold);

unsafe fn box_manifold(
    m: geoquant::Result<ModelManifold>,
    out: *mut *mut GqManifold,
) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(Box::into_raw(Box::new(GqManifold(m?))));
    Ok(())
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gq_manifold_sphere(
    radius: f64,
    hbar: f64,
    out: *mut *mut GqManifold,
) -> GqStatus {
    guard(|| {
        box_manifold(
            ModelManifold::sphere(radius).and_then(|m| m.with_hbar(hbar)),
            out,
        )
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gq_manifold_product_spheres(
    r1: f64,
    r2: f64,
    hbar: f64,
    out: *mut *mut GqManifold,
) -> GqStatus {
    guard(|| {
        box_manifold(
            ModelManifold::product_spheres(r1, r2).and_then(|m| m.with_hbar(hbar)),
            out,
        )
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gq_manifold_projective_line(
    hbar: f64,
    out: *mut *mut GqManifold,
) -> GqStatus {
    guard(|| box_manifold(ModelManifold::new(ModelKind::ProjectiveLine, hbar), out))
}

/// Torus `ℂ/Λ` with `H(z, w) = scale·z·w̄`; `lattice` holds
/// `re λ₁, im λ₁, re λ₂, im λ₂`.
///
/// # Safety
/// `lattice` must point to four doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gq_manifold_torus(
    scale: f64,
    lattice: *const f64,
    hbar: f64,
    out: *mut *mut GqManifold,
) -> GqStatus {
    guard(|| {
        if lattice.is_null() {
            return Err(null());
        }
        let l = std::slice::from_raw_parts(lattice, 4);
        let gens = [Complex64::new(l[0], l[1]), Complex64::new(l[2], l[3])];
        box_manifold(
            HermitianForm::new(scale)
                .and_then(|f| ModelManifold::torus(f, gens))
                .and_then(|m| m.with_hbar(hbar)),
            out,
        )
    })
}

/// # Safety
/// `m` must come from a `gq_manifold_*` constructor or be null.
#[no_mangle]
pub unsafe extern "C" fn gq_manifold_free(m: *mut GqManifold) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Integrality of `[ω/2πħ]` on every cycle of `m`, with the ratio of each cycle.
///
/// # Safety
/// Pointers must be valid; `ratios` may be null to query the length.
#[no_mangle]
pub unsafe extern "C" fn gq_check_pc1(
    m: *const GqManifold,
    is_integral: *mut bool,
    ratios: *mut f64,
    cap: usize,
    len: *mut usize,
) -> GqStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(null)?;
        let r = check_pc1(&m.0)?;
        let values: Vec<f64> = r.cycles.iter().map(|c| c.ratio).collect();
        write_slice(&values, ratios, cap, len)?;
        write(is_integral, r.is_integral)
    })
}

/// Interior spectrum of the oscillator on the Fock basis `z⁰..zⁿ`,
/// prequantum or with the half-form correction.
///
/// # Safety
/// `len` must be valid; `out` may be null to query the length.
#[no_mangle]
pub unsafe extern "C" fn gq_oscillator_spectrum(
    n: usize,
    hbar: f64,
    corrected: bool,
    out: *mut f64,
    cap: usize,
    len: *mut usize,
) -> GqStatus {
    guard(|| {
        let basis = BasisSpec::fock(n, hbar)?;
        let h = Observable::oscillator(1);
        let op = if corrected {
            corrected_operator(&h, &basis)?
        } else {
            prequantum_operator(&h, &basis)?
        };
        write_slice(&spectrum(&op)?, out, cap, len)
    })
}

/// `max |[Q(q), Q(p)] − iħ·Id|` on the interior of the Hermite basis `h₀..hₙ`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gq_dirac_defect_qp(n: usize, hbar: f64, out: *mut f64) -> GqStatus {
    guard(|| {
        let d = dirac_defect(
            &Observable::q(1, 0),
            &Observable::p(1, 0),
            &BasisSpec::hermite(n, hbar)?,
        )?;
        write(out, d)
    })
}

/// `∫ e^{ia|p|²/2} dⁿp` with its Maslov index `c`.
///
/// # Safety
/// Output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gq_fresnel_gaussian(
    n: usize,
    a: f64,
    re: *mut f64,
    im: *mut f64,
    c: *mut i32,
) -> GqStatus {
    guard(|| {
        let (phase, v) = fresnel_gaussian(&FresnelSpec::plain(n, a)?)?;
        write(re, v.re)?;
        write(im, v.im)?;
        write(c, phase.c)
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GqAsymptoticFit {
    pub n_hat: f64,
    pub n: i32,
    pub a0: f64,
    pub a1: f64,
    pub residual: f64,
    /// `a0` divided by the Bargmann-plane slope.
    pub normalized_a0: f64,
}

/// Fit of the ℙ¹ Szegő diagonal over the ladder `ks[0..len]`.
///
/// # Safety
/// `ks` must point to `len` values and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gq_szego_fit_p1(
    ks: *const u32,
    len: usize,
    out: *mut GqAsymptoticFit,
) -> GqStatus {
    guard(|| {
        if ks.is_null() {
            return Err(null());
        }
        let ladder = std::slice::from_raw_parts(ks, len);
        let fit = fit_expansion(&ladder_values(
            KernelModel::ProjectiveLine,
            ladder,
            &default_points(),
        )?)?;
        let norm = bargmann_normalization()?;
        write(
            out,
            GqAsymptoticFit {
                n_hat: fit.n_hat,
                n: fit.n,
                a0: fit.a0,
                a1: fit.a1,
                residual: fit.residual,
                normalized_a0: fit.normalized_a0(norm),
            },
        )
    })
}

/// Levels `ħ(n + d)`, `n = 0..=n_max`.
///
/// # Safety
/// `len` must be valid; `out` may be null to query the length.
#[no_mangle]
pub unsafe extern "C" fn gq_bohr_levels(
    shift: f64,
    n_max: usize,
    hbar: f64,
    out: *mut f64,
    cap: usize,
    len: *mut usize,
) -> GqStatus {
    guard(|| write_slice(&bohr_sommerfeld_levels(shift, n_max, hbar)?, out, cap, len))
}

/// Opaque check report of one CLI suite.
pub struct GqReport {
    report: Report,
    json: CString,
}

/// Runs a CLI command such as `"szego"` or `"pairing fourier"` at the given
/// `hbar`. A report is produced even when checks fail.
///
/// # Safety
/// `command` must be a NUL-terminated string and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gq_run_suite(
    command: *const c_char,
    hbar: f64,
    out: *mut *mut GqReport,
) -> GqStatus {
    guard(|| {
        if command.is_null() || out.is_null() {
            return Err(null());
        }
        let command = CStr::from_ptr(command).to_str().map_err(|_| {
            Failure::Status(GqStatus::InvalidParameter, "command is not UTF-8".into())
        })?;
        let hbar = hbar.to_string();
        let args = ["geoquant", "--hbar", hbar.as_str()]
            .into_iter()
            .chain(command.split_whitespace());
        let parsed = cli::parse(args)?;
        if parsed.out.is_some() || parsed.csv_dir.is_some() {
            return Err(Failure::Status(
                GqStatus::InvalidParameter,
                "output flags are not accepted here".into(),
            ));
        }
        let (report, _) = cli::execute(&parsed)?;
        let json = CString::new(report.to_json()?).map_err(|_| {
            Failure::Status(GqStatus::InvalidParameter, "report contains NUL".into())
        })?;
        out.write(Box::into_raw(Box::new(GqReport { report, json })));
        Ok(())
    })
}

/// JSON text of the report, owned by the report.
///
/// # Safety
/// `r` must be a live report or null (which yields null).
#[no_mangle]
pub unsafe extern "C" fn gq_report_json(r: *const GqReport) -> *const c_char {
    r.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// True when no check in the report failed.
///
/// # Safety
/// `r` must be a live report or null (which yields false).
#[no_mangle]
pub unsafe extern "C" fn gq_report_passed(r: *const GqReport) -> bool {
    r.as_ref().is_some_and(|r| r.report.passed())
}

/// # Safety
/// `r` must come from `gq_run_suite` or be null.
#[no_mangle]
pub unsafe extern "C" fn gq_report_free(r: *mut GqReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
