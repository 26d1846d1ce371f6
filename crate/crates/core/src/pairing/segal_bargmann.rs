use num_complex::Complex64;
use serde::Serialize;

use super::{HolomorphicState, PairingResult, Representation, WaveFunction};
use crate::error::{Error, Result};
use crate::hermite::hermite_functions;
use crate::operators::BasisSpec;
use crate::quadrature::GaussHermite;

/// `C = π^{1/4}`, fixed by the image of the constant state.
pub const KERNEL_CONSTANT: f64 = 1.331_335_363_800_389_7;

const CAUCHY_POINTS: usize = 64;

/// Quadrature for the kernel integrals, with `w = x + iy` and `dw dw̄ = dx dy`.
///
/// The `w`-integral of `P(φ)(q)` is taken on the contour through the saddle,
/// `x = iq + s`, `y = q + t`, where the integrand becomes
/// `φ(s + i(2q + t)) e^{−q²/2 − s²/4 − ist/2 − 3t²/4}`.
#[derive(Debug, Clone)]
pub struct SegalBargmannRule {
    levels: Vec<GaussHermite>,
    outer: GaussHermite,
    pub tolerance: f64,
    pub threshold: f64,
}

impl Default for SegalBargmannRule {
    fn default() -> Self {
        Self::new(16, 4, 64)
    }
}

impl SegalBargmannRule {
    /// Inner rules `base·2^r` for `r = 0..=refinements`; `outer` nodes in `q`.
    pub fn new(base: usize, refinements: usize, outer: usize) -> Self {
        let levels = (0..=refinements)
            .map(|r| GaussHermite::new(base << r))
            .collect();
        Self {
            levels,
            outer: GaussHermite::new(outer),
            tolerance: 1e-9,
            threshold: 1e-6,
        }
    }

    fn finest(&self) -> &GaussHermite {
        self.levels.last().expect("at least one level")
    }

    /// `P(φ)(q) e^{q²/2}` with the given inner rule.
    fn reduced_image(phi: &HolomorphicState, q: f64, rule: &GaussHermite) -> Complex64 {
        let st = 2.0 / 3f64.sqrt();
        let mut acc = Complex64::new(0.0, 0.0);
        for (&a, &wa) in rule.nodes.iter().zip(&rule.weights) {
            let s = 2.0 * a;
            for (&b, &wb) in rule.nodes.iter().zip(&rule.weights) {
                let t = st * b;
                let w = Complex64::new(s, 2.0 * q + t);
                acc += phi.eval(w) * Complex64::from_polar(wa * wb, -0.5 * s * t);
            }
        }
        // ds dt = 2·(2/√3) dx dy, prefactor (1/2π)(C/√π)
        acc * (2.0 * st * KERNEL_CONSTANT
            / (2.0 * std::f64::consts::PI * std::f64::consts::PI.sqrt()))
    }

    fn project(&self, phi: &HolomorphicState, n_out: usize, rule: &GaussHermite) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n_out + 1];
        for (&q, &w) in self.outer.nodes.iter().zip(&self.outer.weights) {
            let g = Self::reduced_image(phi, q, rule);
            let e = (0.5 * q * q).exp();
            for (k, hk) in hermite_functions(n_out, q).into_iter().enumerate() {
                out[k] += g * (w * hk * e);
            }
        }
        out
    }
}

fn require_unit_hbar(basis: &BasisSpec) -> Result<()> {
    if basis.hbar != 1.0 {
        return Err(Error::InvalidParameter(
            "the Segal–Bargmann kernel is written for ħ = 1".into(),
        ));
    }
    Ok(())
}

/// `P(φ)(q) = (1/2π) ∫ φ(w) K̄(q, w) e^{−ww̄/2} dw dw̄` at a single point.
pub fn segal_bargmann_sample(
    phi: &HolomorphicState,
    q: f64,
    rule: &SegalBargmannRule,
) -> Complex64 {
    SegalBargmannRule::reduced_image(phi, q, rule.finest()) * (-0.5 * q * q).exp()
}

/// `P(φ)` expanded on `h_0..h_{n_out}`, refining the inner rule until two
/// successive levels agree. Returns the state and the last level difference.
pub fn segal_bargmann_to_position(
    phi: &HolomorphicState,
    n_out: usize,
    rule: &SegalBargmannRule,
) -> Result<(WaveFunction, f64)> {
    let basis = BasisSpec::hermite(n_out, 1.0)?;
    let mut prev = rule.project(phi, n_out, &rule.levels[0]);
    let mut estimate = f64::INFINITY;
    for level in &rule.levels[1..] {
        let next = rule.project(phi, n_out, level);
        estimate = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        prev = next;
        if estimate < rule.tolerance {
            break;
        }
    }
    if estimate > rule.threshold {
        return Err(Error::QuadratureNonconvergence {
            estimate,
            threshold: rule.threshold,
        });
    }
    Ok((
        WaveFunction::new(basis, prev, Representation::Position)?,
        estimate,
    ))
}

/// Taylor coefficients at 0 of `F`, by the trapezoid rule on the unit circle.
fn taylor_coefficients(n: usize, f: impl Fn(Complex64) -> Complex64) -> Vec<Complex64> {
    let values: Vec<Complex64> = (0..CAUCHY_POINTS)
        .map(|m| {
            f(Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * m as f64 / CAUCHY_POINTS as f64,
            ))
        })
        .collect();
    (0..=n)
        .map(|k| {
            values
                .iter()
                .enumerate()
                .map(|(m, v)| {
                    v * Complex64::from_polar(
                        1.0,
                        -2.0 * std::f64::consts::PI * (k * m) as f64 / CAUCHY_POINTS as f64,
                    )
                })
                .sum::<Complex64>()
                / CAUCHY_POINTS as f64
        })
        .collect()
}

/// `(1/2π) ∫ ψ(q) k(q, u) dq` with `k = (C/√π) e^{−q²/2 + σ iqu + u²/4}`.
fn kernel_transform(
    psi: &WaveFunction,
    u: Complex64,
    sigma: f64,
    rule: &GaussHermite,
) -> Complex64 {
    let n = psi.coeffs().len() - 1;
    let mut acc = Complex64::new(0.0, 0.0);
    for (&q, &w) in rule.nodes.iter().zip(&rule.weights) {
        let h = hermite_functions(n, q);
        let e = (0.5 * q * q).exp();
        let val: Complex64 = psi.coeffs().iter().zip(&h).map(|(c, v)| c * (v * e)).sum();
        acc += val * w * (Complex64::new(0.0, sigma * q) * u + u * u * 0.25).exp();
    }
    acc * (KERNEL_CONSTANT / (2.0 * std::f64::consts::PI * std::f64::consts::PI.sqrt()))
}

fn check_position(psi: &WaveFunction) -> Result<()> {
    require_unit_hbar(psi.basis())?;
    if psi.representation() != Representation::Position {
        return Err(Error::InvalidParameter(
            "Segal–Bargmann input must be in the position representation".into(),
        ));
    }
    Ok(())
}

/// `P′(ψ)` with the holomorphic kernel `K(q, w)`, Taylor-extracted at 0.
pub fn segal_bargmann_to_fock(
    psi: &WaveFunction,
    rule: &SegalBargmannRule,
) -> Result<HolomorphicState> {
    check_position(psi)?;
    let n = psi.coeffs().len() - 1;
    HolomorphicState::new(taylor_coefficients(n, |w| {
        kernel_transform(psi, w, -1.0, &rule.outer)
    }))
}

/// `P′(ψ)` with the antiholomorphic kernel `K̄(q, w)`. The result depends
/// on `w̄`; its coefficients in powers of `w̄` are returned.
pub fn segal_bargmann_to_fock_antiholomorphic(
    psi: &WaveFunction,
    rule: &SegalBargmannRule,
) -> Result<HolomorphicState> {
    check_position(psi)?;
    let n = psi.coeffs().len() - 1;
    HolomorphicState::new(taylor_coefficients(n, |u| {
        kernel_transform(psi, u, 1.0, &rule.outer)
    }))
}

/// Diagnostics of `P∘P′` on `h_0..h_N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundTrip {
    /// `⟨h_j, P P′ h_j⟩` with the holomorphic kernel.
    pub multiple: f64,
    pub spread: f64,
    pub off_diagonal: f64,
    pub is_positive_multiple: bool,
    /// Same diagonal for the kernel `K̄`.
    pub antiholomorphic_multiples: Vec<f64>,
    pub antiholomorphic_is_positive_multiple: bool,
    /// True when only the conjugated kernel yields a positive multiple.
    pub kernel_conjugated: bool,
}

fn round_trip_diagonal(
    n: usize,
    rule: &SegalBargmannRule,
    to_fock: fn(&WaveFunction, &SegalBargmannRule) -> Result<HolomorphicState>,
) -> Result<(Vec<Complex64>, f64)> {
    let basis = BasisSpec::hermite(n, 1.0)?;
    let mut diag = Vec::with_capacity(n + 1);
    let mut off: f64 = 0.0;
    for j in 0..=n {
        let psi = WaveFunction::basis_state(basis, j, Representation::Position)?;
        let (back, _) = segal_bargmann_to_position(&to_fock(&psi, rule)?, n, rule)?;
        for (k, c) in back.coeffs().iter().enumerate() {
            if k == j {
                diag.push(*c);
            } else {
                off = off.max(c.norm());
            }
        }
    }
    Ok((diag, off))
}

fn positive_multiple(diag: &[Complex64], tol: f64) -> bool {
    let m = diag[0].re;
    m > 0.0 && diag.iter().all(|c| (c - m).norm() <= tol * m.max(1.0))
}

pub fn segal_bargmann_round_trip(n: usize, rule: &SegalBargmannRule) -> Result<RoundTrip> {
    let (diag, off) = round_trip_diagonal(n, rule, segal_bargmann_to_fock)?;
    let (anti, _) = round_trip_diagonal(n, rule, segal_bargmann_to_fock_antiholomorphic)?;
    let multiple = diag.iter().map(|c| c.re).sum::<f64>() / diag.len() as f64;
    let spread = diag
        .iter()
        .map(|c| (c - multiple).norm())
        .fold(0.0, f64::max);
    let is_positive_multiple = positive_multiple(&diag, 1e-8) && off < 1e-8;
    let antiholomorphic_is_positive_multiple = positive_multiple(&anti, 1e-8);
    Ok(RoundTrip {
        multiple,
        spread,
        off_diagonal: off,
        is_positive_multiple,
        antiholomorphic_multiples: anti.iter().map(|c| c.re).collect(),
        antiholomorphic_is_positive_multiple,
        kernel_conjugated: is_positive_multiple && !antiholomorphic_is_positive_multiple,
    })
}

/// `⟨⟨ψ, φ⟩⟩` two ways: `⟨ψ, Pφ⟩` in the Hermite basis, and the mixed
/// integral `(C/2π) ∫∫ ψ̄(q) φ(p + iq) e^{(2ipq − p² − q²)/4} dp dq`.
pub fn bks_pair_segal_bargmann(
    psi: &WaveFunction,
    phi: &HolomorphicState,
    rule: &SegalBargmannRule,
) -> Result<PairingResult> {
    check_position(psi)?;
    let n = psi.coeffs().len() - 1;
    let (image, _) = segal_bargmann_to_position(phi, n.max(phi.degree()), rule)?;
    let route_a: Complex64 = psi
        .coeffs()
        .iter()
        .zip(image.coeffs())
        .map(|(a, b)| a.conj() * b)
        .sum();
    let inner = rule.finest();
    let mut route_b = Complex64::new(0.0, 0.0);
    for (&q, &wq) in rule.outer.nodes.iter().zip(&rule.outer.weights) {
        let mut pint = Complex64::new(0.0, 0.0);
        for (&x, &wp) in inner.nodes.iter().zip(&inner.weights) {
            let p = 2.0 * x;
            pint += phi.eval(Complex64::new(p, q)) * Complex64::from_polar(2.0 * wp, 0.5 * p * q);
        }
        // the q-weight e^{−q²} is in wq
        route_b += psi.eval(q).conj() * pint * (wq * (0.75 * q * q).exp());
    }
    route_b *= KERNEL_CONSTANT / (2.0 * std::f64::consts::PI);
    let estimate = (route_a - route_b).norm();
    if estimate > rule.threshold {
        return Err(Error::QuadratureNonconvergence {
            estimate,
            threshold: rule.threshold,
        });
    }
    Ok(PairingResult {
        value: route_a,
        quadrature_error_estimate: estimate,
    })
}
