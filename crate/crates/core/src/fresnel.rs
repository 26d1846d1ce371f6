//! Oscillatory Gaussian integrals `∫ e^{ia|p|²/2} A(p) dⁿp` and the
//! first-order reconstruction of the free Schrödinger generator.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{GaussHermite, GaussLegendre};

/// Amplitude multiplying the oscillatory Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Amplitude {
    One,
    /// `p_j` (odd, integrates to zero).
    Linear(usize),
    /// `p_j p_l`.
    Product(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FresnelSpec {
    pub n: usize,
    /// `t/(mħ)`.
    pub a: f64,
    pub amplitude: Amplitude,
}

impl FresnelSpec {
    pub fn new(n: usize, a: f64, amplitude: Amplitude) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "dimension must be at least 1".into(),
            ));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "coefficient a must be positive, got {a}"
            )));
        }
        let in_range = |j: usize| j < n;
        let ok = match amplitude {
            Amplitude::One => true,
            Amplitude::Linear(j) => in_range(j),
            Amplitude::Product(j, l) => in_range(j) && in_range(l),
        };
        if !ok {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: n + 1,
            });
        }
        Ok(Self { n, a, amplitude })
    }

    pub fn plain(n: usize, a: f64) -> Result<Self> {
        Self::new(n, a, Amplitude::One)
    }
}

/// `magnitude · e^{icπ/4}`, `c` taken mod 8.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaslovPhase {
    pub c: i32,
    pub magnitude: f64,
}

impl MaslovPhase {
    pub fn new(c: i32, magnitude: f64) -> Self {
        Self {
            c: c.rem_euclid(8),
            magnitude,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.magnitude, self.c as f64 * std::f64::consts::FRAC_PI_4)
    }
}

/// `∫ e^{ia|p|²/2} dⁿp = (2π)^{n/2} a^{−n/2} e^{inπ/4}`.
pub fn fresnel_gaussian(spec: &FresnelSpec) -> Result<(MaslovPhase, Complex64)> {
    if spec.amplitude != Amplitude::One {
        return Err(Error::InvalidParameter(
            "fresnel_gaussian takes the unit amplitude".into(),
        ));
    }
    let n = spec.n as f64;
    let phase = MaslovPhase::new(
        spec.n as i32,
        (2.0 * std::f64::consts::PI / spec.a).powf(n / 2.0),
    );
    Ok((phase, phase.value()))
}

/// Quadratic-amplitude integral, written as `i·|·|·e^{icπ/4}` with
/// `c = c̃ + 1`, `c̃ = n − 1` the phase of the remaining plain factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticFresnel {
    #[serde(serialize_with = "crate::report::serialize_complex")]
    pub value: Complex64,
    /// `None` when the integral vanishes by parity.
    pub phase: Option<MaslovPhase>,
    pub c_tilde: Option<i32>,
}

pub fn fresnel_quadratic(spec: &FresnelSpec) -> Result<QuadraticFresnel> {
    let (j, l) = match spec.amplitude {
        Amplitude::Product(j, l) => (j, l),
        _ => {
            return Err(Error::InvalidParameter(
                "fresnel_quadratic takes a p_j p_l amplitude".into(),
            ))
        }
    };
    if j != l {
        return Ok(QuadraticFresnel {
            value: Complex64::new(0.0, 0.0),
            phase: None,
            c_tilde: None,
        });
    }
    let n = spec.n as f64;
    // ∫ p² e^{iap²/2} dp = i a^{−3/2} √(2π) e^{iπ/4}, times the (n−1)-dim plain factor
    let c_tilde = spec.n as i32 - 1;
    let phase = MaslovPhase::new(
        c_tilde + 1,
        (2.0 * std::f64::consts::PI).powf(n / 2.0) * spec.a.powf(-(n / 2.0 + 1.0)),
    );
    Ok(QuadraticFresnel {
        value: Complex64::i() * phase.value(),
        phase: Some(phase),
        c_tilde: Some(c_tilde),
    })
}

/// Closed form for any amplitude.
pub fn fresnel_value(spec: &FresnelSpec) -> Result<Complex64> {
    match spec.amplitude {
        Amplitude::One => Ok(fresnel_gaussian(spec)?.1),
        Amplitude::Linear(_) => Ok(Complex64::new(0.0, 0.0)),
        Amplitude::Product(..) => Ok(fresnel_quadratic(spec)?.value),
    }
}

/// `∫ p^k e^{(ia/2 − ε)p²} dp` by the trapezoid rule on `|p| ≤ √(40/ε)`.
fn damped_moment(a: f64, eps: f64, k: u32) -> Complex64 {
    let p_max = (40.0 / eps).sqrt();
    let h = (0.5 / (a * p_max)).min(0.02);
    let m = (p_max / h).ceil() as i64;
    let h = p_max / m as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    // symmetric pairs summed together so odd moments cancel exactly
    for i in 1..=m {
        let p = i as f64 * h;
        let w = if i == m { 0.5 } else { 1.0 };
        let g = Complex64::from_polar((-eps * p * p).exp(), 0.5 * a * p * p);
        let pk = p.powi(k as i32);
        acc += g * (w * (pk + (-p).powi(k as i32)));
    }
    if k == 0 {
        acc += Complex64::new(1.0, 0.0);
    }
    acc * h
}

fn damped_value(spec: &FresnelSpec, eps: f64) -> Complex64 {
    let plain = damped_moment(spec.a, eps, 0);
    let (special, k) = match spec.amplitude {
        Amplitude::One => (None, 0),
        Amplitude::Linear(_) => (Some(0usize), 1),
        Amplitude::Product(j, l) if j == l => (Some(0), 2),
        Amplitude::Product(..) => (Some(1), 1),
    };
    match special {
        None => plain.powu(spec.n as u32),
        // p_j p_l with j ≠ l: two odd factors
        Some(1) => damped_moment(spec.a, eps, 1).powu(2) * plain.powu(spec.n as u32 - 2),
        Some(_) => damped_moment(spec.a, eps, k) * plain.powu(spec.n as u32 - 1),
    }
}

/// `ε → 0` extrapolation of the Gaussian-damped integral from the levels
/// `ε₀, ε₀/2, ε₀/4` (`ε₀ = a/200`) by two Richardson steps.
pub fn fresnel_regularized(spec: &FresnelSpec) -> Complex64 {
    let e0 = 0.005 * spec.a;
    let v: Vec<Complex64> = [e0, e0 / 2.0, e0 / 4.0]
        .iter()
        .map(|&e| damped_value(spec, e))
        .collect();
    let r1 = v[1] * 2.0 - v[0];
    let r1b = v[2] * 2.0 - v[1];
    (r1b * 4.0 - r1) / 3.0
}

/// Test state `A·P(q)·e^{ikq}·e^{−q²/2σ²}`, evaluable at complex arguments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestState {
    pub amplitude: f64,
    pub sigma: f64,
    pub k: f64,
    /// Polynomial coefficients, lowest degree first.
    pub poly: Vec<f64>,
}

impl TestState {
    /// The unit normal density `(2π)^{−1/2} e^{−q²/2}`.
    pub fn standard_gaussian() -> Self {
        Self {
            amplitude: (2.0 * std::f64::consts::PI).powf(-0.5),
            sigma: 1.0,
            k: 0.0,
            poly: vec![1.0],
        }
    }

    /// `e^{ikq}` times the standard Gaussian.
    pub fn plane_wave_gaussian(k: f64) -> Self {
        Self {
            k,
            ..Self::standard_gaussian()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma > 0.0)
            || !self.amplitude.is_finite()
            || !self.k.is_finite()
        {
            return Err(Error::InvalidParameter(
                "test state needs finite amplitude, k and positive σ".into(),
            ));
        }
        if self.poly.is_empty() || self.poly.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "test state polynomial must be finite and non-empty".into(),
            ));
        }
        Ok(())
    }

    fn poly_eval(c: &[f64], x: Complex64) -> Complex64 {
        c.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &v| acc * x + v)
    }

    fn poly_derivative(c: &[f64]) -> Vec<f64> {
        c.iter()
            .enumerate()
            .skip(1)
            .map(|(i, v)| v * i as f64)
            .collect()
    }

    fn exponent(&self, x: Complex64) -> Complex64 {
        Complex64::new(0.0, self.k) * x - x * x / (2.0 * self.sigma * self.sigma)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        Self::poly_eval(&self.poly, x) * self.exponent(x).exp() * self.amplitude
    }

    pub fn second_derivative(&self, x: Complex64) -> Complex64 {
        let s2 = self.sigma * self.sigma;
        let g1 = Complex64::new(0.0, self.k) - x / s2;
        let g2 = Complex64::new(-1.0 / s2, 0.0);
        let d1 = Self::poly_derivative(&self.poly);
        let d2 = Self::poly_derivative(&d1);
        let (p, p1, p2) = (
            Self::poly_eval(&self.poly, x),
            Self::poly_eval(&d1, x),
            Self::poly_eval(&d2, x),
        );
        (p2 + p1 * g1 * 2.0 + p * (g1 * g1 + g2)) * self.exponent(x).exp() * self.amplitude
    }
}

pub const GRID_HALF_WIDTH_SIGMAS: f64 = 8.0;
pub const GRID_POINTS: usize = 1 << 12;
pub const TAIL_LIMIT: f64 = 1e-10;
const PROPAGATOR_NODES: usize = 64;

/// `e^{−iπ/4}(t/2πmħ)^{1/2} ∫ ψ(q + pt/m) e^{ip²t/2mħ} dp`.
///
/// With `u = pt/m` and `u = e^{iπ/4}v` the oscillatory weight becomes
/// `e^{−mv²/2ħt}`, integrated by Gauss–Hermite.
pub fn evolve(
    psi: &TestState,
    q: f64,
    t: f64,
    mass: f64,
    hbar: f64,
    gh: &GaussHermite,
) -> Complex64 {
    let beta = mass / (2.0 * hbar * t);
    let rot = Complex64::from_polar(1.0 / beta.sqrt(), std::f64::consts::FRAC_PI_4);
    let sum: Complex64 = gh
        .nodes
        .iter()
        .zip(&gh.weights)
        .map(|(&x, &w)| psi.eval(rot * x + q) * w)
        .sum();
    sum / std::f64::consts::PI.sqrt()
}

fn grid(psi: &TestState) -> Vec<f64> {
    let half = GRID_HALF_WIDTH_SIGMAS * psi.sigma;
    (0..GRID_POINTS)
        .map(|i| -half + 2.0 * half * i as f64 / (GRID_POINTS - 1) as f64)
        .collect()
}

fn tail_mass(psi: &TestState, half: f64) -> f64 {
    let gl = GaussLegendre::new(64);
    let f = |x: f64| psi.eval(Complex64::new(x, 0.0)).norm_sqr();
    let width = 40.0 * psi.sigma;
    gl.integrate(half, half + width, f) + gl.integrate(-half - width, -half, f)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorCheck {
    /// Normalization in front of the evolved state at `t`; its value is
    /// `e^{−iπ/4}·(a/2π)^{1/2}` times the plain Fresnel integral with `a = t/mħ`.
    #[serde(serialize_with = "crate::report::serialize_complex")]
    pub zeroth: Complex64,
    /// Maslov phase of the plain integral, dropped from the evolution.
    pub dropped_phase: MaslovPhase,
    pub grid: Vec<f64>,
    #[serde(skip)]
    pub first_order: Vec<Complex64>,
    /// `−(i/ħ)ℋψ = (iħ/2m)ψ″` on the grid.
    #[serde(skip)]
    pub expected: Vec<Complex64>,
    pub residual: f64,
}

fn first_order_on(
    psi: &TestState,
    xs: &[f64],
    t: f64,
    mass: f64,
    hbar: f64,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let gh = GaussHermite::new(PROPAGATOR_NODES);
    let coef = Complex64::new(0.0, hbar / (2.0 * mass));
    xs.iter()
        .map(|&q| {
            let z = Complex64::new(q, 0.0);
            (
                (evolve(psi, q, t, mass, hbar, &gh) - psi.eval(z)) / t,
                coef * psi.second_derivative(z),
            )
        })
        .unzip()
}

fn check_args(psi: &TestState, t: f64, mass: f64, hbar: f64) -> Result<()> {
    psi.validate()?;
    if !(t > 0.0 && t <= 0.1) {
        return Err(Error::InvalidParameter(format!(
            "t must lie in (0, 0.1], got {t}"
        )));
    }
    if !(mass.is_finite() && mass > 0.0 && hbar.is_finite() && hbar > 0.0) {
        return Err(Error::InvalidParameter(
            "mass and hbar must be positive".into(),
        ));
    }
    Ok(())
}

/// `(evolved − ψ)/t` against `−(i/ħ)ℋψ` on the uniform grid of half-width
/// `8σ` with `2¹²` points.
pub fn schrodinger_generator_check(
    psi: &TestState,
    t: f64,
    mass: f64,
    hbar: f64,
) -> Result<GeneratorCheck> {
    check_args(psi, t, mass, hbar)?;
    let xs = grid(psi);
    let mass_out = tail_mass(psi, GRID_HALF_WIDTH_SIGMAS * psi.sigma);
    if mass_out > TAIL_LIMIT {
        return Err(Error::TailMass {
            mass: mass_out,
            limit: TAIL_LIMIT,
        });
    }
    let (first_order, expected) = first_order_on(psi, &xs, t, mass, hbar);
    let residual = first_order
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if !residual.is_finite() {
        return Err(Error::QuadratureNonconvergence {
            estimate: residual,
            threshold: 1.0,
        });
    }
    let a = t / (mass * hbar);
    let (dropped_phase, plain) = fresnel_gaussian(&FresnelSpec::plain(1, a)?)?;
    let zeroth = Complex64::from_polar(
        (a / (2.0 * std::f64::consts::PI)).sqrt(),
        -std::f64::consts::FRAC_PI_4,
    ) * plain;
    Ok(GeneratorCheck {
        zeroth,
        dropped_phase,
        grid: xs,
        first_order,
        expected,
        residual,
    })
}

/// First-order term on an arbitrary window (no tail requirement).
pub fn first_order_window(
    psi: &TestState,
    xs: &[f64],
    t: f64,
    mass: f64,
    hbar: f64,
) -> Result<Vec<Complex64>> {
    check_args(psi, t, mass, hbar)?;
    Ok(first_order_on(psi, xs, t, mass, hbar).0)
}

/// Relative max-norm defect of the Richardson-projected first-order
/// coefficient `2D(t/2) − D(t)` against `(iħ/2m)ψ″`.
pub fn generator_coefficient_defect(psi: &TestState, t: f64, mass: f64, hbar: f64) -> Result<f64> {
    let full = schrodinger_generator_check(psi, t, mass, hbar)?;
    let half = schrodinger_generator_check(psi, t / 2.0, mass, hbar)?;
    let scale = full.expected.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let worst = full
        .first_order
        .iter()
        .zip(&half.first_order)
        .zip(&full.expected)
        .map(|((d1, d2), e)| (d2 * 2.0 - d1 - e).norm())
        .fold(0.0, f64::max);
    Ok(worst / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        let (ph, v) = fresnel_gaussian(&FresnelSpec::plain(1, 1.0).unwrap()).unwrap();
        assert_eq!(ph.c, 1);
        assert!(
            (v - Complex64::from_polar(
                (2.0 * std::f64::consts::PI).sqrt(),
                std::f64::consts::FRAC_PI_4
            ))
            .norm()
                < 1e-14
        );
        let (ph2, v2) = fresnel_gaussian(&FresnelSpec::plain(2, 1.0).unwrap()).unwrap();
        assert_eq!(ph2.c, 2);
        assert!((v2 - Complex64::new(0.0, 2.0 * std::f64::consts::PI)).norm() < 1e-13);
    }

    #[test]
    fn off_diagonal_quadratic_vanishes() {
        let q = fresnel_quadratic(&FresnelSpec::new(3, 1.0, Amplitude::Product(0, 2)).unwrap())
            .unwrap();
        assert_eq!(q.value, Complex64::new(0.0, 0.0));
        assert!(q.phase.is_none());
    }

    #[test]
    fn phase_shift_of_quadratic_amplitude() {
        for n in 1..=3 {
            let q = fresnel_quadratic(&FresnelSpec::new(n, 2.0, Amplitude::Product(0, 0)).unwrap())
                .unwrap();
            assert_eq!(q.phase.unwrap().c, q.c_tilde.unwrap() + 1);
        }
    }

    #[test]
    fn linear_amplitude_cancels() {
        let v = fresnel_regularized(&FresnelSpec::new(1, 1.0, Amplitude::Linear(0)).unwrap());
        assert!(v.norm() <= 1e-9);
    }

    #[test]
    fn regularized_matches_closed_form() {
        let spec = FresnelSpec::plain(1, 1.0).unwrap();
        let exact = fresnel_value(&spec).unwrap();
        assert!((fresnel_regularized(&spec) - exact).norm() / exact.norm() < 1e-6);
    }

    #[test]
    fn bad_time_is_rejected() {
        assert!(
            schrodinger_generator_check(&TestState::standard_gaussian(), 0.5, 1.0, 1.0).is_err()
        );
    }
}
