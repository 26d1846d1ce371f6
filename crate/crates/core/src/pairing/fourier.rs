use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{PairingResult, Representation, WaveFunction};
use crate::error::{Error, Result};
use crate::hermite::hermite_functions;
use crate::quadrature::{GaussHermite, GaussLegendre};

pub const TAIL_LIMIT: f64 = 1e-8;

/// Quadrature for `Pψ(q) = (2πħ)^{−1/2} ∫ ψ(p) e^{ipq/ħ} dp` in the
/// dimensionless variables `q/√ħ`, `p/√ħ` (where the transform is `ħ`-free).
///
/// The inner `p` rule carries the weight `e^{−p²/2}`; the outer projection
/// onto `h_k(q)` carries `e^{−q²}`.
#[derive(Debug, Clone)]
pub struct FourierRule {
    inner: GaussHermite,
    outer: GaussHermite,
}

impl Default for FourierRule {
    fn default() -> Self {
        Self::new(128, 64)
    }
}

impl FourierRule {
    pub fn new(inner: usize, outer: usize) -> Self {
        Self {
            inner: GaussHermite::new(inner),
            outer: GaussHermite::new(outer),
        }
    }

    /// Largest outer node: the window on which the projection is resolved.
    pub fn window(&self) -> f64 {
        self.outer.nodes.iter().copied().fold(0.0, f64::max)
    }

    /// `(2π)^{−1/2} ∫ ψ(p) e^{±ipq} dp` at one `q`.
    fn transform_at(&self, psi: &WaveFunction, q: f64, sign: f64) -> Complex64 {
        let n = psi.coeffs().len() - 1;
        let s2 = std::f64::consts::SQRT_2;
        let mut acc = Complex64::new(0.0, 0.0);
        for (&x, &w) in self.inner.nodes.iter().zip(&self.inner.weights) {
            let p = s2 * x;
            // h_j(p) = e^{−p²/2}·(polynomial); the Gaussian is in the weight
            let h = hermite_functions(n, p);
            let val: Complex64 = psi
                .coeffs()
                .iter()
                .zip(&h)
                .map(|(c, v)| c * (v * (0.5 * p * p).exp()))
                .sum();
            acc += val * Complex64::from_polar(w * s2, sign * p * q);
        }
        acc / (2.0 * std::f64::consts::PI).sqrt()
    }

    /// Coefficients of the transformed function on `h_0..h_n`.
    fn project(&self, psi: &WaveFunction, sign: f64) -> Vec<Complex64> {
        let n = psi.coeffs().len() - 1;
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for (&q, &w) in self.outer.nodes.iter().zip(&self.outer.weights) {
            let f = self.transform_at(psi, q, sign) * (0.5 * q * q).exp();
            let h = hermite_functions(n, q);
            for (k, hk) in h.iter().enumerate() {
                out[k] += f * (w * hk * (0.5 * q * q).exp());
            }
        }
        out
    }
}

/// `∫_{|x| > X} |ψ|²` beyond the resolved window.
pub(super) fn tail_mass(psi: &WaveFunction, window: f64) -> f64 {
    let gl = GaussLegendre::new(64);
    let side = |a: f64, b: f64| gl.integrate(a, b, |x| psi.eval(x).norm_sqr());
    side(window, window + 40.0) + side(-window - 40.0, -window)
}

fn check_tail(psi: &WaveFunction, rule: &FourierRule) -> Result<()> {
    let mass = tail_mass(psi, rule.window());
    if mass > TAIL_LIMIT {
        return Err(Error::TailMass {
            mass,
            limit: TAIL_LIMIT,
        });
    }
    Ok(())
}

/// Maps a momentum-space wave function to position space (and back, with the
/// inverse kernel, for position input).
pub fn fourier_projection(psi: &WaveFunction, rule: &FourierRule) -> Result<WaveFunction> {
    check_tail(psi, rule)?;
    let (sign, rep) = match psi.representation() {
        Representation::Momentum => (1.0, Representation::Position),
        Representation::Position => (-1.0, Representation::Momentum),
    };
    WaveFunction::new(*psi.basis(), rule.project(psi, sign), rep)
}

/// `⟨⟨s₁, s₂⟩⟩ = ⟨s₁, P s₂⟩` for sections of the two real polarizations,
/// by the direct double integral and by project-then-inner-product.
pub fn bks_pair_fourier(
    s1: &WaveFunction,
    s2: &WaveFunction,
    rule: &FourierRule,
) -> Result<PairingResult> {
    if s1.representation() == s2.representation() {
        return Err(Error::InvalidParameter(
            "fourier pairing needs one section of each polarization".into(),
        ));
    }
    let projected = fourier_projection(s2, rule)?;
    let route_a = s1.inner(&projected)?;
    let sign = if s2.representation() == Representation::Momentum {
        1.0
    } else {
        -1.0
    };
    let mut route_b = Complex64::new(0.0, 0.0);
    for (&q, &w) in rule.outer.nodes.iter().zip(&rule.outer.weights) {
        route_b += s1.eval(q).conj() * rule.transform_at(s2, q, sign) * (w * (q * q).exp());
    }
    let err = (route_a - route_b).norm();
    Ok(PairingResult {
        value: route_a,
        quadrature_error_estimate: err,
    })
}

/// `max |G − I|` for the Gram matrix of the images of `h_0..h_N`.
pub fn fourier_gram_defect(basis: crate::operators::BasisSpec, rule: &FourierRule) -> Result<f64> {
    let d = basis.dim();
    let mut images = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for j in 0..d {
        let img = fourier_projection(
            &WaveFunction::basis_state(basis, j, Representation::Momentum)?,
            rule,
        )?;
        for (k, c) in img.coeffs().iter().enumerate() {
            images[(k, j)] = *c;
        }
    }
    let gram = images.adjoint() * &images;
    Ok((gram - DMatrix::<Complex64>::identity(d, d))
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::BasisSpec;

    #[test]
    fn ground_state_is_fixed() {
        let b = BasisSpec::hermite(6, 1.0).unwrap();
        let out = fourier_projection(
            &WaveFunction::basis_state(b, 0, Representation::Momentum).unwrap(),
            &FourierRule::default(),
        )
        .unwrap();
        assert!((out.coeffs()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(out.representation(), Representation::Position);
    }

    #[test]
    fn hermite_functions_pick_up_powers_of_i() {
        let b = BasisSpec::hermite(8, 1.0).unwrap();
        let rule = FourierRule::default();
        for j in 0..=8 {
            let out = fourier_projection(
                &WaveFunction::basis_state(b, j, Representation::Momentum).unwrap(),
                &rule,
            )
            .unwrap();
            let expected = Complex64::i().powu(j as u32);
            assert!((out.coeffs()[j] - expected).norm() < 1e-10, "j = {j}");
        }
    }

    #[test]
    fn wide_states_hit_the_tail_check() {
        let b = BasisSpec::hermite(60, 1.0).unwrap();
        let psi = WaveFunction::basis_state(b, 60, Representation::Momentum).unwrap();
        assert!(matches!(
            fourier_projection(&psi, &FourierRule::new(64, 16)),
            Err(Error::TailMass { .. })
        ));
    }
}
