//! BKS pairings between polarizations: Fourier (vertical ↔ horizontal),
//! Segal–Bargmann (real ↔ Kähler) and Bogoliubov (Kähler ↔ Kähler).

mod bogoliubov;
mod fourier;
mod segal_bargmann;

pub use bogoliubov::{bogoliubov_ground_state, BogoliubovGroundState};
pub use fourier::{bks_pair_fourier, fourier_gram_defect, fourier_projection, FourierRule};
pub use segal_bargmann::{
    bks_pair_segal_bargmann, segal_bargmann_round_trip, segal_bargmann_sample,
    segal_bargmann_to_fock, segal_bargmann_to_fock_antiholomorphic, segal_bargmann_to_position,
    RoundTrip, SegalBargmannRule, KERNEL_CONSTANT,
};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermite::hermite_functions;
use crate::operators::{BasisKind, BasisSpec};

/// Which canonical variable the Hermite expansion is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Representation {
    Position,
    Momentum,
}

/// A section of a real polarization expanded in oscillator eigenfunctions.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    basis: BasisSpec,
    coeffs: Vec<Complex64>,
    representation: Representation,
}

impl WaveFunction {
    pub fn new(
        basis: BasisSpec,
        coeffs: Vec<Complex64>,
        representation: Representation,
    ) -> Result<Self> {
        if basis.kind != BasisKind::Hermite {
            return Err(Error::InvalidParameter(
                "wave functions use the Hermite basis".into(),
            ));
        }
        if coeffs.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: coeffs.len(),
            });
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidParameter(
                "wave function has non-finite coefficients".into(),
            ));
        }
        Ok(Self {
            basis,
            coeffs,
            representation,
        })
    }

    /// The `j`-th basis function itself.
    pub fn basis_state(basis: BasisSpec, j: usize, representation: Representation) -> Result<Self> {
        let mut c = vec![Complex64::new(0.0, 0.0); basis.dim()];
        *c.get_mut(j).ok_or(Error::DimensionMismatch {
            expected: basis.dim(),
            got: j + 1,
        })? = Complex64::new(1.0, 0.0);
        Self::new(basis, c, representation)
    }

    pub fn zero(basis: BasisSpec, representation: Representation) -> Result<Self> {
        Self::new(
            basis,
            vec![Complex64::new(0.0, 0.0); basis.dim()],
            representation,
        )
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self, other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coeffs.len(),
                got: other.coeffs.len(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Value at `x` in dimensionless units `x/√ħ`, i.e. with `ħ = 1`.
    pub fn eval(&self, x: f64) -> Complex64 {
        let h = hermite_functions(self.coeffs.len() - 1, x);
        self.coeffs.iter().zip(h).map(|(c, v)| c * v).sum()
    }
}

/// A holomorphic section `φ(z) = Σ c_j z^j` of the Kähler polarization,
/// with `‖z^j‖² = 2^j j!` from the weight `e^{−|z|²/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HolomorphicState {
    coeffs: Vec<Complex64>,
}

impl HolomorphicState {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter(
                "holomorphic state needs at least one coefficient".into(),
            ));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidParameter(
                "holomorphic state has non-finite coefficients".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    pub fn monomial(m: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); m + 1];
        c[m] = Complex64::new(1.0, 0.0);
        Self { coeffs: c }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn monomial_norm_sqr(j: usize) -> f64 {
        (1..=j).map(|k| 2.0 * k as f64).product()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c.norm_sqr() * Self::monomial_norm_sqr(j))
            .sum::<f64>()
            .sqrt()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }
}

/// A pairing value with its two-route discrepancy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairingResult {
    #[serde(serialize_with = "crate::report::serialize_complex")]
    pub value: Complex64,
    pub quadrature_error_estimate: f64,
}
