//! Prequantum and half-form corrected operators on truncated bases.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase_space::{poisson_bracket, Observable, Var};

pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BasisKind {
    /// Orthonormalized monomials `z^j`, inner product weight `e^{−|z|²/2ħ}`.
    FockMonomial,
    /// Oscillator eigenfunctions `h_j(q)` with `m = ω = 1`.
    Hermite,
}

/// A truncated orthonormal basis `j = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisSpec {
    pub kind: BasisKind,
    pub n: usize,
    pub hbar: f64,
}

impl BasisSpec {
    pub fn new(kind: BasisKind, n: usize, hbar: f64) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidParameter(format!(
                "truncation order must be at least 4, got {n}"
            )));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParameter("hbar must be positive".into()));
        }
        Ok(Self { kind, n, hbar })
    }

    pub fn fock(n: usize, hbar: f64) -> Result<Self> {
        Self::new(BasisKind::FockMonomial, n, hbar)
    }

    pub fn hermite(n: usize, hbar: f64) -> Result<Self> {
        Self::new(BasisKind::Hermite, n, hbar)
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// Closed-form `‖z^j‖²` under `∫ |φ|² e^{−|z|²/2ħ} dx dy / (2πħ)`.
    pub fn fock_norm_sqr(&self, j: usize) -> f64 {
        (0..j).map(|k| 2.0 * self.hbar * (k + 1) as f64).product()
    }
}

/// Dense matrix of an operator in a truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    basis: BasisSpec,
    /// Rows/columns at the top of the ladder affected by truncation.
    boundary: usize,
    hermitian: bool,
}

impl OperatorMatrix {
    pub fn new(
        entries: DMatrix<Complex64>,
        basis: BasisSpec,
        boundary: usize,
        hermitian: bool,
    ) -> Result<Self> {
        let d = basis.dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: entries.nrows(),
            });
        }
        if entries
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidParameter(
                "operator has non-finite entries".into(),
            ));
        }
        let out = Self {
            entries,
            basis,
            boundary: boundary.clamp(1, d - 1),
            hermitian,
        };
        if hermitian {
            let defect = out.hermiticity_defect();
            if defect > HERMITIAN_TOL {
                return Err(Error::NonHermitian(defect));
            }
        }
        Ok(out)
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn boundary(&self) -> usize {
        self.boundary
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn interior_size(&self) -> usize {
        self.basis.dim() - self.boundary
    }

    pub fn interior(&self, size: usize) -> DMatrix<Complex64> {
        self.entries.view((0, 0), (size, size)).into_owned()
    }

    /// `max |A − A†|` over the interior block.
    pub fn hermiticity_defect(&self) -> f64 {
        let a = self.interior(self.interior_size());
        (&a - a.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// `αA + βB` on a common basis.
    pub fn combine(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Result<Self> {
        if self.basis != other.basis {
            return Err(Error::InvalidParameter(
                "operators live on different bases".into(),
            ));
        }
        let entries = self.entries.map(|c| c * alpha) + other.entries.map(|c| c * beta);
        let hermitian = self.hermitian && other.hermitian && alpha.im == 0.0 && beta.im == 0.0;
        Self::new(
            entries,
            self.basis,
            self.boundary.max(other.boundary),
            hermitian,
        )
    }
}

fn require_1d(f: &Observable) -> Result<()> {
    if f.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: f.dim(),
        });
    }
    Ok(())
}

/// Coefficients `(a, b, c, d)` of `f = a zz̄ + b z + c z̄ + d` or an error if
/// `X_f` does not preserve the holomorphic polarization.
pub fn holomorphic_admissible(f: &Observable) -> Result<[Complex64; 4]> {
    require_1d(f)?;
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for ((a, b), c) in f.to_complex_monomials()? {
        let slot = match (a, b) {
            (1, 1) => 0,
            (1, 0) => 1,
            (0, 1) => 2,
            (0, 0) => 3,
            _ => {
                return Err(Error::PolarizationNotPreserved(format!(
                    "term z^{a} z̄^{b} is outside span{{zz̄, z, z̄, 1}}"
                )))
            }
        };
        out[slot] = c;
    }
    Ok(out)
}

fn fock_matrix(f: &Observable, basis: &BasisSpec) -> Result<(DMatrix<Complex64>, usize)> {
    let [a, b, c, d] = holomorphic_admissible(f)?;
    let h = basis.hbar;
    let dim = basis.dim();
    let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for j in 0..dim {
        // zz̄ ↦ 2ħ z∂_z, 1 ↦ Id
        m[(j, j)] = a * (2.0 * h * j as f64) + d;
        if j + 1 < dim {
            let s = (2.0 * h * (j + 1) as f64).sqrt();
            // z ↦ multiplication by z, z̄ ↦ 2ħ ∂_z
            m[(j + 1, j)] += b * s;
            m[(j, j + 1)] += c * s;
        }
    }
    let boundary = if b != Complex64::new(0.0, 0.0) || c != Complex64::new(0.0, 0.0) {
        1
    } else {
        0
    };
    Ok((m, boundary))
}

fn hermite_matrix(f: &Observable, basis: &BasisSpec) -> Result<(DMatrix<Complex64>, usize)> {
    require_1d(f)?;
    let h = basis.hbar;
    let dim = basis.dim();
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::i();
    let mut m = DMatrix::from_element(dim, dim, zero);
    let mut boundary = 0;
    let sq = |k: usize| (k as f64).sqrt();
    for (e, coef) in f.terms() {
        match (e[0], e[1]) {
            (0, 0) => (0..dim).for_each(|j| m[(j, j)] += coef),
            (1, 0) => {
                // √(ħ/2)(a + a†)
                for j in 0..dim - 1 {
                    let v = coef * ((h / 2.0).sqrt() * sq(j + 1));
                    m[(j + 1, j)] += v;
                    m[(j, j + 1)] += v;
                }
                boundary = boundary.max(1);
            }
            (0, 1) => {
                // i√(ħ/2)(a† − a)
                for j in 0..dim - 1 {
                    let v = coef * i * ((h / 2.0).sqrt() * sq(j + 1));
                    m[(j + 1, j)] += v;
                    m[(j, j + 1)] -= v;
                }
                boundary = boundary.max(1);
            }
            (2, 0) | (0, 2) => {
                // (ħ/2)(a ± a†)², entries taken from the untruncated operator
                let sign = if e[0] == 2 { 1.0 } else { -1.0 };
                for j in 0..dim {
                    m[(j, j)] += coef * (h / 2.0 * (2 * j + 1) as f64);
                    if j + 2 < dim {
                        let v = coef * (sign * h / 2.0 * sq((j + 1) * (j + 2)));
                        m[(j + 2, j)] += v;
                        m[(j, j + 2)] += v;
                    }
                }
                boundary = boundary.max(2);
            }
            (1, 1) => {
                // symmetric ordering ½(qp + pq) = (iħ/2)(a†² − a²)
                for j in 0..dim.saturating_sub(2) {
                    let v = coef * i * (h / 2.0 * sq((j + 1) * (j + 2)));
                    m[(j + 2, j)] += v;
                    m[(j, j + 2)] -= v;
                }
                boundary = boundary.max(2);
            }
            (a, b) => {
                return Err(Error::PolarizationNotPreserved(format!(
                    "q^{a} p^{b} is outside span{{1, q, p, q², p², qp}}"
                )))
            }
        }
    }
    Ok((m, boundary))
}

/// `Q(f) = −iħ∇_{X_f} + f` in the chosen basis.
pub fn prequantum_operator(f: &Observable, basis: &BasisSpec) -> Result<OperatorMatrix> {
    let (m, boundary) = match basis.kind {
        BasisKind::FockMonomial => fock_matrix(f, basis)?,
        BasisKind::Hermite => hermite_matrix(f, basis)?,
    };
    OperatorMatrix::new(m, *basis, boundary, f.is_real())
}

/// Half-form term `ħ ∂_z ∂_z̄ f = (ħ/4)(∂_q² + ∂_p²) f`.
pub fn half_form_correction(f: &Observable, hbar: f64) -> Result<Observable> {
    require_1d(f)?;
    let lap = f
        .derivative(Var::Q(0))
        .derivative(Var::Q(0))
        .try_add(&f.derivative(Var::P(0)).derivative(Var::P(0)))?;
    Ok(lap.scale(hbar / 4.0))
}

/// `Q(f) + ħ∂_z∂_z̄ f` on the Fock basis; the correction must be constant.
pub fn corrected_operator(f: &Observable, basis: &BasisSpec) -> Result<OperatorMatrix> {
    if basis.kind != BasisKind::FockMonomial {
        return Err(Error::InvalidParameter(
            "half-form correction is defined on the Fock basis".into(),
        ));
    }
    let q = prequantum_operator(f, basis)?;
    let corr = half_form_correction(f, basis.hbar)?;
    if corr.degree() > 0 {
        return Err(Error::PolarizationNotPreserved(
            "correction term is not constant".into(),
        ));
    }
    let shift = corr.coefficient(&[0, 0]);
    let mut m = q.entries().clone();
    for j in 0..basis.dim() {
        m[(j, j)] += shift;
    }
    OperatorMatrix::new(m, *basis, q.boundary(), q.is_hermitian() && shift.im == 0.0)
}

/// Ascending eigenvalues of the interior block.
pub fn spectrum(a: &OperatorMatrix) -> Result<Vec<f64>> {
    let size = a.interior_size();
    let block = a.interior(size);
    let defect = (&block - block.adjoint())
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if defect > HERMITIAN_TOL {
        return Err(Error::NonHermitian(defect));
    }
    let diagonal =
        (0..size).all(|i| (0..size).all(|j| i == j || block[(i, j)] == Complex64::new(0.0, 0.0)));
    let mut values: Vec<f64> = if diagonal {
        (0..size).map(|i| block[(i, i)].re).collect()
    } else {
        SymmetricEigen::new(block)
            .eigenvalues
            .iter()
            .copied()
            .collect()
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

pub fn commutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a * b - b * a
}

/// `max |[Q(f), Q(g)] − iħ Q({f, g})|` over the interior block of size
/// `N − 1 − deg f − deg g`.
pub fn dirac_defect(f: &Observable, g: &Observable, basis: &BasisSpec) -> Result<f64> {
    let qf = prequantum_operator(f, basis)?;
    let qg = prequantum_operator(g, basis)?;
    let qb = prequantum_operator(&poisson_bracket(f, g)?, basis)?;
    let lost = 1 + f.degree() as usize + g.degree() as usize;
    let size = basis
        .n
        .checked_sub(lost)
        .filter(|&s| s > 0)
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "truncation {} too small for degrees {} and {}",
                basis.n,
                f.degree(),
                g.degree()
            ))
        })?;
    let lhs = commutator(qf.entries(), qg.entries());
    let ih = Complex64::new(0.0, basis.hbar);
    let mut worst: f64 = 0.0;
    for i in 0..size {
        for j in 0..size {
            worst = worst.max((lhs[(i, j)] - ih * qb.entries()[(i, j)]).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn oscillator_on_fock_is_diagonal() {
        let basis = BasisSpec::fock(5, 1.0).unwrap();
        let q = prequantum_operator(&Observable::oscillator(1), &basis).unwrap();
        let expected = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(6, |j, _| c(j as f64)));
        assert_eq!(q.entries(), &expected);
        let l = spectrum(&q).unwrap();
        assert_eq!(l, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn unit_maps_to_identity() {
        for basis in [
            BasisSpec::fock(6, 1.0).unwrap(),
            BasisSpec::hermite(6, 2.0).unwrap(),
        ] {
            let q = prequantum_operator(&Observable::constant(1, 1.0), &basis).unwrap();
            assert_eq!(q.entries(), &DMatrix::identity(7, 7));
        }
    }

    #[test]
    fn cubic_observable_is_rejected() {
        let basis = BasisSpec::fock(6, 1.0).unwrap();
        let z = Observable::z(1, 0);
        let f = z.clone() * z.clone() * z;
        assert!(matches!(
            prequantum_operator(&f, &basis),
            Err(Error::PolarizationNotPreserved(_))
        ));
        let q = Observable::q(1, 0);
        let hb = BasisSpec::hermite(6, 1.0).unwrap();
        assert!(matches!(
            prequantum_operator(&(q.clone() * q.clone() * q), &hb),
            Err(Error::PolarizationNotPreserved(_))
        ));
    }

    #[test]
    fn half_form_examples() {
        let two = |f: &Observable| half_form_correction(f, 1.0).unwrap().coefficient(&[0, 0]);
        assert_eq!(two(&Observable::oscillator(1)), c(0.5));
        assert!(half_form_correction(&Observable::z(1, 0), 1.0)
            .unwrap()
            .is_zero());
        let zz = Observable::z(1, 0) * Observable::zbar(1, 0) * 3.0;
        assert_eq!(two(&zz), c(3.0));
    }

    #[test]
    fn fock_commutator_of_z_and_zbar() {
        let basis = BasisSpec::fock(10, 1.0).unwrap();
        assert!(
            dirac_defect(&Observable::zbar(1, 0), &Observable::z(1, 0), &basis).unwrap() < 1e-12
        );
        assert!(
            dirac_defect(&Observable::oscillator(1), &Observable::z(1, 0), &basis).unwrap() < 1e-12
        );
    }

    #[test]
    fn position_commutes_with_itself() {
        let basis = BasisSpec::hermite(12, 1.0).unwrap();
        let q = Observable::q(1, 0);
        assert_eq!(dirac_defect(&q, &q, &basis).unwrap(), 0.0);
    }

    #[test]
    fn dense_spectrum_of_hermite_oscillator() {
        // ½(p² + q²) on the Hermite basis is diag(ħ(j + ½)) once interior entries are exact
        let basis = BasisSpec::hermite(10, 1.0).unwrap();
        let q = prequantum_operator(&Observable::oscillator(1), &basis).unwrap();
        let l = spectrum(&q).unwrap();
        for (j, v) in l.iter().enumerate() {
            assert!((v - (j as f64 + 0.5)).abs() < 1e-12);
        }
    }
}
