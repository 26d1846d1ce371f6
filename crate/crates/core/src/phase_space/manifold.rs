use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// A positive hermitian form on ℂ, `H(z, w) = scale · z · w̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianForm {
    pub scale: f64,
}

impl HermitianForm {
    pub fn new(scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "hermitian form must be positive, got {scale}"
            )));
        }
        Ok(Self { scale })
    }

    pub fn standard() -> Self {
        Self { scale: 1.0 }
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        z * w.conj() * self.scale
    }
}

/// The model phase spaces the toolkit knows about.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    /// `ℂⁿ ≅ ℝ^{2n}` with `ω = Σ dq_j ∧ dp_j`.
    FlatComplex { n: usize },
    /// `ℙ¹` with the Fubini–Study form in the chart `z ∈ ℂ`.
    ProjectiveLine,
    /// Unit disk with the hyperbolic form.
    Disk,
    /// `ℂ/Λ` with `ω = (i/2) ∂∂̄ H`.
    Torus {
        form: HermitianForm,
        lattice: [Complex64; 2],
    },
    /// Round sphere, `ω = r sin φ dφ ∧ dϑ`.
    Sphere { radius: f64 },
    /// `S² × S²` with the sum of pulled-back sphere forms.
    ProductSpheres { r1: f64, r2: f64 },
    /// `T*S¹` with `ω = dp ∧ dφ`, potential `θ = p dφ`.
    Cylinder,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelManifold {
    kind: ModelKind,
    hbar: f64,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

impl ModelManifold {
    pub fn new(kind: ModelKind, hbar: f64) -> Result<Self> {
        check_positive("hbar", hbar)?;
        match &kind {
            ModelKind::FlatComplex { n } if *n == 0 => {
                return Err(Error::InvalidParameter("flat model needs n >= 1".into()));
            }
            ModelKind::Sphere { radius } => check_positive("radius", *radius)?,
            ModelKind::ProductSpheres { r1, r2 } => {
                check_positive("r1", *r1)?;
                check_positive("r2", *r2)?;
            }
            ModelKind::Torus { form, lattice } => {
                check_positive("hermitian form", form.scale)?;
                let cross = (lattice[0].conj() * lattice[1]).im;
                let size = lattice[0].norm() * lattice[1].norm();
                if !(cross.abs() > 1e-12 * size.max(1e-300)) || !cross.is_finite() {
                    return Err(Error::DegenerateLattice);
                }
            }
            _ => {}
        }
        Ok(Self { kind, hbar })
    }

    pub fn flat(n: usize) -> Result<Self> {
        Self::new(ModelKind::FlatComplex { n }, 1.0)
    }

    pub fn sphere(radius: f64) -> Result<Self> {
        Self::new(ModelKind::Sphere { radius }, 1.0)
    }

    pub fn product_spheres(r1: f64, r2: f64) -> Result<Self> {
        Self::new(ModelKind::ProductSpheres { r1, r2 }, 1.0)
    }

    pub fn torus(form: HermitianForm, lattice: [Complex64; 2]) -> Result<Self> {
        Self::new(ModelKind::Torus { form, lattice }, 1.0)
    }

    pub fn with_hbar(mut self, hbar: f64) -> Result<Self> {
        check_positive("hbar", hbar)?;
        self.hbar = hbar;
        Ok(self)
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Number of canonical pairs when the model carries global Darboux
    /// coordinates `(q, p)`.
    pub fn darboux_dim(&self) -> Result<usize> {
        match self.kind {
            ModelKind::FlatComplex { n } => Ok(n),
            ModelKind::Cylinder => Ok(1),
            _ => Err(Error::UnsupportedManifold(format!(
                "{} exposes no global Darboux chart",
                self.name()
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ModelKind::FlatComplex { .. } => "flat",
            ModelKind::ProjectiveLine => "projective-line",
            ModelKind::Disk => "disk",
            ModelKind::Torus { .. } => "torus",
            ModelKind::Sphere { .. } => "sphere",
            ModelKind::ProductSpheres { .. } => "product-spheres",
            ModelKind::Cylinder => "cylinder",
        }
    }

    /// Density of `ω` against the coordinate area element of the model's
    /// standard chart at `(u, v)`.
    ///
    /// Charts: `(q, p)` for flat and cylinder, `(x, y)` with `z = x + iy` for
    /// disk, ℙ¹ and torus, `(φ, ϑ)` for spheres (the first factor for products).
    pub fn symplectic_density(&self, u: f64, v: f64) -> Result<f64> {
        let r2 = u * u + v * v;
        Ok(match &self.kind {
            ModelKind::FlatComplex { .. } | ModelKind::Cylinder => 1.0,
            ModelKind::Sphere { radius } => radius * u.sin(),
            ModelKind::ProductSpheres { r1, .. } => r1 * u.sin(),
            // ω = iħΘ for Θ the curvature of O(1) with h = (1+|z|²)^{-1}
            ModelKind::ProjectiveLine => 2.0 * self.hbar / ((1.0 + r2) * (1.0 + r2)),
            ModelKind::Disk => {
                if r2 >= 1.0 {
                    return Err(Error::InvalidParameter(
                        "disk point must satisfy |z| < 1".into(),
                    ));
                }
                // (i/2)·4 dz∧dz̄/(1−|z|²)², curvature −1
                4.0 / ((1.0 - r2) * (1.0 - r2))
            }
            ModelKind::Torus { form, .. } => form.scale,
        })
    }

    /// Kähler potential `K` at a chart point, where the model defines one.
    pub fn kahler_potential(&self, z: Complex64) -> Option<f64> {
        let r2 = z.norm_sqr();
        match &self.kind {
            ModelKind::FlatComplex { .. } => Some(0.5 * r2),
            ModelKind::ProjectiveLine => Some((1.0 + r2).ln()),
            ModelKind::Disk if r2 < 1.0 => Some(-(1.0 - r2).ln()),
            ModelKind::Torus { form, .. } => Some(form.eval(z, z).re),
            _ => None,
        }
    }
}

/// A point in Darboux coordinates `(q_1..q_n, p_1..p_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    coords: Vec<f64>,
}

impl PhasePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || !coords.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "phase point needs an even, nonzero number of coordinates, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "phase point has non-finite entries".into(),
            ));
        }
        Ok(Self { coords })
    }

    pub fn from_qp(q: &[f64], p: &[f64]) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: q.len(),
                got: p.len(),
            });
        }
        Self::new(q.iter().chain(p).copied().collect())
    }

    /// From complex coordinates `z_j = p_j + i q_j`.
    pub fn from_complex(z: &[Complex64]) -> Result<Self> {
        let q: Vec<f64> = z.iter().map(|w| w.im).collect();
        let p: Vec<f64> = z.iter().map(|w| w.re).collect();
        Self::from_qp(&q, &p)
    }

    pub fn dim(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn q(&self) -> &[f64] {
        &self.coords[..self.dim()]
    }

    pub fn p(&self) -> &[f64] {
        &self.coords[self.dim()..]
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.q()
            .iter()
            .zip(self.p())
            .map(|(&q, &p)| Complex64::new(p, q))
            .collect()
    }

    /// Checks that the point lives on `m`'s Darboux chart (or in the disk).
    pub fn validate_for(&self, m: &ModelManifold) -> Result<()> {
        match m.kind() {
            ModelKind::Disk => {
                if self.dim() != 1 {
                    return Err(Error::DimensionMismatch {
                        expected: 1,
                        got: self.dim(),
                    });
                }
                if self.to_complex()[0].norm() >= 1.0 {
                    return Err(Error::InvalidParameter(
                        "disk point must satisfy |z| < 1".into(),
                    ));
                }
                Ok(())
            }
            _ => {
                let n = m.darboux_dim()?;
                if n != self.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: self.dim(),
                    });
                }
                Ok(())
            }
        }
    }
}

/// `ω(a, b) = Σ_j (a_{q_j} b_{p_j} − a_{p_j} b_{q_j})`, i.e. `ω = Σ dq_j ∧ dp_j`.
pub fn symplectic_pairing(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len() / 2;
    (0..n).map(|j| a[j] * b[n + j] - a[n + j] * b[j]).sum()
}

/// A linear complex structure on `ℝ^{2n}` compatible with `ω = Σ dx_j ∧ dy_j`,
/// coordinates ordered `(x_1..x_n, y_1..y_n)` and `z_j = x_j + i y_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure {
    matrix: DMatrix<f64>,
}

impl ComplexStructure {
    const TOL: f64 = 1e-10;

    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let d = matrix.nrows();
        if d == 0 || !d.is_multiple_of(2) || matrix.ncols() != d {
            return Err(Error::InvalidParameter(
                "complex structure must be a 2n×2n matrix".into(),
            ));
        }
        let sq = &matrix * &matrix + DMatrix::<f64>::identity(d, d);
        if sq.amax() > Self::TOL {
            return Err(Error::InvalidParameter(format!(
                "J² ≠ −1 (defect {:e})",
                sq.amax()
            )));
        }
        let omega = standard_symplectic_matrix(d / 2);
        let compat = matrix.transpose() * &omega * &matrix - &omega;
        if compat.amax() > Self::TOL {
            return Err(Error::InvalidParameter(format!(
                "J does not preserve ω (defect {:e})",
                compat.amax()
            )));
        }
        // g(v, w) = ω(v, Jw) must be positive definite
        let g = metric_matrix(&omega, &matrix);
        let sym = (&g + g.transpose()) * 0.5;
        let eig = nalgebra::SymmetricEigen::new(sym);
        if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
            return Err(Error::InvalidParameter(
                "g(v, v) = ω(v, Jv) is not positive".into(),
            ));
        }
        Ok(Self { matrix })
    }

    /// Multiplication by `i` in the coordinates `z_j = x_j + i y_j`.
    pub fn standard(n: usize) -> Self {
        let mut j = DMatrix::<f64>::zeros(2 * n, 2 * n);
        for k in 0..n {
            j[(k, n + k)] = -1.0;
            j[(n + k, k)] = 1.0;
        }
        Self { matrix: j }
    }

    /// `S J₀ S⁻¹` with `S = diag(s, 1/s)` on ℝ² (a squeezed structure).
    pub fn squeezed(s: f64) -> Result<Self> {
        check_positive("squeeze", s)?;
        let m = DMatrix::from_row_slice(2, 2, &[0.0, -s * s, 1.0 / (s * s), 0.0]);
        Self::new(m)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// Gram matrix of `g(v, w) = ω(v, J w)`.
    pub fn metric(&self) -> DMatrix<f64> {
        metric_matrix(&standard_symplectic_matrix(self.dim()), &self.matrix)
    }
}

/// Matrix `Ω` with `ω(a, b) = aᵀ Ω b` for `ω = Σ dx_j ∧ dy_j`.
pub fn standard_symplectic_matrix(n: usize) -> DMatrix<f64> {
    let mut om = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for k in 0..n {
        om[(k, n + k)] = 1.0;
        om[(n + k, k)] = -1.0;
    }
    om
}

fn metric_matrix(omega: &DMatrix<f64>, j: &DMatrix<f64>) -> DMatrix<f64> {
    omega * j
}
