use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase_space::{standard_symplectic_matrix, ComplexStructure};

const SINGULAR_TOL: f64 = 1e-12;
const BRANCH_STEPS: usize = 64;

/// Projection of the `J₂` ground state onto the `J₁` Fock space, on `ℝ²` with
/// coordinates `(x, y)`, `z = x + iy`, `ω = dx ∧ dy`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BogoliubovGroundState {
    /// `[det ½(J₁ + J₂)]^{−1/2}`.
    #[serde(serialize_with = "crate::report::serialize_complex")]
    pub det_factor: Complex64,
    /// `L = (J₁ + J₂)^{−1}(J₁ − J₂)`, row-major.
    pub l_matrix: [[f64; 2]; 2],
    /// `λ(v) = vᵀ(A − iB)v` with `A` from `2ω(v, J₁Lv)` and `B` from `2ω(v, Lv)`.
    pub lambda_real: [[f64; 2]; 2],
    pub lambda_imag: [[f64; 2]; 2],
    /// Coefficients of `z²`, `zz̄`, `z̄²` in `λ`.
    #[serde(serialize_with = "crate::report::serialize_complex_array")]
    pub lambda_z: [Complex64; 3],
}

impl BogoliubovGroundState {
    pub fn lambda(&self, x: f64, y: f64) -> Complex64 {
        let v = [x, y];
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                acc +=
                    Complex64::new(self.lambda_real[i][j], -self.lambda_imag[i][j]) * (v[i] * v[j]);
            }
        }
        acc
    }

    /// Coefficients of `z^k`, `k ≤ n`, of the holomorphic factor of the
    /// projected state `det_factor · e^{λ(z)/8}` (section factor `e^{−zz̄/4}`).
    pub fn state_coefficients(&self, n: usize) -> Result<Vec<Complex64>> {
        if self.lambda_z[1].norm() > 1e-12 || self.lambda_z[2].norm() > 1e-12 {
            return Err(Error::PolarizationNotPreserved(
                "λ is not holomorphic in z".into(),
            ));
        }
        let a = self.lambda_z[0] / 8.0;
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        let mut term = self.det_factor;
        for k in 0..=n / 2 {
            out[2 * k] = term;
            term = term * a / (k + 1) as f64;
        }
        Ok(out)
    }
}

fn det2(m: &DMatrix<f64>) -> f64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// `d^{−1/2}` continued along `½(J₁ + J(τ))`, `J(τ) = (1−τ)J₁ + τJ₂`, from `τ = 0`.
fn tracked_inverse_sqrt(j1: &DMatrix<f64>, j2: &DMatrix<f64>) -> Complex64 {
    let mut root = Complex64::new(1.0, 0.0);
    for k in 1..=BRANCH_STEPS {
        let tau = k as f64 / BRANCH_STEPS as f64;
        let jt = j1 * (1.0 - tau) + j2 * tau;
        let d = Complex64::new(det2(&((j1 + &jt) * 0.5)), 0.0);
        let cand = d.sqrt();
        root = if (cand - root).norm() <= (cand + root).norm() {
            cand
        } else {
            -cand
        };
    }
    root.inv()
}

pub fn bogoliubov_ground_state(
    j1: &ComplexStructure,
    j2: &ComplexStructure,
) -> Result<BogoliubovGroundState> {
    if j1.dim() != 1 || j2.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: j1.dim().max(j2.dim()),
        });
    }
    let a = j1.matrix();
    let b = j2.matrix();
    let sum = a + b;
    let det_sum = det2(&sum);
    if !(det_sum.abs() >= SINGULAR_TOL) {
        return Err(Error::SingularSum(det_sum.abs()));
    }
    let l = sum.try_inverse().ok_or(Error::SingularSum(det_sum.abs()))? * (a - b);
    let omega = standard_symplectic_matrix(1);
    let sym = |m: DMatrix<f64>| (&m + m.transpose()) * 0.5;
    let ar = sym(&omega * a * &l * 2.0);
    let br = sym(&omega * &l * 2.0);
    let arr = |m: &DMatrix<f64>| [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]];
    let m = |i: usize, j: usize| Complex64::new(ar[(i, j)], -br[(i, j)]);
    let i = Complex64::i();
    let lambda_z = [
        (m(0, 0) - m(1, 1) - i * m(0, 1) * 2.0) / 4.0,
        (m(0, 0) + m(1, 1)) / 2.0,
        (m(0, 0) - m(1, 1) + i * m(0, 1) * 2.0) / 4.0,
    ];
    Ok(BogoliubovGroundState {
        det_factor: tracked_inverse_sqrt(a, b),
        l_matrix: arr(&l),
        lambda_real: arr(&ar),
        lambda_imag: arr(&br),
        lambda_z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_case_is_exact() {
        let j = ComplexStructure::standard(1);
        let g = bogoliubov_ground_state(&j, &j).unwrap();
        assert_eq!(g.det_factor, Complex64::new(1.0, 0.0));
        assert_eq!(g.lambda_z, [Complex64::new(0.0, 0.0); 3]);
        assert_eq!(g.lambda(0.3, -0.7), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn squeeze_gives_holomorphic_lambda() {
        let s: f64 = 1.5;
        let g = bogoliubov_ground_state(
            &ComplexStructure::standard(1),
            &ComplexStructure::squeezed(s).unwrap(),
        )
        .unwrap();
        assert!((g.lambda_z[0].re - 2.0 * s.ln().tanh()).abs() < 1e-12);
        assert!(g.lambda_z[1].norm() < 1e-14 && g.lambda_z[2].norm() < 1e-14);
        assert!((g.det_factor.re - 12.0 / 13.0).abs() < 1e-12);
    }

    #[test]
    fn swapping_negates_l() {
        let j1 = ComplexStructure::standard(1);
        let j2 = ComplexStructure::squeezed(1.5).unwrap();
        let f = bogoliubov_ground_state(&j1, &j2).unwrap();
        let b = bogoliubov_ground_state(&j2, &j1).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert!((f.l_matrix[r][c] + b.l_matrix[r][c]).abs() < 1e-14);
            }
        }
        assert!((f.det_factor.norm() - b.det_factor.norm()).abs() < 1e-14);
    }
}
