//! Szegő kernel diagonals on the Bargmann plane and on ℙ¹, and fits of
//! their large-`k` expansion.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

pub const MAX_POWER: u32 = 128;
pub const DEFAULT_LADDER: [u32; 7] = [8, 12, 16, 24, 32, 48, 64];
const FIT_RESIDUAL_LIMIT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelModel {
    /// `ℂ` with `h_k = e^{−k|z|²}` and `dV = dx dy/π`.
    BargmannPlane,
    /// `ℙ¹` with `h_k = (1+|z|²)^{−k}` and `dV = dx dy/(π(1+|z|²)²)`.
    ProjectiveLine,
}

fn check_power(k: u32) -> Result<()> {
    if k == 0 || k > MAX_POWER {
        return Err(Error::InvalidParameter(format!(
            "tensor power must lie in 1..={MAX_POWER}, got {k}"
        )));
    }
    Ok(())
}

/// `‖z^j‖²` for `j = 0..=k` on ℙ¹. With `u = |z|²/(1+|z|²)` the integral is
/// `∫₀¹ u^j (1−u)^{k−j} du`, exact for the Gauss–Legendre rule used.
pub fn monomial_norms_p1(k: u32) -> Result<Vec<f64>> {
    check_power(k)?;
    let gl = GaussLegendre::new(k as usize / 2 + 8);
    Ok((0..=k)
        .map(|j| {
            gl.integrate(0.0, 1.0, |u| {
                u.powi(j as i32) * (1.0 - u).powi((k - j) as i32)
            })
        })
        .collect())
}

/// `Π_k(z, z)` sampled at a set of chart points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelDiagonal {
    pub model: KernelModel,
    pub k: u32,
    #[serde(serialize_with = "serialize_samples")]
    pub samples: Vec<(Complex64, f64)>,
}

fn serialize_samples<S: serde::Serializer>(
    s: &[(Complex64, f64)],
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = ser.serialize_seq(Some(s.len()))?;
    for (z, v) in s {
        seq.serialize_element(&[z.re, z.im, *v])?;
    }
    seq.end()
}

impl KernelDiagonal {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.1)
    }

    pub fn mean(&self) -> f64 {
        self.values().sum::<f64>() / self.samples.len() as f64
    }

    /// `max/min − 1` over the samples.
    pub fn spread(&self) -> f64 {
        let max = self.values().fold(f64::MIN, f64::max);
        let min = self.values().fold(f64::MAX, f64::min);
        max / min - 1.0
    }

    pub fn coefficient_of_variation(&self) -> f64 {
        let m = self.mean();
        let var = self.values().map(|v| (v - m) * (v - m)).sum::<f64>() / self.samples.len() as f64;
        var.sqrt() / m
    }
}

/// `Σ_j |s_j(z)|²_{h_k}` over an orthonormal basis of sections.
pub fn diagonal_value(
    model: KernelModel,
    k: u32,
    z: Complex64,
    norms: Option<&[f64]>,
) -> Result<f64> {
    let r2 = z.norm_sqr();
    if !r2.is_finite() {
        return Err(Error::InvalidParameter(
            "sample point must be finite".into(),
        ));
    }
    let kf = k as f64;
    match model {
        KernelModel::ProjectiveLine => {
            let owned;
            let norms = match norms {
                Some(n) => n,
                None => {
                    owned = monomial_norms_p1(k)?;
                    &owned
                }
            };
            // |z|^{2j}/(1+|z|²)^k = u^j (1−u)^{k−j}
            let u = r2 / (1.0 + r2);
            Ok(norms
                .iter()
                .enumerate()
                .map(|(j, n)| u.powi(j as i32) * (1.0 - u).powi(k as i32 - j as i32) / n)
                .sum())
        }
        KernelModel::BargmannPlane => {
            // ‖z^j‖² = j!/k^{j+1}; terms k^{j+1}|z|^{2j}e^{−k|z|²}/j! in log form
            let x = kf * r2;
            let mut total = 0.0;
            let mut j = 0u32;
            loop {
                let log_term =
                    kf.ln() + if j == 0 { 0.0 } else { j as f64 * x.ln() } - x - ln_factorial(j);
                let term = log_term.exp();
                total += term;
                if j as f64 > x && term < 1e-17 * total {
                    break;
                }
                j += 1;
            }
            Ok(total)
        }
    }
}

fn ln_factorial(j: u32) -> f64 {
    (1..=j).map(|i| (i as f64).ln()).sum()
}

pub fn kernel_diagonal(model: KernelModel, k: u32, points: &[Complex64]) -> Result<KernelDiagonal> {
    check_power(k)?;
    if points.is_empty() {
        return Err(Error::InvalidParameter(
            "need at least one sample point".into(),
        ));
    }
    let norms = match model {
        KernelModel::ProjectiveLine => Some(monomial_norms_p1(k)?),
        KernelModel::BargmannPlane => None,
    };
    let samples = points
        .iter()
        .map(|&z| Ok((z, diagonal_value(model, k, z, norms.as_deref())?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(KernelDiagonal { model, k, samples })
}

/// Ten deterministic sample points spread over the chart.
pub fn default_points() -> Vec<Complex64> {
    (0..10)
        .map(|i| Complex64::from_polar(0.35 * i as f64, 2.399_963_229_728_653 * i as f64))
        .collect()
}

/// `∫_{ℙ¹} Π_k dV` with `u = |z|²/(1+|z|²)`: `dV = du dϑ/2π`.
pub fn p1_trace(k: u32) -> Result<f64> {
    let norms = monomial_norms_p1(k)?;
    let gl = GaussLegendre::new(k as usize / 2 + 16);
    let n_theta = 16;
    let mut total = 0.0;
    for (u, w) in gl.mapped(0.0, 1.0) {
        let r = (u / (1.0 - u)).sqrt();
        let ring: f64 = (0..n_theta)
            .map(|i| {
                let z = Complex64::from_polar(
                    r,
                    2.0 * std::f64::consts::PI * i as f64 / n_theta as f64,
                );
                diagonal_value(KernelModel::ProjectiveLine, k, z, Some(&norms)).unwrap_or(f64::NAN)
            })
            .sum::<f64>()
            / n_theta as f64;
        total += w * ring;
    }
    Ok(total)
}

/// Fit of `Π_k ≈ a₀kⁿ + a₁kⁿ⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticFit {
    pub n_hat: f64,
    /// Integer exponent used for the coefficient fit.
    pub n: i32,
    pub a0: f64,
    pub a1: f64,
    /// RMS relative misfit of `a₀ + a₁/k` to `Π_k/kⁿ`.
    pub residual: f64,
}

impl AsymptoticFit {
    /// `a₀` divided by a reference normalization (the Bargmann slope).
    pub fn normalized_a0(&self, normalization: f64) -> f64 {
        self.a0 / normalization
    }
}

fn least_squares(rows: &[Vec<f64>], rhs: &[f64]) -> Result<DVector<f64>> {
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let svd = m.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-12 * smax) {
        return Err(Error::IllConditionedFit(smin / smax));
    }
    svd.solve(&DVector::from_column_slice(rhs), 1e-14 * smax)
        .map_err(|_| Error::IllConditionedFit(smin / smax))
}

/// Least-squares fit over a ladder `(k, Π_k)`.
///
/// The exponent comes from `log Π = n̂ log k + log a₀ + c/k`, which absorbs the
/// subleading term; the coefficients from `Π_k/kⁿ = a₀ + a₁/k` with `n = round(n̂)`.
pub fn fit_expansion(ladder: &[(u32, f64)]) -> Result<AsymptoticFit> {
    if ladder.len() < 6 {
        return Err(Error::InvalidParameter(format!(
            "need at least 6 ladder values, got {}",
            ladder.len()
        )));
    }
    if ladder
        .iter()
        .any(|&(k, v)| k == 0 || !(v > 0.0) || !v.is_finite())
    {
        return Err(Error::InvalidParameter(
            "ladder values must be positive".into(),
        ));
    }
    let rows: Vec<Vec<f64>> = ladder
        .iter()
        .map(|&(k, _)| vec![(k as f64).ln(), 1.0, 1.0 / k as f64])
        .collect();
    let rhs: Vec<f64> = ladder.iter().map(|&(_, v)| v.ln()).collect();
    let sol = least_squares(&rows, &rhs)?;
    let n_hat = sol[0];
    let n = n_hat.round() as i32;
    let rows2: Vec<Vec<f64>> = ladder
        .iter()
        .map(|&(k, _)| vec![1.0, 1.0 / k as f64])
        .collect();
    let rhs2: Vec<f64> = ladder
        .iter()
        .map(|&(k, v)| v / (k as f64).powi(n))
        .collect();
    let c = least_squares(&rows2, &rhs2)?;
    let (a0, a1) = (c[0], c[1]);
    let residual = (ladder
        .iter()
        .zip(&rhs2)
        .map(|(&(k, _), y)| ((a0 + a1 / k as f64 - y) / y).powi(2))
        .sum::<f64>()
        / ladder.len() as f64)
        .sqrt();
    if residual > FIT_RESIDUAL_LIMIT {
        return Err(Error::IllConditionedFit(residual));
    }
    Ok(AsymptoticFit {
        n_hat,
        n,
        a0,
        a1,
        residual,
    })
}

/// Mean diagonal at every `k` of the ladder.
pub fn ladder_values(
    model: KernelModel,
    ladder: &[u32],
    points: &[Complex64],
) -> Result<Vec<(u32, f64)>> {
    ladder
        .iter()
        .map(|&k| Ok((k, kernel_diagonal(model, k, points)?.mean())))
        .collect()
}

/// Slope of the Bargmann diagonal in `k`, used to normalize `a₀`.
pub fn bargmann_normalization() -> Result<f64> {
    let fit = fit_expansion(&ladder_values(
        KernelModel::BargmannPlane,
        &DEFAULT_LADDER,
        &default_points(),
    )?)?;
    Ok(fit.a0)
}
