//! Prequantization checks: integrality of `[ω/2πħ]`, curvature of the model
//! hermitian metrics, holonomy of loops and Bohr–Sommerfeld levels.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase_space::{HermitianForm, ModelKind, ModelManifold};
use crate::quadrature::GaussLegendre;

pub const INTEGRALITY_TOL: f64 = 1e-6;
pub const TORUS_LATTICE_TOL: f64 = 1e-9;
pub const FD_STEP_SECOND: f64 = 1e-3;

const POLAR_NODES: usize = 48;
const ANGULAR_NODES: usize = 64;

/// One compact cycle of a model and the integrality test on it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleCheck {
    pub label: String,
    pub integral_value: f64,
    pub ratio: f64,
    pub is_integral: bool,
    pub nearest_admissible_parameters: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantizabilityReport {
    pub model: String,
    pub hbar: f64,
    pub cycles: Vec<CycleCheck>,
    pub is_integral: bool,
}

fn is_integral(ratio: f64) -> bool {
    (ratio - ratio.round()).abs() <= INTEGRALITY_TOL
}

/// `∫∫ r sin φ dφ dϑ` with Gauss–Legendre in `φ` and the trapezoid rule in `ϑ`.
fn sphere_integral(radius: f64) -> f64 {
    let gl = GaussLegendre::new(POLAR_NODES);
    let dtheta = 2.0 * std::f64::consts::PI / ANGULAR_NODES as f64;
    let mut total = 0.0;
    for (phi, w) in gl.mapped(0.0, std::f64::consts::PI) {
        let ring: f64 = (0..ANGULAR_NODES).map(|_| radius * phi.sin()).sum();
        total += w * ring * dtheta;
    }
    total
}

/// `∫_{ℝ²} ρ(x, y) dx dy` with `r = tan α`, Gauss–Legendre in `α`, trapezoid in `ϑ`.
fn plane_integral(density: impl Fn(f64, f64) -> f64) -> f64 {
    let gl = GaussLegendre::new(POLAR_NODES);
    let dtheta = 2.0 * std::f64::consts::PI / ANGULAR_NODES as f64;
    let mut total = 0.0;
    for (alpha, w) in gl.mapped(0.0, std::f64::consts::FRAC_PI_2) {
        let r = alpha.tan();
        let jac = r / (alpha.cos() * alpha.cos());
        let ring: f64 = (0..ANGULAR_NODES)
            .map(|j| {
                let t = j as f64 * dtheta;
                density(r * t.cos(), r * t.sin())
            })
            .sum();
        total += w * jac * ring * dtheta;
    }
    total
}

fn torus_area(lattice: &[Complex64; 2]) -> f64 {
    (lattice[0].conj() * lattice[1]).im.abs()
}

fn torus_integral(form: &HermitianForm, lattice: &[Complex64; 2]) -> f64 {
    let gl = GaussLegendre::new(8);
    let area = torus_area(lattice);
    let mut total = 0.0;
    for (_, ws) in gl.mapped(0.0, 1.0) {
        for (_, wt) in gl.mapped(0.0, 1.0) {
            total += ws * wt * form.scale * area;
        }
    }
    total
}

/// `∫ω` over the model's distinguished compact cycle (the first factor for
/// products).
pub fn integrate_symplectic_form(m: &ModelManifold) -> Result<f64> {
    match m.kind() {
        ModelKind::Sphere { radius } => Ok(sphere_integral(*radius)),
        ModelKind::ProductSpheres { r1, .. } => Ok(sphere_integral(*r1)),
        ModelKind::ProjectiveLine => Ok(plane_integral(|x, y| {
            m.symplectic_density(x, y).unwrap_or(0.0)
        })),
        ModelKind::Torus { form, lattice } => Ok(torus_integral(form, lattice)),
        _ => Err(Error::UnsupportedManifold(format!(
            "{} has no compact cycle to integrate over",
            m.name()
        ))),
    }
}

/// `(1/π) ∫ (1 + x² + y²)^{-2} dx dy`, the degree of the hyperplane bundle.
pub fn p1_degree_integral() -> f64 {
    plane_integral(|x, y| {
        let s = 1.0 + x * x + y * y;
        1.0 / (s * s)
    }) / std::f64::consts::PI
}

/// Two admissible values `n·unit` bracketing `value` (one if it is admissible).
fn bracket(value: f64, unit: f64) -> Vec<f64> {
    let x = value / unit;
    if is_integral(x) {
        return vec![x.round().max(1.0) * unit];
    }
    let lo = x.floor().max(1.0);
    let hi = x.ceil().max(1.0);
    let mut out = vec![lo * unit];
    if hi != lo {
        out.push(hi * unit);
    }
    out
}

fn sphere_cycle(label: &str, radius: f64, hbar: f64) -> CycleCheck {
    let integral_value = sphere_integral(radius);
    let ratio = integral_value / (2.0 * std::f64::consts::PI * hbar);
    CycleCheck {
        label: label.to_string(),
        integral_value,
        ratio,
        is_integral: is_integral(ratio),
        nearest_admissible_parameters: bracket(radius, 0.5 * hbar),
    }
}

/// PC1 on every designated cycle of `m`.
///
/// Spheres and ℙ¹ use `∫ω / 2πħ`. The torus follows the normalization of its
/// theta-function construction, where `ω` already represents `c₁` and the
/// integrality quantity is `∫ω / ħ`.
pub fn check_pc1(m: &ModelManifold) -> Result<QuantizabilityReport> {
    let hbar = m.hbar();
    let cycles = match m.kind() {
        ModelKind::Sphere { radius } => vec![sphere_cycle("S2", *radius, hbar)],
        ModelKind::ProductSpheres { r1, r2 } => {
            vec![
                sphere_cycle("S2 x pt", *r1, hbar),
                sphere_cycle("pt x S2", *r2, hbar),
            ]
        }
        ModelKind::ProjectiveLine => {
            let integral_value = integrate_symplectic_form(m)?;
            let ratio = integral_value / (2.0 * std::f64::consts::PI * hbar);
            vec![CycleCheck {
                label: "CP1".into(),
                integral_value,
                ratio,
                is_integral: is_integral(ratio),
                nearest_admissible_parameters: vec![ratio.round()],
            }]
        }
        ModelKind::Torus { form, lattice } => {
            let integral_value = torus_integral(form, lattice);
            let ratio = integral_value / hbar;
            let unit = hbar / torus_area(lattice);
            vec![CycleCheck {
                label: "T2".into(),
                integral_value,
                ratio,
                is_integral: is_integral(ratio),
                nearest_admissible_parameters: bracket(form.scale, unit),
            }]
        }
        _ => {
            return Err(Error::UnsupportedManifold(format!(
                "{} has no compact cycle",
                m.name()
            )))
        }
    };
    let is_integral = cycles.iter().all(|c| c.is_integral);
    Ok(QuantizabilityReport {
        model: m.name().into(),
        hbar,
        cycles,
        is_integral,
    })
}

/// True iff `Im H(λ_i, λ_j)` is an integer for every generator pair.
pub fn check_torus_lattice(form: &HermitianForm, lattice: &[Complex64; 2]) -> Result<bool> {
    if !(form.scale.is_finite() && form.scale > 0.0) {
        return Err(Error::InvalidParameter(
            "hermitian form must be positive".into(),
        ));
    }
    let cross = (lattice[0].conj() * lattice[1]).im;
    if !(cross.abs() > 1e-12 * lattice[0].norm() * lattice[1].norm()) {
        return Err(Error::DegenerateLattice);
    }
    Ok(lattice.iter().all(|a| {
        lattice.iter().all(|b| {
            let v = form.eval(*a, *b).im;
            (v - v.round()).abs() <= TORUS_LATTICE_TOL
        })
    }))
}

/// A model line-bundle metric: the squared norm of the distinguished
/// trivializing section, and the curvature coefficient it should produce.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianModelMetric {
    model: ModelManifold,
    power: u32,
}

impl HermitianModelMetric {
    pub fn new(model: ModelManifold) -> Result<Self> {
        Self::with_power(model, 1)
    }

    /// `k`-th tensor power (only meaningful for ℙ¹).
    pub fn with_power(model: ModelManifold, power: u32) -> Result<Self> {
        match model.kind() {
            ModelKind::FlatComplex { n: 1 }
            | ModelKind::Disk
            | ModelKind::Torus { .. }
            | ModelKind::ProjectiveLine => {}
            _ => {
                return Err(Error::UnsupportedManifold(format!(
                    "no model hermitian metric for {}",
                    model.name()
                )))
            }
        }
        if power == 0 {
            return Err(Error::InvalidParameter(
                "tensor power must be positive".into(),
            ));
        }
        Ok(Self { model, power })
    }

    pub fn model(&self) -> &ModelManifold {
        &self.model
    }

    /// `‖s‖²` at `z`: `e^{−|z|²/2ħ}`, `(1−|z|²)²`, `e^{−πH(z,z)}` or `(1+|z|²)^{−k}`.
    pub fn weight(&self, z: Complex64) -> f64 {
        let r2 = z.norm_sqr();
        match self.model.kind() {
            ModelKind::FlatComplex { .. } => (-r2 / (2.0 * self.model.hbar())).exp(),
            ModelKind::Disk => (1.0 - r2) * (1.0 - r2),
            ModelKind::Torus { form, .. } => (-std::f64::consts::PI * form.eval(z, z).re).exp(),
            ModelKind::ProjectiveLine => (1.0 + r2).powi(-(self.power as i32)),
            _ => unreachable!("rejected at construction"),
        }
    }

    /// Expected coefficient `c` in `−∂∂̄ log ‖s‖² = c dz ∧ dz̄`.
    pub fn expected_curvature(&self, z: Complex64) -> f64 {
        let r2 = z.norm_sqr();
        match self.model.kind() {
            ModelKind::FlatComplex { .. } => 1.0 / (2.0 * self.model.hbar()),
            ModelKind::Disk => 2.0 / ((1.0 - r2) * (1.0 - r2)),
            ModelKind::Torus { form, .. } => std::f64::consts::PI * form.scale,
            ModelKind::ProjectiveLine => self.power as f64 / ((1.0 + r2) * (1.0 + r2)),
            _ => unreachable!("rejected at construction"),
        }
    }

    fn contains(&self, z: Complex64, margin: f64) -> bool {
        match self.model.kind() {
            ModelKind::Disk => z.norm() + margin < 1.0,
            _ => z.re.is_finite() && z.im.is_finite(),
        }
    }
}

/// Polar sample grid `r_i = r_max·i/(n_r − 1)`, `ϑ_j = 2πj/n_θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub r_max: f64,
    pub n_radial: usize,
    pub n_angular: usize,
    pub step: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            r_max: 0.7,
            n_radial: 20,
            n_angular: 20,
            step: FD_STEP_SECOND,
        }
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.n_radial * self.n_angular);
        for i in 0..self.n_radial {
            let r = if self.n_radial > 1 {
                self.r_max * i as f64 / (self.n_radial - 1) as f64
            } else {
                0.0
            };
            for j in 0..self.n_angular {
                out.push(Complex64::from_polar(
                    r,
                    2.0 * std::f64::consts::PI * j as f64 / self.n_angular as f64,
                ));
            }
        }
        out
    }
}

/// `−∂∂̄ log w = −¼ Δ log w` by the five-point Laplacian.
pub fn fd_curvature(hm: &HermitianModelMetric, z: Complex64, h: f64) -> Result<f64> {
    if !hm.contains(z, h) {
        return Err(Error::StencilOutOfDomain { x: z.re, y: z.im });
    }
    let lw = |w: Complex64| hm.weight(w).ln();
    let c = lw(z);
    let lap =
        (lw(z + h) + lw(z - h) + lw(z + Complex64::new(0.0, h)) + lw(z - Complex64::new(0.0, h))
            - 4.0 * c)
            / (h * h);
    Ok(-0.25 * lap)
}

/// Max-norm deviation of the finite-difference curvature from the model's
/// expected coefficient over the grid.
pub fn curvature_defect(hm: &HermitianModelMetric, grid: &GridSpec) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for z in grid.points() {
        let d = (fd_curvature(hm, z, grid.step)? - hm.expected_curvature(z)).abs();
        worst = worst.max(d);
    }
    Ok(worst)
}

/// Defects at each step and the least-squares slope of `log defect` vs `log step`.
pub fn curvature_convergence(
    hm: &HermitianModelMetric,
    grid: &GridSpec,
    steps: &[f64],
) -> Result<(Vec<(f64, f64)>, f64)> {
    let mut table = Vec::with_capacity(steps.len());
    for &h in steps {
        table.push((h, curvature_defect(hm, &GridSpec { step: h, ..*grid })?));
    }
    let xs: Vec<f64> = table.iter().map(|(h, _)| h.ln()).collect();
    let ys: Vec<f64> = table
        .iter()
        .map(|(_, d)| d.max(f64::MIN_POSITIVE).ln())
        .collect();
    Ok((table, least_squares_slope(&xs, &ys)))
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Holonomy {
    /// `∮ θ` with `θ = p dq`.
    pub action: f64,
    /// `exp(i·action/ħ)`.
    #[serde(skip)]
    pub phase: Complex64,
}

/// Parallel transport around a closed polyline of `(q, p)` vertices on a
/// one-dimensional flat model. Each segment integral of `p dq` is exact.
pub fn holonomy_loop(m: &ModelManifold, vertices: &[[f64; 2]]) -> Result<Holonomy> {
    if m.darboux_dim()? != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: m.darboux_dim()?,
        });
    }
    let (first, last) = match (vertices.first(), vertices.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::InvalidParameter(
                "loop needs at least one vertex".into(),
            ))
        }
    };
    let gap = ((first[0] - last[0]).powi(2) + (first[1] - last[1]).powi(2)).sqrt();
    let scale = vertices
        .iter()
        .map(|v| v[0].abs().max(v[1].abs()))
        .fold(1.0, f64::max);
    if gap > 1e-12 * scale {
        return Err(Error::OpenLoop(gap));
    }
    let action: f64 = vertices
        .windows(2)
        .map(|w| 0.5 * (w[0][1] + w[1][1]) * (w[1][0] - w[0][0]))
        .sum();
    Ok(Holonomy {
        action,
        phase: Complex64::from_polar(1.0, action / m.hbar()),
    })
}

/// Closed polyline on `p² + q² = 2E`, oriented along the oscillator flow.
pub fn oscillator_circle(energy: f64, segments: usize) -> Vec<[f64; 2]> {
    let r = (2.0 * energy).sqrt();
    let mut out: Vec<[f64; 2]> = (0..segments)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / segments as f64;
            [r * t.sin(), r * t.cos()]
        })
        .collect();
    out.push(out[0]);
    out
}

/// Vertex count used for circle holonomies.
pub const CIRCLE_SEGMENTS: usize = 1 << 18;

/// `∮ θ` on the oscillator level set of energy `E`.
pub fn oscillator_action(energy: f64) -> Result<f64> {
    if !(energy.is_finite() && energy >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "energy must be non-negative, got {energy}"
        )));
    }
    let flat = ModelManifold::flat(1)?;
    Ok(holonomy_loop(&flat, &oscillator_circle(energy, CIRCLE_SEGMENTS))?.action)
}

/// Levels `E_n = ħ(n + d)`, `n = 0..=n_max`, from `∮θ = 2πE = 2πħ(n + d)`.
pub fn bohr_sommerfeld_levels(d: f64, n_max: usize, hbar: f64) -> Result<Vec<f64>> {
    if !(0.0..1.0).contains(&d) {
        return Err(Error::InvalidParameter(format!(
            "holonomy shift must lie in [0, 1), got {d}"
        )));
    }
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::InvalidParameter("hbar must be positive".into()));
    }
    Ok((0..=n_max).map(|n| hbar * (n as f64 + d)).collect())
}
