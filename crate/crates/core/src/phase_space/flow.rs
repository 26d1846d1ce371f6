use crate::error::{Error, Result};

use super::manifold::{symplectic_pairing, ModelManifold, PhasePoint};
use super::observable::{Observable, Var};

pub const DEFAULT_STEPS: usize = 1024;
pub const DEFAULT_BLOWUP_BOUND: f64 = 1e8;
pub const FD_STEP_FIRST: f64 = 1e-5;

/// Components of `X_f = Σ (∂f/∂p_j) ∂_{q_j} − (∂f/∂q_j) ∂_{p_j}` as polynomials,
/// ordered `(q_1..q_n, p_1..p_n)`.
pub fn hamiltonian_field_components(f: &Observable) -> Vec<Observable> {
    let n = f.dim();
    let mut out: Vec<Observable> = (0..n).map(|j| f.derivative(Var::P(j))).collect();
    out.extend((0..n).map(|j| f.derivative(Var::Q(j)).scale(-1.0)));
    out
}

/// `X_f(m)`, the solution of `df = X_f ⌟ ω` at `m`.
pub fn hamiltonian_vector_field(
    m: &ModelManifold,
    f: &Observable,
    point: &PhasePoint,
) -> Result<Vec<f64>> {
    let n = m.darboux_dim()?;
    if f.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f.dim(),
        });
    }
    point.validate_for(m)?;
    Ok(hamiltonian_field_components(f)
        .iter()
        .map(|c| c.eval_real(point.coords()))
        .collect())
}

/// `{f, g} = X_g(f) = Σ ∂_q f ∂_p g − ∂_p f ∂_q g`, so `{q, p} = 1`.
pub fn poisson_bracket(f: &Observable, g: &Observable) -> Result<Observable> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: g.dim(),
        });
    }
    let mut out = Observable::zero(f.dim());
    for j in 0..f.dim() {
        let a = f.derivative(Var::Q(j)).try_mul(&g.derivative(Var::P(j)))?;
        let b = f.derivative(Var::P(j)).try_mul(&g.derivative(Var::Q(j)))?;
        out = out.try_add(&a)?.try_add(&b.scale(-1.0))?;
    }
    Ok(out)
}

/// `ω(X_f, X_g)` at a point.
pub fn bracket_from_fields(f: &Observable, g: &Observable, coords: &[f64]) -> f64 {
    let xf: Vec<f64> = hamiltonian_field_components(f)
        .iter()
        .map(|c| c.eval_real(coords))
        .collect();
    let xg: Vec<f64> = hamiltonian_field_components(g)
        .iter()
        .map(|c| c.eval_real(coords))
        .collect();
    symplectic_pairing(&xf, &xg)
}

/// `ℒ = X_f ⌟ θ − f` with `θ = Σ p_j dq_j`, i.e. `Σ p_j ∂f/∂p_j − f`.
pub fn lagrangian_of(f: &Observable) -> Observable {
    let n = f.dim();
    let mut out = f.scale(-1.0);
    for j in 0..n {
        let term = Observable::p(n, j)
            .try_mul(&f.derivative(Var::P(j)))
            .expect("same dimension");
        out = out.try_add(&term).expect("same dimension");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowConfig {
    pub steps: usize,
    pub blowup_bound: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            steps: DEFAULT_STEPS,
            blowup_bound: DEFAULT_BLOWUP_BOUND,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActionResult {
    /// `𝒮 = −∫₀ᵗ ℒ∘γ`, integration constant 0.
    pub action: f64,
    /// Step-doubling estimate of the absolute error of `action`.
    pub error_estimate: f64,
    pub relative_error: f64,
    pub endpoint: PhasePoint,
    /// Sampled values of the generating observable along the trajectory.
    pub hamiltonian_track: Vec<f64>,
}

struct Rhs {
    field: Vec<Observable>,
    lagrangian: Observable,
}

impl Rhs {
    fn eval(&self, y: &[f64], out: &mut [f64]) {
        let d = self.field.len();
        for (k, c) in self.field.iter().enumerate() {
            out[k] = c.eval_real(&y[..d]);
        }
        out[d] = -self.lagrangian.eval_real(&y[..d]);
    }
}

fn rk4(
    rhs: &Rhs,
    f: &Observable,
    y0: &[f64],
    t: f64,
    steps: usize,
    bound: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let dim = y0.len();
    let d = dim - 1;
    let h = t / steps as f64;
    let mut y = y0.to_vec();
    let (mut k1, mut k2, mut k3, mut k4) = (
        vec![0.0; dim],
        vec![0.0; dim],
        vec![0.0; dim],
        vec![0.0; dim],
    );
    let mut tmp = vec![0.0; dim];
    let mut track = Vec::with_capacity(steps + 1);
    track.push(f.eval_real(&y[..d]));
    for step in 0..steps {
        rhs.eval(&y, &mut k1);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        rhs.eval(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        rhs.eval(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = y[i] + h * k3[i];
        }
        rhs.eval(&tmp, &mut k4);
        for i in 0..dim {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let norm = y[..d].iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm <= bound) {
            return Err(Error::FlowBlowup {
                norm,
                bound,
                time: h * (step + 1) as f64,
            });
        }
        track.push(f.eval_real(&y[..d]));
    }
    Ok((y, track))
}

/// Integrates the flow of `f` from `m0` for time `t` with classical RK4 and
/// accumulates the generating function alongside.
pub fn integrate_flow(
    m: &ModelManifold,
    f: &Observable,
    m0: &PhasePoint,
    t: f64,
    config: &FlowConfig,
) -> Result<ActionResult> {
    let n = m.darboux_dim()?;
    if f.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f.dim(),
        });
    }
    m0.validate_for(m)?;
    if config.steps < 16 {
        return Err(Error::InvalidParameter(format!(
            "need at least 16 steps, got {}",
            config.steps
        )));
    }
    if !t.is_finite() {
        return Err(Error::InvalidParameter("flow time must be finite".into()));
    }
    let rhs = Rhs {
        field: hamiltonian_field_components(f),
        lagrangian: lagrangian_of(f),
    };
    let mut y0 = m0.coords().to_vec();
    y0.push(0.0);
    let (fine, track) = rk4(&rhs, f, &y0, t, config.steps, config.blowup_bound)?;
    let (coarse, _) = rk4(&rhs, f, &y0, t, config.steps / 2, config.blowup_bound)?;
    let action = fine[2 * n];
    // RK4: halving the step divides the error by 16
    let error_estimate = (fine[2 * n] - coarse[2 * n]).abs() / 15.0;
    let relative_error = if action != 0.0 {
        error_estimate / action.abs()
    } else {
        error_estimate
    };
    Ok(ActionResult {
        action,
        error_estimate,
        relative_error,
        endpoint: PhasePoint::new(fine[..2 * n].to_vec())?,
        hamiltonian_track: track,
    })
}

/// `𝒮(t) = −∫₀ᵗ ℒ(γ(w)) dw` along the flow of `f` from `m0`.
pub fn generating_action(
    m: &ModelManifold,
    f: &Observable,
    m0: &PhasePoint,
    t: f64,
    steps: usize,
) -> Result<f64> {
    let cfg = FlowConfig {
        steps,
        ..FlowConfig::default()
    };
    Ok(integrate_flow(m, f, m0, t, &cfg)?.action)
}

fn check_weights(weights: &[i64], point: &PhasePoint) -> Result<()> {
    if weights.len() != point.dim() {
        return Err(Error::DimensionMismatch {
            expected: weights.len(),
            got: point.dim(),
        });
    }
    Ok(())
}

/// `Φ = −½ Σ m_i (x_i² + y_i²)` for the weighted circle action on `ℝ^{2n}`,
/// `x = q`, `y = p`, `ω = Σ dx_i ∧ dy_i`.
pub fn moment_map_s1(weights: &[i64], point: &PhasePoint) -> Result<f64> {
    check_weights(weights, point)?;
    Ok(moment_value(weights, point.coords()))
}

fn moment_value(weights: &[i64], c: &[f64]) -> f64 {
    let n = weights.len();
    -0.5 * (0..n)
        .map(|i| weights[i] as f64 * (c[i] * c[i] + c[n + i] * c[n + i]))
        .sum::<f64>()
}

/// Infinitesimal generator `Σ m_i (x_i ∂_{y_i} − y_i ∂_{x_i})` at `c`.
pub fn circle_generator(weights: &[i64], c: &[f64]) -> Vec<f64> {
    let n = weights.len();
    let mut v = vec![0.0; 2 * n];
    for i in 0..n {
        let m = weights[i] as f64;
        v[i] = -m * c[n + i];
        v[n + i] = m * c[i];
    }
    v
}

/// Max-norm of `dΦ − ξ_M ⌟ ω` at a point, with `dΦ` by central differences of step `h`.
pub fn moment_map_defect(weights: &[i64], point: &PhasePoint, h: f64) -> Result<f64> {
    check_weights(weights, point)?;
    let c = point.coords();
    let xi = circle_generator(weights, c);
    let mut e = vec![0.0; c.len()];
    let mut worst: f64 = 0.0;
    let mut shifted = c.to_vec();
    for k in 0..c.len() {
        shifted[k] = c[k] + h;
        let up = moment_value(weights, &shifted);
        shifted[k] = c[k] - h;
        let down = moment_value(weights, &shifted);
        shifted[k] = c[k];
        let d_phi = (up - down) / (2.0 * h);
        e.iter_mut().for_each(|x| *x = 0.0);
        e[k] = 1.0;
        worst = worst.max((d_phi - symplectic_pairing(&xi, &e)).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat1() -> ModelManifold {
        ModelManifold::flat(1).unwrap()
    }

    #[test]
    fn field_of_momentum_points_along_q() {
        let v = hamiltonian_vector_field(
            &flat1(),
            &Observable::p(1, 0),
            &PhasePoint::new(vec![0.0, 0.0]).unwrap(),
        )
        .unwrap();
        assert_eq!(v, vec![1.0, 0.0]);
    }

    #[test]
    fn oscillator_field_matches_symbolic_oracle() {
        let v = hamiltonian_vector_field(
            &flat1(),
            &Observable::oscillator(1),
            &PhasePoint::new(vec![1.0, 2.0]).unwrap(),
        )
        .unwrap();
        assert_eq!(v, vec![2.0, -1.0]);
    }

    #[test]
    fn sphere_has_no_darboux_field() {
        let s = ModelManifold::sphere(1.0).unwrap();
        let r = hamiltonian_vector_field(
            &s,
            &Observable::p(1, 0),
            &PhasePoint::new(vec![0.0, 0.0]).unwrap(),
        );
        assert!(matches!(r, Err(Error::UnsupportedManifold(_))));
    }

    #[test]
    fn bracket_examples() {
        let q = Observable::q(1, 0);
        let p = Observable::p(1, 0);
        assert_eq!(
            poisson_bracket(&q, &p).unwrap(),
            Observable::constant(1, 1.0)
        );
        let f = q.clone() * q.clone() * q.clone() * p.clone();
        assert!(poisson_bracket(&f, &f).unwrap().is_zero());
        assert_eq!(
            poisson_bracket(&Observable::oscillator(1), &q).unwrap(),
            p.scale(-1.0)
        );
        assert!(poisson_bracket(&q, &Observable::q(2, 0)).is_err());
    }

    #[test]
    fn lagrangian_examples() {
        let p = Observable::p(1, 0);
        let q = Observable::q(1, 0);
        let kinetic = (p.clone() * p.clone()) * 0.5;
        assert_eq!(lagrangian_of(&kinetic), kinetic);
        assert_eq!(lagrangian_of(&q), q.scale(-1.0));
        assert!(lagrangian_of(&Observable::zero(1)).is_zero());
    }

    #[test]
    fn free_particle_action() {
        let h = (Observable::p(1, 0) * Observable::p(1, 0)) * 0.5;
        let s = generating_action(
            &flat1(),
            &h,
            &PhasePoint::new(vec![0.0, 1.0]).unwrap(),
            1.0,
            64,
        )
        .unwrap();
        assert!((s + 0.5).abs() < 1e-13);
    }

    #[test]
    fn blowup_is_reported() {
        let p = Observable::p(1, 0);
        // ṗ = −p², p(0) = −1 reaches infinity at t = 1
        let f = Observable::q(1, 0) * p.clone() * p.clone();
        let r = integrate_flow(
            &flat1(),
            &f,
            &PhasePoint::new(vec![0.0, -1.0]).unwrap(),
            2.0,
            &FlowConfig {
                steps: 64,
                blowup_bound: 1e3,
            },
        );
        assert!(matches!(r, Err(Error::FlowBlowup { .. })));
    }

    #[test]
    fn moment_map_examples() {
        let pt = PhasePoint::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(moment_map_s1(&[1], &pt).unwrap(), -1.0);
        assert_eq!(
            moment_map_s1(&[1], &PhasePoint::new(vec![0.0, 0.0]).unwrap()).unwrap(),
            0.0
        );
        let pt2 = PhasePoint::new(vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(moment_map_s1(&[2, 3], &pt2).unwrap(), -2.5);
        assert!(moment_map_defect(&[2, 3], &pt2, FD_STEP_FIRST).unwrap() < 1e-6);
    }
}
