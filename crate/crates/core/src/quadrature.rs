//! Gauss rules used throughout the crate.
//!
//! Nodes come from the Golub–Welsch eigenproblem and are polished by Newton
//! steps on the three-term recurrence; weights use the closed forms in terms
//! of the neighbouring orthonormal function, which stays well scaled for the
//! node counts used here (a few hundred at most).

use nalgebra::{DMatrix, SymmetricEigen};

fn jacobi_eigenvalues(off_diagonal: impl Fn(usize) -> f64, n: usize) -> Vec<f64> {
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = off_diagonal(k);
        jac[(k, k - 1)] = b;
        jac[(k - 1, k)] = b;
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(jac)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    nodes.sort_by(f64::total_cmp);
    nodes
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre needs at least one node");
        let guesses = jacobi_eigenvalues(|k| k as f64 / ((4 * k * k - 1) as f64).sqrt(), n);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for mut x in guesses {
            let mut dp = 0.0;
            for _ in 0..8 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() < 1e-16 {
                    dp = legendre_with_derivative(n, x).1;
                    break;
                }
            }
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        Self { nodes, weights }
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, w * half))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Gauss–Hermite rule for the weight `exp(-x^2)` on the real line.
///
/// `weights` multiply `g(x_i)` in `∫ g(x) exp(-x^2) dx`; `plain_weights`
/// already contain the factor `exp(x_i^2)` so that `Σ plain_i f(x_i)`
/// approximates `∫ f(x) dx` for integrands with Gaussian decay.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub plain_weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Hermite needs at least one node");
        let guesses = jacobi_eigenvalues(|k| (k as f64 / 2.0).sqrt(), n);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let mut plain_weights = Vec::with_capacity(n);
        for mut x in guesses {
            for _ in 0..8 {
                let (phi_n, phi_nm1) = hermite_function_pair(n, x);
                let d = (2.0 * n as f64).sqrt() * phi_nm1 - x * phi_n;
                let step = phi_n / d;
                x -= step;
                if step.abs() < 1e-15 * (1.0 + x.abs()) {
                    break;
                }
            }
            let (_, phi_nm1) = hermite_function_pair(n, x);
            let plain = 1.0 / (n as f64 * phi_nm1 * phi_nm1);
            nodes.push(x);
            plain_weights.push(plain);
            weights.push(plain * (-x * x).exp());
        }
        Self {
            nodes,
            weights,
            plain_weights,
        }
    }

    /// `∫ f(x) dx` for a rapidly decaying integrand (weight absorbed).
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.plain_weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Nodes and weights for `∫ g(x) exp(-(x/scale)^2) dx`, shifted by `center`.
    pub fn scaled(&self, center: f64, scale: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (center + scale * x, w * scale))
    }
}

/// Returns `(φ_n(x), φ_{n-1}(x))` for the orthonormal Hermite functions.
fn hermite_function_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(6);
        let v = rule.integrate(0.0, 2.0, |x| x.powi(11));
        assert!((v - 2f64.powi(12) / 12.0).abs() < 1e-11);
        assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn hermite_moments() {
        let rule = GaussHermite::new(40);
        let pi = std::f64::consts::PI;
        let m0: f64 = rule.weights.iter().sum();
        assert!((m0 - pi.sqrt()).abs() < 1e-13);
        let m4: f64 = rule.scaled(0.0, 1.0).map(|(x, w)| w * x.powi(4)).sum();
        assert!((m4 - 0.75 * pi.sqrt()).abs() < 1e-13);
        let g = rule.integrate(|x| (-x * x / 2.0).exp() * x.cos());
        assert!((g - (2.0 * pi).sqrt() * (-0.5f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn large_hermite_rule_stays_finite() {
        let rule = GaussHermite::new(200);
        assert!(rule.plain_weights.iter().all(|w| w.is_finite() && *w > 0.0));
        let m0: f64 = rule.weights.iter().sum();
        assert!((m0 - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }
}
