//! Orthonormal Hermite functions and Hermite polynomials.

use num_complex::Complex64;

/// Values `φ_0(x), …, φ_n(x)` of the orthonormal Hermite functions on ℝ,
/// `φ_j(x) = (2^j j! √π)^{-1/2} H_j(x) e^{-x²/2}`.
pub fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp());
    if n >= 1 {
        out.push(std::f64::consts::SQRT_2 * x * out[0]);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Oscillator eigenfunctions for `m = ω = 1` at action scale `hbar`:
/// `φ_j(x/√ħ) ħ^{-1/4}`.
pub fn oscillator_functions(n: usize, x: f64, hbar: f64) -> Vec<f64> {
    let s = hbar.sqrt();
    let norm = hbar.powf(-0.25);
    hermite_functions(n, x / s)
        .into_iter()
        .map(|v| v * norm)
        .collect()
}

/// Physicists' Hermite polynomials `H_0..H_n` at a complex argument.
pub fn hermite_polynomials(n: usize, x: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Complex64::new(1.0, 0.0));
    if n >= 1 {
        out.push(x * 2.0);
    }
    for k in 1..n {
        let next = x * 2.0 * out[k] - out[k - 1] * (2.0 * k as f64);
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussHermite;

    #[test]
    fn hermite_functions_are_orthonormal() {
        let rule = GaussHermite::new(60);
        let n = 12;
        let mut gram = vec![vec![0.0; n + 1]; n + 1];
        for (&x, &w) in rule.nodes.iter().zip(&rule.plain_weights) {
            let h = hermite_functions(n, x);
            for i in 0..=n {
                for j in 0..=n {
                    gram[i][j] += w * h[i] * h[j];
                }
            }
        }
        for (i, row) in gram.iter().enumerate() {
            for (j, &g) in row.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((g - expect).abs() < 1e-12, "gram[{i}][{j}] = {g}");
            }
        }
    }

    #[test]
    fn polynomials_match_explicit_forms() {
        let x = Complex64::new(0.7, -0.2);
        let h = hermite_polynomials(3, x);
        let expect = x * x * x * 8.0 - x * 12.0;
        assert!((h[3] - expect).norm() < 1e-13);
    }
}
