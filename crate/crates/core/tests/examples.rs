use num_complex::Complex64;

use geoquant::fresnel::{first_order_window, TestState};
use geoquant::operators::BasisSpec;
use geoquant::pairing::{
    bks_pair_fourier, bks_pair_segal_bargmann, FourierRule, HolomorphicState, Representation,
    SegalBargmannRule, WaveFunction,
};
use geoquant::szego::{
    default_points, fit_expansion, ladder_values, monomial_norms_p1, KernelModel, DEFAULT_LADDER,
};

#[test]
fn p1_norm_for_k2_j1_is_beta_value() {
    // B(2, 2) = 1/6
    let n = monomial_norms_p1(2).unwrap();
    assert!((n[1] * 6.0 - 1.0).abs() < 1e-8);
}

#[test]
fn p1_norms_are_symmetric() {
    for k in 1..=128 {
        let n = monomial_norms_p1(k).unwrap();
        for j in 0..=k as usize {
            assert!(
                (n[j] / n[k as usize - j] - 1.0).abs() < 1e-10,
                "k = {k}, j = {j}"
            );
        }
    }
}

#[test]
fn bargmann_ladder_is_exactly_linear() {
    let fit = fit_expansion(
        &ladder_values(
            KernelModel::BargmannPlane,
            &DEFAULT_LADDER,
            &default_points(),
        )
        .unwrap(),
    )
    .unwrap();
    assert!((fit.a1 / fit.a0).abs() < 1e-8);
    assert_eq!(fit.n, 1);
}

#[test]
fn broad_state_has_no_first_order_term_in_the_core() {
    let psi = TestState {
        amplitude: 1.0,
        sigma: 1e3,
        k: 0.0,
        poly: vec![1.0],
    };
    let xs: Vec<f64> = (0..=20).map(|i| -1.0 + 0.1 * i as f64).collect();
    let d = first_order_window(&psi, &xs, 0.02, 1.0, 1.0).unwrap();
    assert!(d.iter().all(|c| c.norm() < 1e-5));
}

#[test]
fn fourier_pairing_routes_agree() {
    let b = BasisSpec::hermite(6, 1.0).unwrap();
    let rule = FourierRule::default();
    for j in 0..=6 {
        let s1 = WaveFunction::basis_state(b, j, Representation::Position).unwrap();
        let s2 = WaveFunction::basis_state(b, j, Representation::Momentum).unwrap();
        let r = bks_pair_fourier(&s1, &s2, &rule).unwrap();
        assert!(r.quadrature_error_estimate < 1e-10);
        assert!((r.value - Complex64::i().powu(j as u32)).norm() < 1e-10);
    }
}

#[test]
fn segal_bargmann_pairing_of_matching_states() {
    let b = BasisSpec::hermite(6, 1.0).unwrap();
    let rule = SegalBargmannRule::default();
    for m in 0..=4 {
        let psi = WaveFunction::basis_state(b, m, Representation::Position).unwrap();
        let r = bks_pair_segal_bargmann(&psi, &HolomorphicState::monomial(m), &rule).unwrap();
        // ‖z^m‖ = (2^m m!)^{1/2}
        let norm = (2f64.powi(m as i32) * (1..=m).product::<usize>() as f64).sqrt();
        assert!((r.value.norm() / norm - 1.0).abs() < 1e-8, "m = {m}");
    }
}

#[test]
fn pairing_needs_both_polarizations() {
    let b = BasisSpec::hermite(4, 1.0).unwrap();
    let s = WaveFunction::basis_state(b, 0, Representation::Position).unwrap();
    assert!(bks_pair_fourier(&s, &s, &FourierRule::default()).is_err());
}

#[test]
fn momentum_gaussian_maps_to_position_gaussian() {
    use geoquant::pairing::fourier_projection;
    let b = BasisSpec::hermite(8, 1.0).unwrap();
    let psi = WaveFunction::basis_state(b, 0, Representation::Momentum).unwrap();
    let out = fourier_projection(&psi, &FourierRule::default()).unwrap();
    for q in [-2.0f64, -0.5, 0.0, 1.0, 3.0] {
        let expected = std::f64::consts::PI.powf(-0.25) * (-0.5 * q * q).exp();
        assert!((out.eval(q) - expected).norm() < 1e-10);
    }
    assert!((out.norm() - psi.norm()).abs() < 1e-8);
}

#[test]
fn fourier_pairing_is_hermitian_symmetric() {
    let b = BasisSpec::hermite(6, 1.0).unwrap();
    let rule = FourierRule::default();
    let c = |v: &[f64]| {
        v.iter()
            .map(|&x| Complex64::new(x, 0.5 * x))
            .collect::<Vec<_>>()
    };
    let s1 = WaveFunction::new(
        b,
        c(&[0.3, -0.2, 0.5, 0.0, 0.1, 0.0, -0.4]),
        Representation::Position,
    )
    .unwrap();
    let s2 = WaveFunction::new(
        b,
        c(&[0.1, 0.7, 0.0, -0.3, 0.0, 0.2, 0.0]),
        Representation::Momentum,
    )
    .unwrap();
    let a = bks_pair_fourier(&s1, &s2, &rule).unwrap().value;
    let r = bks_pair_fourier(&s2, &s1, &rule).unwrap().value;
    assert!((a - r.conj()).norm() < 1e-8);
}

#[test]
fn segal_bargmann_images_of_z_and_z2_are_orthogonal() {
    use geoquant::pairing::segal_bargmann_to_position;
    let rule = SegalBargmannRule::default();
    let (a, _) = segal_bargmann_to_position(&HolomorphicState::monomial(1), 8, &rule).unwrap();
    let (b, _) = segal_bargmann_to_position(&HolomorphicState::monomial(2), 8, &rule).unwrap();
    assert!(a.inner(&b).unwrap().norm() < 1e-6);
    let sum = HolomorphicState::new(vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
    ])
    .unwrap();
    let (s, _) = segal_bargmann_to_position(&sum, 8, &rule).unwrap();
    for (x, (y, z)) in s.coeffs().iter().zip(a.coeffs().iter().zip(b.coeffs())) {
        assert!((x - y - z).norm() < 1e-10);
    }
}

#[test]
fn inverse_transform_of_low_hermite_functions() {
    use geoquant::pairing::segal_bargmann_to_fock;
    let b = BasisSpec::hermite(6, 1.0).unwrap();
    let rule = SegalBargmannRule::default();
    let g = segal_bargmann_to_fock(
        &WaveFunction::basis_state(b, 0, Representation::Position).unwrap(),
        &rule,
    )
    .unwrap();
    assert!(g.coeffs()[1..]
        .iter()
        .all(|c| c.norm() < 1e-10 * g.coeffs()[0].norm()));
    let h1 = segal_bargmann_to_fock(
        &WaveFunction::basis_state(b, 1, Representation::Position).unwrap(),
        &rule,
    )
    .unwrap();
    assert!(h1.coeffs()[0].norm() <= 1e-8);
    assert!(h1.coeffs()[1].norm() > 1e-3);
}
