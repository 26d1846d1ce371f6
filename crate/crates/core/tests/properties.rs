use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use geoquant::fresnel::{
    fresnel_gaussian, fresnel_quadratic, fresnel_regularized, fresnel_value,
    generator_coefficient_defect, Amplitude, FresnelSpec, TestState,
};
use geoquant::operators::{corrected_operator, prequantum_operator, spectrum, BasisSpec};
use geoquant::pairing::{bogoliubov_ground_state, fourier_gram_defect, FourierRule};
use geoquant::phase_space::ModelKind;
use geoquant::phase_space::{
    bracket_from_fields, integrate_flow, moment_map_defect, poisson_bracket, ComplexStructure,
    FlowConfig, ModelManifold, Observable, PhasePoint, FD_STEP_FIRST,
};
use geoquant::prequant::{
    check_pc1, curvature_convergence, holonomy_loop, GridSpec, HermitianModelMetric,
};
use geoquant::szego::{kernel_diagonal, p1_trace, KernelModel};

/// Polynomial in `dim` Darboux pairs with integer coefficients and degree ≤ 3.
fn polynomial(dim: usize) -> impl Strategy<Value = Observable> {
    let exps = proptest::collection::vec(0u32..=3, 2 * dim);
    proptest::collection::vec((exps, -3i32..=3), 1..6).prop_map(move |terms| {
        terms
            .into_iter()
            .fold(Observable::zero(dim), |acc, (e, c)| {
                if e.iter().sum::<u32>() > 3 {
                    acc
                } else {
                    acc + Observable::monomial(dim, e, Complex64::new(c as f64, 0.0))
                }
            })
    })
}

fn bracket(f: &Observable, g: &Observable) -> Observable {
    poisson_bracket(f, g).unwrap()
}

/// Real combination of `1, q, p, q², p², qp`.
fn quadratic() -> impl Strategy<Value = Observable> {
    proptest::collection::vec(-2.0f64..2.0, 6).prop_map(|c| {
        let q = Observable::q(1, 0);
        let p = Observable::p(1, 0);
        Observable::constant(1, c[0])
            + q.clone() * c[1]
            + p.clone() * c[2]
            + q.clone() * q.clone() * c[3]
            + p.clone() * p.clone() * c[4]
            + q * p * c[5]
    })
}

/// Real combination of `zz̄, z + z̄, i(z − z̄), 1`.
fn admissible() -> impl Strategy<Value = Observable> {
    proptest::collection::vec(-2.0f64..2.0, 4).prop_map(|c| {
        let z = Observable::z(1, 0);
        let zb = Observable::zbar(1, 0);
        (z.clone() * zb.clone()) * c[0]
            + (z.clone() + zb.clone()) * c[1]
            + (z - zb) * Complex64::new(0.0, c[2])
            + Observable::constant(1, c[3])
    })
}

fn max_abs(m: &nalgebra::DMatrix<Complex64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_identity(f in polynomial(2), g in polynomial(2), h in polynomial(2)) {
        let s = bracket(&f, &bracket(&g, &h)) + bracket(&g, &bracket(&h, &f)) + bracket(&h, &bracket(&f, &g));
        prop_assert!(s.is_zero(), "{s}");
    }

    #[test]
    fn bracket_matches_symplectic_pairing_of_fields(
        f in polynomial(2),
        g in polynomial(2),
        x in proptest::collection::vec(-2.0f64..2.0, 4),
    ) {
        let direct = bracket(&f, &g).eval_real(&x);
        let fields = bracket_from_fields(&f, &g, &x);
        prop_assert!((direct - fields).abs() <= 1e-12 * (1.0 + direct.abs()));
    }

    #[test]
    fn oscillator_energy_is_conserved(q in -3.0f64..3.0, p in -3.0f64..3.0) {
        let m = ModelManifold::flat(1).unwrap();
        let h = Observable::oscillator(1);
        let r = integrate_flow(&m, &h, &PhasePoint::from_qp(&[q], &[p]).unwrap(), 2.0 * PI, &FlowConfig::default()).unwrap();
        let e0 = 0.5 * (q * q + p * p);
        let drift = r.hamiltonian_track.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max);
        prop_assert!(drift <= 1e-8, "drift {drift}");
    }

    #[test]
    fn moment_map_identity(
        w in proptest::collection::vec(-3i64..=3, 2),
        c in proptest::collection::vec(-2.0f64..2.0, 4),
    ) {
        let d = moment_map_defect(&w, &PhasePoint::new(c).unwrap(), FD_STEP_FIRST).unwrap();
        prop_assert!(d <= 1e-6, "defect {d}");
    }

    #[test]
    fn pc1_ratio_scales_inversely_with_hbar(r in 0.05f64..5.0, e in -3i32..3) {
        let hbar = 2f64.powi(e);
        let a = check_pc1(&ModelManifold::sphere(r).unwrap().with_hbar(hbar).unwrap()).unwrap();
        let b = check_pc1(&ModelManifold::sphere(r).unwrap().with_hbar(2.0 * hbar).unwrap()).unwrap();
        prop_assert_eq!(a.cycles[0].ratio, 2.0 * b.cycles[0].ratio);
    }

    #[test]
    fn holonomy_is_invariant_under_resampling(
        pts in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 3..12),
        splits in proptest::collection::vec(1usize..5, 12),
        shift in 0usize..12,
    ) {
        let flat = ModelManifold::flat(1).unwrap();
        let mut base: Vec<[f64; 2]> = pts.iter().map(|&(q, p)| [q, p]).collect();
        base.push(base[0]);
        let reference = holonomy_loop(&flat, &base).unwrap().action;
        // subdivide every edge and start from another vertex
        let n = base.len() - 1;
        let start = shift % n;
        let mut fine = Vec::new();
        for k in 0..n {
            let a = base[(start + k) % n];
            let b = base[(start + k + 1) % n];
            let s = splits[k % splits.len()];
            for i in 0..s {
                let t = i as f64 / s as f64;
                fine.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
        fine.push(fine[0]);
        let resampled = holonomy_loop(&flat, &fine).unwrap().action;
        prop_assert!((reference - resampled).abs() <= 1e-8);
    }

    #[test]
    fn quantization_is_linear(f in quadratic(), g in quadratic(), a in -2.0f64..2.0, b in -2.0f64..2.0, n in 4usize..16) {
        let basis = BasisSpec::hermite(n, 1.0).unwrap();
        let lhs = prequantum_operator(&(f.clone() * a + g.clone() * b), &basis).unwrap();
        let rhs = prequantum_operator(&f, &basis).unwrap().entries().map(|c| c * a)
            + prequantum_operator(&g, &basis).unwrap().entries().map(|c| c * b);
        prop_assert!(max_abs(&(lhs.entries() - rhs)) <= 1e-12);
    }

    #[test]
    fn fock_quantization_is_linear(f in admissible(), g in admissible(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let basis = BasisSpec::fock(10, 0.5).unwrap();
        let lhs = prequantum_operator(&(f.clone() * a + g.clone() * b), &basis).unwrap();
        let rhs = prequantum_operator(&f, &basis).unwrap().entries().map(|c| c * a)
            + prequantum_operator(&g, &basis).unwrap().entries().map(|c| c * b);
        prop_assert!(max_abs(&(lhs.entries() - rhs)) <= 1e-12);
    }

    #[test]
    fn unit_is_identity(n in 4usize..20, hbar in 0.1f64..4.0, fock in any::<bool>()) {
        let basis = if fock { BasisSpec::fock(n, hbar) } else { BasisSpec::hermite(n, hbar) }.unwrap();
        let q = prequantum_operator(&Observable::constant(1, 1.0), &basis).unwrap();
        prop_assert_eq!(q.entries(), &nalgebra::DMatrix::<Complex64>::identity(n + 1, n + 1));
    }

    #[test]
    fn real_observables_are_hermitian(f in quadratic(), g in admissible(), n in 4usize..16) {
        prop_assert!(prequantum_operator(&f, &BasisSpec::hermite(n, 1.0).unwrap()).unwrap().hermiticity_defect() <= 1e-10);
        prop_assert!(prequantum_operator(&g, &BasisSpec::fock(n, 1.0).unwrap()).unwrap().hermiticity_defect() <= 1e-10);
    }

    #[test]
    fn correction_shifts_by_half_hbar(n in 4usize..24, e in -3i32..3) {
        let hbar = 2f64.powi(e);
        let basis = BasisSpec::fock(n, hbar).unwrap();
        let h = Observable::oscillator(1);
        let pre = spectrum(&prequantum_operator(&h, &basis).unwrap()).unwrap();
        let cor = spectrum(&corrected_operator(&h, &basis).unwrap()).unwrap();
        for (a, b) in pre.iter().zip(&cor) {
            prop_assert_eq!(b - a, hbar / 2.0);
        }
    }

    #[test]
    fn truncation_is_local(f in quadratic(), n in 4usize..12, grow in 1usize..8) {
        let small = prequantum_operator(&f, &BasisSpec::hermite(n, 1.0).unwrap()).unwrap();
        let large = prequantum_operator(&f, &BasisSpec::hermite(n + grow, 1.0).unwrap()).unwrap();
        let k = small.interior_size();
        prop_assert_eq!(small.interior(k), large.interior(k));
    }

    #[test]
    fn fourier_projection_is_unitary(n in 4usize..14) {
        let d = fourier_gram_defect(BasisSpec::hermite(n, 1.0).unwrap(), &FourierRule::default()).unwrap();
        prop_assert!(d <= 1e-7, "gram defect {d}");
    }

    #[test]
    fn bogoliubov_is_continuous_at_identity(r in 1e-4f64..1e-2) {
        let g = bogoliubov_ground_state(&ComplexStructure::standard(1), &ComplexStructure::squeezed(1.0 + r).unwrap()).unwrap();
        // λ leaves linearly, det_factor quadratically
        let lam = g.lambda_z[0].norm() / r;
        let det = (g.det_factor - 1.0).norm() / (r * r);
        prop_assert!((lam - 2.0).abs() < 0.03, "λ/r = {lam}");
        prop_assert!((det - 0.5).abs() < 0.02, "(det − 1)/r² = {det}");
    }

    #[test]
    fn fresnel_scaling(n in 1usize..4, a in 0.1f64..10.0, quad in any::<bool>()) {
        let amp = if quad { Amplitude::Product(0, 0) } else { Amplitude::One };
        let v = fresnel_value(&FresnelSpec::new(n, a, amp).unwrap()).unwrap();
        let v1 = fresnel_value(&FresnelSpec::new(n, 1.0, amp).unwrap()).unwrap();
        let power = if quad { n as f64 / 2.0 + 1.0 } else { n as f64 / 2.0 };
        let expected = v1 * a.powf(-power);
        prop_assert!((v - expected).norm() <= 1e-8 * expected.norm());
    }

    #[test]
    fn maslov_phase_additivity(n in 1usize..12, a in 0.1f64..10.0) {
        let (plain, _) = fresnel_gaussian(&FresnelSpec::plain(n, a).unwrap()).unwrap();
        prop_assert_eq!(plain.c, (n % 8) as i32);
        let q = fresnel_quadratic(&FresnelSpec::new(n, a, Amplitude::Product(0, 0)).unwrap()).unwrap();
        let (lower, _) = fresnel_gaussian(&FresnelSpec::plain(n, a).unwrap()).unwrap();
        prop_assert_eq!(q.phase.unwrap().c, (q.c_tilde.unwrap() + 1).rem_euclid(8));
        prop_assert_eq!(q.phase.unwrap().c, lower.c);
    }

    #[test]
    fn linear_term_vanishes(a in 0.5f64..4.0) {
        let v = fresnel_regularized(&FresnelSpec::new(1, a, Amplitude::Linear(0)).unwrap());
        prop_assert!(v.norm() <= 1e-9);
    }

    #[test]
    fn szego_trace_is_dimension(k in 1u32..=64) {
        let t = p1_trace(k).unwrap();
        prop_assert!((t / (k as f64 + 1.0) - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn szego_diagonal_is_homogeneous(
        k in 1u32..=64,
        pts in proptest::collection::vec((0.0f64..4.0, 0.0f64..(2.0 * PI)), 2..12),
    ) {
        let points: Vec<Complex64> = pts.iter().map(|&(r, t)| Complex64::from_polar(r, t)).collect();
        let d = kernel_diagonal(KernelModel::ProjectiveLine, k, &points).unwrap();
        prop_assert!(d.coefficient_of_variation() <= 1e-6);
    }

    #[test]
    fn szego_diagonal_increases_with_k(k in 1u32..64, r in 0.0f64..4.0, t in 0.0f64..(2.0 * PI)) {
        let z = [Complex64::from_polar(r, t)];
        let a = kernel_diagonal(KernelModel::ProjectiveLine, k, &z).unwrap().mean();
        let b = kernel_diagonal(KernelModel::ProjectiveLine, k + 1, &z).unwrap().mean();
        prop_assert!(b > a);
    }
}

#[test]
fn curvature_converges_at_second_order() {
    let hm = HermitianModelMetric::new(ModelManifold::new(ModelKind::Disk, 1.0).unwrap()).unwrap();
    let (_, slope) =
        curvature_convergence(&hm, &GridSpec::default(), &[8e-3, 4e-3, 2e-3, 1e-3]).unwrap();
    assert!((slope - 2.0).abs() <= 0.4, "slope {slope}");
}

#[test]
fn generator_coefficient_is_laplacian() {
    let d = generator_coefficient_defect(&TestState::standard_gaussian(), 0.02, 1.0, 1.0).unwrap();
    assert!(d <= 1e-3, "relative defect {d}");
}
