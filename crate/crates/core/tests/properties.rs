mod common;

use avgcorr::channels::{amplitude_damping, apply_local_channel, phase_damping, ChannelKind};
use avgcorr::correlation::{
    correlation_matrix, sigma_closed_pure, sigma_monte_carlo, sigma_quadrature, singular_values,
    CorrelationMatrix3, SingularTriple,
};
use avgcorr::qstate::{make_pure_state, SchmidtCoefficient};
use common::{max_abs, random_physical_state, rng};
use proptest::prelude::*;

fn sorted(a: f64, b: f64, c: f64) -> SingularTriple {
    SingularTriple::from_unsorted([a, b, c])
}

fn quad(t: [f64; 3]) -> f64 {
    // Deliberately feeds the values unsorted.
    let s = SingularTriple {
        alpha: t[0],
        beta: t[1],
        gamma_sv: t[2],
    };
    sigma_quadrature(&SingularTriple::from_unsorted(s.as_array())).value
}

#[test]
fn bounds_on_sorted_grid() {
    let n = 20;
    let step = 1.0 / n as f64;
    for i in 1..=n {
        let a = i as f64 * step;
        for j in 0..=i {
            for k in 0..=j {
                let s = sorted(a, j as f64 * step, k as f64 * step);
                let sigma = sigma_quadrature(&s).value;
                assert!(sigma >= a / 4.0 - 1e-12 && sigma <= a / 2.0 + 1e-12, "{s:?}: {sigma}");
            }
        }
    }
    assert!((sigma_quadrature(&sorted(0.6, 0.0, 0.0)).value - 0.15).abs() < 1e-15);
    assert!((sigma_quadrature(&sorted(0.6, 0.6, 0.6)).value - 0.3).abs() < 1e-15);
}

#[test]
fn closed_form_agrees_with_quadrature_on_degenerate_family() {
    for alpha in [1.0, 0.7, 0.2] {
        for i in 0..=10 {
            let beta = alpha * i as f64 / 10.0;
            let closed = sigma_closed_pure(alpha, beta).unwrap().value;
            let quad = sigma_quadrature(&sorted(alpha, beta, beta)).value;
            assert!((closed - quad).abs() <= 1e-9, "alpha {alpha} beta {beta}: {closed} vs {quad}");
        }
    }
}

#[test]
fn closed_form_is_strictly_increasing() {
    let mut last = sigma_closed_pure(1.0, 0.0).unwrap().value;
    for i in 1..=1000 {
        let next = sigma_closed_pure(1.0, i as f64 / 1000.0).unwrap().value;
        assert!(next > last + 1e-12, "beta = {}", i as f64 / 1000.0);
        last = next;
    }
}

#[test]
fn singular_limits_match_closed_form() {
    // f identically 0: (alpha, 0, 0); f identically 1: (alpha, alpha, alpha).
    for alpha in [1.0, 0.5, 1e-3] {
        let lo = sigma_quadrature(&sorted(alpha, 0.0, 0.0)).value;
        let hi = sigma_quadrature(&sorted(alpha, alpha, alpha)).value;
        assert!((lo - sigma_closed_pure(alpha, 0.0).unwrap().value).abs() <= 1e-9);
        assert!((hi - sigma_closed_pure(alpha, alpha).unwrap().value).abs() <= 1e-9);
    }
    // Approaching both limits.
    for eps in [1e-6, 1e-9, 1e-12] {
        let near_one = sorted(1.0, 1.0 - eps, 1.0 - eps);
        let near_zero = sorted(1.0, eps, eps);
        for s in [near_one, near_zero] {
            let q = sigma_quadrature(&s).value;
            let c = sigma_closed_pure(s.alpha, s.beta).unwrap().value;
            assert!((q - c).abs() <= 1e-9, "{s:?}");
        }
    }
}

#[test]
fn sign_invariance_is_exact() {
    let mut r = rng(5);
    for seed in 0..5 {
        let k = CorrelationMatrix3::from_matrix(common::random_matrix3(&mut r));
        let a = sigma_monte_carlo(&k, 100_000, seed).unwrap();
        let b = sigma_monte_carlo(&-k, 100_000, seed).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn channels_preserve_density_invariants() {
    let mut r = rng(77);
    for _ in 0..200 {
        let rho = random_physical_state(&mut r);
        for kind in [ChannelKind::PhaseDamping, ChannelKind::AmplitudeDamping] {
            let pa: f64 = rand::Rng::random(&mut r);
            let pb: f64 = rand::Rng::random(&mut r);
            let out = apply_local_channel(
                &rho,
                &kind.with_probability(pa).unwrap(),
                &kind.with_probability(pb).unwrap(),
            );
            let report = out.report();
            assert!(report.trace_deviation <= 1e-12, "{report}");
            assert!(report.hermiticity_residual <= 1e-12, "{report}");
            assert!(report.min_eigenvalue >= -1e-10, "{report}");
        }
    }
}

#[test]
fn schmidt_sign_does_not_change_sigma() {
    // c|01> + sqrt(1-c^2)|10> against the printed minus sign.
    for c in [0.2, 0.5, 0.8] {
        let s = SchmidtCoefficient::new(c).unwrap();
        let minus = make_pure_state(s);
        let psi = [
            0.0.into(),
            c.into(),
            (1.0 - c * c).sqrt().into(),
            0.0.into(),
        ];
        let plus = avgcorr::qstate::DensityMatrix4::from_pure(&psi).unwrap();
        assert!(max_abs(&(minus.matrix() - plus.matrix())) > 0.1);
        let sm = sigma_quadrature(&singular_values(&correlation_matrix(&minus).unwrap())).value;
        let sp = sigma_quadrature(&singular_values(&correlation_matrix(&plus).unwrap())).value;
        assert!((sm - sp).abs() < 1e-14);
    }
}

#[test]
fn damped_states_reproduce_analytic_matrices() {
    for c in [0.3, std::f64::consts::FRAC_1_SQRT_2, 0.9] {
        let rho = make_pure_state(SchmidtCoefficient::new(c).unwrap());
        let off = -c * (1.0 - c * c).sqrt();
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let ph = phase_damping(p).unwrap();
            let out = apply_local_channel(&rho, &ph, &ph);
            let mut want = nalgebra::Matrix4::<num_complex::Complex64>::zeros();
            want[(1, 1)] = (c * c).into();
            want[(2, 2)] = (1.0 - c * c).into();
            want[(1, 2)] = (off * (1.0 - p)).into();
            want[(2, 1)] = (off * (1.0 - p)).into();
            assert!(max_abs(&(out.matrix() - want)) <= 1e-12, "phase c={c} p={p}");

            let am = amplitude_damping(p).unwrap();
            let out = apply_local_channel(&rho, &am, &am);
            let mut want = nalgebra::Matrix4::<num_complex::Complex64>::zeros();
            want[(0, 0)] = p.into();
            want[(1, 1)] = (c * c * (1.0 - p)).into();
            want[(2, 2)] = ((1.0 - c * c) * (1.0 - p)).into();
            want[(1, 2)] = (off * (1.0 - p)).into();
            want[(2, 1)] = (off * (1.0 - p)).into();
            assert!(max_abs(&(out.matrix() - want)) <= 1e-12, "amplitude c={c} p={p}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn permutation_invariance(a in 0.0..1.0f64, b in 0.0..1.0f64, c in 0.0..1.0f64) {
        let reference = sigma_quadrature(&sorted(a, b, c)).value;
        for perm in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            prop_assert!((quad(perm) - reference).abs() <= 1e-9);
        }
    }

    #[test]
    fn svd_reconstructs(entries in prop::array::uniform9(-1.0..1.0f64)) {
        let k = nalgebra::Matrix3::from_row_slice(&entries);
        let svd = CorrelationMatrix3::from_matrix(k).svd();
        prop_assert!(svd.reconstruction_residual(&k) <= 1e-10);
        prop_assert!(svd.singular[0] >= svd.singular[1] && svd.singular[1] >= svd.singular[2]);
        prop_assert!(svd.singular[2] >= 0.0);
        let ortho = (svd.u.transpose() * svd.u - nalgebra::Matrix3::identity()).amax();
        prop_assert!(ortho <= 1e-12);
    }

    #[test]
    fn physical_states_have_alpha_at_most_one(seed in any::<u64>()) {
        let rho = random_physical_state(&mut rng(seed));
        let k = correlation_matrix(&rho).unwrap();
        let s = singular_values(&k);
        prop_assert!(s.alpha <= 1.0 + 1e-12);
        prop_assert!(k.matrix().amax() <= 1.0 + 1e-12);
    }
}
