use harmonic_core::principal_series::{k_fixed_vector, Model, ModelVector, SpectralParam};
use harmonic_core::trilinear::{k_factor, k_lambda, k_lambda_direct, kernel_circle, kernel_line, trilinear_functional};
use harmonic_core::{Error, C64};
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn line_kernel_modulus_on_the_unitary_axis() {
    // |x−y| = 1, |xz−1| = 1, |yz−1| = 2: modulus 2^{−1/2}.
    let k = kernel_line(c(0.0, 2.0), c(0.0, 3.0), 0.0, 1.0, 3.0).unwrap();
    assert!((k.norm() - 0.5f64.sqrt()).abs() < 1e-15);
    assert!(matches!(kernel_line(c(0.0, 2.0), c(0.0, 3.0), 1.0, 1.0, 0.5), Err(Error::Domain(_))));
}

#[test]
fn circle_kernel_modulus_and_conjugation() {
    let (tau, lambda) = (c(0.0, 2.0), c(0.0, 5.0));
    for (a, b, d) in [(0.3, 1.2, 2.9), (0.1, 0.2, 0.4), (2.0, -1.0, 0.5)] {
        let k = kernel_circle(tau, lambda, a, b, d).unwrap();
        // Every exponent has real part −1/2.
        let want = ((a - b).sin() * (a - d).sin() * (b - d).sin()).abs().powf(-0.5);
        assert!((k.norm() - want).abs() < 1e-13 * want);
        let kc = kernel_circle(-tau, -lambda, a, b, d).unwrap();
        assert!((k.conj() - kc).norm() < 1e-13 * want);
    }
    // At (π/2, π/4, 0) each |sin| is 1 or 2^{−1/2}: modulus √2.
    let k = kernel_circle(tau, lambda, FRAC_PI_2, PI / 4.0, 0.0).unwrap();
    assert!((k.norm() - 2f64.sqrt()).abs() < 1e-14);
}

#[test]
fn circle_kernel_is_pi_periodic_and_rotation_invariant() {
    let (tau, lambda) = (c(0.0, 1.5), c(0.0, 4.0));
    let base = kernel_circle(tau, lambda, 0.4, 1.7, 2.2).unwrap();
    let shifted = kernel_circle(tau, lambda, 0.4 + PI, 1.7 - PI, 2.2 + 2.0 * PI).unwrap();
    assert!((base - shifted).norm() < 1e-12 * base.norm());
    let rotated = kernel_circle(tau, lambda, 0.4 + 0.9, 1.7 + 0.9, 2.2 + 0.9).unwrap();
    assert!((base - rotated).norm() < 1e-12 * base.norm());
    assert!(kernel_circle(tau, lambda, 0.0, PI, 1.0).is_err());
}

#[test]
fn k_lambda_matches_frozen_multiprecision_values() {
    // Multiprecision quadrature of (1/π)∫_{−π/2}^{π/2} |sin(t−c)|^a |sin(t+c)|^b dt times |sin 2c|^{−1/2−λ/2}.
    let v = k_lambda(c(0.0, 2.0), c(0.0, 4.0), 0.6, 1e-12).unwrap();
    assert!((v - c(0.93443930772927413, -0.40462455815676577)).norm() < 1e-9, "{v}");
    let v = k_lambda(c(0.0, 2.0), c(0.0, 10.0), 1.1, 1e-12).unwrap();
    assert!((v - c(0.44311770865203185, -0.37056593546427525)).norm() < 1e-9, "{v}");
}

#[test]
fn factored_and_unfactored_averages_agree() {
    let (tau, lambda) = (c(0.0, 2.0), c(0.0, 4.0));
    let f = k_lambda(tau, lambda, 0.6, 1e-10).unwrap();
    let d = k_lambda_direct(tau, lambda, 0.6, 1e-10).unwrap();
    assert!((f - d).norm() < 1e-6 * d.norm());
}

#[test]
fn exceptional_points_are_rejected() {
    let (tau, lambda) = (c(0.0, 2.0), c(0.0, 4.0));
    for bad in [0.0, FRAC_PI_2, PI, -FRAC_PI_2] {
        assert!(matches!(k_lambda(tau, lambda, bad, 1e-8), Err(Error::Domain(_))));
        assert!(matches!(k_factor(tau, lambda, bad, 1e-8), Err(Error::Domain(_))));
    }
    assert!(k_lambda(tau, lambda, f64::NAN, 1e-8).is_err());
}

#[test]
fn trilinear_functional_requires_matching_circle_vectors() {
    let (tau, lambda) = (c(0.0, 2.0), c(0.0, 3.0));
    let v1 = k_fixed_vector(SpectralParam::new(tau), Model::Circle);
    let v2 = k_fixed_vector(SpectralParam::new(-tau), Model::Circle);
    let v3 = k_fixed_vector(SpectralParam::new(-lambda), Model::Circle);
    let line = k_fixed_vector(SpectralParam::new(tau), Model::Line);
    assert!(matches!(trilinear_functional(tau, lambda, &line, &v2, &v3, 1e-6), Err(Error::Usage(_))));
    assert!(matches!(trilinear_functional(tau, lambda, &v2, &v1, &v3, 1e-6), Err(Error::Usage(_))));
}

#[test]
fn trilinear_functional_selects_balanced_ktypes() {
    // Only n₁ + n₂ + n₃ = 0 contributes.
    let (tau, lambda) = (c(0.0, 2.0), c(0.0, 3.0));
    let v1 = ModelVector::from_ktypes(SpectralParam::new(tau), vec![(2, c(1.0, 0.0))]).unwrap();
    let v2 = ModelVector::from_ktypes(SpectralParam::new(-tau), vec![(2, c(1.0, 0.0))]).unwrap();
    let v3 = k_fixed_vector(SpectralParam::new(-lambda), Model::Circle);
    let v = trilinear_functional(tau, lambda, &v1, &v2, &v3, 1e-6).unwrap();
    assert!(v.norm() < 1e-12, "{v}");
}

#[test]
fn trilinear_functional_is_linear_in_the_third_vector() {
    let (tau, lambda) = (c(0.0, 2.0), c(0.0, 3.0));
    let p3 = SpectralParam::new(-lambda);
    let v1 = ModelVector::from_ktypes(SpectralParam::new(tau), vec![(0, c(1.0, 0.0)), (2, c(0.4, 0.1))]).unwrap();
    let v2 = ModelVector::from_ktypes(SpectralParam::new(-tau), vec![(0, c(0.8, 0.0)), (-2, c(0.3, -0.2))]).unwrap();
    let a = ModelVector::from_ktypes(p3, vec![(0, c(1.0, 0.0))]).unwrap();
    let b = ModelVector::from_ktypes(p3, vec![(-2, c(0.5, 0.0))]).unwrap();
    let ab = ModelVector::from_ktypes(p3, vec![(0, c(1.0, 0.0)), (-2, c(0.5, 0.0))]).unwrap();
    let ta = trilinear_functional(tau, lambda, &v1, &v2, &a, 1e-6).unwrap();
    let tb = trilinear_functional(tau, lambda, &v1, &v2, &b, 1e-6).unwrap();
    let tab = trilinear_functional(tau, lambda, &v1, &v2, &ab, 1e-6).unwrap();
    assert!((tab - ta - tb).norm() < 1e-5 * tab.norm(), "{tab} vs {}", ta + tb);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn k_lambda_is_even_and_pi_periodic(t in 0.5f64..4.0, l in 1.0f64..12.0, cc in 0.05f64..1.5) {
        prop_assume!((cc - FRAC_PI_2).abs() > 0.05);
        let (tau, lambda) = (c(0.0, t), c(0.0, l));
        let v = k_lambda(tau, lambda, cc, 1e-10).unwrap();
        let m = k_lambda(tau, lambda, -cc, 1e-10).unwrap();
        let p = k_lambda(tau, lambda, cc + PI, 1e-10).unwrap();
        prop_assert!((v - m).norm() <= 1e-8 * v.norm());
        prop_assert!((v - p).norm() <= 1e-8 * v.norm());
    }

    #[test]
    fn k_factor_symmetries(t in 0.5f64..4.0, l in 1.0f64..12.0, cc in 0.05f64..1.5) {
        prop_assume!((cc - FRAC_PI_2).abs() > 0.05);
        let (tau, lambda) = (c(0.0, t), c(0.0, l));
        let k = k_factor(tau, lambda, cc, 1e-10).unwrap();
        prop_assert!((k - k_factor(-tau, lambda, cc, 1e-10).unwrap()).norm() <= 1e-8 * k.norm());
        prop_assert!((k.conj() - k_factor(tau, -lambda, cc, 1e-10).unwrap()).norm() <= 1e-8 * k.norm());
    }
}
