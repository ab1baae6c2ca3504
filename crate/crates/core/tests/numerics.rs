use harmonic_core::numerics::{
    bessel_j0_y0, bessel_k_imag, gamma_complex, gamma_factor, gamma_s_tau, gauss_legendre, integrate, periodic_trapezoid, periodic_trapezoid_resolving,
    wynn_epsilon, Node,
    QuadratureSpec, SingularPoint,
};
use harmonic_core::{Error, C64};
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn integrates_a_constant() {
    let r = integrate(&|_: Node| c(1.0, 0.0), 0.0, 1.0, &QuadratureSpec::new(1e-12, 0.0)).unwrap();
    assert!((r.value - 1.0).norm() < 1e-14);
}

#[test]
fn integrates_inverse_square_root_singularity() {
    let spec = QuadratureSpec::new(1e-12, 0.0).with_singular([SingularPoint::real(0.0, -0.5)]);
    let f = |n: Node| c(n.offset_from(0, 0.0).abs().powf(-0.5), 0.0);
    let r = integrate(&f, -1.0, 1.0, &spec).unwrap();
    assert!((r.value.re - 4.0).abs() < 1e-11, "{}", r.value);
}

#[test]
fn oscillatory_integral_matches_bessel_j0() {
    let spec = QuadratureSpec::new(1e-12, 1e-14).with_frequency(50.0);
    let r = integrate(&|n: Node| C64::from_polar(1.0, 50.0 * n.t.cos()), 0.0, 2.0 * PI, &spec).unwrap();
    let (j0, _) = bessel_j0_y0(50.0).unwrap();
    assert!((r.value - 2.0 * PI * j0).norm() < 1e-11, "{} vs {}", r.value, 2.0 * PI * j0);
}

#[test]
fn complex_singular_exponent() {
    // ∫_0^1 t^{−1/2+3i} dt = 1/(1/2+3i).
    let a = c(-0.5, 3.0);
    let spec = QuadratureSpec::new(1e-12, 0.0).with_singular([SingularPoint::new(0.0, a)]);
    let f = |n: Node| (a * n.offset_from(0, 0.0).ln()).exp();
    let r = integrate(&f, 0.0, 1.0, &spec).unwrap();
    let exact = (a + 1.0).inv();
    assert!((r.value - exact).norm() < 1e-11 * exact.norm());
}

#[test]
fn non_convergence_is_an_accuracy_error_with_estimate() {
    let spec = QuadratureSpec::new(1e-14, 0.0).with_max_subdivisions(2);
    let r = integrate(&|n: Node| c((1000.0 * n.t).sin() * n.t.exp(), 0.0), 0.0, 10.0, &spec);
    match r {
        Err(Error::Accuracy { estimate_re, error, .. }) => assert!(estimate_re.is_finite() && error > 0.0),
        other => panic!("expected an accuracy failure, got {other:?}"),
    }
}

#[test]
fn invalid_specs_are_rejected() {
    assert!(QuadratureSpec::new(0.0, 0.0).validate().is_err());
    assert!(QuadratureSpec::new(1e-8, 0.0).with_max_subdivisions(0).validate().is_err());
    assert!(QuadratureSpec::new(1e-8, 0.0).with_singular([SingularPoint::real(0.0, -1.0)]).validate().is_err());
}

#[test]
fn periodic_trapezoid_is_spectral() {
    // (1/2π)∫ e^{cos t} dt = I₀(1).
    let r = periodic_trapezoid(&|t: f64| c(t.cos().exp(), 0.0), 0.0, 2.0 * PI, 1e-14, 0.0).unwrap();
    assert!((r.value.re / (2.0 * PI) - 1.2660658777520082).abs() < 1e-14);
}

#[test]
fn periodic_trapezoid_resolves_high_harmonics() {
    // (1/2π)∫ e^{cos t} e^{−32it} dt = I₃₂(1) ≈ 1.1e−45; 16- and 32-node grids
    // both alias the harmonic onto I₀(1).
    let f = |t: f64| C64::from_polar(t.cos().exp(), -32.0 * t);
    let r = periodic_trapezoid_resolving(&f, 0.0, 2.0 * PI, 1e-12, 0.0, 32.0).unwrap();
    assert!(r.value.norm() < 1e-14, "{}", r.value);
    // Exact cancellation terminates at the roundoff floor.
    let g = |t: f64| C64::from_polar(1.0, 3.0 * t);
    assert!(periodic_trapezoid(&g, 0.0, 2.0 * PI, 1e-12, 0.0).unwrap().value.norm() < 1e-14);
}

#[test]
fn gauss_legendre_weights_sum_to_two() {
    for n in [5, 20, 64] {
        let (x, w) = gauss_legendre(n);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
        // ∫ x^{2n−2} = 2/(2n−1) exactly.
        let m = 2 * n as i32 - 2;
        let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(m)).sum();
        assert!((q - 2.0 / (m as f64 + 1.0)).abs() < 1e-12);
    }
}

#[test]
fn wynn_accelerates_alternating_series() {
    // ln 2 = 1 − 1/2 + 1/3 − …
    let mut acc = c(0.0, 0.0);
    let sums: Vec<C64> = (1..=14)
        .map(|k| {
            acc += c(if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64, 0.0);
            acc
        })
        .collect();
    let (lim, _) = wynn_epsilon(&sums);
    assert!((lim.re - 2f64.ln()).abs() < 1e-10);
}

// Bessel K of imaginary order.

#[test]
fn bessel_k0_at_one_matches_frozen_oracle() {
    assert!((bessel_k_imag(0.0, 1.0).unwrap() - 0.42102443824070834).abs() < 1e-15);
}

#[test]
fn bessel_k_is_even_in_order() {
    let (a, b) = (bessel_k_imag(5.0, 2.0).unwrap(), bessel_k_imag(-5.0, 2.0).unwrap());
    assert_eq!(a, b);
    // Frozen multiprecision value K_{5i}(2).
    assert!((a - -3.4633788080657143e-4).abs() < 1e-10 * a.abs(), "{a}");
}

#[test]
fn bessel_k_frozen_values() {
    // Multiprecision values of K_0(2π) and K_i(2π).
    assert!((bessel_k_imag(0.0, 2.0 * PI).unwrap() - 9.165843609043703e-4).abs() < 1e-10 * 9.2e-4);
    assert!((bessel_k_imag(1.0, 2.0 * PI).unwrap() - 8.510042001439432e-4).abs() < 1e-10 * 8.5e-4);
}

#[test]
fn bessel_k_large_argument_bound() {
    // K₀(x) ≤ e^{−x}·∫e^{−x(cosh u − 1)}du, the latter ≤ √(π/(2x)).
    let v = bessel_k_imag(0.0, 30.0).unwrap();
    assert!(v > 0.0 && v < (-30f64).exp());
    assert!(v <= (-30f64).exp() * (PI / 60.0).sqrt());
}

#[test]
fn bessel_k_domain_errors() {
    assert!(matches!(bessel_k_imag(1.0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(bessel_k_imag(1.0, -2.0), Err(Error::Domain(_))));
}

// Gamma functions.

#[test]
fn gamma_small_integers_and_half() {
    assert!((gamma_complex(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
    assert!((gamma_complex(c(0.5, 0.0)).unwrap() - PI.sqrt()).norm() < 1e-14);
    assert!((gamma_complex(c(3.0, 0.0)).unwrap() - 2.0).norm() < 1e-13);
    assert!(matches!(gamma_complex(c(-3.0, 0.0)), Err(Error::Domain(_))));
    assert!(matches!(gamma_complex(c(0.0, 0.0)), Err(Error::Domain(_))));
}

#[test]
fn gamma_factor_values() {
    assert!((gamma_factor(c(0.5, 0.0)).unwrap() - 1.0).norm() < 1e-14);
    // Multiprecision composition at s = i.
    let g = gamma_factor(c(0.0, 1.0)).unwrap();
    assert!((g - c(-2.2053916456163514, 1.4096105807222761)).norm() < 1e-12 * g.norm(), "{g}");
    // On iℝ the quotient is not unimodular: |γ(it)|² = 2π coth(π|t|/2)/|t|.
    for t in [0.5, 1.0, 5.0, 20.0, 50.0] {
        let m2 = gamma_factor(c(0.0, t)).unwrap().norm_sqr();
        assert!((m2 - 2.0 * PI / (PI * t / 2.0).tanh() / t).abs() < 1e-11 * m2);
    }
    // It is unimodular on Re s = 1/2.
    for t in [0.5, 1.0, 5.0, 20.0, 50.0] {
        assert!((gamma_factor(c(0.5, t)).unwrap().norm() - 1.0).abs() < 1e-12);
    }
    assert!(gamma_factor(c(0.0, 0.0)).is_err());
}

#[test]
fn gamma_s_tau_values() {
    let v = gamma_s_tau(c(2.0, 0.0), c(0.0, 0.0)).unwrap();
    assert!((v - 2.0 * PI * PI).norm() < 1e-12);
    let (a, b) = (gamma_s_tau(c(2.5, 0.0), c(0.0, 2.0)).unwrap(), gamma_s_tau(c(2.5, 0.0), c(0.0, -2.0)).unwrap());
    assert!((a - b).norm() < 1e-12 * a.norm());
    // Multiprecision composition.
    assert!((a - 192.5404812835368).norm() < 1e-11 * 192.54, "{a}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gamma_recurrence(r in 0.05f64..10.0, phi in -1.5f64..1.5) {
        let z = C64::from_polar(r, phi);
        prop_assume!(z.re > 0.0);
        let g1 = gamma_complex(z + 1.0).unwrap();
        let g0 = gamma_complex(z).unwrap();
        prop_assert!((g1 - z * g0).norm() <= 1e-10 * g1.norm());
    }

    #[test]
    fn power_integrals_with_annotated_singularity(alpha in prop::sample::select(vec![-0.9, -0.5, -0.1]), a in -2.0f64..-0.1, b in 0.1f64..2.0, frac in 0.05f64..0.95) {
        let cpt = a + frac * (b - a);
        let spec = QuadratureSpec::new(1e-10, 0.0).with_singular([SingularPoint::real(cpt, alpha)]);
        let f = |n: Node| c(n.offset_from(0, cpt).abs().powf(alpha), 0.0);
        let r = integrate(&f, a, b, &spec).unwrap();
        let exact = ((b - cpt).powf(alpha + 1.0) + (cpt - a).powf(alpha + 1.0)) / (alpha + 1.0);
        prop_assert!((r.value.re - exact).abs() <= 1e-9 * exact, "{} vs {}", r.value.re, exact);
    }

    #[test]
    fn gamma_factor_functional_equation(t in -30.0f64..30.0, sigma in 0.1f64..0.9) {
        // γ(s)γ(1−s) = 1.
        let s = c(sigma, t);
        let p = gamma_factor(s).unwrap() * gamma_factor(1.0 - s).unwrap();
        prop_assert!((p - 1.0).norm() < 1e-10);
    }

    #[test]
    fn bessel_k_evenness_in_order_on_a_grid(t in 0.0f64..20.0, x in 0.5f64..20.0) {
        prop_assert_eq!(bessel_k_imag(t, x).unwrap(), bessel_k_imag(-t, x).unwrap());
    }
}
