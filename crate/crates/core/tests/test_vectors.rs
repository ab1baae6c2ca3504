use harmonic_core::test_vectors::{alpha_z, alpha_zr, make_bump, u_nt, u_nt_calibration, w_nt, BumpSpec};
use harmonic_core::transforms::{circle_fourier, mellin, TensorDomain};
use harmonic_core::{Error, C64};
use proptest::prelude::*;
use std::sync::OnceLock;

fn line_bump() -> &'static harmonic_core::test_vectors::Bump {
    static B: OnceLock<harmonic_core::test_vectors::Bump> = OnceLock::new();
    B.get_or_init(|| make_bump(BumpSpec::line()).unwrap())
}

fn circle_bump() -> &'static harmonic_core::test_vectors::Bump {
    static B: OnceLock<harmonic_core::test_vectors::Bump> = OnceLock::new();
    B.get_or_init(|| make_bump(BumpSpec::circle()).unwrap())
}

#[test]
fn line_bump_meets_its_fourier_bound() {
    let b = line_bump();
    assert!(b.verified_min() >= std::f64::consts::SQRT_2);
    for xi in [-1.0, -0.3, 0.0, 0.7, 1.0] {
        assert!(b.psi_hat(xi) >= std::f64::consts::SQRT_2);
    }
    assert!((b.integral() - b.psi_hat(0.0)).abs() < 1e-15);
}

#[test]
fn bump_support_evenness_and_table_accuracy() {
    let b = line_bump();
    assert_eq!(b.eval(1.0), 0.0);
    assert_eq!(b.eval(-1.5), 0.0);
    for x in [0.0, 0.13, 0.5, 0.77, 0.95] {
        assert_eq!(b.eval(x), b.eval(-x));
        let d = b.eval_direct(x);
        assert!((b.eval(x) - d).abs() <= 1e-10 * b.eval_direct(0.0), "x={x}");
    }
    // ψ = χ * χ with χ ≥ 0 supported in [−1/2, 1/2]: ψ > 0 inside (−1, 1).
    assert!(b.eval(0.9) > 0.0);
    assert_eq!(b.chi(0.5), 0.0);
}

#[test]
fn invalid_bump_specs_are_rejected() {
    let mut s = BumpSpec::line();
    s.radius = 0.0;
    assert!(matches!(make_bump(s), Err(Error::Usage(_))));
}

#[test]
fn w_nt_parameter_checks() {
    let b = line_bump();
    assert!(matches!(w_nt(4, 8.0, b), Err(Error::Usage(_))));
    assert!(matches!(w_nt(4, 0.5, b), Err(Error::Usage(_))));
    let w = w_nt(8, 8.0, b).unwrap();
    assert_eq!(w.domain(), TensorDomain::Plane);
    assert_eq!(w.support_box(), (1.0 / 8.0, 1.0));
    assert_eq!(w.frequency(), 8.0);
    let rec = w.record().unwrap();
    assert_eq!(rec.family, "w_NT");
}

#[test]
fn w_nt_formula() {
    let b = line_bump();
    let (n, t) = (16i64, 4.0);
    let w = w_nt(n, t, b).unwrap();
    for (x, y) in [(0.1, 0.05), (-0.3, -0.4), (0.5, 0.52)] {
        let u: f64 = x - y;
        let want = C64::from_polar(t * b.eval(t * u) * b.eval(x + y), -(n as f64) * u);
        assert!((w.eval(x, y) - want).norm() < 1e-15);
    }
    assert_eq!(w.eval(0.5, 0.0), C64::new(0.0, 0.0));
}

#[test]
fn u_nt_support_and_window() {
    let b = circle_bump();
    let (n, t) = (40i64, 5.0);
    let u = u_nt(n, t, b).unwrap();
    let (lo, hi) = u.function.support();
    assert!((lo + 0.4 / t).abs() < 1e-15 && (hi - 0.4 / t).abs() < 1e-15);
    assert_eq!(u.calibration, u_nt_calibration(b));
    // û(k) ≥ 1 on |k + N| ≤ T.
    for k in -45..=-35 {
        let v = circle_fourier(&u.function, k, 1e-10).unwrap();
        assert!(v.re >= 1.0 && v.im.abs() < 1e-8 * v.re, "k={k}: {v}");
    }
    assert!(matches!(u_nt(3, 5.0, b), Err(Error::Usage(_))));
    assert!(matches!(u_nt(10, 5.0, line_bump()), Err(Error::Domain(_))));
}

#[test]
fn plateau_function_values() {
    assert_eq!(alpha_z(4.0, 1.0), 1.0);
    assert_eq!(alpha_z(4.0, 1.25), 1.0);
    assert_eq!(alpha_z(4.0, 0.75), 1.0);
    assert_eq!(alpha_z(4.0, 1.5), 0.0);
    assert_eq!(alpha_z(4.0, 0.4), 0.0);
    let mid = alpha_z(4.0, 1.375);
    assert!(mid > 0.0 && mid < 1.0);
    let a = alpha_zr(4.0, 10.0).unwrap();
    assert_eq!(a.support(), (5.0, 15.0));
    assert_eq!(a.eval(10.0), C64::new(1.0, 0.0));
    assert!(matches!(alpha_zr(0.5, 10.0), Err(Error::Usage(_))));
    assert!(matches!(alpha_zr(4.0, 0.5), Err(Error::Usage(_))));
}

#[test]
fn plateau_mellin_transform_decays_along_vertical_lines() {
    let a = alpha_zr(4.0, 10.0).unwrap();
    let at0 = mellin(&a, C64::new(0.0, 0.0), 1e-12).unwrap();
    // ∫ α(t) t^{−1/2} dt is at least the plateau part ∫_{7.5}^{12.5} t^{−1/2} dt.
    assert!(at0.re >= 2.0 * (12.5f64.sqrt() - 7.5f64.sqrt()));
    let mut last = at0.norm();
    for y in [100.0, 200.0, 400.0] {
        let v = mellin(&a, C64::new(0.0, y), 1e-10).unwrap().norm();
        assert!(v < last, "y={y}: {v} >= {last}");
        last = v;
    }
    assert!(last < 1e-3 * at0.norm());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn plateau_is_a_smooth_step_in_unit_interval(z in 1.0f64..20.0, t in 0.0f64..3.0) {
        let v = alpha_z(z, t);
        prop_assert!((0.0..=1.0).contains(&v));
        if (t - 1.0).abs() <= 1.0 / z { prop_assert_eq!(v, 1.0); }
        if (t - 1.0).abs() >= 2.0 / z { prop_assert_eq!(v, 0.0); }
        // Symmetric about 1 up to the roundoff of 2 − t.
        prop_assert!((v - alpha_z(z, 2.0 - t)).abs() < 1e-12);
    }

    #[test]
    fn bump_is_even_and_nonnegative(x in -1.2f64..1.2) {
        let b = line_bump();
        prop_assert!(b.eval(x) >= -1e-14 * b.eval(0.0));
        prop_assert_eq!(b.eval(x), b.eval(-x));
    }
}
