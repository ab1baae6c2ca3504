use harmonic_core::asymptotics::{
    claim_phase_problem, k_factor_asymptotic, k_lambda_asymptotic, main_term_constants, main_term_constants_signed, model_integral_i,
    stationary_phase_2term, stationary_phase_contributions, PhaseProblem,
};
use harmonic_core::numerics::{bessel_j0_y0, gauss_legendre};
use harmonic_core::transforms::LineFunction;
use harmonic_core::trilinear::{k_factor, k_lambda};
use harmonic_core::{Error, C64};
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - x * x)).exp()
    }
}

fn composite_gl<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, panels: usize, order: usize) -> C64 {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut acc = c(0.0, 0.0);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            acc += f(mid + 0.5 * h * xi) * (0.5 * h * wi);
        }
    }
    acc
}

/// `∫ (1 + t²) e^{is t²/2} dt`, whose two-term expansion is exact.
fn gaussian(s: f64, scale: C64) -> PhaseProblem {
    PhaseProblem::new(move |t| [t * t / 2.0, t, 1.0, 0.0, 0.0], move |t| [scale * (1.0 + t * t), scale * 2.0 * t, scale * 2.0], vec![0.0], c(0.0, s))
        .unwrap()
}

#[test]
fn gaussian_integral_is_reproduced_exactly() {
    for s in [5.0, 50.0] {
        let got = stationary_phase_2term(&gaussian(s, c(1.0, 0.0))).unwrap();
        let want = (2.0 * PI / s).sqrt() * C64::from_polar(1.0, FRAC_PI_4) * c(1.0, 1.0 / s);
        assert!((got - want).norm() < 1e-14 * want.norm(), "{got} vs {want}");
    }
}

#[test]
fn cosine_phase_approximates_bessel_j0() {
    // ∫_0^{2π} e^{is cos t} dt = 2πJ₀(s); remainder O(s^{−5/2}).
    for s in [40.0, 100.0] {
        let p = PhaseProblem::new(
            |t: f64| [t.cos(), -t.sin(), -t.cos(), t.sin(), t.cos()],
            |_| [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![0.0, PI],
            c(0.0, s),
        )
        .unwrap();
        let (j0, _) = bessel_j0_y0(s).unwrap();
        let err = (stationary_phase_2term(&p).unwrap() - 2.0 * PI * j0).norm();
        assert!(err < 5.0 * s.powf(-2.5), "s={s}: {err}");
    }
}

#[test]
fn phase_problem_validation() {
    let amp = |_: f64| [c(1.0, 0.0); 3];
    assert!(matches!(PhaseProblem::new(|t: f64| [t * t, 2.0 * t, 2.0, 0.0, 0.0], amp, vec![0.5], c(0.0, 10.0)), Err(Error::Domain(_))));
    assert!(matches!(PhaseProblem::new(|t: f64| [t * t, 2.0 * t, 2.0, 0.0, 0.0], amp, vec![0.0], c(1.0, 10.0)), Err(Error::Domain(_))));
    let p = PhaseProblem::new(|t: f64| [t * t, 2.0 * t, 2.0, 0.0, 0.0], amp, vec![0.0], c(0.0, 0.5)).unwrap();
    assert!(matches!(stationary_phase_contributions(&p), Err(Error::Domain(_))));
    assert!(claim_phase_problem(c(0.0, 2.0), c(0.0, 10.0), 1.7).is_err());
}

#[test]
fn main_term_constants_closed_forms() {
    let tau = c(0.0, 2.0);
    let k = main_term_constants(tau).unwrap();
    assert!((k.a.norm() - (2.0 / PI).sqrt()).abs() < 1e-13);
    assert!((k.b.norm() - 1.0 / (2.0 * (2.0 * PI).sqrt())).abs() < 1e-13);
    // C(τ) − C(τ′) = e^{3iσπ/4}·4(τ² − τ′²)/√(2π), σ = −1 for Im λ > 0.
    let k2 = main_term_constants(c(0.0, 3.0)).unwrap();
    let want = C64::from_polar(1.0, -3.0 * FRAC_PI_4) * 4.0 * (tau * tau - c(0.0, 3.0) * c(0.0, 3.0)) / (2.0 * PI).sqrt();
    assert!((k.c - k2.c - want).norm() < 1e-12 * want.norm());
    assert!((k.a - k2.a).norm() < 1e-13 && (k.b - k2.b).norm() < 1e-13);
}

#[test]
fn negative_lambda_constants_are_conjugates() {
    for t in [0.5, 2.0, 4.0] {
        let (p, m) = (main_term_constants(c(0.0, t)).unwrap(), main_term_constants_signed(c(0.0, t), -1.0).unwrap());
        assert!((p.a.conj() - m.a).norm() < 1e-13);
        assert!((p.b.conj() - m.b).norm() < 1e-13);
        assert!((p.c.conj() - m.c).norm() < 1e-12 * p.c.norm());
    }
}

#[test]
fn asymptotic_kernel_tracks_quadrature() {
    let (tau, lambda) = (c(0.0, 2.0), c(0.0, 100.0));
    for cc in [0.6, 1.0] {
        let exact = k_lambda(tau, lambda, cc, 1e-11).unwrap();
        let asym = k_lambda_asymptotic(tau, lambda, cc).unwrap();
        // Two-term expansion: relative remainder of order |λ|^{−2}.
        assert!((exact - asym).norm() < 5e-3 * exact.norm(), "c={cc}: {exact} vs {asym}");
        let kf = k_factor(tau, lambda, cc, 1e-11).unwrap();
        let ka = k_factor_asymptotic(tau, lambda, cc).unwrap();
        assert!((kf - ka).norm() < 5e-3 * kf.norm());
    }
}

#[test]
fn asymptotic_kernel_rejects_exceptional_points_and_small_lambda() {
    let tau = c(0.0, 2.0);
    assert!(matches!(k_lambda_asymptotic(tau, c(0.0, 100.0), 0.0), Err(Error::Domain(_))));
    assert!(matches!(k_lambda_asymptotic(tau, c(0.0, 0.5), 0.6), Err(Error::Domain(_))));
}

#[test]
fn model_integral_without_oscillation_in_lambda() {
    // λ = 0: substituting c = ±x² removes the |sin 2c|^{−1/2} singularity.
    let chi = LineFunction::new(|t| c(bump(t) * (1.0 + 0.2 * t), 0.0), -1.0, 1.0).unwrap();
    let (n, t) = (12.0, 3.0);
    let got = model_integral_i(c(0.0, 0.0), n, t, &chi, 1e-12).unwrap();
    let r = (1.0 / t).sqrt();
    let side = |sgn: f64| {
        composite_gl(
            |x| {
                let cc = sgn * x * x;
                if x == 0.0 {
                    return c(0.0, 0.0);
                }
                c(bump(t * cc) * (1.0 + 0.2 * t * cc), 0.0) * C64::from_polar(2.0 * x / (2.0 * x * x).sin().sqrt(), -n * cc)
            },
            0.0,
            r,
            40,
            20,
        )
    };
    let want = t * (side(1.0) + side(-1.0));
    assert!((got - want).norm() < 1e-10 * want.norm(), "{got} vs {want}");
}

#[test]
fn model_integral_away_from_the_origin() {
    let g = |t: f64| bump((2.0 * t - 1.1) / 0.7);
    let chi = LineFunction::new(move |t| c(g(t), 0.0), 0.2, 0.9).unwrap();
    let (lambda, n, t) = (c(0.0, 10.0), 20.0, 2.0);
    let got = model_integral_i(lambda, n, t, &chi, 1e-12).unwrap();
    let want = t * composite_gl(
        |cc| {
            c(g(t * cc), 0.0)
                * C64::from_polar((2.0 * cc).sin().powf(-0.5), -n * cc)
                * ((lambda / 2.0) * (cc.sin().ln() - cc.cos().ln())).exp()
        },
        0.1,
        0.45,
        40,
        20,
    );
    assert!((got - want).norm() < 1e-10 * want.norm(), "{got} vs {want}");
    assert!(matches!(model_integral_i(lambda, 1.0, 2.0, &chi, 1e-8), Err(Error::Usage(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn contributions_are_linear_in_the_amplitude(s in 2.0f64..200.0, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let scale = c(re, im);
        prop_assume!(scale.norm() > 1e-3);
        let base = stationary_phase_2term(&gaussian(s, c(1.0, 0.0))).unwrap();
        let scaled = stationary_phase_2term(&gaussian(s, scale)).unwrap();
        prop_assert!((scaled - scale * base).norm() <= 1e-13 * scaled.norm());
    }

    #[test]
    fn asymptotic_kernel_envelope(t in 0.5f64..4.0, l in 20.0f64..400.0, cc in 0.05f64..1.5) {
        prop_assume!((cc - FRAC_PI_2).abs() > 0.05 && (cc - FRAC_PI_4).abs() > 1e-3);
        let tau = c(0.0, t);
        let k = main_term_constants(tau).unwrap();
        let v = k_lambda_asymptotic(tau, c(0.0, l), cc).unwrap();
        // Each of the two main terms has modulus ≤ |λ|^{−1/2}(|A| + (|B|+|C|)/|λ|)·|sin 2c|^{−1/2}.
        let bound = 2.0 * (k.a.norm() + (k.b.norm() + k.c.norm()) / l) / l.sqrt() / (2.0 * cc).sin().abs().sqrt();
        prop_assert!(v.norm() <= bound * (1.0 + 1e-12));
    }
}
