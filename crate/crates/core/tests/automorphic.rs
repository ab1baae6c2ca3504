use harmonic_core::automorphic::{
    automorphy_certificate, bessel_square_moment, bessel_square_moment_closed, eisenstein_direct, eval_maass, geodesic_circle_point, ingest_maass,
    mean_square_report, rs_dirichlet, spherical_extract, CosetTable, MaassFormData, Normalization, Symmetry, AUTOMORPHY_POINTS,
};
use harmonic_core::numerics::periodic_trapezoid;
use harmonic_core::{Error, C64};
use proptest::prelude::*;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::sync::OnceLock;

fn shipped_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/maass_psl2z_even_r13.7797.json")
}

fn shipped() -> &'static MaassFormData {
    static D: OnceLock<MaassFormData> = OnceLock::new();
    D.get_or_init(|| ingest_maass(shipped_path()).unwrap())
}

fn shipped_json() -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(shipped_path()).unwrap()).unwrap()
}

fn parse(v: &serde_json::Value) -> harmonic_core::Result<MaassFormData> {
    MaassFormData::from_json_str(&serde_json::to_string(v).unwrap())
}

#[test]
fn shipped_data_loads() {
    let d = shipped();
    assert!((d.r() - 13.779751351890738).abs() < 1e-12);
    assert_eq!(d.symmetry(), Symmetry::Even);
    assert_eq!(d.normalization(), Normalization::Hecke);
    assert_eq!(d.coefficients()[0], 1.0);
    assert!(d.n_max() >= 100);
    assert!((d.mu() - (0.25 + d.r() * d.r())).abs() < 1e-12);
    assert_eq!(d.tau(), C64::new(0.0, 2.0 * d.r()));
    assert!(d.mean_square_constant() > 0.0);
}

#[test]
fn malformed_files_are_input_errors() {
    let base = shipped_json();
    let mut cases = Vec::new();
    let mut v = base.clone();
    v["coefficients"] = serde_json::json!([]);
    cases.push(("empty coefficients", v));
    let mut v = base.clone();
    v["mu"] = serde_json::json!(1.0);
    cases.push(("mu mismatch", v));
    let mut v = base.clone();
    v["lattice"] = serde_json::json!("SL3Z");
    cases.push(("lattice", v));
    let mut v = base.clone();
    v["format_version"] = serde_json::json!(2);
    cases.push(("format version", v));
    let mut v = base.clone();
    v["unexpected"] = serde_json::json!(true);
    cases.push(("unknown field", v));
    let mut v = base.clone();
    v["R"] = serde_json::json!(-3.0);
    cases.push(("negative R", v));
    let mut v = base.clone();
    v["coefficients"][0] = serde_json::json!(0.0);
    cases.push(("vanishing a_1", v));
    for (name, v) in cases {
        assert!(matches!(parse(&v), Err(Error::Input(_))), "{name}");
    }
    assert!(matches!(ingest_maass("/nonexistent/maass.json"), Err(Error::Input(_))));
}

#[test]
fn minimal_file_without_mu_loads_and_round_trips() {
    let text = r#"{"format_version": 1, "lattice": "PSL2Z", "R": 9.533695, "symmetry": "odd",
                   "normalization": "hecke", "coefficients": [1.0, -1.068333, -0.456197], "provenance": "test"}"#;
    let d = MaassFormData::from_json_str(text).unwrap();
    assert_eq!(d.n_max(), 3);
    assert_eq!(d.coefficient(-2), Some(1.068333));
    assert_eq!(d.coefficient(2), Some(-1.068333));
    assert_eq!(d.coefficient(4), None);
    assert_eq!(d.coefficient(0), None);
    let again = MaassFormData::from_json_str(&d.to_json_string()).unwrap();
    assert_eq!(again, d);
}

#[test]
fn whittaker_scale_is_root_cosh() {
    let d = MaassFormData::new(2.0, Symmetry::Even, Normalization::Hecke, vec![1.0], "test").unwrap();
    assert!((d.whittaker_scale() - (2.0 * PI).cosh().sqrt()).abs() < 1e-12 * d.whittaker_scale());
}

#[test]
fn even_form_is_even_and_periodic() {
    let d = shipped();
    for (x, y) in [(0.13, 1.0), (0.37, 0.9), (-0.21, 1.3)] {
        let v = eval_maass(d, x, y, 1e-12).unwrap();
        let m = eval_maass(d, -x, y, 1e-12).unwrap();
        let p = eval_maass(d, x + 1.0, y, 1e-12).unwrap();
        assert!((v.value - m.value).abs() < 1e-12);
        assert!((v.value - p.value).abs() < 1e-12);
        assert!(v.tail_bound <= 1e-12);
    }
}

#[test]
fn truncation_and_domain_errors() {
    let d = MaassFormData::new(13.78, Symmetry::Even, Normalization::Hecke, vec![1.0, 0.5], "test").unwrap();
    assert!(matches!(eval_maass(&d, 0.0, 0.1, 1e-10), Err(Error::Truncation(_))));
    assert!(matches!(eval_maass(&d, 0.0, -1.0, 1e-10), Err(Error::Domain(_))));
}

#[test]
fn fourier_profile_parseval() {
    // ∫_0^1 φ(x+iy)² dx against the coefficient sum, y = 1.5.
    let d = shipped();
    let p = d.whittaker_profile(1.5, 1e-14).unwrap();
    let q = periodic_trapezoid(&|x: f64| C64::new(p.eval(x).powi(2), 0.0), 0.0, 1.0, 1e-13, 0.0).unwrap();
    assert!((q.value.re - p.mean_square()).abs() <= 1e-8 * p.mean_square());
}

#[test]
fn eisenstein_at_i_matches_frozen_values() {
    // E(i, s) = 2ζ(s)β(s)/ζ(2s) (β the Dirichlet beta function), multiprecision.
    let i = C64::new(0.0, 1.0);
    let v = eisenstein_direct(i, C64::new(2.5, 0.0), 200, 1e-3).unwrap();
    assert!((v.value.re - 2.4544903000314052).abs() <= v.tail_bound, "{:?}", v);
    assert!(v.value.im.abs() < 1e-14);
    let v = eisenstein_direct(i, C64::new(2.0, 0.0), 400, 1e-2).unwrap();
    assert!((v.value.re - 2.7842015453307912).abs() <= v.tail_bound, "{:?}", v);
    // Doubling M moves the sum by less than the first tail bound.
    let a = eisenstein_direct(i, C64::new(2.5, 0.0), 200, 1e-3).unwrap();
    let b = eisenstein_direct(i, C64::new(2.5, 0.0), 400, 1e-3).unwrap();
    assert!((a.value - b.value).norm() <= a.tail_bound);
}

#[test]
fn eisenstein_is_modular_invariant() {
    let z = C64::new(0.23, 0.8);
    let s = C64::new(3.0, 1.0);
    let t = CosetTable::new(200).unwrap();
    let base = t.eisenstein_multi(z, &[s])[0];
    let shifted = t.eisenstein_multi(z + 1.0, &[s])[0];
    let inverted = t.eisenstein_multi(-z.inv(), &[s])[0];
    let tol = 2.0 * (base.tail_bound + inverted.tail_bound);
    assert!((base.value - shifted.value).norm() <= tol);
    assert!((base.value - inverted.value).norm() <= tol);
}

#[test]
fn eisenstein_argument_checks() {
    assert!(matches!(eisenstein_direct(C64::new(0.0, -1.0), C64::new(2.0, 0.0), 50, 1e-2), Err(Error::Domain(_))));
    assert!(matches!(eisenstein_direct(C64::new(0.0, 1.0), C64::new(1.2, 0.0), 50, 1e-2), Err(Error::Domain(_))));
    assert!(matches!(CosetTable::new(5), Err(Error::Usage(_))));
    assert!(matches!(eisenstein_direct(C64::new(0.0, 1.0), C64::new(1.5, 0.0), 10, 1e-8), Err(Error::Accuracy { .. })));
}

#[test]
fn dirichlet_series_values() {
    let single = MaassFormData::new(5.0, Symmetry::Even, Normalization::Hecke, vec![1.0], "test").unwrap();
    let (v, _) = rs_dirichlet(&single, 2.0).unwrap();
    assert_eq!(v, 1.0);
    let d = shipped();
    let (a, _) = rs_dirichlet(d, 2.0).unwrap();
    let (b, _) = rs_dirichlet(d, 2.5).unwrap();
    let (c, _) = rs_dirichlet(d, 3.0).unwrap();
    assert!(a > b && b > c && c > 1.0);
    assert!(matches!(rs_dirichlet(d, 1.2), Err(Error::Domain(_))));
}

#[test]
fn bessel_square_moment_quadrature_matches_gamma_product() {
    for (s, r) in [(2.0, 3.0), (2.5, 13.78)] {
        let closed = bessel_square_moment_closed(s, r).unwrap();
        let (q, err) = bessel_square_moment(s, r, 1e-10).unwrap();
        assert!((q - closed).abs() <= 1e-8 * closed.abs() + err, "s={s} r={r}: {q} vs {closed}");
    }
}

#[test]
fn mean_square_report_examples() {
    let ones = MaassFormData::new(5.0, Symmetry::Even, Normalization::Hecke, vec![1.0; 64], "test").unwrap();
    let rep = mean_square_report(&ones, &[4, 8, 16, 32, 64]).unwrap();
    assert_eq!(rep.series[0].values, vec![8.0, 16.0, 32.0, 64.0, 128.0]);
    assert!((rep.series[0].slope - 1.0).abs() < 1e-12);
    assert!(rep.pass());
    let zeros = MaassFormData::new(5.0, Symmetry::Even, Normalization::L2, vec![0.0; 16], "test").unwrap();
    let rep = mean_square_report(&zeros, &[4, 8, 16]).unwrap();
    assert!(rep.series[0].values.iter().all(|&v| v == 0.0));
    assert!(matches!(mean_square_report(&zeros, &[0]), Err(Error::Usage(_))));
    assert!(matches!(mean_square_report(&zeros, &[17]), Err(Error::Usage(_))));
}

#[test]
fn scrambling_is_deterministic_and_breaks_automorphy() {
    let d = shipped();
    let (a, b) = (d.scrambled(5), d.scrambled(5));
    assert_eq!(a, b);
    assert_ne!(a.coefficients(), d.coefficients());
    assert_eq!(a.coefficients()[0], d.coefficients()[0]);
    let genuine = automorphy_certificate(d, &AUTOMORPHY_POINTS, 1e-6).unwrap();
    let control = automorphy_certificate(&a, &AUTOMORPHY_POINTS, 1e-6).unwrap();
    assert!(genuine.pass, "{genuine:?}");
    assert!(!control.pass);
    assert!(genuine.residual < 1e-3 * control.residual);
}

#[test]
fn geodesic_circle_is_at_constant_distance() {
    let z0 = C64::new(0.1, 1.2);
    for th in [0.0, 0.7, 2.0, 4.5] {
        let z = geodesic_circle_point(z0, th, 0.5);
        // cosh d(z, z0) = 1 + |z − z0|²/(2 y y0).
        let ch = 1.0 + (z - z0).norm_sqr() / (2.0 * z.im * z0.im);
        assert!((ch - 0.5f64.cosh()).abs() < 1e-13);
    }
}

#[test]
fn spherical_coefficient_is_angular_average_over_profile() {
    let d = shipped();
    let z0 = C64::new(0.1, 1.2);
    let b = spherical_extract(d, z0, 0, 0.3, 1e-12).unwrap();
    let f = |th: f64| C64::new(eval_maass(d, geodesic_circle_point(z0, th, 0.3).re, geodesic_circle_point(z0, th, 0.3).im, 1e-13).unwrap().value, 0.0);
    let avg = periodic_trapezoid(&f, 0.0, 2.0 * PI, 1e-12, 1e-14).unwrap().value / (2.0 * PI);
    assert!((b.angular - avg).norm() < 1e-10 * avg.norm().max(1e-3));
    assert!((b.value - b.angular / b.profile).norm() < 1e-15 * b.value.norm());
    // The zeroth coefficient is the value at the centre.
    let centre = eval_maass(d, z0.re, z0.im, 1e-13).unwrap().value;
    assert!((b.value.re - centre).abs() < 1e-8 * centre.abs().max(1e-3), "{} vs {centre}", b.value);
    assert!(matches!(spherical_extract(d, C64::new(0.0, -1.0), 0, 0.3, 1e-10), Err(Error::Domain(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn spherical_coefficients_do_not_depend_on_the_radius(r1 in 0.1f64..0.4, r2 in 0.1f64..0.4, n in prop::sample::select(vec![0i64, 2, 4])) {
        let d = shipped();
        let z0 = C64::new(-0.2, 1.3);
        let a = spherical_extract(d, z0, n, r1, 1e-12);
        let b = spherical_extract(d, z0, n, r2, 1e-12);
        if let (Ok(a), Ok(b)) = (a, b) {
            let scale = a.value.norm().max(b.value.norm()).max(1e-6);
            prop_assert!((a.value - b.value).norm() <= 1e-6 * scale, "{} vs {}", a.value, b.value);
        }
    }
}
