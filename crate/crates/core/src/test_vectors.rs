//! Test-vector families: the bump `ψ = χ * χ′` with a verified Fourier lower
//! bound, the plane tensors `w_{N,T}`, the circle functions `u_{N,T}` and the
//! plateau functions `α_{Z,R}`.
//!
//! Fourier conventions follow [`crate::transforms`]: with the modulations
//! `e^{−iN(x−y)}` and `e^{−iNc}` the weights `ŵ_{N,T}(k,−k)` and `û_{N,T}(k)`
//! concentrate on the window `|k + N| ≤ T`.

use crate::error::{Error, Result};
use crate::numerics::{integrate, Node, QuadratureSpec};
use crate::transforms::{CircleFunction, Construction, LineFunction, TensorVector};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Recipe for the base bump `χ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BumpRecipe {
    /// `χ(x) = a·exp(−1/(1 − (x/r)²))` on `|x| < r` (smoothness order ∞).
    ExpInverseQuadratic,
}

/// Parameters of a bump `ψ = χ * χ′`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpSpec {
    /// `ψ` is supported in `[−radius, radius]` (so `χ` in `[−radius/2, radius/2]`).
    pub radius: f64,
    /// Required lower bound of `ψ̂` on `[−bound_radius, bound_radius]`.
    pub lower_bound: f64,
    pub bound_radius: f64,
    pub recipe: BumpRecipe,
}

impl BumpSpec {
    /// The line bump used by `w_{N,T}`: support `[−1, 1]` and `ψ̂ ≥ √2` on
    /// `[−1, 1]`. The margin `√2` makes `ŵ_{N,T} = (1/2)ψ̂(0)ψ̂(·) ≥ 1` on the
    /// window despite the Jacobian `1/2` of the rotated coordinates.
    pub fn line() -> Self {
        BumpSpec { radius: 1.0, lower_bound: std::f64::consts::SQRT_2, bound_radius: 1.0, recipe: BumpRecipe::ExpInverseQuadratic }
    }

    /// The circle bump used by `u_{N,T}`: the autocorrelation of a base bump
    /// supported within `0.2` of the origin (so support radius `0.4`). Its
    /// amplitude is irrelevant (`u_{N,T}` is calibrated separately).
    pub fn circle() -> Self {
        BumpSpec { radius: 0.4, lower_bound: 1.0, bound_radius: 1.0, recipe: BumpRecipe::ExpInverseQuadratic }
    }
}

/// Number of table intervals for the tabulated autocorrelation.
const TABLE_INTERVALS: usize = 4096;
/// Interpolation stencil (points) for table lookups.
const STENCIL: usize = 10;
/// Barycentric weights `(−1)^a C(9, a)` of the uniform 10-point stencil.
const BARY: [f64; STENCIL] = [1.0, -9.0, 36.0, -84.0, 126.0, -126.0, 84.0, -36.0, 9.0, -1.0];
/// Grid used to verify the Fourier lower bound.
const VERIFY_POINTS: usize = 2001;

/// The bump `ψ = χ * χ′` (`χ` real and even, so `ψ = χ * χ` and `ψ̂ = χ̂² ≥ 0`).
///
/// `ψ` is tabulated on a uniform grid from adaptive quadrature of the
/// convolution and evaluated by local 10-point Lagrange interpolation
/// (agreement with [`Bump::eval_direct`] is checked by the tests).
#[derive(Clone)]
pub struct Bump {
    spec: BumpSpec,
    amplitude: f64,
    table: Arc<Vec<f64>>,
    h: f64,
    verified_min: f64,
}

impl std::fmt::Debug for Bump {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fm.debug_struct("Bump")
            .field("spec", &self.spec)
            .field("amplitude", &self.amplitude)
            .field("verified_min", &self.verified_min)
            .finish()
    }
}

fn unit_chi(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - x * x)).exp()
    }
}

impl Bump {
    pub fn spec(&self) -> BumpSpec {
        self.spec
    }

    /// Minimum of `ψ̂` over the verification grid on `[−bound_radius, bound_radius]`.
    pub fn verified_min(&self) -> f64 {
        self.verified_min
    }

    /// The base bump `χ`.
    pub fn chi(&self, x: f64) -> f64 {
        self.amplitude * unit_chi(2.0 * x / self.spec.radius)
    }

    /// `χ̂(ξ) = ∫ χ(x) e^{−iξx} dx` (real, since `χ` is even).
    pub fn chi_hat(&self, xi: f64) -> f64 {
        let r = self.spec.radius / 2.0;
        let spec = QuadratureSpec::new(1e-14, 1e-17 * self.amplitude).with_frequency(xi.abs()).with_max_subdivisions(5_000);
        let f = |n: Node| C64::new(self.chi(n.t) * (xi * n.t).cos(), 0.0);
        2.0 * integrate(&f, 0.0, r, &spec).map(|q| q.value.re).unwrap_or(f64::NAN)
    }

    /// `ψ̂(ξ) = χ̂(ξ)²`.
    pub fn psi_hat(&self, xi: f64) -> f64 {
        self.chi_hat(xi).powi(2)
    }

    /// `ψ(x)` by quadrature of the convolution (reference path).
    pub fn eval_direct(&self, x: f64) -> f64 {
        let r = self.spec.radius / 2.0;
        let (lo, hi) = ((x - r).max(-r), (x + r).min(r));
        if lo >= hi {
            return 0.0;
        }
        let spec = QuadratureSpec::new(1e-14, 1e-18 * self.amplitude * self.amplitude).with_max_subdivisions(5_000);
        let f = |n: Node| C64::new(self.chi(n.t) * self.chi(x - n.t), 0.0);
        integrate(&f, lo, hi, &spec).map(|q| q.value.re).unwrap_or(f64::NAN)
    }

    /// `ψ(x)` from the table (barycentric interpolation on a uniform stencil).
    pub fn eval(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax >= self.spec.radius {
            return 0.0;
        }
        let pos = ax / self.h;
        let j0 = pos.floor() as i64 - (STENCIL as i64 / 2 - 1);
        let mut num = 0.0;
        let mut den = 0.0;
        for (a, w) in BARY.iter().enumerate() {
            let j = j0 + a as i64;
            let d = pos - j as f64;
            // Table holds ψ(jh) for 0 ≤ j ≤ TABLE_INTERVALS; ψ is even and
            // vanishes beyond the radius.
            let k = j.unsigned_abs() as usize;
            let y = if k > TABLE_INTERVALS { 0.0 } else { self.table[k] };
            if d == 0.0 {
                return y;
            }
            let q = w / d;
            num += q * y;
            den += q;
        }
        num / den
    }

    /// `∫ψ = ψ̂(0) = (∫χ)²`.
    pub fn integral(&self) -> f64 {
        self.psi_hat(0.0)
    }

    /// `ψ` as a line function on `[−radius, radius]`.
    pub fn to_line_function(&self) -> LineFunction {
        let b = self.clone();
        let r = self.spec.radius;
        LineFunction::new(move |t| C64::new(b.eval(t), 0.0), -r, r).expect("bump radius is positive")
    }
}

/// Builds `ψ = χ * χ` with `χ` amplitude-scaled so that
/// `ψ̂ ≥ lower_bound` on `[−bound_radius, bound_radius]`, then verifies the
/// bound by numerically transforming the tabulated `ψ` on a 2001-point grid.
pub fn make_bump(spec: BumpSpec) -> Result<Bump> {
    if !(spec.radius > 0.0 && spec.lower_bound > 0.0 && spec.bound_radius > 0.0) {
        return Err(Error::Usage(format!("invalid bump spec {spec:?}")));
    }
    let mut bump = Bump { spec, amplitude: 1.0, table: Arc::new(Vec::new()), h: spec.radius / TABLE_INTERVALS as f64, verified_min: 0.0 };
    // χ̂ is positive and decreasing on [0, bound_radius] for these narrow
    // bumps; scale using the grid minimum anyway.
    let grid: Vec<f64> = (0..VERIFY_POINTS)
        .map(|i| -spec.bound_radius + 2.0 * spec.bound_radius * i as f64 / (VERIFY_POINTS - 1) as f64)
        .collect();
    let min_unit = (0..=200)
        .map(|i| bump.chi_hat(spec.bound_radius * i as f64 / 200.0).abs())
        .fold(f64::INFINITY, f64::min);
    if !(min_unit > 0.0) {
        return Err(Error::Domain("base bump transform vanishes on the bound interval".into()));
    }
    // 1e-6 relative margin so the verified bound survives quadrature noise.
    bump.amplitude = (spec.lower_bound / min_unit.powi(2)).sqrt() * (1.0 + 1e-6);
    let table: Vec<f64> = (0..=TABLE_INTERVALS).map(|j| bump.eval_direct(j as f64 * bump.h)).collect();
    bump.table = Arc::new(table);
    let r = spec.radius;
    let min = grid
        .iter()
        .map(|&xi| {
            let qs = QuadratureSpec::new(1e-13, 1e-16 * spec.lower_bound).with_frequency(xi.abs()).with_max_subdivisions(5_000);
            let f = |n: Node| C64::new(bump.eval(n.t) * (xi * n.t).cos(), 0.0);
            2.0 * integrate(&f, 0.0, r, &qs).map(|q| q.value.re).unwrap_or(f64::NAN)
        })
        .fold(f64::INFINITY, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.min(v) });
    if !(min >= spec.lower_bound) {
        return Err(Error::Domain(format!(
            "bump verification failed: min ψ̂ on [−{0}, {0}] is {min}, required {1}",
            spec.bound_radius, spec.lower_bound
        )));
    }
    bump.verified_min = min;
    Ok(bump)
}

/// `w_{N,T}(x,y) = T e^{−iN(x−y)} ψ(T(x−y)) ψ(x+y)` for a line bump `ψ`.
pub fn w_nt(n: i64, t: f64, psi: &Bump) -> Result<TensorVector> {
    if !(t >= 1.0 && (n as f64) >= t) {
        return Err(Error::Usage(format!("need N ≥ T ≥ 1, got N = {n}, T = {t}")));
    }
    let r = psi.spec().radius;
    let b = psi.clone();
    let nf = n as f64;
    let f = move |x: f64, y: f64| {
        let u = x - y;
        C64::from_polar(t * b.eval(t * u) * b.eval(x + y), -nf * u)
    };
    Ok(TensorVector::plane(f, r / t, r)?
        .with_frequency(nf)
        .with_record(Construction { family: "w_NT".into(), params: vec![("N".into(), nf), ("T".into(), t)] }))
}

/// A calibrated circle test function `u_{N,T}` with its calibration scalar.
#[derive(Debug, Clone)]
pub struct CircleTestFunction {
    pub function: CircleFunction,
    /// Global amplitude `κ` fixed by the bump (independent of `N`, `T`).
    pub calibration: f64,
    pub n: i64,
    pub t: f64,
}

/// The calibration `κ` making `û_{N,T}(k) ≥ 1` on the window: with
/// `u = κT² e^{−iNc}(ψ_T * ψ′_T)(c) = κT e^{−iNc} Ψ(Tc)` (`Ψ` the circle bump)
/// one has `û(k) = (κ/2π)Ψ̂((k+N)/T)`, so `κ = 2π / min_{|ξ|≤1} Ψ̂(ξ)`
/// (times `1 + 10⁻⁶`, so the window bound survives quadrature noise).
pub fn u_nt_calibration(psi: &Bump) -> f64 {
    2.0 * PI / psi.verified_min() * (1.0 + 1e-6)
}

/// `u_{N,T}(c) = κT² e^{−iNc} (ψ_T * ψ′_T)(c)` with `ψ_T(c) = ψ₀(Tc)` for a base
/// bump `ψ₀` supported within `0.2` of `0`; `psi` is the autocorrelation
/// `ψ₀ * ψ₀′` (a [`BumpSpec::circle`] bump), so
/// `T²(ψ_T * ψ′_T)(c) = T·psi(Tc)`.
pub fn u_nt(n: i64, t: f64, psi: &Bump) -> Result<CircleTestFunction> {
    if !(t >= 1.0 && (n as f64) >= t) {
        return Err(Error::Usage(format!("need N ≥ T ≥ 1, got N = {n}, T = {t}")));
    }
    let r = psi.spec().radius;
    if r > 0.4 + 1e-12 {
        return Err(Error::Domain(format!("base bump must be supported within 0.2 of 0 (autocorrelation radius {r} > 0.4)")));
    }
    let half = r / t;
    if half >= std::f64::consts::FRAC_PI_4 - 0.05 {
        return Err(Error::Domain("support of u_NT reaches a degenerate point".into()));
    }
    let kappa = u_nt_calibration(psi);
    let b = psi.clone();
    let nf = n as f64;
    let f = move |c: f64| C64::from_polar(kappa * t * b.eval(t * c), -nf * c);
    let function = CircleFunction::new(f, -half, half)?.with_frequency(nf);
    Ok(CircleTestFunction { function, calibration: kappa, n, t })
}

/// Smooth step: 0 for `x ≤ 0`, 1 for `x ≥ 1`.
fn smooth_step(x: f64) -> f64 {
    let h = |y: f64| if y <= 0.0 { 0.0 } else { (-1.0 / y).exp() };
    let (a, b) = (h(x), h(1.0 - x));
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// `α_Z(t)`: equal to 1 on `[1 − 1/Z, 1 + 1/Z]`, supported in
/// `(1 − 2/Z, 1 + 2/Z)`, smooth.
pub fn alpha_z(z: f64, t: f64) -> f64 {
    let d = (t - 1.0).abs() * z;
    smooth_step(2.0 - d)
}

/// `α_{Z,R}(t) = α_Z(t/R)`.
pub fn alpha_zr(z: f64, r: f64) -> Result<LineFunction> {
    if !(z >= 1.0 && r >= 1.0) {
        return Err(Error::Usage(format!("need Z, R ≥ 1, got Z = {z}, R = {r}")));
    }
    LineFunction::new(move |t| C64::new(alpha_z(z, t / r), 0.0), r * (1.0 - 2.0 / z), r * (1.0 + 2.0 / z))
}
