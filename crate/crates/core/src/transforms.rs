//! The ♭ transform (Mellin-type, unipotent side), the ♯ transform (spherical
//! side), circle and plane Fourier coefficients, traces, and the one-variable
//! model transform `ψ^♭(ξ, s)`.
//!
//! Conventions: Fourier transforms use `e^{−iξx}` on the line and `e^{−inθ}` on
//! the circle; circle functions are functions of an angle `c ∈ ℝ/2πℤ` with
//! `û(n) = (1/2π)∫_0^{2π} u(c) e^{−inc} dc`.

use crate::error::{Error, Result};
use crate::numerics::{abs_pow, integrate, periodic_trapezoid, periodic_trapezoid_resolving, Node, QuadratureSpec, SingularPoint};
use crate::trilinear::KernelEvaluator;
use num_complex::Complex64 as C64;
use std::cell::RefCell;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::Arc;

type Fn1 = Arc<dyn Fn(f64) -> C64 + Send + Sync>;
type Fn2 = Arc<dyn Fn(f64, f64) -> C64 + Send + Sync>;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// A compactly supported function on the line with an oscillation hint (the
/// largest angular frequency of its modulation, used to seed quadrature).
#[derive(Clone)]
pub struct LineFunction {
    f: Fn1,
    support: (f64, f64),
    frequency: f64,
}

impl std::fmt::Debug for LineFunction {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fm.debug_struct("LineFunction").field("support", &self.support).field("frequency", &self.frequency).finish()
    }
}

impl LineFunction {
    /// `f` restricted to `[lo, hi]` (values outside are taken to be zero).
    pub fn new<F: Fn(f64) -> C64 + Send + Sync + 'static>(f: F, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Usage(format!("invalid support [{lo}, {hi}]")));
        }
        Ok(LineFunction { f: Arc::new(f), support: (lo, hi), frequency: 0.0 })
    }

    /// Attach an oscillation hint.
    pub fn with_frequency(mut self, omega: f64) -> Self {
        self.frequency = omega.abs();
        self
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn eval(&self, t: f64) -> C64 {
        if t < self.support.0 || t > self.support.1 {
            zero()
        } else {
            (self.f)(t)
        }
    }
}

/// A function on the circle `ℝ/2πℤ`, supported in an arc `[lo, hi]`
/// (`hi − lo ≤ 2π`), with an oscillation hint.
#[derive(Clone)]
pub struct CircleFunction {
    f: Fn1,
    support: (f64, f64),
    frequency: f64,
}

impl std::fmt::Debug for CircleFunction {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fm.debug_struct("CircleFunction").field("support", &self.support).field("frequency", &self.frequency).finish()
    }
}

impl CircleFunction {
    /// `f` on the arc `[lo, hi]`, zero elsewhere on the circle.
    pub fn new<F: Fn(f64) -> C64 + Send + Sync + 'static>(f: F, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || hi - lo > 2.0 * PI + 1e-12 {
            return Err(Error::Usage(format!("invalid arc [{lo}, {hi}]")));
        }
        Ok(CircleFunction { f: Arc::new(f), support: (lo, hi), frequency: 0.0 })
    }

    /// A function on the whole circle (`f` must be 2π-periodic).
    pub fn periodic<F: Fn(f64) -> C64 + Send + Sync + 'static>(f: F) -> Self {
        CircleFunction { f: Arc::new(f), support: (0.0, 2.0 * PI), frequency: 0.0 }
    }

    pub fn with_frequency(mut self, omega: f64) -> Self {
        self.frequency = omega.abs();
        self
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    fn is_full(&self) -> bool {
        self.support.1 - self.support.0 >= 2.0 * PI - 1e-12
    }

    pub fn eval(&self, c: f64) -> C64 {
        let (lo, hi) = self.support;
        let t = lo + (c - lo).rem_euclid(2.0 * PI);
        if t > hi {
            zero()
        } else {
            (self.f)(t)
        }
    }
}

/// Where a two-variable tensor lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorDomain {
    /// Functions on `ℝ²` (tensors of line-model vectors).
    Plane,
    /// Functions on the torus, even and π-periodic in each variable (tensors
    /// of circle-model vectors).
    Torus,
}

/// How a tensor was built, for reports.
#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub family: String,
    pub params: Vec<(String, f64)>,
}

/// A two-variable test vector `w(x, y)`.
///
/// Plane tensors carry a support box in rotated coordinates `u = x − y`,
/// `v = x + y`: `w = 0` unless `|u| ≤ diff_radius` and `|v| ≤ sum_radius`,
/// plus the angular frequency of their modulation in `u`.
#[derive(Clone)]
pub struct TensorVector {
    domain: TensorDomain,
    f: Fn2,
    diff_radius: f64,
    sum_radius: f64,
    frequency: f64,
    record: Option<Construction>,
}

impl std::fmt::Debug for TensorVector {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fm.debug_struct("TensorVector")
            .field("domain", &self.domain)
            .field("diff_radius", &self.diff_radius)
            .field("sum_radius", &self.sum_radius)
            .field("frequency", &self.frequency)
            .field("record", &self.record)
            .finish()
    }
}

impl TensorVector {
    /// Plane tensor supported in `|x−y| ≤ diff_radius`, `|x+y| ≤ sum_radius`.
    pub fn plane<F>(f: F, diff_radius: f64, sum_radius: f64) -> Result<Self>
    where
        F: Fn(f64, f64) -> C64 + Send + Sync + 'static,
    {
        if !(diff_radius > 0.0 && sum_radius > 0.0 && diff_radius.is_finite() && sum_radius.is_finite()) {
            return Err(Error::Usage("plane tensors need a finite support box".into()));
        }
        Ok(TensorVector {
            domain: TensorDomain::Plane,
            f: Arc::new(f),
            diff_radius,
            sum_radius,
            frequency: 0.0,
            record: None,
        })
    }

    /// Torus tensor; `f` must be even and π-periodic in each variable.
    pub fn torus<F>(f: F) -> Self
    where
        F: Fn(f64, f64) -> C64 + Send + Sync + 'static,
    {
        TensorVector {
            domain: TensorDomain::Torus,
            f: Arc::new(f),
            diff_radius: PI,
            sum_radius: 2.0 * PI,
            frequency: 0.0,
            record: None,
        }
    }

    pub fn with_frequency(mut self, omega: f64) -> Self {
        self.frequency = omega.abs();
        self
    }

    pub fn with_record(mut self, record: Construction) -> Self {
        self.record = Some(record);
        self
    }

    pub fn domain(&self) -> TensorDomain {
        self.domain
    }

    /// `(diff_radius, sum_radius)` of the rotated support box.
    pub fn support_box(&self) -> (f64, f64) {
        (self.diff_radius, self.sum_radius)
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn record(&self) -> Option<&Construction> {
        self.record.as_ref()
    }

    /// `w(x, y)`; plane tensors vanish outside their support box.
    pub fn eval(&self, x: f64, y: f64) -> C64 {
        if self.domain == TensorDomain::Plane && ((x - y).abs() > self.diff_radius || (x + y).abs() > self.sum_radius) {
            return zero();
        }
        (self.f)(x, y)
    }

    /// `w` in rotated coordinates: `w((v+u)/2, (v−u)/2)`.
    pub fn eval_rotated(&self, u: f64, v: f64) -> C64 {
        self.eval((v + u) / 2.0, (v - u) / 2.0)
    }

    fn require_plane(&self, op: &str) -> Result<()> {
        if self.domain != TensorDomain::Plane {
            return Err(Error::Usage(format!("{op} needs a plane tensor")));
        }
        Ok(())
    }
}

/// Collects the first error raised inside a quadrature integrand.
struct ErrorSlot(RefCell<Option<Error>>);

impl ErrorSlot {
    fn new() -> Self {
        ErrorSlot(RefCell::new(None))
    }

    fn take<T>(&self, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e);
                None
            }
        }
    }

    fn check(self) -> Result<()> {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

fn inner_tol(rel_tol: f64) -> f64 {
    (rel_tol * 0.01).max(1e-13)
}

/// Absolute floor for the inner integrals of a plane tensor: inner integrals
/// near the edge of the support are vanishingly small and can never meet a
/// purely relative tolerance. Scaled by the sup of `|w|` on a sample grid
/// times the inner length.
fn inner_abs_tol(w: &TensorVector, rel_tol: f64) -> f64 {
    let (ur, vr) = w.support_box();
    let mut m: f64 = 0.0;
    for i in 0..=16 {
        for j in 0..=16 {
            let u = ur * (i as f64 / 8.0 - 1.0);
            let v = vr * (j as f64 / 8.0 - 1.0);
            m = m.max(w.eval_rotated(u, v).norm());
        }
    }
    inner_tol(rel_tol) * 1e-6 * m * ur
}

/// `w^♭(s) = ∫∫ w(x,y) |x−y|^{(−s−1)/2} dx dy`.
///
/// Computed in rotated coordinates `u = x−y`, `v = x+y` (Jacobian 1/2) as an
/// outer integral over `v` of inner singular integrals over `u`, with the
/// diagonal `u = 0` annotated by the exponent `(−s−1)/2`.
pub fn flat_transform(w: &TensorVector, s: C64, rel_tol: f64) -> Result<C64> {
    w.require_plane("flat_transform")?;
    let (ur, vr) = w.support_box();
    let expo = (-s - 1.0) / 2.0;
    let inner_spec = QuadratureSpec::new(inner_tol(rel_tol), inner_abs_tol(w, rel_tol))
        .with_singular([SingularPoint::new(0.0, expo)])
        .with_frequency(w.frequency() + s.im.abs())
        .with_max_subdivisions(20_000);
    let slot = ErrorSlot::new();
    let outer = |n: Node| -> C64 {
        let v = n.t;
        let g = |m: Node| w.eval_rotated(m.t, v) * abs_pow(m.offset_from(0, 0.0), expo);
        slot.take(integrate(&g, -ur, ur, &inner_spec).map(|r| r.value)).unwrap_or_else(zero)
    };
    let outer_spec = QuadratureSpec::new(rel_tol, 0.0).with_max_subdivisions(2_000);
    let r = integrate(&outer, -vr, vr, &outer_spec);
    slot.check()?;
    Ok(r?.value / 2.0)
}

/// `α(t) = ∫_{x−y=t} w(x,y) dl` with the line element `dl = dv/2`
/// (`v = x+y`), i.e. `α(t) = (1/2)∫ w((v+t)/2, (v−t)/2) dv`.
///
/// With this `dl`, `∫ α(t)|t|^{(−s−1)/2} dt = w^♭(s)` is exact (it is the
/// rotated-coordinate form of the ♭ transform with the order of integration
/// exchanged), and `α(0) = ∫ w(x,x) dx`.
pub fn alpha_of_w(w: &TensorVector) -> Result<LineFunction> {
    w.require_plane("alpha_of_w")?;
    let (ur, vr) = w.support_box();
    let ww = w.clone();
    let f = move |t: f64| {
        let spec = QuadratureSpec::new(1e-13, 0.0).with_max_subdivisions(2_000);
        let g = |n: Node| ww.eval_rotated(t, n.t);
        integrate(&g, -vr, vr, &spec).map(|r| r.value / 2.0).unwrap_or_else(|e| match e {
            Error::Accuracy { estimate_re, estimate_im, .. } => C64::new(estimate_re, estimate_im) / 2.0,
            _ => C64::new(f64::NAN, f64::NAN),
        })
    };
    Ok(LineFunction::new(f, -ur, ur)?.with_frequency(w.frequency()))
}

/// `M(α)(s) = ∫ α(t) |t|^{(−s−1)/2} dt`, the Mellin transform matched to the
/// ♭ transform.
pub fn mellin(alpha: &LineFunction, s: C64, rel_tol: f64) -> Result<C64> {
    let (lo, hi) = alpha.support();
    let expo = (-s - 1.0) / 2.0;
    let mut spec = QuadratureSpec::new(rel_tol, 0.0)
        .with_frequency(alpha.frequency() + s.im.abs())
        .with_max_subdivisions(20_000);
    if lo <= 0.0 && hi >= 0.0 {
        spec = spec.with_singular([SingularPoint::new(0.0, expo)]);
    }
    let f = |n: Node| {
        let t = if lo <= 0.0 && hi >= 0.0 { n.offset_from(0, 0.0) } else { n.t };
        alpha.eval(n.t) * abs_pow(t, expo)
    };
    Ok(integrate(&f, lo, hi, &spec)?.value)
}

/// `Tr(w) = ∫ w(x,x) dx` for plane tensors and `(1/π)∫_0^π w(θ,θ) dθ` for
/// torus tensors.
pub fn trace(w: &TensorVector, rel_tol: f64) -> Result<C64> {
    match w.domain() {
        TensorDomain::Plane => {
            let h = w.support_box().1 / 2.0;
            let spec = QuadratureSpec::new(rel_tol, 0.0).with_max_subdivisions(2_000);
            Ok(integrate(&|n: Node| w.eval(n.t, n.t), -h, h, &spec)?.value)
        }
        TensorDomain::Torus => Ok(periodic_trapezoid(&|t: f64| w.eval(t, t), 0.0, PI, rel_tol, 1e-300)?.value / PI),
    }
}

/// The weight `ŵ(k, −k)` attached to frequency `k`.
///
/// Plane tensors: the 2D Fourier transform on the antidiagonal,
/// `ŵ(ξ,−ξ) = ∫∫ w(x,y) e^{−iξ(x−y)} dx dy = (1/2)∫∫ w e^{−iξu} du dv`.
/// Torus tensors: the Fourier coefficient
/// `(1/π²)∫_0^π∫_0^π w(θ,θ′) e^{−ik(θ−θ′)} dθ dθ′` of `e_k ⊗ ē_k`.
/// The two are different transforms (additive characters versus K-types);
/// no constant relates them in general.
pub fn weight_hat(w: &TensorVector, k: f64, rel_tol: f64) -> Result<C64> {
    match w.domain() {
        TensorDomain::Plane => {
            let (ur, vr) = w.support_box();
            let inner_spec = QuadratureSpec::new(inner_tol(rel_tol), inner_abs_tol(w, rel_tol))
                .with_frequency(w.frequency() + k.abs())
                .with_max_subdivisions(20_000);
            let slot = ErrorSlot::new();
            let outer = |n: Node| -> C64 {
                let v = n.t;
                let g = |m: Node| w.eval_rotated(m.t, v) * C64::from_polar(1.0, -k * m.t);
                slot.take(integrate(&g, -ur, ur, &inner_spec).map(|r| r.value)).unwrap_or_else(zero)
            };
            let outer_spec = QuadratureSpec::new(rel_tol, 0.0).with_max_subdivisions(2_000);
            let r = integrate(&outer, -vr, vr, &outer_spec);
            slot.check()?;
            Ok(r?.value / 2.0)
        }
        TensorDomain::Torus => {
            // Outer absolute floor: the inner integrals of an orthogonal
            // K-type pair are pure roundoff and never agree relatively.
            let mut m: f64 = 0.0;
            for i in 0..16 {
                for j in 0..16 {
                    m = m.max(w.eval(PI * i as f64 / 16.0, PI * j as f64 / 16.0).norm());
                }
            }
            let cycles = (k.abs() + w.frequency()) / 2.0;
            let slot = ErrorSlot::new();
            let outer = |t1: f64| -> C64 {
                let g = |t: f64| w.eval(t, t1) * C64::from_polar(1.0, -k * (t - t1));
                slot.take(periodic_trapezoid_resolving(&g, 0.0, PI, inner_tol(rel_tol), 1e-300, cycles).map(|r| r.value))
                    .unwrap_or_else(zero)
            };
            let r = periodic_trapezoid_resolving(&outer, 0.0, PI, rel_tol, 1e-14 * m, cycles);
            slot.check()?;
            Ok(r?.value / (PI * PI))
        }
    }
}

/// `û(n) = (1/2π)∫_0^{2π} u(c) e^{−inc} dc`.
pub fn circle_fourier(u: &CircleFunction, n: i64, rel_tol: f64) -> Result<C64> {
    let nf = n as f64;
    let g = |c: f64| u.eval(c) * C64::from_polar(1.0, -nf * c);
    if u.is_full() {
        let cycles = nf.abs() + u.frequency();
        return Ok(periodic_trapezoid_resolving(&g, 0.0, 2.0 * PI, rel_tol, 1e-300, cycles)?.value / (2.0 * PI));
    }
    let (lo, hi) = u.support();
    let spec = QuadratureSpec::new(rel_tol, 0.0)
        .with_frequency(u.frequency() + nf.abs())
        .with_max_subdivisions(20_000);
    Ok(integrate(&|m: Node| g(m.t), lo, hi, &spec)?.value / (2.0 * PI))
}

/// How the ♯ transform evaluates its kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SharpMode {
    /// Factored `k_λ` by singular quadrature at every node.
    Direct,
    /// The two-term asymptotic kernel when `|λ| ≥ threshold`, direct below.
    Asymptotic { threshold: f64 },
}

impl SharpMode {
    /// Crossover validated by the claim-verification suite.
    pub const DEFAULT_CROSSOVER: f64 = 80.0;
}

/// Options of [`sharp_transform`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpOptions {
    pub mode: SharpMode,
    /// The caller accepts a support that reaches the degenerate points
    /// `±π/4, ±3π/4` (or, in asymptotic mode, the exceptional set
    /// `c ∈ (π/2)ℤ` where the asymptotic kernel is not uniform).
    pub acknowledge_degenerate: bool,
    pub rel_tol: f64,
}

impl Default for SharpOptions {
    fn default() -> Self {
        SharpOptions { mode: SharpMode::Direct, acknowledge_degenerate: false, rel_tol: 1e-6 }
    }
}

/// Distance the support must keep from the degenerate points unless acknowledged.
const DEGENERATE_MARGIN: f64 = 0.05;

/// Points `c₀ + k·step` lying in `[lo − margin, hi + margin]`.
fn lattice_points(lo: f64, hi: f64, c0: f64, step: f64, margin: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = ((lo - margin - c0) / step).floor() as i64;
    loop {
        let p = c0 + k as f64 * step;
        if p > hi + margin {
            break;
        }
        if p >= lo - margin {
            out.push(p);
        }
        k += 1;
    }
    out
}

/// `u^♯(λ) = (1/2π)∫_0^{2π} u(c) k_λ(c) dc` for the kernel `k_λ` of
/// `V_τ ⊗ V_{−τ} ⊗ V_{−λ}`.
///
/// Direct mode integrates the factored kernel; its singularities at the
/// exceptional points `c ∈ (π/2)ℤ` (`k_λ ~ |c−c₀|^{−1/2∓λ/2}`) are annotated,
/// so supports containing them are handled exactly. Asymptotic mode replaces
/// `k_λ` by its two-term main part for `|λ|` at or above the threshold.
pub fn sharp_transform(u: &CircleFunction, tau: C64, lambda: C64, opts: SharpOptions) -> Result<C64> {
    let (lo, hi) = u.support();
    let asymptotic = matches!(opts.mode, SharpMode::Asymptotic { threshold } if lambda.norm() >= threshold);
    if !opts.acknowledge_degenerate {
        if !lattice_points(lo, hi, FRAC_PI_4, FRAC_PI_2, DEGENERATE_MARGIN).is_empty() {
            return Err(Error::Usage(
                "support reaches a degenerate point ±π/4 or ±3π/4; acknowledge to proceed".into(),
            ));
        }
        if asymptotic && !lattice_points(lo, hi, 0.0, FRAC_PI_2, DEGENERATE_MARGIN).is_empty() {
            return Err(Error::Usage(
                "asymptotic kernel is not uniform near c ∈ (π/2)ℤ; acknowledge to proceed".into(),
            ));
        }
    }
    let exceptional = lattice_points(lo, hi, 0.0, FRAC_PI_2, 0.0);
    let expo = -0.5 - lambda / 2.0;
    let mut spec = QuadratureSpec::new(opts.rel_tol, 0.0)
        .with_frequency(u.frequency() + lambda.im.abs() + 2.0 * tau.im.abs())
        .with_max_subdivisions(50_000);
    spec = spec.with_singular(exceptional.iter().map(|&p| SingularPoint::new(p, expo)));
    let slot = ErrorSlot::new();
    let value = if asymptotic {
        let f = |n: Node| -> C64 {
            let (c0, off) = match n.anchor() {
                Some((i, off)) => (exceptional[i], off),
                None => (0.0, n.t),
            };
            if off == 0.0 {
                return zero();
            }
            let k = slot.take(crate::asymptotics::k_lambda_asymptotic(tau, lambda, c0 + off));
            k.map(|k| u.eval(n.t) * k).unwrap_or_else(zero)
        };
        integrate(&f, lo, hi, &spec)
    } else {
        let kernel = KernelEvaluator::new(tau, lambda, lo, hi, inner_tol(opts.rel_tol))?;
        let f = |n: Node| -> C64 {
            let uv = u.eval(n.t);
            if uv == zero() {
                return zero();
            }
            let k = match n.anchor() {
                Some((i, off)) if off != 0.0 => kernel.eval_offset(exceptional[i], off),
                Some(_) => return zero(),
                None => kernel.eval(n.t),
            };
            slot.take(k).map(|k| uv * k).unwrap_or_else(zero)
        };
        integrate(&f, lo, hi, &spec)
    };
    slot.check()?;
    Ok(value?.value / (2.0 * PI))
}

/// `ψ^♭(ξ, s) = ∫ ψ(t) e^{−iξt} |t|^{−1/2−s} dt` for a bump supported in
/// `[−1, 1]`.
pub fn psi_flat(psi: &LineFunction, xi: f64, s: C64, rel_tol: f64) -> Result<C64> {
    let (lo, hi) = psi.support();
    if lo < -1.0 - 1e-12 || hi > 1.0 + 1e-12 {
        return Err(Error::Usage(format!("bump support [{lo}, {hi}] exceeds [−1, 1]")));
    }
    let expo = -0.5 - s;
    let mut spec = QuadratureSpec::new(rel_tol, 0.0)
        .with_frequency(psi.frequency() + xi.abs() + s.im.abs())
        .with_max_subdivisions(50_000);
    let straddles = lo <= 0.0 && hi >= 0.0;
    if straddles {
        spec = spec.with_singular([SingularPoint::new(0.0, expo)]);
    }
    let f = |n: Node| {
        let t = if straddles { n.offset_from(0, 0.0) } else { n.t };
        psi.eval(n.t) * C64::from_polar(1.0, -xi * n.t) * abs_pow(t, expo)
    };
    Ok(integrate(&f, lo, hi, &spec)?.value)
}
