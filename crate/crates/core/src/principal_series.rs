//! Class-one principal series of PGL(2,ℝ) in the line, circle and plane
//! models; the group action, invariant inner products, K-types and the model
//! functionals (Whittaker, evaluation at 0, K-type coefficients), together
//! with the normalized Whittaker function and the spherical functions
//! `P_{τ,n}`.
//!
//! Every vector is stored as an even function `F` on `ℝ²∖0`, homogeneous of
//! degree `τ−1`. The line model is `x ↦ F(x, 1)` and the circle model is
//! `θ ↦ F(cos θ, sin θ)`, so conversions between models are exact by
//! construction.

use crate::error::{Error, Result};
use crate::numerics::{
    abs_pow, bessel_k_imag, gamma_complex, integrate, periodic_trapezoid, periodic_trapezoid_resolving, wynn_epsilon, Node, QuadratureSpec,
};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Tolerance used to decide whether `Re τ` vanishes.
const PRINCIPAL_EPS: f64 = 1e-12;

/// The spectral parameter `τ`; vectors are homogeneous of degree `τ−1` and the
/// Laplace eigenvalue is `μ = (1−τ²)/4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralParam {
    tau: C64,
    mu: C64,
}

impl SpectralParam {
    pub fn new(tau: C64) -> Self {
        SpectralParam { tau, mu: (C64::new(1.0, 0.0) - tau * tau) / 4.0 }
    }

    /// `τ = i·t`, a principal-series parameter.
    pub fn principal(t: f64) -> Self {
        Self::new(C64::new(0.0, t))
    }

    pub fn tau(&self) -> C64 {
        self.tau
    }

    /// `μ = (1−τ²)/4`.
    pub fn mu(&self) -> C64 {
        self.mu
    }

    /// Homogeneity degree `τ − 1`.
    pub fn degree(&self) -> C64 {
        self.tau - 1.0
    }

    pub fn is_principal(&self) -> bool {
        self.tau.re.abs() <= PRINCIPAL_EPS * self.tau.norm().max(1.0)
    }

    pub fn require_principal(&self) -> Result<()> {
        if self.is_principal() {
            Ok(())
        } else {
            Err(Error::Domain(format!("tau = {} is not purely imaginary", self.tau)))
        }
    }

    fn same_as(&self, other: &SpectralParam) -> bool {
        (self.tau - other.tau).norm() <= 1e-14 * self.tau.norm().max(1.0)
    }
}

/// An element of PGL(2,ℝ), stored as the representative `[[a, b], [c, d]]`
/// with `|det| = 1` and the first nonzero entry positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl GroupElement {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det != 0.0 && det.is_finite()) {
            return Err(Error::Domain(format!("singular matrix [[{a}, {b}], [{c}, {d}]]")));
        }
        let s = det.abs().sqrt().recip();
        let mut m = [a * s, b * s, c * s, d * s];
        if m.iter().find(|v| **v != 0.0).is_some_and(|v| *v < 0.0) {
            for v in &mut m {
                *v = -*v;
            }
        }
        Ok(GroupElement { a: m[0], b: m[1], c: m[2], d: m[3] })
    }

    pub fn identity() -> Self {
        GroupElement { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// Upper unipotent `[[1, n], [0, 1]]`.
    pub fn unipotent(n: f64) -> Self {
        GroupElement { a: 1.0, b: n, c: 0.0, d: 1.0 }
    }

    /// `diag(a, a⁻¹)`.
    pub fn diagonal(a: f64) -> Result<Self> {
        if !(a != 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!("diag(a, 1/a) needs finite a != 0, got {a}")));
        }
        Self::new(a, 0.0, 0.0, 1.0 / a)
    }

    /// Rotation `[[cos φ, −sin φ], [sin φ, cos φ]]`.
    pub fn rotation(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self::new(c, -s, s, c).expect("rotations are invertible")
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Determinant of the stored representative (±1).
    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a).expect("stored elements are invertible")
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &GroupElement) -> Self {
        Self::new(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
        .expect("products of invertible elements are invertible")
    }

    /// Linear action on a column vector.
    pub fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        (self.a * x + self.b * y, self.c * x + self.d * y)
    }

    /// Möbius action `u ↦ (au + b)/(cu + d)` on the line model coordinate.
    pub fn mobius(&self, u: f64) -> f64 {
        (self.a * u + self.b) / (self.c * u + self.d)
    }
}

/// Which restriction of the plane function a vector is presented in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Line,
    Circle,
    Plane,
}

type PlaneFn = dyn Fn(f64, f64) -> C64 + Send + Sync;

/// A vector of `V_τ`: an evaluator for the plane function plus metadata.
#[derive(Clone)]
pub struct ModelVector {
    model: Model,
    param: SpectralParam,
    plane: Arc<PlaneFn>,
    /// Line model: the support of `x ↦ F(x,1)` when it is a bounded interval.
    support: Option<(f64, f64)>,
    /// Circle model: K-type coefficients `{(n, c_n)}` of a finite expansion.
    ktypes: Option<Vec<(i64, C64)>>,
}

impl fmt::Debug for ModelVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModelVector")
            .field("model", &self.model)
            .field("tau", &self.param.tau)
            .field("support", &self.support)
            .field("ktypes", &self.ktypes)
            .finish()
    }
}

impl ModelVector {
    /// A line-model vector from `f` on ℝ. `support`, when given, is a bounded
    /// interval outside which `f` vanishes; otherwise `f(x) ≈ at_infinity·|x|^{τ−1}`
    /// for large `|x|` defines the value of the plane function on `y = 0`.
    pub fn from_line<G>(param: SpectralParam, f: G, support: Option<(f64, f64)>, at_infinity: C64) -> Result<Self>
    where
        G: Fn(f64) -> C64 + Send + Sync + 'static,
    {
        if let Some((lo, hi)) = support {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Usage(format!("invalid support [{lo}, {hi}]")));
            }
        }
        let deg = param.degree();
        let inf = if support.is_some() { C64::new(0.0, 0.0) } else { at_infinity };
        let plane = move |x: f64, y: f64| -> C64 {
            if y != 0.0 {
                abs_pow(y, deg) * f(x / y)
            } else if x != 0.0 {
                abs_pow(x, deg) * inf
            } else {
                C64::new(0.0, 0.0)
            }
        };
        Ok(ModelVector { model: Model::Line, param, plane: Arc::new(plane), support, ktypes: None })
    }

    /// A line-model vector supported in `[lo, hi]`.
    pub fn line_compact<G>(param: SpectralParam, f: G, lo: f64, hi: f64) -> Result<Self>
    where
        G: Fn(f64) -> C64 + Send + Sync + 'static,
    {
        Self::from_line(param, f, Some((lo, hi)), C64::new(0.0, 0.0))
    }

    /// A circle-model vector from a π-periodic function of the angle. Evenness
    /// (`g(θ+π) = g(θ)`) is verified on sample points.
    pub fn from_circle<G>(param: SpectralParam, g: G) -> Result<Self>
    where
        G: Fn(f64) -> C64 + Send + Sync + 'static,
    {
        for j in 0..7 {
            let th = 0.1 + 0.83 * j as f64;
            let (u, v) = (g(th), g(th + PI));
            if (u - v).norm() > 1e-10 * u.norm().max(v.norm()).max(1.0) {
                return Err(Error::Usage(format!("circle vector is not even: g({th}) != g({th}+pi)")));
            }
        }
        let deg = param.degree();
        let plane = move |x: f64, y: f64| -> C64 {
            let r = x.hypot(y);
            if r == 0.0 {
                return C64::new(0.0, 0.0);
            }
            abs_pow(r, deg) * g(y.atan2(x))
        };
        Ok(ModelVector { model: Model::Circle, param, plane: Arc::new(plane), support: None, ktypes: None })
    }

    /// The finite K-type expansion `θ ↦ Σ c_n e^{inθ}` (even `n` only).
    pub fn from_ktypes(param: SpectralParam, coeffs: Vec<(i64, C64)>) -> Result<Self> {
        if let Some((n, _)) = coeffs.iter().find(|(n, _)| n % 2 != 0) {
            return Err(Error::Domain(format!("odd K-type {n} does not occur in class-one representations")));
        }
        let cs = coeffs.clone();
        let mut v = Self::from_circle(param, move |th| cs.iter().map(|(n, c)| c * C64::from_polar(1.0, *n as f64 * th)).sum())?;
        v.ktypes = Some(coeffs);
        Ok(v)
    }

    /// Wrap an explicit homogeneous plane function.
    pub fn from_plane<G>(param: SpectralParam, f: G, model: Model) -> Self
    where
        G: Fn(f64, f64) -> C64 + Send + Sync + 'static,
    {
        ModelVector { model, param, plane: Arc::new(f), support: None, ktypes: None }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn param(&self) -> SpectralParam {
        self.param
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        self.support
    }

    pub fn ktypes(&self) -> Option<&[(i64, C64)]> {
        self.ktypes.as_deref()
    }

    /// Plane function value `F(x, y)`.
    pub fn eval_plane(&self, x: f64, y: f64) -> C64 {
        (self.plane)(x, y)
    }

    /// Value in the vector's own model: `F(p, 1)` for the line model and
    /// `F(cos p, sin p)` for the circle and plane models.
    pub fn eval(&self, p: f64) -> C64 {
        match self.model {
            Model::Line => self.eval_plane(p, 1.0),
            Model::Circle | Model::Plane => {
                let (s, c) = p.sin_cos();
                self.eval_plane(c, s)
            }
        }
    }

    /// Line-model value `F(x, 1)` regardless of the model tag.
    pub fn eval_line(&self, x: f64) -> C64 {
        self.eval_plane(x, 1.0)
    }

    /// Circle-model value `F(cos θ, sin θ)` regardless of the model tag.
    pub fn eval_circle(&self, theta: f64) -> C64 {
        let (s, c) = theta.sin_cos();
        self.eval_plane(c, s)
    }

    /// Leading coefficient of `F(x,1) ≈ F(1,0)·|x|^{τ−1}` as `|x| → ∞`.
    pub fn at_infinity(&self) -> C64 {
        self.eval_plane(1.0, 0.0)
    }

    /// The same plane function presented in another model.
    pub fn to_model(&self, model: Model) -> ModelVector {
        let mut v = self.clone();
        v.model = model;
        if model != Model::Line {
            v.support = None;
        }
        if model == Model::Line {
            v.ktypes = None;
        }
        v
    }
}

/// `π_τ(g)f(x,y) = f(g⁻¹(x,y))·|det g|^{(τ−1)/2}`; the stored representative has
/// `|det g| = 1`. In the circle model this is `f(θ_g)·r_g(θ)^{τ−1}` with
/// `g⁻¹(cos θ, sin θ) = r_g(θ)(cos θ_g, sin θ_g)`. Rotations act by
/// translation of the angle: `π_τ(k_φ)f(θ) = f(θ − φ)`.
pub fn act(g: &GroupElement, param: SpectralParam, f: &ModelVector) -> Result<ModelVector> {
    if !param.same_as(&f.param) {
        return Err(Error::Usage(format!("vector lives in V_tau with tau = {}, not {}", f.param.tau, param.tau)));
    }
    let ginv = g.inverse();
    let inner = Arc::clone(&f.plane);
    let plane = move |x: f64, y: f64| -> C64 {
        let (u, v) = ginv.apply(x, y);
        inner(u, v)
    };
    // Support of x ↦ f((a'x+b')/(c'x+d')): the Möbius image of the old support
    // under g, provided the pole of g does not fall inside it.
    let support = f.support.and_then(|(lo, hi)| {
        let [_, _, c, d] = g.entries();
        let den_lo = c * lo + d;
        let den_hi = c * hi + d;
        if den_lo == 0.0 || den_hi == 0.0 || den_lo.signum() != den_hi.signum() {
            None
        } else {
            let (p, q) = (g.mobius(lo), g.mobius(hi));
            Some((p.min(q), p.max(q)))
        }
    });
    let ktypes = match (&f.ktypes, rotation_angle(g)) {
        (Some(cs), Some(phi)) => Some(cs.iter().map(|(n, c)| (*n, c * C64::from_polar(1.0, -(*n as f64) * phi))).collect()),
        _ => None,
    };
    Ok(ModelVector { model: f.model, param, plane: Arc::new(plane), support, ktypes })
}

/// The angle `φ` when `g` is the rotation `k_φ` (up to the PGL sign).
fn rotation_angle(g: &GroupElement) -> Option<f64> {
    let [a, b, c, d] = g.entries();
    let tol = 1e-14;
    if g.det() > 0.0 && (a - d).abs() <= tol && (b + c).abs() <= tol {
        Some(c.atan2(a))
    } else {
        None
    }
}

/// The invariant Hermitian pairing. Line model: `(1/π)∫_ℝ f ḡ dx`; circle
/// model: `(1/2π)∫_0^{2π} f ḡ dθ`. For principal `τ` the product `F·H̄` is
/// homogeneous of degree −2, so the line integral equals the circle integral
/// exactly (substitute `x = cot θ`); non-compact line vectors are integrated in
/// that form.
pub fn inner_product(f: &ModelVector, h: &ModelVector, param: SpectralParam) -> Result<C64> {
    param.require_principal()?;
    if f.model != h.model {
        return Err(Error::Usage(format!("inner product of {:?} and {:?} vectors", f.model, h.model)));
    }
    if !param.same_as(&f.param) || !param.same_as(&h.param) {
        return Err(Error::Usage("vectors belong to different representations".into()));
    }
    match (f.model, f.support, h.support) {
        (Model::Line, Some((a0, b0)), Some((a1, b1))) => {
            let (lo, hi) = (a0.max(a1), b0.min(b1));
            if lo >= hi {
                return Ok(C64::new(0.0, 0.0));
            }
            let spec = QuadratureSpec::new(1e-12, 1e-15);
            let g = |n: Node| f.eval_line(n.t) * h.eval_line(n.t).conj();
            Ok(integrate(&g, lo, hi, &spec)?.value / PI)
        }
        (Model::Line, _, _) => {
            let spec = QuadratureSpec::new(1e-12, 1e-15);
            let g = |n: Node| f.eval_circle(n.t) * h.eval_circle(n.t).conj();
            Ok(integrate(&g, 0.0, PI, &spec)?.value / PI)
        }
        _ => {
            let g = |t: f64| f.eval_circle(t) * h.eval_circle(t).conj();
            Ok(periodic_trapezoid(&g, 0.0, PI, 1e-13, 1e-15)?.value / PI)
        }
    }
}

/// The K-fixed vector `e_τ`. Line model: `π^{−1/2}(1+x²)^{(τ−1)/2}` (the phase
/// of the constant is fixed to be positive); circle and plane models: the
/// constant function 1 on the unit circle.
pub fn k_fixed_vector(param: SpectralParam, model: Model) -> ModelVector {
    let half_deg = param.degree() / 2.0;
    let c = match model {
        Model::Line => PI.sqrt().recip(),
        _ => 1.0,
    };
    let plane = move |x: f64, y: f64| -> C64 {
        let r2 = x * x + y * y;
        if r2 == 0.0 {
            C64::new(0.0, 0.0)
        } else {
            c * (half_deg * r2.ln()).exp()
        }
    };
    let ktypes = if model == Model::Line { None } else { Some(vec![(0, C64::new(c, 0.0))]) };
    ModelVector { model, param, plane: Arc::new(plane), support: None, ktypes }
}

/// The Whittaker functional `v̂(ξ) = ∫_ℝ v(x) e^{−iξx} dx` on a line-model
/// vector.
///
/// Compactly supported vectors are integrated directly. Otherwise the range
/// `[−X, X]` is integrated adaptively, with `X` well past the stationary point
/// of the phase, and the two tails (decaying like `|x|^{Re τ − 1}`) are summed
/// over half-periods of `e^{−iξx}` and extrapolated with Wynn's ε-algorithm.
pub fn whittaker_model(xi: f64, v: &ModelVector) -> Result<C64> {
    if v.model != Model::Line {
        return Err(Error::Usage("whittaker_model needs a line-model vector".into()));
    }
    if !xi.is_finite() {
        return Err(Error::Domain(format!("frequency {xi} is not finite")));
    }
    let f = |n: Node| v.eval_line(n.t) * C64::from_polar(1.0, -xi * n.t);
    if let Some((lo, hi)) = v.support {
        let spec = QuadratureSpec::new(1e-13, 1e-16).with_frequency(xi);
        return Ok(integrate(&f, lo, hi, &spec)?.value);
    }
    if xi == 0.0 || v.param.tau.re >= 1.0 {
        return Err(Error::accuracy(
            "Fourier integral of a non-compact line vector does not converge absolutely here",
            C64::new(f64::NAN, f64::NAN),
            f64::INFINITY,
        ));
    }
    let w = xi.abs();
    let half = PI / w;
    let x0 = (2.0 * v.param.tau.im.abs() / w).max(8.0) + 8.0 * half;
    let spec = QuadratureSpec::new(1e-13, 1e-16).with_frequency(w);
    let centre = integrate(&f, -x0, x0, &spec)?;
    let scale = centre.value.norm().max(1e-300);
    let both = |n: Node| f(n) + f(Node::plain(-n.t));
    let mut sums = Vec::new();
    let mut acc = C64::new(0.0, 0.0);
    let mut last = (C64::new(f64::NAN, 0.0), f64::INFINITY);
    for k in 0..80 {
        let a = x0 + k as f64 * half;
        acc += integrate(&both, a, a + half, &spec)?.value;
        sums.push(acc);
        if sums.len() >= 12 && sums.len() % 2 == 0 {
            let (lim, err) = wynn_epsilon(&sums);
            if err <= 1e-13 * (scale + lim.norm()) {
                return Ok(centre.value + lim);
            }
            last = (lim, err);
        }
    }
    let (lim, err) = last;
    if err <= 1e-9 * (scale + lim.norm()) {
        Ok(centre.value + lim)
    } else {
        Err(Error::accuracy("Whittaker tail extrapolation did not settle", centre.value + lim, err))
    }
}

/// The normalized Whittaker function
/// `𝒲_{τ,k}(y) = π^{1/2}/Γ((1−τ)/2) · y^{1/2} K_{−τ/2}(2π|k|y)`,
/// i.e. the Whittaker functional at frequency `2πk` applied to `diag(y^{1/2}, y^{−1/2})·e_τ`
/// up to the constant fixed by the Fourier-expansion convention.
pub fn whittaker_w(param: SpectralParam, k: i64, y: f64) -> Result<C64> {
    if k == 0 {
        return Err(Error::Domain("Whittaker function needs k != 0".into()));
    }
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain(format!("Whittaker function needs y > 0, got {y}")));
    }
    param.require_principal()?;
    let pref = PI.sqrt() / gamma_complex((C64::new(1.0, 0.0) - param.tau) / 2.0)?;
    let kb = bessel_k_imag(param.tau.im / 2.0, 2.0 * PI * (k.unsigned_abs() as f64) * y)?;
    Ok(pref * y.sqrt() * kb)
}

/// Phase `ω_n` of the leading Taylor coefficient of the raw matrix coefficient
/// at `r = 0`: the phase of `binom((τ−1)/2, m)·(−1)^m`, `m = |n|/2`.
fn spherical_phase(param: SpectralParam, n: i64) -> C64 {
    let m = n.unsigned_abs() / 2;
    let a = param.degree() / 2.0;
    let mut b = C64::new(1.0, 0.0);
    for j in 0..m {
        b *= -(a - j as f64) / (j + 1) as f64;
    }
    if b.norm() == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        b / b.norm()
    }
}

/// The spherical function `P_{τ,n}(r)`.
///
/// The raw matrix coefficient `⟨π_τ(a_r)e_τ, e_n⟩` with `a_r = diag(e^{r/2}, e^{−r/2})`
/// is the circle-model integral `(1/2π)∫_0^{2π} ρ(θ)^{τ−1} e^{−inθ} dθ`,
/// `ρ(θ)² = cosh r − sinh r·cos 2θ`. It solves a real radial ODE, so it is a
/// constant phase times a real function; `P_{τ,n}` is normalized by the phase
/// `ω_n` of its leading behaviour `∝ r^{|n|/2}` at `r = 0`, which makes it real
/// for principal `τ` (and `P_{τ,0}(0) = 1`).
///
/// Geometric note: `k_θ` rotates the upper half-plane about `i` by the angle
/// `2θ`, so `P_{τ,n}(r)e^{inθ}` is a Laplace eigenfunction in geodesic polar
/// coordinates `(r, φ = 2θ)` with angular frequency `n/2`.
pub fn spherical_p(param: SpectralParam, n: i64, r: f64) -> Result<C64> {
    if n % 2 != 0 {
        return Err(Error::Domain(format!("odd K-type {n} does not occur")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radius must be >= 0, got {r}")));
    }
    let raw = spherical_raw(param, n, r)?;
    Ok(raw * spherical_phase(param, n).conj())
}

/// The unnormalized matrix coefficient `(1/2π)∫ ρ^{τ−1} e^{−inθ} dθ`.
pub fn spherical_raw(param: SpectralParam, n: i64, r: f64) -> Result<C64> {
    let half_deg = param.degree() / 2.0;
    let nf = n as f64;
    let (em, ep) = ((-r).exp(), r.exp());
    let g = |th: f64| {
        // cosh r − sinh r cos 2θ = e^{−r}cos²θ + e^{r}sin²θ, positive and
        // free of cancellation.
        let (s, c) = th.sin_cos();
        let rho2 = em * c * c + ep * s * s;
        (half_deg * rho2.ln()).exp() * C64::from_polar(1.0, -nf * th)
    };
    // π-periodic integrand; average over one period.
    Ok(periodic_trapezoid_resolving(&g, 0.0, PI, 1e-14, 1e-16, nf.abs() / 2.0)?.value / PI)
}

/// Evaluation at the origin of the line model, `δ(f) = f(0)`.
pub fn delta_functional(f: &ModelVector) -> Result<C64> {
    if f.model != Model::Line {
        return Err(Error::Usage("delta functional needs a line-model vector".into()));
    }
    Ok(f.eval_line(0.0))
}

/// The K-type coefficient `⟨v, e_n⟩ = (1/2π)∫_0^{2π} v(θ)e^{−inθ} dθ` of a
/// circle-model vector. Under rotations `d_mod(n, π_τ(k_φ)v) = e^{−inφ}·d_mod(n, v)`.
pub fn d_mod(n: i64, v: &ModelVector) -> Result<C64> {
    if n % 2 != 0 {
        return Err(Error::Domain(format!("odd K-type {n} does not occur")));
    }
    if v.model != Model::Circle {
        return Err(Error::Usage("d_mod needs a circle-model vector".into()));
    }
    let nf = n as f64;
    let g = |th: f64| v.eval_circle(th) * C64::from_polar(1.0, -nf * th);
    Ok(periodic_trapezoid_resolving(&g, 0.0, PI, 1e-13, 1e-15, nf.abs() / 2.0)?.value / PI)
}

/// Numerical K-type expansion of a circle-model vector: the coefficients
/// `c_n` (n even) of `v(θ) = Σ c_n e^{inθ}`, obtained by the trapezoid rule
/// on `N` equispaced points of `[0, π)`. `N` is doubled until the upper half
/// of the computed spectrum is below `rel_tol` of its peak; the lower half is
/// returned without coefficients below `10⁻³·rel_tol` of the peak.
pub fn ktype_expansion(v: &ModelVector, rel_tol: f64) -> Result<Vec<(i64, C64)>> {
    let mut n = 32usize;
    loop {
        let samples: Vec<C64> = (0..n).map(|j| v.eval_circle(PI * j as f64 / n as f64)).collect();
        let half = (n / 2) as i64;
        let coeffs: Vec<(i64, C64)> = (-half + 1..half)
            .map(|k| {
                let c: C64 = samples
                    .iter()
                    .enumerate()
                    .map(|(j, x)| x * C64::from_polar(1.0, -2.0 * PI * ((k * j as i64).rem_euclid(n as i64)) as f64 / n as f64))
                    .sum();
                (k, c / n as f64)
            })
            .collect();
        let peak = coeffs.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
        let tail = coeffs.iter().filter(|(k, _)| 2 * k.abs() >= half).map(|(_, c)| c.norm()).fold(0.0, f64::max);
        if tail <= rel_tol * peak || peak == 0.0 {
            // Drop the upper half and roundoff-level coefficients.
            let floor = 1e-3 * rel_tol * peak;
            return Ok(coeffs
                .into_iter()
                .filter(|(k, c)| 2 * k.abs() < half && c.norm() > floor)
                .map(|(k, c)| (2 * k, c))
                .collect());
        }
        if n >= 8192 {
            return Err(Error::accuracy("K-type expansion did not converge", C64::new(tail, 0.0), tail / peak));
        }
        n *= 2;
    }
}
