//! Invariant trilinear kernels on `V_τ ⊗ V_{−τ} ⊗ V_{−λ}` in the line and
//! circle models, the trilinear functional itself, and the diagonally
//! averaged kernel `k_λ(c)` in its factored one-dimensional form.

use crate::error::{Error, Result};
use crate::numerics::{abs_pow, integrate, Node, QuadratureSpec, SingularPoint};
use crate::principal_series::{ktype_expansion, Model, ModelVector, SpectralParam};
use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Distance of `x` to the nearest multiple of `π` (in `[0, π/2]`).
fn dist_mod_pi(x: f64) -> f64 {
    let r = x.rem_euclid(PI);
    r.min(PI - r)
}

/// `|x−y|^{(−s−1)/2} |xz−1|^{(−2τ+s−1)/2} |yz−1|^{(2τ+s−1)/2}`.
pub fn kernel_line(tau: C64, s: C64, x: f64, y: f64, z: f64) -> Result<C64> {
    let (d1, d2, d3) = (x - y, x * z - 1.0, y * z - 1.0);
    if d1 == 0.0 || d2 == 0.0 || d3 == 0.0 {
        return Err(Error::Domain(format!("line kernel is singular at ({x}, {y}, {z})")));
    }
    Ok(abs_pow(d1, (-s - 1.0) / 2.0) * abs_pow(d2, (-2.0 * tau + s - 1.0) / 2.0) * abs_pow(d3, (2.0 * tau + s - 1.0) / 2.0))
}

/// Exponents `(e₁, e₂, e₃)` of `|sin(θ−θ′)|`, `|sin(θ−θ″)|`, `|sin(θ′−θ″)|` in
/// the circle kernel.
fn circle_exponents(tau: C64, lambda: C64) -> (C64, C64, C64) {
    ((-lambda - 1.0) / 2.0, (-1.0 - 2.0 * tau + lambda) / 2.0, (-1.0 + 2.0 * tau + lambda) / 2.0)
}

/// `|sin(θ−θ′)|^{(−1−λ)/2} |sin(θ−θ″)|^{(−1−2τ+λ)/2} |sin(θ′−θ″)|^{(−1+2τ+λ)/2}`.
pub fn kernel_circle(tau: C64, lambda: C64, theta: f64, theta1: f64, theta2: f64) -> Result<C64> {
    let (s1, s2, s3) = ((theta - theta1).sin(), (theta - theta2).sin(), (theta1 - theta2).sin());
    if dist_mod_pi(theta - theta1) == 0.0 || dist_mod_pi(theta - theta2) == 0.0 || dist_mod_pi(theta1 - theta2) == 0.0 {
        return Err(Error::Domain(format!("circle kernel is singular at ({theta}, {theta1}, {theta2})")));
    }
    let (e1, e2, e3) = circle_exponents(tau, lambda);
    Ok(abs_pow(s1, e1) * abs_pow(s2, e2) * abs_pow(s3, e3))
}

/// `(1/(2π)³)∫∫∫ v₁(θ)v₂(θ′)v₃(θ″) K_{τ,−τ,λ}(θ,θ′,θ″) dθ dθ′ dθ″` for circle-model
/// vectors `v₁ ∈ V_τ`, `v₂ ∈ V_{−τ}`, `v₃ ∈ V_{−λ}`.
///
/// Every factor is π-periodic, so each variable runs over `[0, π)` with weight
/// `1/π`. Substituting `θ = θ′ + d`, `θ″ = θ′ + u` moves the whole kernel onto
/// `(d, u)`:
///
/// `(1/π²)∫_0^π∫_0^π |sin d|^{e₁} |sin(d−u)|^{e₂} |sin u|^{e₃} S(d, u) du dd`,
///
/// with the smooth factor `S(d,u) = (1/π)∫ v₁(θ′+d) v₂(θ′) v₃(θ′+u) dθ′`. `S` is
/// evaluated exactly from numerical K-type expansions of the three vectors
/// (only `n₁ + n₂ + n₃ = 0` survives), and the remaining singular 2D integral
/// is iterated with annotated singular points `u ∈ {0, d, π}` and
/// `d ∈ {0, π}`. Near `d = 0` the inner integral mixes a smooth part with
/// `|d|^{λ}`, so the outer annotation uses the common real part `−1/2`; very
/// close to the coalescence the inner integral is replaced by its two-term
/// model. Relative tolerances below about 1e−8 are not attainable (the
/// inner integrals have a roundoff floor near 1e−11).
pub fn trilinear_functional(
    tau: C64,
    lambda: C64,
    v1: &ModelVector,
    v2: &ModelVector,
    v3: &ModelVector,
    rel_tol: f64,
) -> Result<C64> {
    for (v, want, name) in [(v1, tau, "v1"), (v2, -tau, "v2"), (v3, -lambda, "v3")] {
        if v.model() != Model::Circle {
            return Err(Error::Usage(format!("{name} must be a circle-model vector")));
        }
        if (v.param().tau() - want).norm() > 1e-12 * want.norm().max(1.0) {
            return Err(Error::Usage(format!("{name} has tau = {}, expected {}", v.param().tau(), want)));
        }
    }
    for p in [tau, lambda] {
        SpectralParam::new(p).require_principal()?;
    }
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::Usage(format!("relative tolerance {rel_tol} not in (0,1)")));
    }
    let (e1, e2, e3) = circle_exponents(tau, lambda);
    let expansion_tol = (rel_tol * 1e-3).clamp(1e-15, 1e-8);
    let dense = |v: &ModelVector| -> Result<(i64, Vec<C64>)> {
        let cs = ktype_expansion(v, expansion_tol)?;
        let k = cs.iter().map(|(n, _)| n.abs() / 2).max().unwrap_or(0);
        let mut out = vec![C64::new(0.0, 0.0); (2 * k + 1) as usize];
        for (n, c) in cs {
            out[(n / 2 + k) as usize] = c;
        }
        Ok((k, out))
    };
    let (k1, a1) = dense(v1)?;
    let (k2, a2) = dense(v2)?;
    let (k3, a3) = dense(v3)?;
    let coef = |a: &Vec<C64>, k: i64, j: i64| -> C64 {
        if j.abs() <= k {
            a[(j + k) as usize]
        } else {
            C64::new(0.0, 0.0)
        }
    };
    // Coefficients of S(d, ·) in e^{2i j₃ u}, j₃ = −k₃..k₃, for a fixed d.
    let row = |d: f64| -> Vec<C64> {
        let z = C64::from_polar(1.0, 2.0 * d);
        let mut powers = Vec::with_capacity((2 * k1 + 1) as usize);
        let mut p = C64::from_polar(1.0, -2.0 * k1 as f64 * d);
        for _ in -k1..=k1 {
            powers.push(p);
            p *= z;
        }
        (-k3..=k3)
            .map(|j3| {
                let c3 = coef(&a3, k3, j3);
                if c3.norm() == 0.0 {
                    return c3;
                }
                let mut acc = C64::new(0.0, 0.0);
                for j1 in -k1..=k1 {
                    let c2 = coef(&a2, k2, -j1 - j3);
                    if c2.norm() != 0.0 {
                        acc += a1[(j1 + k1) as usize] * c2 * powers[(j1 + k1) as usize];
                    }
                }
                c3 * acc
            })
            .collect()
    };
    // Σ_j b_j e^{2i j u} (j = −k₃..k₃) by Horner's rule in e^{2iu}.
    let trig = |b: &[C64], u: f64| -> C64 {
        let z = C64::from_polar(1.0, 2.0 * u);
        let mut acc = C64::new(0.0, 0.0);
        for c in b.iter().rev() {
            acc = acc * z + c;
        }
        acc * C64::from_polar(1.0, -2.0 * k3 as f64 * u)
    };
    // Effective bandwidths (coefficients above 10⁻³ of the peak) set the
    // initial panel widths; adaptive refinement resolves the rest.
    let band = |a: &Vec<C64>, k: i64| -> f64 {
        let peak = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
        (-k..=k).filter(|j| a[(j + k) as usize].norm() > 1e-3 * peak).map(|j| j.abs()).max().unwrap_or(0) as f64
    };
    let base_freq = lambda.im.abs() + 2.0 * tau.im.abs() + 2.0;
    let freq = base_freq + 2.0 * band(&a3, k3);
    let outer_freq = base_freq + 2.0 * band(&a1, k1);
    let inner_tol = (rel_tol * 0.01).max(1e-12);
    let inner = |d: f64| -> Result<C64> {
        let b = row(d);
        let spec = QuadratureSpec::new(inner_tol, 1e-15)
            .with_frequency(freq)
            .with_singular([SingularPoint::new(0.0, e3), SingularPoint::new(d, e2), SingularPoint::new(PI, e3)]);
        let f = |n: Node| {
            let s = trig(&b, n.t);
            // Reconstruct u (mod π) and u − d from the anchored offsets; d − π
            // is exact (Sterbenz), so neither factor suffers cancellation.
            let (u, ud) = match n.anchor() {
                Some((0, off)) => (off, off - d),
                Some((1, off)) => (if d > 0.5 * PI { (d - PI) + off } else { d + off }, off),
                Some((2, off)) => (off, off + (PI - d)),
                _ => (n.t, n.t - d),
            };
            s * abs_pow(u.sin(), e3) * abs_pow(ud.sin(), e2)
        };
        Ok(integrate(&f, 0.0, PI, &spec)?.value / PI)
    };
    // Near d = 0 (and d = π) the two singular points of the inner integral
    // coalesce and the inner integral behaves like A + B·|d|^{λ} + O(|d|).
    // Below DELTA the outer integrand uses that model, with A, B fitted from
    // two inner values half a log-period apart; the neglected O(|d|) term
    // contributes O(DELTA^{3/2}).
    const DELTA: f64 = 1e-7;
    let model = |near: f64, side: f64| -> Result<(C64, C64)> {
        let d1 = DELTA;
        if lambda.im.abs() < 0.1 {
            return Ok((inner(near + side * d1)?, C64::new(0.0, 0.0)));
        }
        let d2 = d1 * (-PI / lambda.im.abs()).exp();
        let (i1, i2) = (inner(near + side * d1)?, inner(near + side * d2)?);
        let (p1, p2) = (abs_pow(d1, lambda), abs_pow(d2, lambda));
        let b = (i1 - i2) / (p1 - p2);
        Ok((i1 - b * p1, b))
    };
    let (a0, b0) = model(0.0, 1.0)?;
    let (ap, bp) = model(PI, -1.0)?;
    let outer_exp = C64::new(-0.5, e1.im);
    let spec = QuadratureSpec::new(rel_tol * 0.3, 1e-14).with_frequency(outer_freq).with_singular([
        SingularPoint::new(0.0, outer_exp),
        SingularPoint::new(PI, outer_exp),
        SingularPoint::real(DELTA, 0.0),
        SingularPoint::real(PI - DELTA, 0.0),
    ]);
    let err = std::cell::RefCell::new(None);
    let f = |n: Node| {
        // Distance to the nearer of d = 0 and d = π, exact when anchored.
        let (dist, near_zero) = match n.anchor() {
            Some((1, off)) => (-off, false),
            Some((0, off)) => (off, true),
            _ if n.t < 0.5 * PI => (n.t, true),
            _ => (PI - n.t, false),
        };
        if dist < DELTA {
            let (a, b) = if near_zero { (a0, b0) } else { (ap, bp) };
            return abs_pow(dist, e1) * (a + b * abs_pow(dist, lambda));
        }
        match inner(n.t) {
            Ok(v) => abs_pow(dist.sin(), e1) * v,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                C64::new(0.0, 0.0)
            }
        }
    };
    let r = integrate(&f, 0.0, PI, &spec)?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(r.value / PI)
}

/// `c` is exceptional when `2c ≡ 0 (mod π)`: the points `±c` collide.
fn check_regular(c: f64) -> Result<()> {
    if !c.is_finite() || dist_mod_pi(2.0 * c) < 1e-12 {
        return Err(Error::Domain(format!("c = {c} lies in the exceptional set {{0, ±π/2, π}} mod π")));
    }
    Ok(())
}

/// `K_{λ,τ}(c) = (1/2π)∫_0^{2π} |sin(t−c)|^{−1/2−τ+λ/2} |sin(t+c)|^{−1/2+τ+λ/2} dt`.
///
/// Symmetries: `K_{λ,τ}(c) = K_{λ,−τ}(c) = K_{λ,τ}(−c)` (substitute `t → −t`)
/// and `conj K_{λ,τ}(c) = K_{−λ,τ}(c)` for imaginary parameters. The value is
/// not real in general.
pub fn k_factor(tau: C64, lambda: C64, c: f64, rel_tol: f64) -> Result<C64> {
    check_regular(c)?;
    k_factor_near(tau, lambda, c, rel_tol)
}

/// Distance below which the coalescing singular points `±c` are handled by
/// the two-term model.
const COALESCE: f64 = 1e-7;

/// [`k_factor`] without the exceptional-set guard. Within `COALESCE` of an
/// exceptional point (where `±c` merge) the value comes from
/// [`CoalescenceModel`].
pub(crate) fn k_factor_near(tau: C64, lambda: C64, c: f64, rel_tol: f64) -> Result<C64> {
    let e = 0.5 * dist_mod_pi(2.0 * c);
    if e >= COALESCE {
        return k_factor_direct(tau, lambda, c, rel_tol);
    }
    Ok(CoalescenceModel::fit(tau, lambda, nearest_exceptional(c), rel_tol)?.eval(e))
}

/// Nearest multiple of `π/2`.
pub(crate) fn nearest_exceptional(c: f64) -> f64 {
    (c / FRAC_PI_2).round() * FRAC_PI_2
}

/// Near an exceptional point `c₀` (a multiple of `π/2`) the two singular
/// points `±c` of the `K_{λ,τ}` integrand merge and the value behaves like
/// `A + B·e^{λ} + O(e)` in the distance `e = |c − c₀|` (`K` is even about
/// `c₀`). `A`, `B` are fitted from two direct values half a log-period apart;
/// the model error is `O(COALESCE)` relative and it is only used inside
/// integrals over `c`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CoalescenceModel {
    a: C64,
    b: C64,
    lambda: C64,
}

impl CoalescenceModel {
    pub(crate) fn fit(tau: C64, lambda: C64, c0: f64, rel_tol: f64) -> Result<Self> {
        let e1 = COALESCE;
        let k1 = k_factor_direct(tau, lambda, c0 + e1, rel_tol)?;
        if lambda.im.abs() < 0.1 {
            return Ok(CoalescenceModel { a: k1, b: C64::new(0.0, 0.0), lambda });
        }
        let e2 = e1 * (-PI / lambda.im.abs()).exp();
        let k2 = k_factor_direct(tau, lambda, c0 + e2, rel_tol)?;
        let (p1, p2) = (abs_pow(e1, lambda), abs_pow(e2, lambda));
        let b = (k1 - k2) / (p1 - p2);
        Ok(CoalescenceModel { a: k1 - b * p1, b, lambda })
    }

    pub(crate) fn eval(&self, e: f64) -> C64 {
        self.a + self.b * abs_pow(e, self.lambda)
    }
}

/// Evaluator of `k_λ(c)` for integrals over `c`: coalescence models for the
/// exceptional points in `[lo, hi]` are fitted once.
pub(crate) struct KernelEvaluator {
    tau: C64,
    lambda: C64,
    rel_tol: f64,
    models: Vec<(f64, CoalescenceModel)>,
}

impl KernelEvaluator {
    pub(crate) fn new(tau: C64, lambda: C64, lo: f64, hi: f64, rel_tol: f64) -> Result<Self> {
        let mut models = Vec::new();
        let mut k = (lo / FRAC_PI_2).floor() as i64;
        while (k as f64) * FRAC_PI_2 <= hi + COALESCE {
            let c0 = k as f64 * FRAC_PI_2;
            if c0 >= lo - COALESCE {
                models.push((c0, CoalescenceModel::fit(tau, lambda, c0, rel_tol)?));
            }
            k += 1;
        }
        Ok(KernelEvaluator { tau, lambda, rel_tol, models })
    }

    /// `k_λ(c₀ + offset)`, with the offset from the nearest exceptional point
    /// supplied exactly when known.
    pub(crate) fn eval_offset(&self, c0: f64, offset: f64) -> Result<C64> {
        let e = offset.abs();
        let sin2 = abs_pow((2.0 * e).sin(), -0.5 - self.lambda / 2.0);
        if e < COALESCE {
            if let Some((_, m)) = self.models.iter().find(|(p, _)| (*p - c0).abs() < 1e-9) {
                return Ok(sin2 * m.eval(e));
            }
        }
        Ok(sin2 * k_factor_near(self.tau, self.lambda, c0 + offset, self.rel_tol)?)
    }

    pub(crate) fn eval(&self, c: f64) -> Result<C64> {
        let c0 = nearest_exceptional(c);
        self.eval_offset(c0, c - c0)
    }
}

fn k_factor_direct(tau: C64, lambda: C64, c: f64, rel_tol: f64) -> Result<C64> {
    let a = -0.5 - tau + lambda / 2.0;
    let b = -0.5 + tau + lambda / 2.0;
    // With c = c₀ + e (c₀ ∈ (π/2)ℤ) and t = c₀ + x, the integrand becomes
    // |sin(x−e)|^a |sin(x+e)|^b (2c₀ ∈ πℤ), so both singular points sit at
    // ±e inside one period x ∈ [−π/2, π/2], away from its ends.
    let e = c - nearest_exceptional(c);
    let spec = QuadratureSpec::new(rel_tol, 1e-15)
        .with_max_subdivisions(50_000)
        .with_frequency(lambda.im.abs() + 2.0 * tau.im.abs() + 2.0)
        .with_singular([SingularPoint::new(e, a), SingularPoint::new(-e, b)]);
    let f = |n: Node| abs_pow(n.offset_from(0, e).sin(), a) * abs_pow(n.offset_from(1, -e).sin(), b);
    Ok(integrate(&f, -FRAC_PI_2, FRAC_PI_2, &spec)?.value / PI)
}

/// `k_λ(c) = |sin 2c|^{−1/2−λ/2} K_{λ,τ}(c)`, the average of the circle kernel
/// over the third variable at `θ − θ′ = 2c`.
pub fn k_lambda(tau: C64, lambda: C64, c: f64, rel_tol: f64) -> Result<C64> {
    check_regular(c)?;
    k_lambda_near(tau, lambda, c, rel_tol)
}

/// [`k_lambda`] without the exceptional-set guard (see [`k_factor_near`]).
pub(crate) fn k_lambda_near(tau: C64, lambda: C64, c: f64, rel_tol: f64) -> Result<C64> {
    // |sin 2c| from the distance of 2c to πℤ, exact near the exceptional set.
    Ok(abs_pow(dist_mod_pi(2.0 * c).sin(), -0.5 - lambda / 2.0) * k_factor_near(tau, lambda, c, rel_tol)?)
}

/// The unfactored average `(1/2π)∫_0^{2π} K_{τ,−τ,λ}(2c, 0, θ″) dθ″`, with the
/// singular points `θ″ = 2c` and `θ″ = 0` (mod π) annotated. Used as an
/// independent check of [`k_lambda`].
pub fn k_lambda_direct(tau: C64, lambda: C64, c: f64, rel_tol: f64) -> Result<C64> {
    check_regular(c)?;
    let (e1, e2, e3) = circle_exponents(tau, lambda);
    let th = 2.0 * c;
    let p = th.rem_euclid(PI);
    // Integrate over [−π/2, π/2) so that θ″ = 0 is interior.
    let p = if p >= FRAC_PI_2 { p - PI } else { p };
    let spec = QuadratureSpec::new(rel_tol, 1e-15)
        .with_max_subdivisions(50_000)
        .with_frequency(lambda.im.abs() + 2.0 * tau.im.abs() + 2.0)
        .with_singular([SingularPoint::new(p, e2), SingularPoint::new(0.0, e3)]);
    let f = |n: Node| {
        let d2 = n.offset_from(0, p);
        let d3 = n.offset_from(1, 0.0);
        abs_pow(d2.sin(), e2) * abs_pow(d3.sin(), e3)
    };
    let avg = integrate(&f, -FRAC_PI_2, FRAC_PI_2, &spec)?.value / PI;
    Ok(abs_pow(th.sin(), e1) * avg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_points_rejected() {
        let (t, l) = (C64::new(0.0, 2.0), C64::new(0.0, 3.0));
        assert!(kernel_line(t, l, 1.0, 1.0, 0.0).is_err());
        assert!(kernel_circle(t, l, 0.0, PI, 1.0).is_err());
        assert!(k_lambda(t, l, FRAC_PI_2, 1e-8).is_err());
    }
}
