//! Two-term stationary phase, the main-term constants of the large-`λ`
//! expansion of `K_{λ,τ}`, the asymptotic kernel `M_λ`, remainder scans and
//! the model oscillatory integral `I(λ, N, T)`.
//!
//! # The main terms
//!
//! `K_{λ,τ}(c) = (1/π)∫_0^π f(t) e^{(λ/2)φ(t)} dt` with
//! `φ(t) = ln|sin²t − sin²c|` and
//! `f(t) = |sin(t−c)|^{−1/2−τ}|sin(t+c)|^{−1/2+τ}`. The phase has the two
//! nondegenerate critical points `t = 0` and `t = π/2`, with
//! `φ″(0) = −2/sin²c`, `φ‴(0) = 0`, `φ⁗(0) = 8/sin²c − 12/sin⁴c`,
//! `f(0) = |sin c|^{−1}`, `f′(0) = 2τ cot c · f(0)`,
//! `f″(0) = |sin c|^{−3}(1 + 4τ² cos²c)`. Two-term stationary phase with the
//! large parameter `λ/2` gives `K = m_λ(c) + m_λ(c + π/2) + O(|λ|^{−5/2})` with
//!
//! `m_λ(c) = |λ|^{−1/2}(A + B|λ|^{−1} + C|λ|^{−1}cos²c)·|sin c|^{λ}`,
//!
//! and, writing `σ = −sgn Im λ`,
//!
//! * `A = √(2/π)·e^{iσπ/4}`,
//! * `B = e^{3iσπ/4} / (2√(2π))`,
//! * `C = e^{3iσπ/4}(4τ² − 1) / √(2π)`.
//!
//! [`main_term_constants`] recomputes these from the derivative data through
//! the generic engine; [`fit_main_term_constants`] recovers them from direct
//! quadrature.

use crate::error::{Error, Result};
use crate::numerics::{abs_pow, integrate, Node, QuadratureSpec, SingularPoint};
use crate::report::{BoundFitReport, FitSeries, DEFAULT_SLACK};
use crate::transforms::LineFunction;
use crate::trilinear::k_factor;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::Arc;
use std::time::Instant;

type PhaseFn = Arc<dyn Fn(f64) -> [f64; 5] + Send + Sync>;
type AmplitudeFn = Arc<dyn Fn(f64) -> [C64; 3] + Send + Sync>;

/// `∫ f(t) e^{λφ(t)} dt` near its critical points, for imaginary `λ`.
///
/// The phase procedure returns `[φ, φ′, φ″, φ‴, φ⁗]` and the amplitude
/// procedure `[f, f′, f″]` at a point.
#[derive(Clone)]
pub struct PhaseProblem {
    phase: PhaseFn,
    amplitude: AmplitudeFn,
    critical: Vec<f64>,
    lambda: C64,
}

impl std::fmt::Debug for PhaseProblem {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fm.debug_struct("PhaseProblem").field("critical", &self.critical).field("lambda", &self.lambda).finish()
    }
}

/// Critical points must satisfy `|φ′| ≤ CRIT_TOL`.
const CRIT_TOL: f64 = 1e-10;
/// Nondegeneracy certificate: `|φ″| ≥ DEGENERATE_TOL`.
const DEGENERATE_TOL: f64 = 1e-6;

impl PhaseProblem {
    /// Validates every listed critical point; a degenerate one (`φ″ ≈ 0`) is
    /// a domain error, since the two-term formula does not apply there.
    pub fn new<P, A>(phase: P, amplitude: A, critical_points: Vec<f64>, lambda: C64) -> Result<Self>
    where
        P: Fn(f64) -> [f64; 5] + Send + Sync + 'static,
        A: Fn(f64) -> [C64; 3] + Send + Sync + 'static,
    {
        if lambda.re != 0.0 || lambda.im == 0.0 {
            return Err(Error::Domain(format!("large parameter must be nonzero imaginary, got {lambda}")));
        }
        for &t in &critical_points {
            let d = phase(t);
            if d[1].abs() > CRIT_TOL {
                return Err(Error::Domain(format!("t = {t} is not a critical point (φ′ = {:e})", d[1])));
            }
            if d[2].abs() < DEGENERATE_TOL {
                return Err(Error::Domain(format!("degenerate critical point at t = {t} (φ″ = {:e})", d[2])));
            }
        }
        Ok(PhaseProblem { phase: Arc::new(phase), amplitude: Arc::new(amplitude), critical: critical_points, lambda })
    }

    pub fn critical_points(&self) -> &[f64] {
        &self.critical
    }

    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    /// `(C₀, C₁)` at critical point `t₀`, so that its contribution is
    /// `|λ|^{−1/2}(C₀ + C₁|λ|^{−1}) e^{λφ(t₀)}`:
    ///
    /// `C₀ = √(2π) e^{iεπ/4} |φ″|^{−1/2} f`, `ε = sgn(φ″)·sgn(Im λ)`, and
    /// `C₁ = C₀/f · (i sgn(Im λ) / (2φ″))·[f″ − φ‴f′/φ″ − φ⁗f/(4φ″) + 5φ‴²f/(12φ″²)]`.
    pub fn coefficients(&self, t0: f64) -> (C64, C64) {
        let p = (self.phase)(t0);
        let a = (self.amplitude)(t0);
        let sl = self.lambda.im.signum();
        let eps = p[2].signum() * sl;
        let base = C64::from_polar((2.0 * PI).sqrt() / p[2].abs().sqrt(), eps * FRAC_PI_4);
        let bracket = a[2] - a[1] * (p[3] / p[2]) - a[0] * (p[4] / (4.0 * p[2])) + a[0] * (5.0 * p[3] * p[3] / (12.0 * p[2] * p[2]));
        let c1 = base * C64::new(0.0, sl / (2.0 * p[2])) * bracket;
        (base * a[0], c1)
    }

    /// The phase value at a point.
    pub fn phase_at(&self, t: f64) -> f64 {
        (self.phase)(t)[0]
    }
}

/// Two-term contribution of each critical point, in the order listed.
pub fn stationary_phase_contributions(p: &PhaseProblem) -> Result<Vec<C64>> {
    let l = p.lambda.norm();
    if l < 1.0 {
        return Err(Error::Domain(format!("|λ| = {l} < 1 is outside the asymptotic regime")));
    }
    Ok(p.critical
        .iter()
        .map(|&t0| {
            let (c0, c1) = p.coefficients(t0);
            (c0 + c1 / l) / l.sqrt() * (p.lambda * p.phase_at(t0)).exp()
        })
        .collect())
}

/// `Σ_{t₀} |λ|^{−1/2}(C₀ + C₁|λ|^{−1}) e^{λφ(t₀)}` (no remainder).
pub fn stationary_phase_2term(p: &PhaseProblem) -> Result<C64> {
    Ok(stationary_phase_contributions(p)?.into_iter().sum())
}

/// Phase problem of `K_{λ,τ}(c)` (without the `1/π` prefactor) with large
/// parameter `λ/2` and critical points `t = 0, π/2`; `c ∈ (0, π/2)`.
pub fn claim_phase_problem(tau: C64, lambda: C64, c: f64) -> Result<PhaseProblem> {
    if !(c > 0.0 && c < FRAC_PI_2) {
        return Err(Error::Domain(format!("c = {c} must lie in (0, π/2)")));
    }
    let s2 = c.sin().powi(2);
    // φ(t) = ln|sin²t − sin²c|, derivatives via g = sin²t − s2:
    // g′ = sin2t, g″ = 2cos2t, g‴ = −4 sin2t, g⁗ = −8 cos2t.
    let phase = move |t: f64| {
        let g = t.sin().powi(2) - s2;
        let (g1, g2, g3, g4) = ((2.0 * t).sin(), 2.0 * (2.0 * t).cos(), -4.0 * (2.0 * t).sin(), -8.0 * (2.0 * t).cos());
        let (l1, l2, l3) = (g1 / g, g2 / g, g3 / g);
        let l4 = g4 / g;
        let d1 = l1;
        let d2 = l2 - l1 * l1;
        let d3 = l3 - 3.0 * l2 * l1 + 2.0 * l1.powi(3);
        let d4 = l4 - 4.0 * l3 * l1 - 3.0 * l2 * l2 + 12.0 * l2 * l1 * l1 - 6.0 * l1.powi(4);
        [g.abs().ln(), d1, d2, d3, d4]
    };
    let amplitude = move |t: f64| {
        let (a, b) = (-0.5 - tau, -0.5 + tau);
        let (sm, sp) = ((t - c).sin(), (t + c).sin());
        let f = abs_pow(sm, a) * abs_pow(sp, b);
        let (cm, cp) = ((t - c).cos() / sm, (t + c).cos() / sp);
        let l1 = a * cm + b * cp;
        let l2 = -a / (sm * sm) - b / (sp * sp);
        [f, f * l1, f * (l2 + l1 * l1)]
    };
    PhaseProblem::new(phase, amplitude, vec![0.0, FRAC_PI_2], lambda / 2.0)
}

/// The constants `(A, B, C)` of the main term `m_λ`, for `Im λ > 0` (the
/// constants for `Im λ < 0` are [`main_term_constants_signed`] with sign −1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainTermConstants {
    pub a: C64,
    pub b: C64,
    pub c: C64,
}

impl MainTermConstants {
    /// Largest componentwise relative deviation from `other`.
    pub fn max_rel_diff(&self, other: &MainTermConstants) -> f64 {
        [(self.a, other.a), (self.b, other.b), (self.c, other.c)]
            .iter()
            .map(|(x, y)| (x - y).norm() / x.norm().max(y.norm()).max(1e-300))
            .fold(0.0, f64::max)
    }
}

/// `(A, B, C)` for `Im λ > 0`, obtained by feeding the exact derivative data of
/// the `K_{λ,τ}` phase problem at two values of `c` into the engine's
/// coefficient formula.
pub fn main_term_constants(tau: C64) -> Result<MainTermConstants> {
    main_term_constants_signed(tau, 1.0)
}

/// `(A, B, C)` for `sgn Im λ = lambda_sign`.
pub fn main_term_constants_signed(tau: C64, lambda_sign: f64) -> Result<MainTermConstants> {
    let lam = C64::new(0.0, 100.0 * lambda_sign.signum());
    // Contribution of t = 0 with large parameter λ/2:
    //   (1/π)|λ/2|^{−1/2}(C₀ + 2C₁|λ|^{−1})|sin c|^{λ}
    // so A = √2 C₀/π and B + C cos²c = 2√2 C₁/π.
    let coeffs = |c: f64| -> Result<(C64, C64)> {
        let p = claim_phase_problem(tau, lam, c)?;
        let (c0, c1) = p.coefficients(0.0);
        Ok((c0 * 2f64.sqrt() / PI, c1 * 2.0 * 2f64.sqrt() / PI))
    };
    let (c1v, c2v) = (0.5, 1.1);
    let (a, p1) = coeffs(c1v)?;
    let (_, p2) = coeffs(c2v)?;
    let (q1, q2) = (c1v.cos().powi(2), c2v.cos().powi(2));
    let cc = (p1 - p2) / (q1 - q2);
    Ok(MainTermConstants { a, b: p1 - cc * q1, c: cc })
}

/// `m_λ(c) = |λ|^{−1/2}(A + B|λ|^{−1} + C|λ|^{−1}cos²c)|sin c|^{λ}`.
pub fn main_term(k: &MainTermConstants, lambda: C64, c: f64) -> C64 {
    let l = lambda.norm();
    (k.a + (k.b + k.c * c.cos().powi(2)) / l) / l.sqrt() * abs_pow(c.sin(), lambda)
}

fn constants_for(tau: C64, lambda: C64) -> Result<MainTermConstants> {
    main_term_constants_signed(tau, if lambda.im >= 0.0 { 1.0 } else { -1.0 })
}

/// `m_λ(c) + m_λ(c + π/2)`, the two-term approximation of `K_{λ,τ}(c)`.
pub fn k_factor_asymptotic(tau: C64, lambda: C64, c: f64) -> Result<C64> {
    let k = constants_for(tau, lambda)?;
    Ok(main_term(&k, lambda, c) + main_term(&k, lambda, c + FRAC_PI_2))
}

/// `M_λ(c) + M_λ(c + π/2)` with
/// `M_λ(c) = |λ|^{−1/2}[A + B|λ|^{−1} + C|λ|^{−1}cos²c]·|sin 2c|^{−1/2}·2^{−λ/2}|sin c|^{λ/2}|cos c|^{−λ/2}`,
/// which equals `|sin 2c|^{−1/2−λ/2}·(m_λ(c) + m_λ(c+π/2))`, the main part of
/// `k_λ(c)`. The factor `2^{−λ/2}` (unimodular for imaginary `λ`) comes from
/// `|sin 2c| = 2|sin c cos c|`.
pub fn k_lambda_asymptotic(tau: C64, lambda: C64, c: f64) -> Result<C64> {
    let s2 = (2.0 * c).sin();
    if s2.abs() < 1e-300 {
        return Err(Error::Domain(format!("c = {c} lies on the exceptional set")));
    }
    if lambda.norm() < 1.0 {
        return Err(Error::Domain(format!("|λ| = {} < 1 is outside the asymptotic regime", lambda.norm())));
    }
    Ok(abs_pow(s2, -0.5 - lambda / 2.0) * k_factor_asymptotic(tau, lambda, c)?)
}

/// Least-squares fit of `(A, B, C)` to direct quadrature of `K_{λ,τ}`.
///
/// For each `c` the values over the `λ` grid are fitted by
/// `|λ|^{−1/2}(P₀ + P₁|λ|^{−1} + P₂|λ|^{−2} + P₃|λ|^{−3})|sin c|^{λ} + (same with Q, |cos c|^{λ})`
/// (the `P₂, P₃, Q₂, Q₃` terms absorb the higher orders); then `A` is the average of
/// all `P₀, Q₀` and `(B, C)` solve `P₁ = B + C cos²c`, `Q₁ = B + C sin²c` in
/// the least-squares sense. All `λ` must share the sign of `Im λ`.
pub fn fit_main_term_constants(tau: C64, c_grid: &[f64], lambda_grid: &[C64], rel_tol: f64) -> Result<MainTermConstants> {
    if lambda_grid.len() < 8 {
        return Err(Error::Usage("the fit needs at least eight values of λ".into()));
    }
    let per_c: Vec<Result<[C64; 8]>> = c_grid
        .par_iter()
        .map(|&c| {
            let rows: Result<Vec<(Vec<C64>, C64)>> = lambda_grid
                .iter()
                .map(|&lam| {
                    let l = lam.norm();
                    let (es, ec) = (abs_pow(c.sin(), lam) / l.sqrt(), abs_pow(c.cos(), lam) / l.sqrt());
                    let basis = vec![es, es / l, es / (l * l), es / (l * l * l), ec, ec / l, ec / (l * l), ec / (l * l * l)];
                    Ok((basis, k_factor(tau, lam, c, rel_tol)?))
                })
                .collect();
            let x = complex_least_squares(&rows?)?;
            Ok([x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7]])
        })
        .collect();
    let mut a_sum = C64::new(0.0, 0.0);
    let mut bc_rows = Vec::new();
    for (r, &c) in per_c.into_iter().zip(c_grid) {
        let x = r?;
        a_sum += x[0] + x[4];
        let (q, p) = (c.cos().powi(2), c.sin().powi(2));
        bc_rows.push((vec![C64::new(1.0, 0.0), C64::new(q, 0.0)], x[1]));
        bc_rows.push((vec![C64::new(1.0, 0.0), C64::new(p, 0.0)], x[5]));
    }
    let bc = complex_least_squares(&bc_rows)?;
    Ok(MainTermConstants { a: a_sum / (2.0 * c_grid.len() as f64), b: bc[0], c: bc[1] })
}

/// Least squares `min Σ|Σ_j a_ij x_j − b_i|²` via the normal equations with
/// column scaling, solved by Gaussian elimination with partial pivoting.
fn complex_least_squares(rows: &[(Vec<C64>, C64)]) -> Result<Vec<C64>> {
    let n = rows.first().map(|r| r.0.len()).unwrap_or(0);
    if n == 0 || rows.len() < n {
        return Err(Error::Usage("underdetermined least-squares problem".into()));
    }
    let scale: Vec<f64> = (0..n)
        .map(|j| rows.iter().map(|r| r.0[j].norm_sqr()).sum::<f64>().sqrt().max(1e-300))
        .collect();
    let mut m = vec![vec![C64::new(0.0, 0.0); n + 1]; n];
    for (a, b) in rows {
        for i in 0..n {
            let ai = (a[i] / scale[i]).conj();
            for j in 0..n {
                m[i][j] += ai * a[j] / scale[j];
            }
            m[i][n] += ai * b;
        }
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm())).unwrap();
        if m[piv][col].norm() < 1e-14 {
            return Err(Error::Conditioning("singular least-squares system".into()));
        }
        m.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for k in col..=n {
                    let v = m[col][k];
                    m[r][k] -= f * v;
                }
            }
        }
    }
    Ok((0..n).map(|i| m[i][n] / m[i][i] / scale[i]).collect())
}

/// Measures `r = K_{λ,τ}(c) − m_λ(c) − m_λ(c+π/2)` on the grid and fits its
/// decay in `|λ|` for each `c` (target exponent −5/2, slack 0.2). Grid points
/// whose quadrature fails are recorded in `failures`.
pub fn claim_remainder_scan(tau: C64, c_grid: &[f64], lambda_grid: &[C64], rel_tol: f64) -> Result<BoundFitReport> {
    let start = Instant::now();
    for &c in c_grid {
        let d = (c / FRAC_PI_2 - (c / FRAC_PI_2).round()).abs() * FRAC_PI_2;
        if d < 0.1 {
            return Err(Error::Usage(format!("c = {c} is closer than 0.1 to the exceptional set")));
        }
    }
    let mut report = BoundFitReport::new(format!("claim-remainder tau={}", tau.im));
    let points: Vec<(f64, C64)> = c_grid.iter().flat_map(|&c| lambda_grid.iter().map(move |&l| (c, l))).collect();
    let values: Vec<Result<f64>> = points
        .par_iter()
        .map(|&(c, lam)| Ok((k_factor(tau, lam, c, rel_tol)? - k_factor_asymptotic(tau, lam, c)?).norm()))
        .collect();
    for &c in c_grid {
        let mut grid = Vec::new();
        let mut vals = Vec::new();
        for ((pc, lam), v) in points.iter().zip(&values) {
            if *pc != c {
                continue;
            }
            match v {
                Ok(v) => {
                    grid.push(lam.norm());
                    vals.push(*v);
                }
                Err(e) => report.failures.push(format!("c={c} lambda={}: {e}", lam.im)),
            }
        }
        report.series.push(FitSeries::slope(format!("c={c}"), grid, vals, -2.5, DEFAULT_SLACK));
    }
    report.runtime_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// `I(λ, N, T) = T∫ e^{−iNc}|sin 2c|^{−1/2}|sin c|^{λ/2}|cos c|^{−λ/2} χ(Tc) dc`
/// for a bump `χ` supported in `[−1, 1]`.
pub fn model_integral_i(lambda: C64, n: f64, t: f64, chi: &LineFunction, rel_tol: f64) -> Result<C64> {
    if !(t >= 1.0 && n >= t) {
        return Err(Error::Usage(format!("need N ≥ T ≥ 1, got N = {n}, T = {t}")));
    }
    let (lo, hi) = chi.support();
    if lo < -1.0 - 1e-12 || hi > 1.0 + 1e-12 {
        return Err(Error::Usage("χ must be supported in [−1, 1]".into()));
    }
    let (a, b) = (lo / t, hi / t);
    let expo = -0.5 + lambda / 2.0;
    let mut spec = QuadratureSpec::new(rel_tol, 0.0)
        .with_frequency(n + lambda.im.abs() + chi.frequency() * t)
        .with_max_subdivisions(50_000);
    let straddles = a <= 0.0 && b >= 0.0;
    if straddles {
        spec = spec.with_singular([SingularPoint::new(0.0, expo)]);
    }
    let f = |node: Node| {
        let c = if straddles { node.offset_from(0, 0.0) } else { node.t };
        if c == 0.0 {
            return C64::new(0.0, 0.0);
        }
        chi.eval(t * c)
            * C64::from_polar(1.0, -n * c)
            * abs_pow((2.0 * c).sin(), C64::new(-0.5, 0.0))
            * abs_pow(c.sin(), lambda / 2.0)
            * abs_pow(c.cos(), -lambda / 2.0)
    };
    Ok(integrate(&f, a, b, &spec)?.value * t)
}
