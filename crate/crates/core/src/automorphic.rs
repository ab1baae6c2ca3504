//! Maass cusp forms for PSL(2,ℤ) from external coefficient data.
//!
//! A form is reconstructed from its Fourier expansion
//! `φ(x+iy) = Σ_{n≠0} a_n 𝒲_{τ,n}(y) e^{2πinx}` with `τ = 2iR` and
//! `𝒲_{τ,n}(y) = π^{1/2}/Γ((1−τ)/2)·y^{1/2}K_{iR}(2π|n|y)`. The prefactor is a
//! complex constant; evaluations drop its phase (and the factor `i` of odd
//! forms), so [`eval_maass`] returns a real function with the same modulus.
//!
//! Every truncated sum in this module returns its value together with a tail
//! bound. Coefficient growth beyond what a bound can see is controlled by the
//! measured mean-square constant
//! `C = max_T S(T)/max(T, 1+|τ|)`, `S(T) = Σ_{0<|n|≤T}|a_n|²`,
//! recorded at ingest.

use crate::error::{Error, Result};
use crate::numerics::{bessel_k_imag, gamma_complex, gauss_legendre, integrate, periodic_trapezoid_resolving, QuadratureSpec, SingularPoint};
use crate::principal_series::{spherical_p, SpectralParam};
use crate::report::{rel, BoundFitReport, FitSeries, VerdictRow};
use num_complex::Complex64 as C64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::Path;

/// Relative tolerance for the stored Laplace eigenvalue `μ = 1/4 + R²`.
const MU_REL_TOL: f64 = 1e-12;

/// Parity of the form under `x ↦ −x`; fixes `a_{−n} = ±a_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Even,
    Odd,
}

/// How the coefficients are scaled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// `a_1 = 1` (Hecke eigenvalues).
    Hecke,
    /// Unit Petersson norm.
    L2,
}

/// On-disk JSON schema.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaassFile {
    format_version: u32,
    lattice: String,
    #[serde(rename = "R")]
    r: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu: Option<f64>,
    symmetry: Symmetry,
    normalization: Normalization,
    coefficients: Vec<f64>,
    provenance: String,
}

/// Validated Maass-form data. Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct MaassFormData {
    r: f64,
    symmetry: Symmetry,
    normalization: Normalization,
    coefficients: Vec<f64>,
    provenance: String,
    mean_square_constant: f64,
}

impl MaassFormData {
    /// Builds and validates a data set for PSL(2,ℤ). `coefficients[k]` is
    /// `a_{k+1}`.
    pub fn new(r: f64, symmetry: Symmetry, normalization: Normalization, coefficients: Vec<f64>, provenance: impl Into<String>) -> Result<Self> {
        let mut problems = Vec::new();
        if !(r > 0.0 && r.is_finite()) {
            problems.push(format!("R: must be a positive finite number, got {r}"));
        }
        if coefficients.is_empty() {
            problems.push("coefficients: N_max must be >= 1, got an empty list".to_string());
        }
        if let Some(k) = coefficients.iter().position(|a| !a.is_finite()) {
            problems.push(format!("coefficients[{k}]: non-finite value"));
        }
        if normalization == Normalization::Hecke && coefficients.first() == Some(&0.0) {
            problems.push("coefficients[0]: a_1 must be nonzero under Hecke normalization".to_string());
        }
        if !problems.is_empty() {
            return Err(Error::Input(problems.join("; ")));
        }
        let mut d = MaassFormData { r, symmetry, normalization, coefficients, provenance: provenance.into(), mean_square_constant: 0.0 };
        d.mean_square_constant = d.measure_mean_square_constant();
        Ok(d)
    }

    /// Parses the JSON schema and validates every field.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: MaassFile = serde_json::from_str(text).map_err(|e| Error::Input(format!("schema: {e}")))?;
        let mut problems = Vec::new();
        if file.format_version != 1 {
            problems.push(format!("format_version: only version 1 is supported, got {}", file.format_version));
        }
        if file.lattice != "PSL2Z" {
            problems.push(format!("lattice: only \"PSL2Z\" is supported, got {:?}", file.lattice));
        }
        if let Some(mu) = file.mu {
            let expected = 0.25 + file.r * file.r;
            if !((mu - expected).abs() <= MU_REL_TOL * expected) {
                problems.push(format!("mu: stored value {mu} differs from 1/4 + R^2 = {expected}"));
            }
        }
        if !problems.is_empty() {
            return Err(Error::Input(problems.join("; ")));
        }
        Self::new(file.r, file.symmetry, file.normalization, file.coefficients, file.provenance)
    }

    /// Serializes back to the JSON schema (with `mu` recorded).
    pub fn to_json_string(&self) -> String {
        let file = MaassFile {
            format_version: 1,
            lattice: "PSL2Z".into(),
            r: self.r,
            mu: Some(self.mu()),
            symmetry: self.symmetry,
            normalization: self.normalization,
            coefficients: self.coefficients.clone(),
            provenance: self.provenance.clone(),
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }

    pub fn r(&self) -> f64 {
        self.r
    }
    /// `τ = 2iR`.
    pub fn tau(&self) -> C64 {
        C64::new(0.0, 2.0 * self.r)
    }
    pub fn param(&self) -> SpectralParam {
        SpectralParam::new(self.tau())
    }
    /// Laplace eigenvalue `1/4 + R²`.
    pub fn mu(&self) -> f64 {
        0.25 + self.r * self.r
    }
    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }
    pub fn normalization(&self) -> Normalization {
        self.normalization
    }
    pub fn provenance(&self) -> &str {
        &self.provenance
    }
    /// Number of stored coefficients.
    pub fn n_max(&self) -> usize {
        self.coefficients.len()
    }
    /// `a_1, a_2, …, a_{N_max}`.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }
    /// The measured constant `C` of the mean-square bound.
    pub fn mean_square_constant(&self) -> f64 {
        self.mean_square_constant
    }

    /// `a_n` for `n ≠ 0`, using the symmetry flag for negative `n`; `None`
    /// beyond the stored range.
    pub fn coefficient(&self, n: i64) -> Option<f64> {
        if n == 0 {
            return None;
        }
        let a = *self.coefficients.get(n.unsigned_abs() as usize - 1)?;
        Some(if n < 0 && self.symmetry == Symmetry::Odd { -a } else { a })
    }

    /// `|π^{1/2}/Γ((1−τ)/2)| = cosh(πR)^{1/2}`.
    pub fn whittaker_scale(&self) -> f64 {
        let x = PI * self.r;
        (0.5 * x + 0.5 * (0.5 * (1.0 + (-2.0 * x).exp())).ln()).exp()
    }

    /// `S(T) = Σ_{0<|n|≤T}|a_n|²` for `T ≤ N_max`.
    pub fn partial_square_sum(&self, t: usize) -> f64 {
        2.0 * self.coefficients.iter().take(t).map(|a| a * a).sum::<f64>()
    }

    fn measure_mean_square_constant(&self) -> f64 {
        let floor = 1.0 + self.tau().norm();
        let mut s = 0.0;
        let mut c: f64 = 0.0;
        for (k, a) in self.coefficients.iter().enumerate() {
            s += 2.0 * a * a;
            c = c.max(s / ((k + 1) as f64).max(floor));
        }
        c
    }

    /// A copy with `a_2, …, a_{N_max}` randomly permuted and given random
    /// signs (a negative control: the result is not automorphic).
    pub fn scrambled(&self, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coefficients = self.coefficients.clone();
        if coefficients.len() > 1 {
            coefficients[1..].shuffle(&mut rng);
            for a in coefficients[1..].iter_mut() {
                if rng.random_bool(0.5) {
                    *a = -*a;
                }
            }
        }
        let mut d = self.clone();
        d.coefficients = coefficients;
        d.provenance = format!("scrambled copy (seed {seed}) of: {}", self.provenance);
        d.mean_square_constant = d.measure_mean_square_constant();
        d
    }

    /// Bound on `Σ_{n>N} |a_n W̃_n(y)|` over both signs of `n`, from
    /// `|a_n|² ≤ C·max(n, 1+|τ|)` and `|K_{iR}(x)| ≤ K_0(x) ≤ (π/2x)^{1/2}e^{−x}`.
    fn expansion_tail(&self, n: usize, y: f64) -> f64 {
        let growth = (1.0 + self.tau().norm()) / (n as f64 + 1.0);
        self.whittaker_scale() * (self.mean_square_constant.max(f64::MIN_POSITIVE) * growth.max(1.0)).sqrt() * (-2.0 * PI * (n as f64 + 1.0) * y).exp()
            / (1.0 - (-2.0 * PI * y).exp())
    }

    /// The Fourier profile at height `y`: the terms `a_n W̃_n(y)`, `n ≥ 1`, up
    /// to the first `N` whose tail bound is below `tol`.
    pub fn whittaker_profile(&self, y: f64, tol: f64) -> Result<WhittakerProfile> {
        if !(y > 0.0 && y.is_finite()) {
            return Err(Error::Domain(format!("height must be positive, got {y}")));
        }
        if !(tol > 0.0) {
            return Err(Error::Usage(format!("tolerance must be positive, got {tol}")));
        }
        let tail_at = |n: usize| self.expansion_tail(n, y);
        let mut n = 1;
        // Never stop before the Bessel turning point 2πny = R.
        let turning = (self.r / (2.0 * PI * y)).ceil() as usize;
        while n < self.n_max() && (n < turning || tail_at(n) > tol) {
            n += 1;
        }
        let tail = tail_at(n);
        if tail > tol {
            let needed = ((self.whittaker_scale() * self.mean_square_constant.sqrt().max(1.0) / (tol * (1.0 - (-2.0 * PI * y).exp()))).ln() / (2.0 * PI * y)).ceil();
            return Err(Error::Truncation(format!(
                "N_max = {} leaves a tail bound {tail:.3e} > {tol:.1e} at y = {y}; about N_max = {needed} coefficients are needed",
                self.n_max()
            )));
        }
        let scale = self.whittaker_scale();
        let terms = (1..=n)
            .map(|k| Ok(self.coefficients[k - 1] * scale * y.sqrt() * bessel_k_imag(self.r, 2.0 * PI * k as f64 * y)?))
            .collect::<Result<Vec<f64>>>()?;
        Ok(WhittakerProfile { y, terms, tail, symmetry: self.symmetry })
    }
}

/// The real Fourier terms `a_n W̃_n(y)` at a fixed height, `W̃_n = |π^{1/2}/Γ((1−τ)/2)|·y^{1/2}K_{iR}(2πny)`.
#[derive(Clone, Debug)]
pub struct WhittakerProfile {
    pub y: f64,
    /// `terms[k] = a_{k+1} W̃_{k+1}(y)`.
    pub terms: Vec<f64>,
    /// Bound on the discarded part of the expansion.
    pub tail: f64,
    symmetry: Symmetry,
}

impl WhittakerProfile {
    /// `2Σ a_n W̃_n cos 2πnx` (even) or `2Σ a_n W̃_n sin 2πnx` (odd).
    pub fn eval(&self, x: f64) -> f64 {
        let th = 2.0 * PI * x.rem_euclid(1.0);
        let (s1, c1) = th.sin_cos();
        // Angle-addition recurrence for cos/sin of multiples.
        let (mut c, mut s) = (c1, s1);
        let mut sum = 0.0;
        for t in &self.terms {
            sum += t * if self.symmetry == Symmetry::Even { c } else { s };
            let cn = c * c1 - s * s1;
            let sn = s * c1 + c * s1;
            c = cn;
            s = sn;
        }
        2.0 * sum
    }

    /// `∫_0^1 |φ(x+iy)|² dx = 2Σ_{n≥1} (a_n W̃_n)²` (orthogonality).
    pub fn mean_square(&self) -> f64 {
        2.0 * self.terms.iter().map(|t| t * t).sum::<f64>()
    }
}

/// A truncated evaluation with its tail bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MaassValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// Reads and validates a JSON data file.
pub fn ingest_maass(path: impl AsRef<Path>) -> Result<MaassFormData> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    MaassFormData::from_json_str(&text).map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// `φ(x+iy)` (phase-normalized, see the module docs), truncated so that the
/// tail bound is below `tol`.
pub fn eval_maass(d: &MaassFormData, x: f64, y: f64, tol: f64) -> Result<MaassValue> {
    let p = d.whittaker_profile(y, tol)?;
    Ok(MaassValue { value: p.eval(x), tail_bound: p.tail, terms: p.terms.len() })
}

/// Sample points for the `z ↦ −1/z` check; each point and its image lie in
/// `y ≥ 0.75`.
pub const AUTOMORPHY_POINTS: [(f64, f64); 5] = [(0.2, 1.1), (-0.3, 1.0), (0.1, 0.95), (0.4, 0.95), (-0.45, 0.92)];

/// Result of the `z ↦ −1/z` check.
#[derive(Clone, Debug, Serialize)]
pub struct AutomorphyCertificate {
    /// `(x, y, φ(z), φ(−1/z))` per sample point.
    pub samples: Vec<(f64, f64, f64, f64)>,
    /// Sup of `|φ|` over a grid of the fundamental domain.
    pub scale: f64,
    /// `max |φ(z) − φ(−1/z)| / scale`.
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl AutomorphyCertificate {
    pub fn rows(&self, check_id: &str) -> Vec<VerdictRow> {
        self.samples
            .iter()
            .map(|&(x, y, a, b)| {
                let mut row = VerdictRow::identity(check_id, format!("z={x}+{y}i"), a, b, 0.0, self.tol);
                row.rel_discrepancy = (a - b).abs() / self.scale;
                row.verdict = row.rel_discrepancy <= self.tol;
                row
            })
            .collect()
    }
}

/// Sup of `|φ|` over a 9×9 grid of `{|x| ≤ 1/2, √3/2 ≤ y ≤ 2}`.
pub fn sup_scale(d: &MaassFormData) -> Result<f64> {
    let mut scale: f64 = 0.0;
    for j in 0..9 {
        let y = 0.87 + (2.0 - 0.87) * j as f64 / 8.0;
        let p = d.whittaker_profile(y, 1e-13)?;
        for i in 0..9 {
            scale = scale.max(p.eval(-0.5 + i as f64 / 8.0).abs());
        }
    }
    Ok(scale)
}

/// Compares `φ(z)` with `φ(−1/z)` at the given points, relative to the sup
/// scale of `φ`. Genuine Maass-form data passes at `tol = 1e−3`.
pub fn automorphy_certificate(d: &MaassFormData, points: &[(f64, f64)], tol: f64) -> Result<AutomorphyCertificate> {
    let scale = sup_scale(d)?;
    if !(scale > 0.0) {
        return Err(Error::Domain("the form vanishes on the sample grid".into()));
    }
    let mut samples = Vec::with_capacity(points.len());
    let mut residual: f64 = 0.0;
    for &(x, y) in points {
        let z = C64::new(x, y);
        let w = -z.inv();
        let a = eval_maass(d, x, y, 1e-13 * scale)?.value;
        let b = eval_maass(d, w.re, w.im, 1e-13 * scale)?.value;
        residual = residual.max((a - b).abs() / scale);
        samples.push((x, y, a, b));
    }
    Ok(AutomorphyCertificate { samples, scale, residual, tol, pass: residual <= tol })
}

/// Coset representatives of `Γ_∞\PSL(2,ℤ)`: coprime `(c, d)` modulo `±`,
/// with `c² + d² ≤ M²`.
#[derive(Clone, Debug)]
pub struct CosetTable {
    bound: u32,
    pairs: Vec<(f64, f64)>,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

impl CosetTable {
    pub fn new(bound: u32) -> Result<Self> {
        if bound < 10 {
            return Err(Error::Usage(format!("coset bound M must be >= 10, got {bound}")));
        }
        let m = bound as i64;
        let mut pairs = vec![(0.0, 1.0)];
        for c in 1..=m {
            for d in -m..=m {
                if c * c + d * d <= m * m && gcd(c, d) == 1 {
                    pairs.push((c as f64, d as f64));
                }
            }
        }
        Ok(CosetTable { bound, pairs })
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `Σ y^s |cz+d|^{−2s}` for several `s` at once, with a tail estimate per `s`.
    pub fn eisenstein_multi(&self, z: C64, s: &[C64]) -> Vec<EisensteinValue> {
        let (x, y) = (z.re, z.im);
        let ln_y = y.ln();
        let mut sums = vec![C64::new(0.0, 0.0); s.len()];
        for &(c, d) in &self.pairs {
            let (u, v) = (c * x + d, c * y);
            let l = ln_y - (u * u + v * v).ln();
            for (acc, &sk) in sums.iter_mut().zip(s) {
                *acc += (sk * l).exp();
            }
        }
        sums.into_iter().zip(s).map(|(value, &sk)| EisensteinValue { value, tail_bound: self.tail(z, sk.re) }).collect()
    }

    /// Integral-comparison estimate of the discarded terms: coprime pairs
    /// modulo ± have density `(6/π)ρ dρ` in the radius `ρ = |(c, d)|`, and
    /// `|cz+d|² ≥ λ_min ρ²` with `λ_min` the small eigenvalue of the form
    /// `[[x²+y², x], [x, 1]]`. A safety factor 2 covers lattice-count
    /// fluctuations at the cutoff.
    fn tail(&self, z: C64, sigma: f64) -> f64 {
        let (x, y) = (z.re, z.im);
        let a = x * x + y * y;
        let lam = 0.5 * ((a + 1.0) - ((a - 1.0) * (a - 1.0) + 4.0 * x * x).sqrt());
        let m = self.bound as f64;
        2.0 * (y / lam).powf(sigma) * (6.0 / PI) * m.powf(2.0 - 2.0 * sigma) / (2.0 * sigma - 2.0)
    }
}

/// A truncated Eisenstein sum with its tail estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EisensteinValue {
    pub value: C64,
    pub tail_bound: f64,
}

/// `E(z,s) = Σ_{Γ_∞\Γ} Im(γz)^s` by direct summation over coprime pairs with
/// `c² + d² ≤ M²`. Fails with an accuracy error when the tail estimate
/// exceeds `rel_tol·|E|`.
pub fn eisenstein_direct(z: C64, s: C64, bound: u32, rel_tol: f64) -> Result<EisensteinValue> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("z must lie in the upper half-plane, got {z}")));
    }
    if !(s.re > 1.3) {
        return Err(Error::Domain(format!("direct summation needs Re s > 1.3, got {s}")));
    }
    let table = CosetTable::new(bound)?;
    let v = table.eisenstein_multi(z, &[s])[0];
    if v.tail_bound > rel_tol * v.value.norm() {
        return Err(Error::accuracy(format!("Eisenstein tail exceeds tolerance at M = {bound}; increase M"), v.value, v.tail_bound));
    }
    Ok(v)
}

/// The Dirichlet series `D(s) = Σ_{n>0} |a_n|² n^{−s}` with its tail bound
/// `C·s·N^{1−s}/(s−1)` (partial summation with `Σ_{n≤T}|a_n|² ≤ C·T`).
pub fn rs_dirichlet(d: &MaassFormData, s: f64) -> Result<(f64, f64)> {
    if !(s > 1.3) {
        return Err(Error::Domain(format!("the series is used for s > 1.3, got {s}")));
    }
    let value = d.coefficients.iter().enumerate().map(|(k, a)| a * a * ((k + 1) as f64).powf(-s)).sum();
    let n = d.n_max() as f64;
    let tail = d.mean_square_constant * s * n.powf(1.0 - s) / (s - 1.0);
    Ok((value, tail))
}

/// `∫_0^∞ u^{s−1} K_{iR}(u)² du = 2^{s−3} Γ(s/2)² Γ(s/2+iR) Γ(s/2−iR) / Γ(s)`.
pub fn bessel_square_moment_closed(s: f64, r: f64) -> Result<f64> {
    let h = C64::new(s / 2.0, 0.0);
    let v = 2f64.powf(s - 3.0) * gamma_complex(h)? * gamma_complex(h)? * gamma_complex(h + C64::new(0.0, r))? * gamma_complex(h - C64::new(0.0, r))?
        / gamma_complex(C64::new(s, 0.0))?;
    Ok(v.re)
}

/// The same moment by quadrature. Near `u = 0`, `K_{iR}(u)²` carries the
/// oscillations `u^{±2iR}`, which the singular-point map handles.
pub fn bessel_square_moment(s: f64, r: f64, rel_tol: f64) -> Result<(f64, f64)> {
    let err = std::cell::RefCell::new(None);
    let f = |n: crate::numerics::Node| {
        let u = n.t;
        match bessel_k_imag(r, u) {
            Ok(k) => C64::new(u.powf(s - 1.0) * k * k, 0.0),
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                C64::new(0.0, 0.0)
            }
        }
    };
    let scale = (-PI * r).exp();
    let spec = QuadratureSpec::new(rel_tol, 1e-3 * rel_tol * scale).with_singular([SingularPoint::new(0.0, C64::new(s - 1.0, 2.0 * r))]);
    // Beyond the turning point u = R the integrand decays like e^{−2u}.
    let split = r.max(1.0);
    let upper = split + 0.5 * (60.0 + (s + 1.0) * (split + 60.0).ln()) + 40.0;
    let near = integrate(&f, 0.0, split, &spec)?;
    let far = integrate(&f, split, upper, &spec)?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(((near.value + far.value).re, near.error + far.error))
}

/// Accuracy controls for [`unfold_check`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UnfoldOptions {
    /// Coset bound of the Eisenstein sums.
    pub coset_bound: u32,
    /// Gauss–Legendre order per panel (the check is repeated at 1.5× this
    /// order to estimate the quadrature error).
    pub order: usize,
    /// Relative tolerance of the moment quadrature.
    pub rel_tol: f64,
}

impl Default for UnfoldOptions {
    fn default() -> Self {
        UnfoldOptions { coset_bound: 200, order: 20, rel_tol: 1e-10 }
    }
}

/// Both sides of the unfolding identity at one `s`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralSideValue {
    pub s: f64,
    /// `D(s)` and its tail bound.
    pub dirichlet: f64,
    pub dirichlet_tail: f64,
    /// `∫_0^∞ W̃_1(y)² y^{s−1} dy/y` by quadrature, and its closed form.
    pub base_moment: f64,
    pub base_moment_closed: f64,
    /// `2·D(s)·(base moment)`: the strip integral in Parseval form.
    pub unfolded: f64,
    pub unfolded_tail: f64,
    /// `∫_F |φ|² E(z,s) dμ` over the fundamental domain.
    pub pairing: f64,
    /// Quadrature-difference plus Eisenstein-tail bound for the pairing.
    pub pairing_error: f64,
    /// `pairing/unfolded − 1`.
    pub rel_discrepancy: f64,
    /// Relative gap between the moment quadrature and its closed form.
    pub moment_discrepancy: f64,
}

impl SpectralSideValue {
    pub fn ratio(&self) -> f64 {
        self.pairing / self.unfolded
    }

    pub fn rows(&self, tol: f64) -> Vec<VerdictRow> {
        let params = format!("s={}", self.s);
        vec![
            VerdictRow::identity("rs-unfold:pairing-vs-unfolded", params.clone(), self.pairing, self.unfolded, self.pairing_error + self.unfolded_tail, tol),
            VerdictRow::identity("rs-unfold:moment-quadrature-vs-closed", params, self.base_moment, self.base_moment_closed, 0.0, 1e-6),
        ]
    }
}

/// `∫_F |φ|² E(z,s) dμ` for several `s` on one tensor Gauss–Legendre grid of
/// order `order`, over `{0 ≤ x ≤ 1/2, y ≥ √(1−x²)}` (doubled by the `x ↦ −x`
/// symmetry), truncated at a height where `|φ|²` is negligible.
fn fundamental_domain_pairing(d: &MaassFormData, s: &[f64], table: &CosetTable, order: usize, top: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (gx, gw) = gauss_legendre(order);
    let svals: Vec<C64> = s.iter().map(|&v| C64::new(v, 0.0)).collect();
    let breaks = [1.25, 2.0, 3.0, top];
    let per_x = |i: usize| -> Result<(Vec<f64>, Vec<f64>)> {
        let x = 0.25 * (1.0 + gx[i]);
        let wx = 0.25 * gw[i];
        let mut acc = vec![0.0; s.len()];
        let mut tail = vec![0.0; s.len()];
        let mut lo = (1.0 - x * x).sqrt();
        for &hi in &breaks {
            for j in 0..order {
                let y = lo + 0.5 * (hi - lo) * (1.0 + gx[j]);
                let wy = 0.5 * (hi - lo) * gw[j];
                let phi = d.whittaker_profile(y, 1e-14)?.eval(x);
                let es = table.eisenstein_multi(C64::new(x, y), &svals);
                let w = 2.0 * wx * wy * phi * phi / (y * y);
                for ((a, t), e) in acc.iter_mut().zip(tail.iter_mut()).zip(&es) {
                    *a += w * e.value.re;
                    *t += w.abs() * e.tail_bound;
                }
            }
            lo = hi;
        }
        Ok((acc, tail))
    };
    let parts = (0..order).into_par_iter().map(per_x).collect::<Result<Vec<_>>>()?;
    let mut total = vec![0.0; s.len()];
    let mut tail = vec![0.0; s.len()];
    for (acc, t) in parts {
        for k in 0..s.len() {
            total[k] += acc[k];
            tail[k] += t[k];
        }
    }
    Ok((total, tail))
}

/// The unfolding identity
/// `∫_F |φ|² E(z,s) dμ = ∫_0^∞ ∫_0^1 |φ|² dx y^{s−2} dy = 2·D(s)·∫_0^∞ W̃_1(y)² y^{s−2} dy`
/// at several real `s > 1.3`. The left side is a 2D quadrature over the
/// fundamental domain with direct Eisenstein sums; the right side uses the
/// substitution `y ↦ y/n`, which turns the moment of `W̃_n` into `n^{−s}`
/// times the moment of `W̃_1`.
pub fn unfold_check(d: &MaassFormData, s_list: &[f64], opts: &UnfoldOptions) -> Result<Vec<SpectralSideValue>> {
    if let Some(&s) = s_list.iter().find(|&&s| !(s > 1.3)) {
        return Err(Error::Domain(format!("unfolding is checked for s > 1.3, got {s}")));
    }
    if opts.order < 4 {
        return Err(Error::Usage(format!("quadrature order must be >= 4, got {}", opts.order)));
    }
    let table = CosetTable::new(opts.coset_bound)?;
    // Height above which |φ|² < 1e−16 of its scale: the n = 1 term decays like
    // e^{−2πy} beyond the turning point.
    let scale = d.whittaker_scale() * d.mean_square_constant.sqrt().max(1.0);
    let top = ((scale.ln() + 40.0) / (2.0 * PI)).max(d.r / (2.0 * PI) + 3.0).max(4.0);
    let (coarse, tail) = fundamental_domain_pairing(d, s_list, &table, opts.order, top)?;
    let (fine, _) = fundamental_domain_pairing(d, s_list, &table, opts.order * 3 / 2, top)?;
    let ws = d.whittaker_scale();
    s_list
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let (dir, dir_tail) = rs_dirichlet(d, s)?;
            let (m, m_err) = bessel_square_moment(s, d.r, opts.rel_tol)?;
            let closed = bessel_square_moment_closed(s, d.r)?;
            let base = ws * ws * (2.0 * PI).powf(-s);
            let base_moment = base * m;
            let unfolded = 2.0 * dir * base_moment;
            let unfolded_tail = 2.0 * (dir_tail * base_moment + dir * base * m_err);
            let pairing = fine[k];
            Ok(SpectralSideValue {
                s,
                dirichlet: dir,
                dirichlet_tail: dir_tail,
                base_moment,
                base_moment_closed: base * closed,
                unfolded,
                unfolded_tail,
                pairing,
                pairing_error: (fine[k] - coarse[k]).abs() + tail[k],
                rel_discrepancy: pairing / unfolded - 1.0,
                moment_discrepancy: rel(m, closed),
            })
        })
        .collect()
}

/// One spherical coefficient `b_{n,z₀}` extracted at radius `r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SphericalCoefficient {
    pub n: i64,
    pub r: f64,
    /// `b_{n,z₀}`; for odd `n` no K-type exists and this is the raw angular
    /// coefficient, which must vanish.
    pub value: C64,
    /// The angular Fourier coefficient of `φ` on the circle.
    pub angular: C64,
    /// `P_{τ,n}(r)` (1 for odd `n`).
    pub profile: C64,
}

/// The point `h·k_θ·a_r·i`, with `h = [[√y₀, x₀/√y₀], [0, 1/√y₀]]` (so `h·i = z₀`),
/// `k_θ` the rotation by `θ` and `a_r = diag(e^{r/2}, e^{−r/2})`: the geodesic
/// circle of radius `r` about `z₀`, traversed twice as `θ` runs over `[0, 2π)`.
pub fn geodesic_circle_point(z0: C64, theta: f64, r: f64) -> C64 {
    let (s, c) = theta.sin_cos();
    let w = C64::new(0.0, r.exp());
    let kw = (w * c - s) / (w * s + c);
    z0.re + z0.im * kw
}

/// `b_{n,z₀} = [(1/2π)∫_0^{2π} φ(h k_θ a_r·i) e^{−inθ} dθ] / P_{τ,n}(r)`.
///
/// The angular integral uses the periodic trapezoid rule. Fails with a
/// conditioning error when `|P_{τ,n}(r)| < 1e−8`.
pub fn spherical_extract(d: &MaassFormData, z0: C64, n: i64, r: f64, rel_tol: f64) -> Result<SphericalCoefficient> {
    if !(z0.im > 0.0) {
        return Err(Error::Domain(format!("z0 must lie in the upper half-plane, got {z0}")));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    let scale = sup_scale(d)?.max(f64::MIN_POSITIVE);
    let err = std::cell::RefCell::new(None);
    let nf = n as f64;
    let f = |th: f64| {
        let z = geodesic_circle_point(z0, th, r);
        match eval_maass(d, z.re, z.im, 1e-14 * scale) {
            Ok(v) => C64::from_polar(v.value, -nf * th),
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                C64::new(0.0, 0.0)
            }
        }
    };
    let q = periodic_trapezoid_resolving(&f, 0.0, 2.0 * PI, rel_tol, 1e-13 * scale, nf.abs())?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let angular = q.value / (2.0 * PI);
    if n % 2 != 0 {
        return Ok(SphericalCoefficient { n, r, value: angular, angular, profile: C64::new(1.0, 0.0) });
    }
    let profile = spherical_p(d.param(), n, r)?;
    if profile.norm() < 1e-8 {
        return Err(Error::Conditioning(format!("|P_(tau,{n})({r})| = {:.2e} < 1e-8; use a smaller radius or a different n", profile.norm())));
    }
    Ok(SphericalCoefficient { n, r, value: angular / profile, angular, profile })
}

/// Partial sums `S(T) = Σ_{0<|n|≤T}|a_n|²` with a fitted growth slope
/// (expected ≤ 1.1), plus descriptive window sums
/// `Σ_{|k−T|≤T^{2/3}}|a_k|²` over both signs of `k`.
pub fn mean_square_report(d: &MaassFormData, t_list: &[usize]) -> Result<BoundFitReport> {
    if let Some(&t) = t_list.iter().find(|&&t| t == 0 || t > d.n_max()) {
        return Err(Error::Usage(format!("T must lie in [1, N_max = {}], got {t}", d.n_max())));
    }
    let t0 = std::time::Instant::now();
    let grid: Vec<f64> = t_list.iter().map(|&t| t as f64).collect();
    let sums: Vec<f64> = t_list.iter().map(|&t| d.partial_square_sum(t)).collect();
    let windows: Vec<f64> = t_list
        .iter()
        .map(|&t| {
            let h = (t as f64).powf(2.0 / 3.0);
            let lo = ((t as f64 - h).ceil().max(1.0)) as usize;
            let hi = ((t as f64 + h).floor() as usize).min(d.n_max());
            2.0 * (lo..=hi).map(|k| d.coefficients[k - 1].powi(2)).sum::<f64>()
        })
        .collect();
    let mut report = BoundFitReport::new("mean-square");
    if sums.iter().all(|&v| v > 0.0) && t_list.len() >= 2 {
        report.series.push(FitSeries::slope("partial sums S(T)", grid.clone(), sums, 1.0, 0.1));
    } else {
        report.series.push(FitSeries::bounded("partial sums S(T)", grid.clone(), sums, f64::INFINITY));
    }
    report.series.push(FitSeries::bounded("window sums (descriptive)", grid, windows, f64::INFINITY));
    report.runtime_s = t0.elapsed().as_secs_f64();
    Ok(report)
}
