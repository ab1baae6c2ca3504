//! Numerical harmonic analysis on PGL(2,ℝ): principal-series models, model
//! functionals, trilinear kernels, the ♭/♯ integral transforms, two-term
//! stationary-phase asymptotics, test-vector families and PSL(2,ℤ) Maass-form
//! checks (Rankin–Selberg unfolding, spherical coefficients).

pub mod asymptotics;
pub mod automorphic;
pub mod error;
pub mod numerics;
pub mod principal_series;
pub mod report;
pub mod suites;
pub mod test_vectors;
pub mod transforms;
pub mod trilinear;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
