//! Quadrature engines and special functions used by every other module.

pub mod accel;
pub mod quad;
pub mod special;

pub use accel::wynn_epsilon;
pub use quad::{gauss_legendre, integrate, integrate_to_infinity, periodic_trapezoid, periodic_trapezoid_resolving, tanh_sinh, Node, QuadResult, QuadratureSpec, SingularPoint};
pub use special::{abs_pow, bessel_j0_y0, bessel_k_imag, gamma_complex, gamma_factor, gamma_s_tau, ln_gamma_complex};
