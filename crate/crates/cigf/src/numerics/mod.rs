//! Numerical kernels: special functions, adaptive quadrature in one and
//! two dimensions, series summation, and integer/fractional numerical
//! differentiation. Everything here is a pure function of its inputs.

pub mod diff;
pub mod quad;
pub mod series;
pub mod special;

pub use diff::{caputo_deriv, central_diff, central_diff_richardson, FracDiffSpec};
pub use quad::{integrate_1d, integrate_2d, tanh_sinh, Estimate, QuadSpec, Region2};
pub use series::{alternating_series, SeriesSum};
pub use special::{
    beta, gen_binomial, incomplete_beta, log_gamma, reg_gamma_q, reg_incomplete_beta,
    upper_incomplete_gamma, upper_incomplete_gamma_scaled,
};
