//! Periodic-box Fourier machinery: grids, fields, transforms, spectral
//! derivatives, fractional powers `Λ^s` and two-thirds dealiasing.

mod fft;
mod field;
mod grid;
mod ops;

pub use field::{forward_many, inverse_many, Field, Repr};
pub use grid::{make_grid, SpectralGrid, MIN_POINTS, TWO_PI};
pub use ops::{
    apply_multiplier, check_zero_mean, dealias, dealias_vec, derivative_norm_sq, divergence, grad_div, gradient,
    lambda_pow, laplacian, partial, second_partial, sym_gradient, velocity_gradient, VecField,
    ZERO_MEAN_TOL,
};
