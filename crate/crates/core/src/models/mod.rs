//! Perturbation forms of the isentropic and full compressible
//! Navier–Stokes systems around `(ρ, u, T) = (1, 0, 1)`.
//!
//! Both systems are written in velocity form: `∂t U = L U + N(U)` with a
//! constant-coefficient linear part `L` (see [`linear_symbol`]) and
//! nonlinear terms evaluated pseudo-spectrally.

mod nonlinear;
mod params;
mod symbol;

pub use nonlinear::{
    advective_derivative, g_of_a, h_of_a, linear_tendency, material_derivative, nonlinear,
    nonlinear_fcns, nonlinear_icns, relative_entropy, time_derivative, ISOTHERMAL_GAMMA_TOL,
};
pub use params::{ModelKind, ModelParams, State, Tendency};
pub use symbol::{linear_symbol, longitudinal_block, transverse_rate};
