use nalgebra::DMatrix;
use num_complex::Complex64;

use super::params::{ModelKind, ModelParams};
use crate::spectral::TWO_PI;

/// Linear symbol `M(ξ)` with `d/dt (â, û, θ̂) = M(ξ) (â, û, θ̂)`.
///
/// Unknown ordering is `(a, u₁, u₂, u₃)` for ICNS and `(a, u₁, u₂, u₃, θ)`
/// for FCNS. With `η = 2πξ`:
///
/// ```text
/// â'  = -i η·û
/// û'  = -μ|η|² û - (μ+λ) η (η·û) - i P'(1) η â  [- i η θ̂]
/// θ̂'  = -|η|² θ̂ - i η·û
/// ```
pub fn linear_symbol(xi: [f64; 3], params: &ModelParams) -> DMatrix<Complex64> {
    let dim = match params.kind {
        ModelKind::Icns => 4,
        ModelKind::Fcns => 5,
    };
    let eta = xi.map(|x| TWO_PI * x);
    let eta2: f64 = eta.iter().map(|e| e * e).sum();
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for j in 0..3 {
        m[(0, 1 + j)] = c(0.0, -eta[j]);
    }
    for i in 0..3 {
        m[(1 + i, 1 + i)] += c(-params.mu * eta2, 0.0);
        for j in 0..3 {
            m[(1 + i, 1 + j)] += c(-(params.mu + params.lambda) * eta[i] * eta[j], 0.0);
        }
        m[(1 + i, 0)] = c(0.0, -params.p_prime1() * eta[i]);
    }
    if params.kind == ModelKind::Fcns {
        for i in 0..3 {
            m[(1 + i, 4)] = c(0.0, -eta[i]);
            m[(4, 1 + i)] = c(0.0, -eta[i]);
        }
        m[(4, 4)] = c(-eta2, 0.0);
    }
    m
}

/// Real form of the longitudinal block at derivative modulus `ρ = |2πξ|`,
/// acting on `(â, y, θ̂)` with `y = -i ξ̂·û`:
///
/// ```text
/// ICNS: [[0, ρ], [-γρ, -(2μ+λ)ρ²]]
/// FCNS: [[0, ρ, 0], [-ρ, -(2μ+λ)ρ², -ρ], [0, ρ, -ρ²]]
/// ```
///
/// The substitution `û_l = i y` makes the block real, so its exponential
/// is real as well.
pub fn longitudinal_block(rho: f64, params: &ModelParams) -> DMatrix<f64> {
    let nu = params.nu();
    match params.kind {
        ModelKind::Icns => DMatrix::from_row_slice(
            2,
            2,
            &[0.0, rho, -params.gamma * rho, -nu * rho * rho],
        ),
        ModelKind::Fcns => DMatrix::from_row_slice(
            3,
            3,
            &[
                0.0,
                rho,
                0.0,
                -rho,
                -nu * rho * rho,
                -rho,
                0.0,
                rho,
                -rho * rho,
            ],
        ),
    }
}

/// Decay rate `-μρ²` of each transverse velocity component.
pub fn transverse_rate(rho: f64, params: &ModelParams) -> f64 {
    -params.mu * rho * rho
}
