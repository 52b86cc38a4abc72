//! Pseudo-spectral laboratory for the large-time behaviour of the
//! compressible Navier–Stokes equations written around the constant state
//! `(ρ, u, T) = (1, 0, 1)`.
//!
//! The crate integrates the isentropic (ICNS) and full heat-conductive
//! (FCNS) perturbation systems on a periodic box, tracks fractional and
//! negative Sobolev norms together with the energy functionals used in
//! decay proofs, computes whole-space linear decay curves by radial
//! quadrature, fits algebraic decay exponents, and checks the classical
//! interpolation inequalities on generated fields.
//!
//! Frequency convention: `Λ^s ↔ |ξ|^s` with `ξ = k / L`, and `∇ ↔ 2πiξ`.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod fitting;
pub mod inequalities;
pub mod integrator;
pub mod matfun;
pub mod models;
pub mod oracle;
pub mod spectral;

pub use error::{Error, Result};
