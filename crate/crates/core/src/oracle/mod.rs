//! Whole-space decay curves of the linearized systems.
//!
//! Squared norms are radial integrals over `ρ = |2πξ|` of the mode-wise
//! propagator applied to a Gaussian-enveloped power-law spectrum. They
//! give box-free reference rates for the fitting module.

mod curve;
mod quadrature;

pub use curve::{
    heat_closed_form, linear_decay_curve, lp_decay_exponent, negative_norm_curve, sigma_for_lp,
    weighted_decay_curve, ComponentWeights, CurveOptions, CurvePoint, SpectrumProfile,
};
pub use quadrature::{integrate_adaptive, QuadOptions};
