//! Exponential time differencing for `∂t U = L U + N(U)`.
//!
//! The linear part is propagated exactly per Fourier mode: transverse
//! velocity by the scalar heat factor `e^{-μρ²dt}`, the longitudinal
//! block `(â, -i ξ̂·û, θ̂)` by small dense matrix functions cached per
//! `|k|²` shell.

mod propagator;
mod run;
mod stepper;

pub use propagator::{build_propagator, Phi, PropagatorCache};
pub use run::{integrate, integrate_with_cache, RunOutput, TimeSettings};
pub use stepper::{cfl_limit, step, step_with, StepOptions, CFL_SAFETY};
