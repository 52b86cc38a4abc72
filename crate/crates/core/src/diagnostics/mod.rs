//! Norms, energy functionals and per-sample records.
//!
//! All norms use `‖f‖²_{L²} = L³ Σ |f̂(ξ)|²`. Integer-order derivative
//! norms carry the `2π` of `∇ ↔ 2πiξ`; fractional norms `‖Λ^s f‖` do not.

mod energy;
mod norms;
mod record;

pub use energy::{
    energy_e1, energy_e2, functional_x1, functional_x2, neg_energy, Enveloped, MeanPolicy,
    NegEnergy,
};
pub use norms::{
    cross_term, fourier_split, fourier_split_vec, h_s_full, hk_norm, sobolev_norm,
    splitting_residual, vec_derivative_norm_sq, MAX_DERIVATIVE_ORDER,
};
pub use record::{s_label, snapshot, DiagRecord, DiagSchema, DiagSettings, SCHEMA_VERSION};
