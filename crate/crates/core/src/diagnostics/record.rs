use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{material_derivative, ModelKind, ModelParams, State, Tendency};
use crate::spectral::Field;

use super::energy::{energy_e1, energy_e2, functional_x1, functional_x2, neg_energy, MeanPolicy};
use super::norms::{fourier_split, hk_norm, h_s_full, splitting_residual};

/// Version of the column layout produced by [`DiagSchema`].
pub const SCHEMA_VERSION: u32 = 1;

/// Knobs for [`snapshot`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagSettings {
    #[serde(rename = "s")]
    pub s_values: Vec<f64>,
    /// Cross-term weight of `E₁²`; `None` selects `0.1·min(1, P'(1))`.
    pub delta0: Option<f64>,
    pub delta: f64,
    /// Splitting radius parameter `R` in `|2πξ|² ≤ R/(1+t)`.
    pub split_r: f64,
}

impl Default for DiagSettings {
    fn default() -> Self {
        Self {
            s_values: vec![0.25, 0.5, 1.0, 1.4],
            delta0: None,
            delta: 0.1,
            split_r: 1.0,
        }
    }
}

impl DiagSettings {
    pub fn validate(&self) -> Result<()> {
        if self.s_values.is_empty() {
            return Err(Error::InvalidParameter("no s values".into()));
        }
        for &s in &self.s_values {
            if !(s > 0.0 && s < 1.5) {
                return Err(Error::InvalidParameter(format!("s = {s} outside (0, 3/2)")));
            }
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter(format!("delta = {} outside (0, 1)", self.delta)));
        }
        if !(self.split_r > 0.0) {
            return Err(Error::InvalidParameter(format!("split R = {} must be positive", self.split_r)));
        }
        Ok(())
    }

    pub fn delta0_for(&self, params: &ModelParams) -> f64 {
        self.delta0.unwrap_or(0.1 * params.p_prime1().min(1.0))
    }
}

const HEAD: &[&str] = &[
    "t",
    "mass",
    "l2_a",
    "l2_u",
    "l2_theta",
    "grad_a",
    "grad_u",
    "grad_theta",
    "hess_a",
    "hess_u",
    "hess_theta",
    "h1_a",
    "h1_u",
    "h1_theta",
    "l2_udot",
    "mean_u",
    "mean_theta",
];

const PER_S: &[&str] = &["neg_a", "neg_u", "neg_theta", "neg_udot", "neg_energy"];

const TAIL: &[&str] = &[
    "e1_sq",
    "e2_sq",
    "x1",
    "x2",
    "split_low",
    "split_high",
    "split_residual",
    "rel_entropy",
    "min_density",
    "min_temperature",
];

/// Column label for an `s` value: `0.25 → "0.25"`, `1 → "1.0"`.
pub fn s_label(s: f64) -> String {
    format!("{s:?}")
}

/// Ordered column names for a given list of `s` values.
///
/// Norm columns (`l2_*`, `grad_*`, `hess_*`, `h1_*`, `neg_{a,u,theta,udot}_s*`)
/// are unsquared norms; `neg_energy_s*`, `e1_sq`, `e2_sq`, `x1`, `x2` and the
/// split columns are squared quantities. `mean_u` is the Euclidean length
/// of the mean velocity. Temperature columns are 0 (and `min_temperature`
/// is 1) for the isentropic system.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagSchema {
    names: Vec<String>,
}

impl DiagSchema {
    pub fn new(s_values: &[f64]) -> Self {
        let mut names: Vec<String> = HEAD.iter().map(|s| s.to_string()).collect();
        for &s in s_values {
            let label = s_label(s);
            names.extend(PER_S.iter().map(|p| format!("{p}_s{label}")));
        }
        names.extend(TAIL.iter().map(|s| s.to_string()));
        Self { names }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// One diagnostic sample, values in [`DiagSchema`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagRecord {
    pub t: f64,
    pub values: Vec<f64>,
}

impl DiagRecord {
    pub fn get(&self, schema: &DiagSchema, name: &str) -> Option<f64> {
        schema.index_of(name).map(|i| self.values[i])
    }
}

/// Evaluates every tracked quantity on `state`.
///
/// `tendency` must be the full time derivative at `state` (linear plus
/// nonlinear), from which `u̇ = ∂t u + u·∇u` is formed.
pub fn snapshot(
    state: &State,
    tendency: &Tendency,
    params: &ModelParams,
    settings: &DiagSettings,
) -> Result<DiagRecord> {
    let label = |what: &'static str| move |e: Error| Error::InvalidParameter(format!("{what}: {e}"));
    let zero = Field::constant(state.grid(), 0.0);
    let theta = state.theta.as_ref().unwrap_or(&zero);
    let udot = material_derivative(state, &tendency.du)?;
    let vec_norm = |k: u32| -> Result<f64> {
        Ok(state
            .u
            .0
            .iter()
            .map(|c| hk_norm(c, k).map(|v| v * v))
            .sum::<Result<f64>>()?
            .sqrt())
    };
    let vec_h1 = state
        .u
        .0
        .iter()
        .map(|c| h_s_full(c, 1).map(|v| v * v))
        .sum::<Result<f64>>()?
        .sqrt();
    let mean_u = state.u.0.iter().map(|c| c.mean().powi(2)).sum::<f64>().sqrt();

    let mut v = vec![
        state.t,
        state.a.integral(),
        hk_norm(&state.a, 0)?,
        vec_norm(0)?,
        hk_norm(theta, 0)?,
        hk_norm(&state.a, 1)?,
        vec_norm(1)?,
        hk_norm(theta, 1)?,
        hk_norm(&state.a, 2)?,
        vec_norm(2)?,
        hk_norm(theta, 2)?,
        h_s_full(&state.a, 1)?,
        vec_h1,
        h_s_full(theta, 1)?,
        udot.l2_norm(),
        mean_u,
        theta.mean(),
    ];
    for &s in &settings.s_values {
        let ne = neg_energy(state, s, params.gamma, Some(&udot), MeanPolicy::Project)
            .map_err(label("negative norm"))?;
        v.extend([
            ne.a.sqrt(),
            ne.u.sqrt(),
            ne.theta.sqrt(),
            ne.udot.unwrap_or(0.0).sqrt(),
            ne.energy,
        ]);
    }
    let e1 = energy_e1(state, settings.delta0_for(params), params.p_prime1())
        .map_err(label("E1"))?;
    let e2 = energy_e2(state, settings.delta).map_err(label("E2"))?;
    let mut low = 0.0;
    let mut high = 0.0;
    for f in std::iter::once(&state.a).chain(state.u.0.iter()).chain(state.theta.iter()) {
        let (l, h) = fourier_split(f, settings.split_r, state.t)?;
        low += l;
        high += h;
    }
    let entropy_gamma = match state.kind() {
        ModelKind::Icns => params.gamma,
        ModelKind::Fcns => 1.0,
    };
    v.extend([
        e1.value,
        e2.value,
        functional_x1(state, &udot),
        functional_x2(state, &udot),
        low,
        high,
        splitting_residual(&state.u, settings.split_r, state.t)?,
        crate::models::relative_entropy(&state.a, entropy_gamma)?,
        state.min_density(),
        state.min_temperature(),
    ]);
    Ok(DiagRecord { t: state.t, values: v })
}
