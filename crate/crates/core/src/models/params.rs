use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Field, Repr, SpectralGrid, VecField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Isentropic system, unknowns `(a, u)`, pressure `ρ^γ`.
    Icns,
    /// Full heat-conductive system, unknowns `(a, u, θ)`, pressure `ρT`.
    Fcns,
}

impl ModelKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "icns" => Ok(Self::Icns),
            "fcns" => Ok(Self::Fcns),
            other => Err(Error::Config(format!("unknown model kind {other:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Icns => "icns",
            Self::Fcns => "fcns",
        }
    }

    /// Size of the longitudinal block `(a, u·ξ̂[, θ])`.
    pub fn longitudinal_dim(self) -> usize {
        match self {
            Self::Icns => 2,
            Self::Fcns => 3,
        }
    }
}

/// Viscosities and pressure law.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub mu: f64,
    pub lambda: f64,
    /// Adiabatic exponent; only read by the isentropic system.
    pub gamma: f64,
    pub kind: ModelKind,
}

impl ModelParams {
    pub fn new(kind: ModelKind, mu: f64, lambda: f64, gamma: f64) -> Result<Self> {
        let p = Self {
            mu,
            lambda,
            gamma,
            kind,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn fcns(mu: f64, lambda: f64) -> Result<Self> {
        Self::new(ModelKind::Fcns, mu, lambda, 1.0)
    }

    pub fn icns(mu: f64, lambda: f64, gamma: f64) -> Result<Self> {
        Self::new(ModelKind::Icns, mu, lambda, gamma)
    }

    /// `μ > 0`, `2μ + 3λ ≥ 0`, `γ ≥ 1`.
    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::InvalidParameter(format!("mu must be > 0, got {}", self.mu)));
        }
        if !(2.0 * self.mu + 3.0 * self.lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "viscosities violate 2mu + 3lambda >= 0 (mu={}, lambda={})",
                self.mu, self.lambda
            )));
        }
        if self.kind == ModelKind::Icns && !(self.gamma >= 1.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gamma must be >= 1, got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    /// `P'(1)`: `γ` for ICNS, `1` for FCNS (`P = ρT` at `T = 1`).
    pub fn p_prime1(&self) -> f64 {
        match self.kind {
            ModelKind::Icns => self.gamma,
            ModelKind::Fcns => 1.0,
        }
    }

    /// Longitudinal viscosity `2μ + λ`.
    pub fn nu(&self) -> f64 {
        2.0 * self.mu + self.lambda
    }

    /// Viscosity hypothesis `μ > λ/2` under which the large-data decay
    /// theory is formulated. Reported, never enforced.
    pub fn viscosity_hypothesis_holds(&self) -> bool {
        self.mu > 0.5 * self.lambda
    }
}

/// Perturbation `(a, u, θ) = (ρ - 1, u, T - 1)` at time `t`.
#[derive(Clone, Debug)]
pub struct State {
    pub a: Field,
    pub u: VecField,
    pub theta: Option<Field>,
    pub t: f64,
}

impl State {
    pub fn zeros(grid: &Arc<SpectralGrid>, kind: ModelKind) -> Self {
        Self {
            a: Field::zeros(grid, Repr::Spectral),
            u: VecField::zeros(grid, Repr::Spectral),
            theta: match kind {
                ModelKind::Icns => None,
                ModelKind::Fcns => Some(Field::zeros(grid, Repr::Spectral)),
            },
            t: 0.0,
        }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        self.a.grid()
    }

    pub fn kind(&self) -> ModelKind {
        if self.theta.is_some() {
            ModelKind::Fcns
        } else {
            ModelKind::Icns
        }
    }

    pub fn to_spectral(&self) -> State {
        State {
            a: self.a.to_spectral(),
            u: self.u.to_spectral(),
            theta: self.theta.as_ref().map(Field::to_spectral),
            t: self.t,
        }
    }

    pub fn scaled(&self, c: f64) -> State {
        State {
            a: self.a.scaled(c),
            u: self.u.scaled(c),
            theta: self.theta.as_ref().map(|f| f.scaled(c)),
            t: self.t,
        }
    }

    pub fn min_density(&self) -> f64 {
        1.0 + self.a.min_value()
    }

    /// `1 + min θ`, or exactly 1 for the isentropic system.
    pub fn min_temperature(&self) -> f64 {
        self.theta.as_ref().map_or(1.0, |th| 1.0 + th.min_value())
    }

    /// Fails with a labelled error unless `1 + a > floor` and
    /// `1 + θ > floor` everywhere.
    pub fn check_positivity(&self, floor: f64) -> Result<()> {
        let rho = self.min_density();
        if rho <= floor {
            return Err(Error::DensityNonpositive { min: rho, field: "a" });
        }
        let temp = self.min_temperature();
        if temp <= floor {
            return Err(Error::TemperatureNonpositive { min: temp });
        }
        Ok(())
    }

    pub(crate) fn check_kind(&self, kind: ModelKind) -> Result<()> {
        if self.kind() != kind {
            return Err(Error::InvalidParameter(format!(
                "state carries {} unknowns but the model is {}",
                self.kind().name(),
                kind.name()
            )));
        }
        Ok(())
    }
}

/// Right-hand sides for `(a, u, θ)`; `dtheta` is absent for ICNS.
#[derive(Clone, Debug)]
pub struct Tendency {
    pub da: Field,
    pub du: VecField,
    pub dtheta: Option<Field>,
}

impl Tendency {
    pub fn l2_norm_sq(&self) -> f64 {
        self.da.l2_norm_sq()
            + self.du.l2_norm_sq()
            + self.dtheta.as_ref().map_or(0.0, Field::l2_norm_sq)
    }
}
