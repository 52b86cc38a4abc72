use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diagnostics::DiagSettings;
use crate::error::{Error, Result};
use crate::integrator::TimeSettings;
use crate::models::{ModelKind, ModelParams};
use crate::oracle::ComponentWeights;
use crate::spectral::{make_grid, SpectralGrid, TWO_PI};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    /// Box side `L`. Exactly one of `box_length`, `box_periods` is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub box_length: Option<f64>,
    /// Box side in units of `2π`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub box_periods: Option<f64>,
}

impl GridSpec {
    pub fn length(&self) -> Result<f64> {
        match (self.box_length, self.box_periods) {
            (Some(l), None) => Ok(l),
            (None, Some(p)) => Ok(TWO_PI * p),
            _ => Err(Error::Config("give exactly one of grid.box_length, grid.box_periods".into())),
        }
    }

    pub fn build(&self) -> Result<Arc<SpectralGrid>> {
        make_grid(self.n, self.length()?).map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub mu: f64,
    pub lambda: f64,
    /// Required for the isentropic system, ignored otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

impl ModelSpec {
    pub fn params(&self) -> Result<ModelParams> {
        let gamma = match (self.kind, self.gamma) {
            (ModelKind::Icns, Some(g)) => g,
            (ModelKind::Icns, None) => return Err(Error::Config("model.gamma is required for icns".into())),
            (ModelKind::Fcns, _) => 1.0,
        };
        ModelParams::new(self.kind, self.mu, self.lambda, gamma).map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    /// Random-phase fields with a power-law/Gaussian spectrum.
    Spectrum,
    /// Explicit list of Fourier modes.
    Manufactured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Scale so that `sqrt(mean(a² + |u|² + θ²)) = amplitude`.
    Rms,
    /// Use `amplitude` as the spectral prefactor as is.
    Raw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    A,
    U1,
    U2,
    U3,
    Theta,
}

/// One real Fourier mode `amplitude · cos(2π k·x/L + phase)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub field: Component,
    pub k: [i64; 3],
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

fn default_cutoff() -> f64 {
    1.0
}

fn default_normalization() -> Normalization {
    Normalization::Rms
}

fn default_weights() -> ComponentWeights {
    ComponentWeights::uniform()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialDataSpec {
    pub kind: InitKind,
    #[serde(default)]
    pub sigma: f64,
    #[serde(default = "default_cutoff")]
    pub cutoff: f64,
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default = "default_normalization")]
    pub normalize: Normalization,
    #[serde(default = "default_weights")]
    pub weights: ComponentWeights,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modes: Vec<ModeSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Run directory; relative paths are taken from the config file's
    /// directory. Defaults to `<config stem>.run` next to the config.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

/// Complete description of a simulation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    pub grid: GridSpec,
    pub model: ModelSpec,
    pub init: InitialDataSpec,
    pub time: TimeSettings,
    #[serde(default)]
    pub diag: DiagSettings,
    #[serde(default)]
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.build()?;
        self.model.params()?;
        self.time.validate()?;
        self.diag.validate().map_err(|e| Error::Config(e.to_string()))?;
        let init = &self.init;
        if !(init.amplitude >= 0.0 && init.amplitude.is_finite()) {
            return Err(Error::Config(format!("init.amplitude must be >= 0, got {}", init.amplitude)));
        }
        if !(init.cutoff > 0.0) {
            return Err(Error::Config(format!("init.cutoff must be > 0, got {}", init.cutoff)));
        }
        if init.kind == InitKind::Spectrum && !(init.sigma > -1.5) {
            return Err(Error::Config(format!("init.sigma must exceed -3/2, got {}", init.sigma)));
        }
        if init.kind == InitKind::Manufactured && init.modes.is_empty() {
            return Err(Error::Config("manufactured initial data needs init.modes".into()));
        }
        if self.model.kind == ModelKind::Icns && init.modes.iter().any(|m| m.field == Component::Theta) {
            return Err(Error::Config("icns has no temperature component".into()));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is serializable")
    }

    /// Run directory for a config loaded from `config_path`.
    pub fn run_dir(&self, config_path: &Path) -> PathBuf {
        let base = config_path.parent().unwrap_or(Path::new("."));
        match &self.output.dir {
            Some(d) if d.is_absolute() => d.clone(),
            Some(d) => base.join(d),
            None => {
                let stem = config_path.file_stem().and_then(|s| s.to_str()).unwrap_or("run");
                base.join(format!("{stem}.run"))
            }
        }
    }
}
