use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::diagnostics::{s_label, DiagSchema, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::fitting::{box_horizon, compare_rates, default_window, fit_exponent, FitResult, Sidedness, Window};
use crate::inequalities::{battery, BatterySize, InequalityReport};
use crate::integrator::integrate;
use crate::oracle::{
    linear_decay_curve, negative_norm_curve, ComponentWeights, CurveOptions, SpectrumProfile,
};
use crate::models::State;

use super::config::{ModelSpec, RunConfig};
use super::initial::synthesize_initial_data;
use super::io::{read_json, write_csv, write_json, SeriesTable};
use super::{error_kind, exit_code};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const SERIES_FILE: &str = "series.csv";
pub const EVENTS_FILE: &str = "events.log";
pub const ORACLE_FILE: &str = "oracle.csv";
pub const VERDICTS_FILE: &str = "verdicts.json";
pub const REPORT_FILE: &str = "report.json";

fn crate_info() -> Value {
    json!({ "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") })
}

fn abort_json(e: &Error) -> Value {
    let t = match e {
        Error::RunAborted { t, .. } => Some(*t),
        _ => None,
    };
    json!({ "t": t, "kind": error_kind(e), "message": e.to_string() })
}

/// Outcome of [`run_experiment`].
#[derive(Debug)]
pub struct RunReport {
    pub dir: PathBuf,
    pub samples: usize,
    pub steps: u64,
    /// Set when the run was rejected or stopped early.
    pub abort: Option<Error>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        self.abort.as_ref().map_or(0, exit_code)
    }
}

/// Runs the simulation described by the config file at `path` and writes
/// `manifest.json`, `series.csv` and `events.log` to its run directory.
///
/// Configuration errors are returned as `Err` before anything is written.
/// Failures after that point (positivity of the initial data, aborts during
/// the run) still produce all three files, with whatever samples were taken,
/// and are reported through [`RunReport::abort`].
pub fn run_experiment(path: &Path) -> Result<RunReport> {
    let cfg = RunConfig::load(path)?;
    run_config(&cfg, &cfg.run_dir(path))
}

/// Same as [`run_experiment`] for an already parsed config.
pub fn run_config(cfg: &RunConfig, dir: &Path) -> Result<RunReport> {
    cfg.validate()?;
    let grid = cfg.grid.build()?;
    let params = cfg.model.params()?;
    fs::create_dir_all(dir)?;
    let schema = DiagSchema::new(&cfg.diag.s_values);
    let t_box = box_horizon(grid.box_length(), params.mu);
    let mut events = vec![
        format!("grid n={} box_length={:?}", grid.n(), grid.box_length()),
        format!(
            "model kind={} mu={:?} lambda={:?} gamma={:?}",
            params.kind.name(),
            params.mu,
            params.lambda,
            params.gamma
        ),
        format!("box horizon t_box={t_box:?}"),
    ];

    let mut manifest = json!({
        "crate": crate_info(),
        "schema_version": SCHEMA_VERSION,
        "seed": cfg.seed,
        "config": cfg,
        "grid": { "n": grid.n(), "box_length": grid.box_length(), "spacing": grid.spacing() },
        "params": params,
        "t_box": t_box,
        "columns": schema.names(),
    });

    let (rows, steps, abort) = match synthesize_initial_data(&cfg.init, &grid, params.kind, cfg.seed) {
        Err(e) => {
            events.push(format!("initial data rejected: {e}"));
            (Vec::new(), 0, Some(e))
        }
        Ok(init) => {
            events.push(initial_line(&init));
            manifest["initial"] = json!({
                "min_density": init.min_density(),
                "min_temperature": init.min_temperature(),
            });
            let out = integrate(init, &params, &cfg.time, &cfg.diag)?;
            manifest["augmented_shells"] = json!(out.augmented_shells);
            for r in &out.records {
                events.push(format!("sample t={:?}", r.t));
            }
            if let Some(e) = &out.abort {
                events.push(format!("abort: {e}"));
            }
            let rows: Vec<Vec<f64>> = out.records.into_iter().map(|r| r.values).collect();
            (rows, out.steps, out.abort)
        }
    };

    let status = match &abort {
        None => "completed",
        Some(Error::RunAborted { .. }) => "aborted",
        Some(_) => "rejected",
    };
    events.push(format!("{status} steps={steps} samples={}", rows.len()));
    manifest["status"] = json!(status);
    manifest["steps"] = json!(steps);
    manifest["samples"] = json!(rows.len());
    manifest["t_final"] = json!(steps as f64 * cfg.time.dt);
    manifest["abort"] = abort.as_ref().map_or(Value::Null, abort_json);
    manifest["exit_code"] = json!(abort.as_ref().map_or(0, exit_code));

    write_csv(&dir.join(SERIES_FILE), schema.names(), &rows)?;
    write_json(&dir.join(MANIFEST_FILE), &manifest)?;
    fs::write(dir.join(EVENTS_FILE), events.join("\n") + "\n")?;
    Ok(RunReport { dir: dir.to_path_buf(), samples: rows.len(), steps, abort })
}

fn initial_line(s: &State) -> String {
    format!(
        "initial min_density={:?} min_temperature={:?} l2_a={:?} l2_u={:?}",
        s.min_density(),
        s.min_temperature(),
        s.a.l2_norm(),
        s.u.l2_norm()
    )
}

fn default_one() -> f64 {
    1.0
}

fn default_weights() -> ComponentWeights {
    ComponentWeights::uniform()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    #[serde(default)]
    pub sigma: f64,
    #[serde(default = "default_one")]
    pub cutoff: f64,
    #[serde(default = "default_one")]
    pub amplitude: f64,
    #[serde(default = "default_weights")]
    pub weights: ComponentWeights,
}

/// Log-spaced sample times `t_min, …, t_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
}

impl TimeGrid {
    pub fn times(&self) -> Result<Vec<f64>> {
        if !(self.t_min > 0.0 && self.t_max > self.t_min && self.count >= 2) {
            return Err(Error::Config("times need 0 < t_min < t_max and count >= 2".into()));
        }
        let r = (self.t_max / self.t_min).ln();
        Ok((0..self.count)
            .map(|i| self.t_min * (r * i as f64 / (self.count - 1) as f64).exp())
            .collect())
    }
}

fn default_oracle_s() -> Vec<f64> {
    vec![0.25, 0.5, 1.0, 1.4]
}

/// Config of the `oracle` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    pub model: ModelSpec,
    pub profile: ProfileSpec,
    pub times: TimeGrid,
    #[serde(default = "default_oracle_s")]
    pub s: Vec<f64>,
    #[serde(default)]
    pub output: super::config::OutputSpec,
}

impl OracleConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn profile(&self) -> SpectrumProfile {
        let p = &self.profile;
        SpectrumProfile { sigma: p.sigma, cutoff: p.cutoff, amplitude: p.amplitude, weights: p.weights }
    }
}

/// Column names of `oracle.csv`; every value is an unsquared whole-space norm.
pub fn oracle_columns(s_values: &[f64]) -> Vec<String> {
    let mut names = vec!["t".to_string()];
    for level in ["l2", "grad", "hess"] {
        names.extend(["a", "u", "theta"].iter().map(|c| format!("{level}_{c}")));
    }
    for &s in s_values {
        let label = s_label(s);
        names.extend(["a", "u", "theta"].iter().map(|c| format!("neg_{c}_s{label}")));
    }
    names
}

/// Evaluates the linearized whole-space norms for `cfg` and returns the
/// table in [`oracle_columns`] order.
pub fn oracle_table(cfg: &OracleConfig) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let params = cfg.model.params()?;
    let profile = cfg.profile();
    profile.validate().map_err(|e| Error::Config(e.to_string()))?;
    let times = cfg.times.times()?;
    let opts = CurveOptions::default();
    let mut curves = Vec::new();
    for k in 0..=2 {
        curves.push(linear_decay_curve(&profile, &params, k, &times, opts)?);
    }
    for &s in &cfg.s {
        curves.push(negative_norm_curve(&profile, &params, s, &times, opts)?);
    }
    let rows = times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let mut row = vec![t];
            for c in &curves {
                row.extend([c[i].a.sqrt(), c[i].u.sqrt(), c[i].theta.sqrt()]);
            }
            row
        })
        .collect();
    Ok((oracle_columns(&cfg.s), rows))
}

/// `oracle <config>`: writes `oracle.csv` and `manifest.json`.
pub fn run_oracle(path: &Path) -> Result<PathBuf> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let cfg = OracleConfig::from_toml(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let dir = match &cfg.output.dir {
        Some(d) => base.join(d),
        None => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("oracle");
            base.join(format!("{stem}.oracle"))
        }
    };
    let (names, rows) = oracle_table(&cfg)?;
    fs::create_dir_all(&dir)?;
    write_csv(&dir.join(ORACLE_FILE), &names, &rows)?;
    write_json(
        &dir.join(MANIFEST_FILE),
        &json!({
            "crate": crate_info(),
            "schema_version": SCHEMA_VERSION,
            "kind": "oracle",
            "config": cfg,
            "params": cfg.model.params()?,
            "columns": names,
        }),
    )?;
    Ok(dir)
}

/// One entry of a rate table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateSpec {
    pub column: String,
    /// Theoretical exponent of the fitted quantity.
    pub exponent: f64,
    pub tol: f64,
    /// Fit the square of the column instead of the column itself.
    #[serde(default)]
    pub squared: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sided: Option<Sidedness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateTable {
    /// Box horizon; taken from a neighbouring `manifest.json` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_box: Option<f64>,
    pub rates: Vec<RateSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnFit {
    pub column: String,
    pub squared: bool,
    pub fit: FitResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub source: String,
    pub schema_version: u32,
    pub t_box: Option<f64>,
    pub fits: Vec<ColumnFit>,
    pub all_pass: bool,
}

/// Fits every rate of `rates` against `table`.
pub fn fit_table(table: &SeriesTable, rates: &RateTable, default_sided: Sidedness) -> Result<Vec<ColumnFit>> {
    let times = table.column("t")?;
    rates
        .rates
        .iter()
        .map(|r| {
            let mut values = table.column(&r.column)?;
            if r.squared {
                values.iter_mut().for_each(|v| *v *= *v);
            }
            let window = match r.window {
                Some([lo, hi]) => Window::new(lo, hi)?,
                None => default_window(&times, rates.t_box)?,
            };
            let mut fit = fit_exponent(&times, &values, window, rates.t_box)?;
            fit.verdict = Some(compare_rates(&fit, r.exponent, r.tol, r.sided.unwrap_or(default_sided)));
            Ok(ColumnFit { column: r.column.clone(), squared: r.squared, fit })
        })
        .collect()
}

/// `fit <csv> --rates <json>`: writes the verdicts (default
/// `verdicts.json` next to the CSV) and returns them.
pub fn run_fit(csv: &Path, rates: &Path, one_sided: bool, out: Option<&Path>) -> Result<Verdicts> {
    let table = SeriesTable::read(csv)?;
    let text = fs::read_to_string(rates)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", rates.display())))?;
    let mut spec: RateTable = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
    let dir = csv.parent().unwrap_or(Path::new("."));
    if spec.t_box.is_none() {
        let manifest = dir.join(MANIFEST_FILE);
        if manifest.exists() {
            spec.t_box = read_json(&manifest)?.get("t_box").and_then(Value::as_f64);
        }
    }
    let sided = if one_sided { Sidedness::OneSided } else { Sidedness::TwoSided };
    let fits = fit_table(&table, &spec, sided)?;
    let verdicts = Verdicts {
        source: csv.file_name().map_or_else(String::new, |s| s.to_string_lossy().into_owned()),
        schema_version: table.schema_version,
        t_box: spec.t_box,
        all_pass: fits.iter().all(|f| f.fit.verdict.is_some_and(|v| v.pass)),
        fits,
    };
    let target = out.map_or_else(|| dir.join(VERDICTS_FILE), Path::to_path_buf);
    write_json(&target, &verdicts)?;
    Ok(verdicts)
}

/// `verify [--seed N]`: the inequality battery at the default size.
pub fn run_verify(seed: u64) -> Result<Vec<InequalityReport>> {
    battery(seed, BatterySize::default())
}

/// `report <dir>`: bundles the manifest, series summary and verdicts of a
/// run or oracle directory into `report.json`.
pub fn run_report(dir: &Path) -> Result<Value> {
    let manifest_path = dir.join(MANIFEST_FILE);
    if !manifest_path.exists() {
        return Err(Error::Schema(format!("{} has no {MANIFEST_FILE}", dir.display())));
    }
    let manifest = read_json(&manifest_path)?;
    let series_name = [SERIES_FILE, ORACLE_FILE]
        .into_iter()
        .find(|f| dir.join(f).exists())
        .ok_or_else(|| Error::Schema(format!("{} has no series table", dir.display())))?;
    let table = SeriesTable::read(&dir.join(series_name))?;
    if let Some(cols) = manifest.get("columns") {
        if *cols != json!(table.names) {
            return Err(Error::Schema(format!("{series_name} columns differ from the manifest")));
        }
    }
    let verdicts = dir.join(VERDICTS_FILE);
    let verdicts = if verdicts.exists() { read_json(&verdicts)? } else { Value::Null };
    let row = |r: Option<&Vec<f64>>| {
        r.map_or(Value::Null, |r| {
            Value::Object(table.names.iter().cloned().zip(r.iter().map(|v| json!(v))).collect())
        })
    };
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "manifest": manifest,
        "series": {
            "file": series_name,
            "rows": table.rows.len(),
            "columns": table.names,
            "first": row(table.rows.first()),
            "last": row(table.rows.last()),
        },
        "verdicts": verdicts,
    });
    write_json(&dir.join(REPORT_FILE), &report)?;
    Ok(report)
}
