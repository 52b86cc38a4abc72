use serde::{Deserialize, Serialize};

use crate::diagnostics::{snapshot, DiagRecord, DiagSettings};
use crate::error::{Error, Result};
use crate::models::{time_derivative, ModelParams, State};

use super::propagator::{build_propagator, PropagatorCache};
use super::stepper::{step_with, StepOptions};

/// Time-stepping part of a run configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSettings {
    pub dt: f64,
    pub t_end: f64,
    /// Time between diagnostic samples; must be a multiple of `dt`.
    pub cadence: f64,
    #[serde(default)]
    pub positivity_floor: f64,
}

/// Relative slack when checking that `t_end` and `cadence` are multiples of `dt`.
const MULTIPLE_TOL: f64 = 1e-9;

fn steps_in(span: f64, dt: f64, what: &str) -> Result<u64> {
    let q = span / dt;
    let n = q.round();
    if (q - n).abs() > MULTIPLE_TOL * q.max(1.0) {
        return Err(Error::Config(format!("{what} = {span} is not a multiple of dt = {dt}")));
    }
    Ok(n as u64)
}

impl TimeSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!("t_end must be nonnegative, got {}", self.t_end)));
        }
        if !(self.cadence > 0.0) {
            return Err(Error::Config(format!("cadence must be positive, got {}", self.cadence)));
        }
        if !(0.0..1.0).contains(&self.positivity_floor) {
            return Err(Error::Config(format!(
                "positivity floor must lie in [0, 1), got {}",
                self.positivity_floor
            )));
        }
        self.total_steps()?;
        self.sample_every()?;
        Ok(())
    }

    pub fn total_steps(&self) -> Result<u64> {
        steps_in(self.t_end, self.dt, "t_end")
    }

    pub fn sample_every(&self) -> Result<u64> {
        let n = steps_in(self.cadence, self.dt, "cadence")?;
        if n == 0 {
            return Err(Error::Config("cadence shorter than dt".into()));
        }
        Ok(n)
    }
}

/// Result of [`integrate`]: every record taken, plus the abort cause if
/// the run stopped early.
#[derive(Debug)]
pub struct RunOutput {
    pub records: Vec<DiagRecord>,
    pub final_state: State,
    pub steps: u64,
    pub abort: Option<Error>,
    pub augmented_shells: usize,
}

/// Integrates from `initial` to `t_end`, sampling diagnostics at `t = 0`,
/// every `cadence`, and at the final time. Time is tracked as
/// `step · dt` so sample times do not accumulate round-off.
pub fn integrate(
    initial: State,
    params: &ModelParams,
    time: &TimeSettings,
    diag: &DiagSettings,
) -> Result<RunOutput> {
    time.validate()?;
    diag.validate()?;
    let cache = build_propagator(initial.grid(), params, time.dt)?;
    integrate_with_cache(initial, &cache, time, diag)
}

pub fn integrate_with_cache(
    initial: State,
    cache: &PropagatorCache,
    time: &TimeSettings,
    diag: &DiagSettings,
) -> Result<RunOutput> {
    let params = cache.params();
    let total = time.total_steps()?;
    let every = time.sample_every()?;
    let opts = StepOptions {
        linear_only: false,
        positivity_floor: time.positivity_floor,
    };
    let sample = |s: &State| -> Result<DiagRecord> {
        let tend = time_derivative(s, params)?;
        snapshot(s, &tend, params, diag)
    };
    let mut state = initial.to_spectral();
    state.t = 0.0;
    let mut records = vec![sample(&state).map_err(|e| Error::RunAborted {
        t: 0.0,
        cause: Box::new(e),
    })?];
    let mut abort = None;
    let mut steps = 0;
    while steps < total {
        match step_with(&state, cache, opts) {
            Ok(mut next) => {
                steps += 1;
                next.t = steps as f64 * time.dt;
                state = next;
            }
            Err(e) => {
                abort = Some(e);
                break;
            }
        }
        if steps % every == 0 || steps == total {
            match sample(&state) {
                Ok(r) => records.push(r),
                Err(e) => {
                    abort = Some(Error::RunAborted {
                        t: state.t,
                        cause: Box::new(e),
                    });
                    break;
                }
            }
        }
    }
    Ok(RunOutput {
        records,
        final_state: state,
        steps,
        abort,
        augmented_shells: cache.augmented_shells(),
    })
}
