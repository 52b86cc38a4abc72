//! Experiment orchestration: run configs, initial-data synthesis, run
//! artifacts and the `run`/`oracle`/`fit`/`verify`/`report` commands.
//!
//! Every artifact is a pure function of the config, the seed and the crate
//! version. No parallel reduction feeds an output value, so results do not
//! depend on the thread count either.

mod commands;
mod config;
mod initial;
mod io;

pub use commands::{
    fit_table, oracle_columns, oracle_table, run_config, run_experiment, run_fit, run_oracle, run_report,
    run_verify, ColumnFit, OracleConfig, ProfileSpec, RateSpec, RateTable, RunReport, TimeGrid, Verdicts,
    EVENTS_FILE, MANIFEST_FILE, ORACLE_FILE, REPORT_FILE, SERIES_FILE, VERDICTS_FILE,
};
pub use config::{
    Component, GridSpec, InitKind, InitialDataSpec, ModeSpec, ModelSpec, Normalization, OutputSpec, RunConfig,
};
pub use initial::{max_admissible_amplitude, synthesize_initial_data, POSITIVITY_MARGIN};
pub use io::{fmt_value, read_json, render_csv, write_csv, write_json, SeriesTable};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_POSITIVITY: i32 = 3;
pub const EXIT_CFL: i32 = 4;
pub const EXIT_SCHEMA: i32 = 5;
/// A fit verdict or inequality check failed.
pub const EXIT_CHECK_FAILED: i32 = 6;

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "NSDECAY_THREADS";

fn root_cause(e: &Error) -> &Error {
    match e {
        Error::RunAborted { cause, .. } => root_cause(cause),
        other => other,
    }
}

/// Short label of an error's category, as written to manifests.
pub fn error_kind(e: &Error) -> &'static str {
    match root_cause(e) {
        Error::Config(_) | Error::InvalidGrid(_) | Error::InvalidParameter(_) => "config",
        Error::DensityNonpositive { .. }
        | Error::TemperatureNonpositive { .. }
        | Error::PositivityUnachievable(_) => "positivity",
        Error::CflViolation { .. } => "cfl",
        Error::Schema(_) | Error::Io(_) | Error::Json(_) => "io",
        _ => "other",
    }
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match error_kind(e) {
        "config" => EXIT_CONFIG,
        "positivity" => EXIT_POSITIVITY,
        "cfl" => EXIT_CFL,
        "io" => EXIT_SCHEMA,
        _ => EXIT_OTHER,
    }
}

/// Thread cap from [`THREADS_ENV`], if set to a positive integer.
pub fn thread_cap() -> Result<Option<usize>, Error> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_are_distinct_and_see_through_aborts() {
        let wrap = |e| Error::RunAborted { t: 1.0, cause: Box::new(e) };
        assert_eq!(exit_code(&Error::Config("x".into())), EXIT_CONFIG);
        assert_eq!(exit_code(&wrap(Error::DensityNonpositive { min: 0.0, field: "a" })), EXIT_POSITIVITY);
        assert_eq!(exit_code(&Error::PositivityUnachievable("x".into())), EXIT_POSITIVITY);
        assert_eq!(exit_code(&wrap(Error::CflViolation { t: 0.0, dt: 1.0, limit: 0.5 })), EXIT_CFL);
        assert_eq!(exit_code(&Error::Schema("x".into())), EXIT_SCHEMA);
        let codes = [EXIT_OK, EXIT_OTHER, EXIT_CONFIG, EXIT_POSITIVITY, EXIT_CFL, EXIT_SCHEMA, EXIT_CHECK_FAILED];
        let mut sorted = codes.to_vec();
        sorted.dedup();
        assert_eq!(sorted.len(), codes.len());
    }
}
