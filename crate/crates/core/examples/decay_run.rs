//! Small nonlinear run of the full system through the experiment layer:
//! synthesize random-phase initial data, integrate, write the run
//! directory and fit decay exponents from the resulting `series.csv`.
//!
//! ```bash
//! cargo run --release --example decay_run [-- <out dir>]
//! ```

use std::path::PathBuf;

use nsdecay::experiment::{fit_table, run_config, RateSpec, RateTable, RunConfig, SeriesTable, SERIES_FILE};
use nsdecay::fitting::Sidedness;

const CONFIG: &str = r#"
seed = 7
grid.n = 24
grid.box_periods = 4.0
model.kind = "fcns"
model.mu = 1.0
model.lambda = 0.0
init.kind = "spectrum"
init.sigma = 0.0
init.cutoff = 1.0
init.amplitude = 1e-2
time.dt = 0.5
time.t_end = 16.0
time.cadence = 0.5
diag.s = [0.5, 1.0]
"#;

fn main() -> nsdecay::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("nsdecay-decay-run"));
    let cfg = RunConfig::from_toml(CONFIG)?;
    let report = run_config(&cfg, &dir)?;
    println!("wrote {} ({} samples, {} steps)", report.dir.display(), report.samples, report.steps);
    if let Some(e) = &report.abort {
        println!("run stopped early: {e}");
    }

    let table = SeriesTable::read(&dir.join(SERIES_FILE))?;
    let rate = |column: &str, exponent: f64| RateSpec {
        column: column.into(),
        exponent,
        tol: 0.15,
        squared: true,
        window: None,
        sided: None,
    };
    let rates = RateTable {
        t_box: Some(16.0),
        rates: vec![rate("l2_u", -1.5), rate("grad_u", -2.5), rate("grad_a", -2.5)],
    };
    for f in fit_table(&table, &rates, Sidedness::OneSided)? {
        let v = f.fit.verdict.unwrap();
        println!(
            "{:8} squared exponent {:7.4}  bound {:5.2}  {}",
            f.column,
            f.fit.exponent,
            v.theoretical,
            if v.pass { "pass" } else { "FAIL" }
        );
    }
    let e2 = table.column("e2_sq")?;
    println!("E2² from {:.4e} to {:.4e}", e2[0], e2.last().unwrap());
    Ok(())
}
