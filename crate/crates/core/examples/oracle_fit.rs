//! The `oracle` → `fit` pipeline in-process: evaluate whole-space norms
//! for a profile config, write them as a CSV table, read it back and
//! compare fitted exponents with a rate table.
//!
//! ```bash
//! cargo run --release --example oracle_fit
//! ```

use nsdecay::experiment::{fit_table, oracle_table, render_csv, OracleConfig, RateSpec, RateTable, SeriesTable};
use nsdecay::fitting::Sidedness;

const CONFIG: &str = r#"
model.kind = "icns"
model.mu = 1.0
model.lambda = 0.5
model.gamma = 1.4
profile.sigma = 0.0
profile.cutoff = 1.0
times.t_min = 100.0
times.t_max = 10000.0
times.count = 31
s = [0.5]
"#;

fn main() -> nsdecay::Result<()> {
    let cfg = OracleConfig::from_toml(CONFIG)?;
    let (names, rows) = oracle_table(&cfg)?;
    let table = SeriesTable::parse(&render_csv(&names, &rows))?;
    println!("{} columns, {} rows", table.names.len(), table.rows.len());

    let rate = |column: &str, exponent: f64, squared: bool| RateSpec {
        column: column.into(),
        exponent,
        tol: 0.03,
        squared,
        window: Some([100.0, 10000.0]),
        sided: None,
    };
    let rates = RateTable {
        t_box: None,
        rates: vec![
            rate("l2_u", -0.75, false),
            rate("l2_a", -0.75, false),
            rate("grad_u", -2.5, true),
            rate("hess_u", -3.5, true),
        ],
    };
    for f in fit_table(&table, &rates, Sidedness::TwoSided)? {
        let v = f.fit.verdict.unwrap();
        println!(
            "{:7} {} exponent {:8.4} (theory {:5.2}, deviation {:+.4}) {}",
            f.column,
            if f.squared { "squared" } else { "norm   " },
            f.fit.exponent,
            v.theoretical,
            v.deviation,
            if v.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(())
}
