//! Interpolation, Gagliardo–Nirenberg, Hardy–Littlewood–Sobolev and
//! Hausdorff–Young checks on random band-limited fields.
//!
//! ```bash
//! cargo run --release --example inequality_battery [-- <seed>]
//! ```

use nsdecay::inequalities::{battery, BatterySize};

fn main() -> nsdecay::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let reports = battery(seed, BatterySize { grid_n: 16, samples: 50 })?;
    println!("{:22} {:44} {:>12} {:>12}  ok", "inequality", "parameters", "min ratio", "max ratio");
    for r in &reports {
        println!(
            "{:22} {:44} {:12.6} {:12.6}  {}",
            r.name, r.parameters, r.min_ratio, r.max_ratio, r.pass
        );
    }
    Ok(())
}
