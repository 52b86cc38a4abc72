use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nsdecay::experiment::{
    exit_code, run_experiment, run_fit, run_oracle, run_report, run_verify, thread_cap, EXIT_CHECK_FAILED,
};
use nsdecay::Error;

#[derive(Parser)]
#[command(name = "nsdecay", version, about = "Decay laboratory for compressible Navier-Stokes perturbations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a run config and write manifest.json, series.csv, events.log.
    Run { config: PathBuf },
    /// Evaluate whole-space linear decay curves into oracle.csv.
    Oracle { config: PathBuf },
    /// Fit decay exponents of CSV columns against a rate table.
    Fit {
        csv: PathBuf,
        #[arg(long)]
        rates: PathBuf,
        /// Treat rates without an explicit `sided` as upper bounds.
        #[arg(long)]
        one_sided: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run the functional-inequality battery and print JSON reports.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Bundle a run directory into report.json.
    Report { dir: PathBuf },
}

fn execute(cli: Cli) -> Result<i32, Error> {
    if let Some(n) = thread_cap()? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    match cli.command {
        Command::Run { config } => {
            let report = run_experiment(&config)?;
            if let Some(e) = &report.abort {
                eprintln!("nsdecay: {e}");
            }
            println!("{}", report.dir.display());
            Ok(report.exit_code())
        }
        Command::Oracle { config } => {
            println!("{}", run_oracle(&config)?.display());
            Ok(0)
        }
        Command::Fit { csv, rates, one_sided, out } => {
            let v = run_fit(&csv, &rates, one_sided, out.as_deref())?;
            println!("{}", serde_json::to_string_pretty(&v)?);
            Ok(if v.all_pass { 0 } else { EXIT_CHECK_FAILED })
        }
        Command::Verify { seed } => {
            let reports = run_verify(seed)?;
            println!("{}", serde_json::to_string_pretty(&reports)?);
            Ok(if reports.iter().all(|r| r.pass) { 0 } else { EXIT_CHECK_FAILED })
        }
        Command::Report { dir } => {
            run_report(&dir)?;
            println!("{}", dir.join(nsdecay::experiment::REPORT_FILE).display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let code = execute(Cli::parse()).unwrap_or_else(|e| {
        eprintln!("nsdecay: {e}");
        exit_code(&e)
    });
    ExitCode::from(code as u8)
}
