use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use relhyp_cli::{run, Overrides, RunConfig};

/// Run verification suites on a free product with peripheral structure.
#[derive(Debug, Parser)]
#[command(name = "relhyp", version)]
struct Args {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Suites to run: ap, battery, dstg, formula, bcp, lifts, thinness, oracle.
    #[arg(long, value_delimiter = ',')]
    suite: Option<Vec<String>>,
    /// Thresholds for the distance formula.
    #[arg(long = "L", value_delimiter = ',')]
    thresholds: Option<Vec<u32>>,
    /// Sample radius; BFS backends cover twice this plus two.
    #[arg(long)]
    radius: Option<u32>,
    /// Sample size for the randomized suites.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Report directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let code = match execute(args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn execute(args: Args) -> Result<i32, relhyp_cli::CliError> {
    let mut cfg = RunConfig::load(&args.config)?;
    cfg.apply(Overrides {
        suites: args.suite.map(|s| s.into_iter().map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()),
        thresholds: args.thresholds,
        radius: args.radius,
        samples: args.samples,
        seed: args.seed,
        out: args.out,
    });
    let outcome = run(&cfg)?;
    for s in &outcome.suites {
        if s.failures.is_empty() {
            println!("{}: ok", s.suite);
        } else {
            for f in &s.failures {
                println!("{}: FAIL {f}", s.suite);
            }
        }
    }
    println!("reports written to {}", outcome.out.display());
    Ok(outcome.exit_code())
}
