use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fdlab_core::catalog;
use fdlab_core::cli::{exit_code, run_file, Overrides};
use fdlab_core::config::parse_seed;

/// Verify fixed-disc theorems on sampled metric spaces.
#[derive(Parser, Debug)]
#[command(name = "fdlab", version)]
struct Args {
    /// Problem description file.
    #[arg(long, required_unless_present_any = ["list_catalog", "regression"])]
    config: Option<PathBuf>,
    /// Write the JSON report here (overrides the config).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write fixed_set.csv and disc.csv into this directory.
    #[arg(long)]
    csv_dir: Option<PathBuf>,
    /// Grid sample count (per axis for boxes).
    #[arg(long)]
    samples: Option<usize>,
    /// Seed, decimal or 0x-hex.
    #[arg(long, env = "FDLAB_SEED", value_parser = seed_arg)]
    seed: Option<u64>,
    /// Override eps_fix.
    #[arg(long)]
    tolerance_fix: Option<f64>,
    /// Print the built-in maps and exit.
    #[arg(long)]
    list_catalog: bool,
    /// Check every catalog entry against its expected results.
    #[arg(long)]
    regression: bool,
}

fn seed_arg(s: &str) -> Result<u64, String> {
    parse_seed(s).ok_or_else(|| format!("invalid seed `{s}`"))
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list_catalog {
        for e in catalog::list() {
            let params: Vec<String> = e.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            println!(
                "{:<16} [{}, {}] N={}  {}{}",
                e.name,
                e.domain.0,
                e.domain.1,
                e.domain.2,
                e.description,
                if params.is_empty() {
                    String::new()
                } else {
                    format!("  ({})", params.join(", "))
                }
            );
        }
        return ExitCode::SUCCESS;
    }
    if args.regression {
        return match catalog::run_regression(None) {
            Ok(summary) => {
                print!("{}", summary.render_text());
                if summary.passed() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(2)
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        };
    }
    if let Some(e) = args.tolerance_fix {
        if !(e >= 0.0 && e.is_finite()) {
            eprintln!("error: --tolerance-fix must be a non-negative number");
            return ExitCode::from(1);
        }
    }
    let ov = Overrides {
        samples: args.samples,
        seed: args.seed,
        eps_fix: args.tolerance_fix,
        report: args.report,
        csv_dir: args.csv_dir,
    };
    let path = args.config.expect("clap enforces --config");
    match run_file(&path, &ov) {
        Ok(report) => {
            print!("{}", report.render_text());
            ExitCode::from(exit_code(report.verdict) as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
