use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vandercert::oracle::{oracle_check, OracleCheckConfig};
use vandercert::Limits;
use vandercert_cli::analyze::write_output_to;
use vandercert_cli::emit::to_json;
use vandercert_cli::{
    run_analyze, run_suite, AnalyzeConfig, CliError, Degree, DegreeRule, Format, SuiteConfig,
};

#[derive(Parser)]
#[command(
    name = "vandercert",
    version,
    about = "Certified stability bounds for monomial Vandermonde matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify one node set read from a JSON document.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// Total degree N, or `auto` for s - 1.
        #[arg(long, default_value = "auto")]
        degree: Degree,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random directions tried per node when no exact solver applies.
        #[arg(long, default_value_t = 1024)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = Limits::default().max_nu)]
        max_nu: usize,
    },
    /// Certify a batch of seeded random node sets.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        s_min: usize,
        #[arg(long, default_value_t = 5)]
        s_max: usize,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        /// `auto` (N = s - 1), `auto+K`, or a fixed N.
        #[arg(long, default_value = "auto")]
        degree: DegreeRule,
        #[arg(long, default_value_t = 1024)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = Limits::default().max_nu)]
        max_nu: usize,
    },
    /// Compare the floating pipeline with exact rational and grid oracles.
    OracleCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random rational node sets.
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Planar instances compared against the direction grid.
        #[arg(long, default_value_t = 100)]
        planar: usize,
        #[arg(long, default_value_t = 1_000_000)]
        resolution: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(i32, String), CliError> {
    match cli.command {
        Command::Analyze {
            input,
            degree,
            seed,
            budget,
            format,
            output,
            max_nu,
        } => run_analyze(&AnalyzeConfig {
            input,
            degree,
            budget,
            seed,
            max_nu,
            format,
            output,
        }),
        Command::Suite {
            seed,
            count,
            s_min,
            s_max,
            n_min,
            n_max,
            degree,
            budget,
            format,
            output,
            max_nu,
        } => {
            let summary = run_suite(&SuiteConfig {
                seed,
                count,
                s_min,
                s_max,
                n_min,
                n_max,
                degree,
                budget,
                max_nu,
            })?;
            let text = summary.render(format)?;
            write_output_to(output.as_ref(), &text)?;
            Ok((summary.exit_code(), text))
        }
        Command::OracleCheck {
            seed,
            count,
            planar,
            resolution,
            output,
        } => {
            if resolution < 1000 {
                return Err(CliError::Config(format!(
                    "resolution {resolution} is below 1000"
                )));
            }
            let summary = oracle_check(&OracleCheckConfig {
                seed,
                rational_instances: count,
                planar_instances: planar,
                grid_resolution: resolution,
                ..OracleCheckConfig::default()
            })?;
            let text = to_json(&summary)?;
            write_output_to(output.as_ref(), &text)?;
            Ok((if summary.passed { 0 } else { 1 }, text))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let wrote_file = match &cli.command {
        Command::Analyze { output, .. }
        | Command::Suite { output, .. }
        | Command::OracleCheck { output, .. } => output.is_some(),
    };
    match run(cli) {
        Ok((code, text)) => {
            if !wrote_file {
                print!("{text}");
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
