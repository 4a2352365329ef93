use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use saeame::acquisition::{run_generic_saea, AcquisitionKind, UcbParams};
use saeame_cli::records::write_atomic;
use saeame_cli::{
    demo, emit_front_csv, format_sci, run_experiment, summarize_dir, summary_csv, ExperimentConfig,
    HarnessError, RunRecord,
};

/// Benchmark harness for SAEA/ME and its baselines.
#[derive(Parser)]
#[command(name = "saeame", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment matrix from a config file.
    Run {
        /// Flat key = value config file.
        #[arg(long)]
        config: PathBuf,
        /// Directory receiving one record file per run.
        #[arg(long)]
        out: PathBuf,
        /// Recompute cells whose record files already exist.
        #[arg(long)]
        force: bool,
        /// Maximum concurrent runs (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Reduce stored records to a median/spread/significance table.
    Summarize {
        /// Directory of record files.
        #[arg(long = "in")]
        input: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Export a record's archive plus the true front for plotting.
    Front {
        /// Record file to export.
        #[arg(long)]
        record: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Optimize a 1-D demo problem with the single-objective GP loop.
    SaeaSingle {
        /// Demo problem name: quadratic or xsinx.
        #[arg(long)]
        problem: String,
        /// Total expensive evaluations.
        #[arg(long, default_value_t = 30)]
        budget: usize,
        /// Acquisition function: pi, ei, or cb.
        #[arg(long, default_value = "ei")]
        acquisition: String,
        /// Confidence-bound coefficient (cb only).
        #[arg(long, default_value_t = 2.0)]
        kappa: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use the raw predictive variance as the spread.
        #[arg(long)]
        literal_variance: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let mut source = std::error::Error::source(&err);
            while let Some(cause) = source {
                eprintln!("  caused by: {cause}");
                source = cause.source();
            }
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Run {
            config,
            out,
            force,
            workers,
        } => {
            let text =
                std::fs::read_to_string(&config).map_err(|e| HarnessError::io(&config, e))?;
            let mut experiment = ExperimentConfig::parse(&text)?;
            experiment.apply_seed_override(std::env::var("SAEA_SEED").ok().as_deref())?;
            let outcome = run_experiment(&experiment, &out, force, workers)?;
            println!(
                "computed {} runs, skipped {} existing (records in {})",
                outcome.computed,
                outcome.skipped,
                out.display()
            );
        }
        Command::Summarize { input, out } => {
            let rows = summarize_dir(&input)?;
            write_atomic(&out, &summary_csv(&rows))?;
            println!("summarized {} cells to {}", rows.len(), out.display());
        }
        Command::Front { record, out } => {
            let record = RunRecord::read(&record)?;
            emit_front_csv(&record, &out)?;
            println!("front written to {}", out.display());
        }
        Command::SaeaSingle {
            problem,
            budget,
            acquisition,
            kappa,
            seed,
            literal_variance,
        } => {
            let demo = demo::demo_problem(&problem)
                .ok_or_else(|| HarnessError::config(format!("unknown demo problem `{problem}`")))?;
            let kind = match acquisition.as_str() {
                "pi" => AcquisitionKind::ProbabilityOfImprovement,
                "ei" => AcquisitionKind::ExpectedImprovement,
                "cb" => AcquisitionKind::ConfidenceBound(UcbParams::new(kappa)),
                other => {
                    return Err(HarnessError::config(format!(
                        "unknown acquisition `{other}`; use pi, ei, or cb"
                    )))
                }
            };
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let result = run_generic_saea(
                |x: &[f64]| (demo.objective)(x[0]),
                &[demo.lower],
                &[demo.upper],
                budget,
                kind,
                literal_variance,
                &mut rng,
            )
            .map_err(|e| HarnessError::config(format!("surrogate failure: {e}")))?;
            println!(
                "best_x = {}\nbest_value = {}",
                format_sci(result.best_input[0]),
                format_sci(result.best_value)
            );
        }
    }
    Ok(())
}
