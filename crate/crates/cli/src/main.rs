use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use regen_cli::{eval, parse_config, run_grid, stats_report, CliError, Mode};

#[derive(Parser)]
#[command(
    name = "regen",
    version,
    about = "Run ReGen GA/HAEA experiments and analyse their results"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the experiment grid described by a configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Overrides the configured base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the configured output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyse column-aligned sample CSVs.
    Stats {
        #[arg(long)]
        mode: String,
        #[arg(long, num_args = 1.., required = true)]
        input: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate one bit string.
    Eval {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        bits: String,
    },
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            jobs,
            seed,
            out,
        } => {
            let mut spec = parse_config(&config)?;
            if let Some(seed) = seed {
                spec.seed = seed;
            }
            if let Some(out) = out {
                spec.output_dir = out;
            }
            for s in run_grid(&spec, jobs)? {
                println!(
                    "{}\tmedian {}\tstd {}\titeration {}",
                    s.label, s.median, s.std, s.iteration_of_best
                );
            }
            Ok(())
        }
        Command::Stats { mode, input, out } => {
            let mode: Mode = mode.parse()?;
            let inputs: Vec<_> = input.iter().map(PathBuf::as_path).collect();
            stats_report(&inputs, mode, &out)
        }
        Command::Eval { problem, bits } => {
            println!("{}", eval(&problem, &bits)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
