use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use frac_hausdorff::cli::{run, ExperimentConfig, EXPERIMENTS};
use frac_hausdorff::Error;

#[derive(Parser)]
#[command(name = "fhaus", version, about = "Fractional Hausdorff operator experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config and write results.jsonl, tables.csv and series/.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the experiment names.
    List,
}

fn init_threads() {
    // FHAUS_THREADS caps the rayon pool; unset means one worker per core.
    if let Some(n) = std::env::var("FHAUS_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for (name, about) in EXPERIMENTS {
                println!("{name:<24}{about}");
            }
            ExitCode::SUCCESS
        }
        Command::Run { config, out, seed } => {
            init_threads();
            let mut cfg = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("fhaus: {e}");
                    return ExitCode::from(2);
                }
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let dir = out.or_else(|| cfg.out_dir.clone()).unwrap_or_else(|| PathBuf::from("fhaus-out").join(cfg.label()));
            let bundle = match run(&cfg) {
                Ok(b) => b,
                Err(e @ Error::Config(_)) => {
                    eprintln!("fhaus: invalid config: {e}");
                    return ExitCode::from(2);
                }
                Err(e) => {
                    eprintln!("fhaus: {} failed: {e}", cfg.experiment.name());
                    return ExitCode::from(3);
                }
            };
            if let Err(e) = bundle.write(&dir) {
                eprintln!("fhaus: writing {}: {e}", dir.display());
                return ExitCode::from(4);
            }
            let total = bundle.verdicts().count();
            let failed: Vec<_> = bundle.verdicts().filter(|r| !r.pass).collect();
            for r in &failed {
                eprintln!("FAIL {} / {}: {} not in [{:?}, {:?}]", r.case, r.name, r.value, r.lower, r.upper);
            }
            println!("{}: {}/{} verdicts pass, outputs in {}", cfg.label(), total - failed.len(), total, dir.display());
            if failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
