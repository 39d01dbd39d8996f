mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    cmd_mode, cmd_quasienergy, cmd_sweep, cmd_verify, first_index, resolve_out_dir, CommandError,
    ALL_SUITES, EXIT_BAD_CONFIG, EXIT_OK, EXIT_VERIFY_FAILED,
};
use floquet_core::analytic::ModeIndex;

/// Exact Floquet solutions of driven quantum models, with verification.
#[derive(Parser)]
#[command(name = "floquet-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Model/run configuration file (TOML or JSON)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides the config's output.directory)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (default: available cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate quasienergies up to --n-max
    Quasienergy {
        /// Highest mode index to include
        #[arg(long, default_value_t = 5)]
        n_max: u32,
    },
    /// Snapshot a Floquet mode at time --t
    Mode {
        /// Mode index (first quantum number)
        #[arg(long)]
        index: Option<u32>,
        /// Second quantum number (coupled pair only)
        #[arg(long, default_value_t = 0)]
        index2: u32,
        /// Evaluation time
        #[arg(long, default_value_t = 0.0)]
        t: f64,
    },
    /// Run verification checks and write a JSON report
    Verify {
        /// Comma-separated subset of residual,period,monodromy,berry,limits,shift
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
    },
    /// Sweep a model parameter per the config's [sweep] section
    Sweep,
}

fn run(cli: Cli) -> Result<i32, CommandError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CommandError { code: EXIT_BAD_CONFIG, message: "--jobs must be >= 1".into() });
        }
        // ignore failure: the global pool can only be set once
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let config_path = cli.config.ok_or(CommandError {
        code: EXIT_BAD_CONFIG,
        message: "--config <path> is required".into(),
    })?;
    let loaded = config::load_config(&config_path)
        .map_err(|m| CommandError { code: EXIT_BAD_CONFIG, message: m })?;
    let out_dir = resolve_out_dir(&loaded, cli.out.as_deref());

    match cli.command {
        Command::Quasienergy { n_max } => {
            let path = cmd_quasienergy(&loaded, &out_dir, n_max)?;
            println!("wrote {}", path.display());
            Ok(EXIT_OK)
        }
        Command::Mode { index, index2, t } => {
            let n = index.unwrap_or_else(|| first_index(&loaded.run.model));
            let written = cmd_mode(&loaded, &out_dir, ModeIndex::pair(n, index2), t)?;
            for p in written {
                println!("wrote {}", p.display());
            }
            Ok(EXIT_OK)
        }
        Command::Verify { suite } => {
            let suites: Vec<String> = if suite.is_empty() {
                ALL_SUITES.iter().map(|s| s.to_string()).collect()
            } else {
                suite
            };
            let (path, all_passed) = cmd_verify(&loaded, &out_dir, &suites)?;
            println!("wrote {}", path.display());
            if all_passed {
                Ok(EXIT_OK)
            } else {
                eprintln!("verification failed; see {}", path.display());
                Ok(EXIT_VERIFY_FAILED)
            }
        }
        Command::Sweep => {
            let path = cmd_sweep(&loaded, &out_dir)?;
            println!("wrote {}", path.display());
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
