use clap::Parser;
use fluxsim_cli::cache::{self, Cache};
use fluxsim_cli::{exit_code, load_config, run, RunOptions, Subcommand, EXIT_CONFIG};
use std::path::PathBuf;
use std::process::ExitCode;

/// Heavy-fluxonium spectroscopy simulator.
#[derive(Parser)]
#[command(name = "fluxsim", version)]
struct Cli {
    #[arg(value_enum)]
    subcommand: Subcommand,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides output.directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (overrides output.parallelism).
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    /// Recompute every cell and leave the cache untouched.
    #[arg(long)]
    no_cache: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let opts = RunOptions {
        out: cli.out,
        jobs: cli.jobs.map(usize::from),
        cache: if cli.no_cache {
            Cache::disabled()
        } else {
            Cache::at(cache::default_dir())
        },
    };
    let result = run(cli.subcommand, &cfg, &opts);
    match &result {
        Ok(o) => {
            print!("{}", o.summary);
            for f in &o.manifest.failures {
                eprintln!(
                    "failed cell ({}, {}) at flux {}: {}",
                    f.flux_index, f.freq_index, f.phi_ext, f.error
                );
            }
            eprintln!(
                "wrote {} files to {} (cache {} hits, {} misses)",
                o.manifest.outputs.len() + 1,
                o.out_dir.display(),
                o.manifest.cache.hits,
                o.manifest.cache.misses
            );
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
