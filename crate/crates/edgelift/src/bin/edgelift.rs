use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use edgelift::config::Config;
use edgelift::pipeline::{run_decompose, run_phantom, run_reconstruct};
use edgelift::report::{compare, Report};
use edgelift::{Error, Result};
use edgelift_core::{Method, PhantomSpec};

/// Motion-compensated integer wavelet lifting for image volumes.
#[derive(Parser)]
#[command(name = "edgelift", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic contraction phantom and its ground-truth sidecar.
    Phantom(PhantomArgs),
    /// Decompose a volume with each method, verify, and write a report.
    Decompose(DecomposeArgs),
    /// Rebuild a volume from the artifacts of `decompose`.
    Reconstruct(ReconstructArgs),
    /// Summarize several reports side by side.
    Compare(CompareArgs),
}

#[derive(Args)]
struct PhantomArgs {
    /// Output volume file.
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value_t = 128)]
    width: usize,
    #[arg(long, default_value_t = 128)]
    height: usize,
    #[arg(long, default_value_t = 4)]
    frames: usize,
    #[arg(long, default_value_t = 24)]
    blobs: usize,
    /// Peak displacement in pixels, at most 8.
    #[arg(long, default_value_t = 4.0)]
    amplitude: f64,
    /// Standard deviation of the additive noise.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 12)]
    bit_depth: u8,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Configuration file of `key = value` lines.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Input volume, or `phantom`.
    #[arg(short, long)]
    input: Option<String>,
    #[arg(short, long)]
    output_dir: Option<PathBuf>,
    /// Comma separated subset of none, block, mesh, graph.
    #[arg(short, long)]
    methods: Option<String>,
    /// Extra `key=value` overrides, applied last.
    #[arg(short = 's', long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Also write every graph prediction matrix as triplets.
    #[arg(long)]
    dump_matrices: bool,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Output directory of a `decompose` run.
    dir: PathBuf,
    #[arg(short, long)]
    method: Method,
    /// Where to write the rebuilt volume.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Report files, at least two.
    #[arg(required = true, num_args = 2..)]
    reports: Vec<PathBuf>,
    /// Also write the table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn decompose_config(args: &DecomposeArgs) -> Result<Config> {
    let mut config = match &args.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(input) = &args.input {
        config.set("input", input)?;
    }
    if let Some(dir) = &args.output_dir {
        config.output_dir = dir.clone();
    }
    if let Some(methods) = &args.methods {
        config.set("methods", methods)?;
    }
    for item in &args.overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override {item:?} is not key=value")))?;
        config.set(key.trim(), value.trim())?;
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Phantom(a) => {
            let spec = PhantomSpec {
                width: a.width,
                height: a.height,
                frame_count: a.frames,
                blob_count: a.blobs,
                contraction_amplitude: a.amplitude,
                noise_sigma: a.noise,
                rng_seed: a.seed,
                bit_depth: a.bit_depth,
            };
            run_phantom(&spec, &a.output)?;
            println!("wrote {}", a.output.display());
        }
        Command::Decompose(a) => {
            let config = decompose_config(&a)?;
            let report = run_decompose(&config, a.dump_matrices)?;
            print!("{}", report.to_csv());
        }
        Command::Reconstruct(a) => {
            let volume = run_reconstruct(&a.dir, a.method, a.output.as_deref())?;
            println!(
                "reconstructed {} frames of {}x{}",
                volume.len(),
                volume.width(),
                volume.height()
            );
        }
        Command::Compare(a) => {
            let reports = a
                .reports
                .iter()
                .map(Report::load)
                .collect::<Result<Vec<_>>>()?;
            let table = compare(&reports)?;
            print!("{}", table.to_text());
            if let Some(path) = &a.csv {
                std::fs::write(path, table.to_csv()).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("edgelift: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
