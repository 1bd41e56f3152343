//! `mcdart` command line: discrete tomography experiments with DART and
//! multi-channel DART.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mcdart_cli::cli_error::{CliError, CliResult};
use mcdart_cli::commands;
use mcdart_cli::config::ExperimentConfig;

#[derive(Parser)]
#[command(
    name = "mcdart",
    version,
    about = "Discrete tomography reconstruction experiments with DART and multi-channel DART"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct CommonOpts {
    /// Config file with `key = value` lines; flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Grid side length in pixels (grids are square).
    #[arg(long)]
    size: Option<usize>,

    /// Detector bin count.
    #[arg(long)]
    detector: Option<usize>,

    /// Number of equidistant projection angles.
    #[arg(long)]
    angles: Option<usize>,

    /// Channel counts, e.g. "1-10" or "1,4,8".
    #[arg(long)]
    channels: Option<String>,

    /// Material counts, e.g. "2-10".
    #[arg(long)]
    materials: Option<String>,

    /// Runs per sweep cell.
    #[arg(long)]
    runs: Option<usize>,

    /// ARM iterations for the initial reconstruction.
    #[arg(long = "start-iters")]
    start_iters: Option<usize>,

    /// Outer DART iterations K.
    #[arg(long = "dart-iters")]
    dart_iters: Option<usize>,

    /// ARM iterations per DART iteration.
    #[arg(long = "arm-iters")]
    arm_iters: Option<usize>,

    /// Fix probability beta in [0, 1].
    #[arg(long)]
    beta: Option<f64>,

    /// Master seed for all derived randomness.
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory.
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,

    /// Angle counts for the angle study, e.g. "2,32,128".
    #[arg(long = "angle-counts")]
    angle_counts: Option<String>,

    /// Emit SVG plots alongside the CSVs.
    #[arg(long)]
    plot: bool,

    /// Use the paper-scale profile: 128x128 grid, 128 bins, 100 runs.
    #[arg(long = "paper-scale")]
    paper_scale: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep channels x materials and record inner-disk pixel errors.
    Sweep(CommonOpts),
    /// Convergence study: MC-DART vs a matched-work SIRT baseline.
    Converge(CommonOpts),
    /// Angle study over (angle count, channels, materials) cells.
    Angles(CommonOpts),
    /// Generate a synthetic phantom, spectra, and sinogram files.
    Synth(CommonOpts),
    /// Reconstruct from sinogram files and a spectra table.
    Reconstruct(ReconstructOpts),
}

#[derive(Args)]
struct ReconstructOpts {
    #[command(flatten)]
    common: CommonOpts,

    /// Spectra CSV (header `label,channel,mu`).
    #[arg(long)]
    spectra: Option<PathBuf>,

    /// Sinogram sidecar JSON files, one per channel.
    sinograms: Vec<PathBuf>,
}

fn build_config(opts: &CommonOpts) -> CliResult<ExperimentConfig> {
    let mut file_paper_scale = false;
    if let Some(path) = &opts.config {
        // Peek at paper_scale first so the profile sets the defaults the
        // file's other keys then override.
        let mut probe = ExperimentConfig::default();
        probe.apply_file(path)?;
        file_paper_scale = probe.paper_scale;
    }
    let mut config = if opts.paper_scale || file_paper_scale {
        ExperimentConfig::paper_scale_profile()
    } else {
        ExperimentConfig::default()
    };
    if let Some(path) = &opts.config {
        config.apply_file(path)?;
    }

    let set = |config: &mut ExperimentConfig, key: &str, value: String| -> CliResult<()> {
        config
            .set(key, &value)
            .map_err(|e| CliError::config(format!("--{}: {e}", key.replace('_', "-"))))
    };
    if let Some(v) = opts.size {
        set(&mut config, "size", v.to_string())?;
    }
    if let Some(v) = opts.detector {
        set(&mut config, "detector", v.to_string())?;
    }
    if let Some(v) = opts.angles {
        set(&mut config, "angles", v.to_string())?;
    }
    if let Some(v) = &opts.channels {
        set(&mut config, "channels", v.clone())?;
    }
    if let Some(v) = &opts.materials {
        set(&mut config, "materials", v.clone())?;
    }
    if let Some(v) = opts.runs {
        set(&mut config, "runs", v.to_string())?;
    }
    if let Some(v) = opts.start_iters {
        set(&mut config, "start_iterations", v.to_string())?;
    }
    if let Some(v) = opts.dart_iters {
        set(&mut config, "dart_iterations", v.to_string())?;
    }
    if let Some(v) = opts.arm_iters {
        set(&mut config, "arm_iterations", v.to_string())?;
    }
    if let Some(v) = opts.beta {
        set(&mut config, "fix_probability", v.to_string())?;
    }
    if let Some(v) = opts.seed {
        set(&mut config, "seed", v.to_string())?;
    }
    if let Some(v) = &opts.out_dir {
        config.out_dir = v.clone();
    }
    if let Some(v) = &opts.angle_counts {
        set(&mut config, "angle_counts", v.clone())?;
    }
    if opts.plot {
        config.plot = true;
    }
    Ok(config)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Sweep(opts) => {
            let config = build_config(&opts)?;
            let out = commands::sweep::run(&config)?;
            eprintln!(
                "sweep: {} runs over {} cells -> {}",
                out.runs.len(),
                out.cells.len(),
                config.out_dir.display()
            );
        }
        Command::Converge(opts) => {
            let config = build_config(&opts)?;
            let out = commands::converge::run(&config)?;
            eprintln!(
                "converge: {} runs -> {}",
                out.runs.len(),
                config.out_dir.display()
            );
        }
        Command::Angles(opts) => {
            let config = build_config(&opts)?;
            let out = commands::angles::run(&config)?;
            eprintln!(
                "angles: {} cells -> {}",
                out.cells.len(),
                config.out_dir.display()
            );
        }
        Command::Synth(opts) => {
            let config = build_config(&opts)?;
            let out = commands::synth::run(&config)?;
            eprintln!(
                "synth: {} ({} inner-disk pixels), {} channel(s) -> {}",
                out.phantom_path.display(),
                out.inner_disk_pixels,
                out.sinogram_sidecars.len(),
                config.out_dir.display()
            );
        }
        Command::Reconstruct(opts) => {
            let mut config = build_config(&opts.common)?;
            if let Some(spectra) = &opts.spectra {
                config.spectra = Some(spectra.clone());
            }
            if !opts.sinograms.is_empty() {
                config.sinograms = opts.sinograms.clone();
            }
            let size_given = config.size_explicit;
            let out = commands::reconstruct::run(&config, size_given)?;
            eprintln!(
                "reconstruct: {} + {} channel reconstruction(s), manifest {}",
                out.labels_path.display(),
                out.reconstruction_sidecars.len(),
                out.manifest_path.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
