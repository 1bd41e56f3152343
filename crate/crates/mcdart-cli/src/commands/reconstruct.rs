//! Reconstruct from sinogram files: per-channel float reconstructions, the
//! final labeling, and a replayable run manifest.
//!
//! Geometry comes from the sinogram sidecars (detector bins, angle count;
//! angles are assumed equidistant over the half circle). The grid defaults to
//! detector-bins squared unless `size` is given.

use std::path::{Path, PathBuf};

use mcdart::{
    build_operator, io, mcdart_run, segmentation::MaterialSpectra, GridSpec, ParallelGeometry,
    Representation,
};

use crate::cli_error::{CliError, CliResult};
use crate::config::ExperimentConfig;

use super::ensure_out_dir;

pub struct ReconstructOutputs {
    pub labels_path: PathBuf,
    pub reconstruction_sidecars: Vec<PathBuf>,
    pub manifest_path: PathBuf,
}

pub fn run(config: &ExperimentConfig, size_given: bool) -> CliResult<ReconstructOutputs> {
    let spectra_path = config
        .spectra
        .clone()
        .ok_or_else(|| CliError::config("reconstruct needs --spectra or a config entry"))?;
    if config.sinograms.is_empty() {
        return Err(CliError::config(
            "reconstruct needs at least one sinogram sidecar",
        ));
    }

    let spectra: MaterialSpectra = io::read_spectra_csv(&spectra_path)?;

    let mut channels: Vec<(io::SinogramHeader, Vec<f64>, &Path)> = Vec::new();
    for sidecar in &config.sinograms {
        let (header, values) = io::read_sinogram(sidecar)?;
        channels.push((header, values, sidecar));
    }
    channels.sort_by_key(|(h, _, _)| h.channel);
    let (bins, angle_count) = (channels[0].0.width, channels[0].0.height);
    for (i, (header, _, sidecar)) in channels.iter().enumerate() {
        if header.width != bins || header.height != angle_count {
            return Err(CliError::io(format!(
                "{}: geometry {}x{} does not match channel 1's {bins}x{angle_count}",
                sidecar.display(),
                header.width,
                header.height
            )));
        }
        if header.channel != i + 1 {
            return Err(CliError::config(format!(
                "sinogram channels must be 1..={}, found channel {} at position {}",
                channels.len(),
                header.channel,
                i + 1
            )));
        }
    }
    if channels.len() != spectra.channels() {
        return Err(CliError::config(format!(
            "spectra define {} channels but {} sinograms were given",
            spectra.channels(),
            channels.len()
        )));
    }

    let size = if size_given { config.size } else { bins };
    let grid = GridSpec::new(size, size)?;
    let geometry = ParallelGeometry::equidistant(angle_count, bins)?;
    let op = build_operator(grid, geometry, Representation::StoredSparse)?;

    let sinograms: Vec<Vec<f64>> = channels.iter().map(|(_, v, _)| v.clone()).collect();
    let params = config.dart_params(config.seed);
    let (stack, labels, _) = mcdart_run(&op, &sinograms, &spectra, &params, None)?;

    ensure_out_dir(config)?;
    let labels_path = config.out_dir.join("labels.pgm");
    io::write_label_pgm(&labels, size, size, &labels_path)?;
    let mut recon_sidecars = Vec::new();
    for c in 0..stack.num_channels() {
        recon_sidecars.push(io::write_sinogram(
            &config.out_dir,
            "recon",
            stack.channel(c),
            size,
            size,
            c + 1,
        )?);
    }

    // The manifest is a config file; replaying it reproduces the outputs.
    // The output directory is deliberately not recorded so a replay into a
    // fresh directory yields byte-identical files, manifest included.
    let manifest_path = config.out_dir.join("run_manifest.txt");
    let sino_list = config
        .sinograms
        .iter()
        .map(|p| p.display().to_string())
        .collect::<Vec<_>>()
        .join(",");
    let text = format!(
        "# reconstruction manifest; replay with `mcdart reconstruct --config <this file>`\n\
         size = {size}\n\
         start_iterations = {}\n\
         dart_iterations = {}\n\
         arm_iterations = {}\n\
         fix_probability = {}\n\
         seed = {}\n\
         spectra = {}\n\
         sinograms = {sino_list}\n",
        config.start_iterations,
        config.dart_iterations,
        config.arm_iterations,
        config.fix_probability,
        config.seed,
        spectra_path.display(),
    );
    std::fs::write(&manifest_path, text)
        .map_err(|e| CliError::io(format!("{}: {e}", manifest_path.display())))?;

    Ok(ReconstructOutputs {
        labels_path,
        reconstruction_sidecars: recon_sidecars,
        manifest_path,
    })
}
