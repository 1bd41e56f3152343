//! Generate a synthetic problem on disk: phantom, spectra, and per-channel
//! sinograms in the formats the reconstruct command reads.

use std::path::PathBuf;

use mcdart::{
    disk_region, generate_phantom, generate_spectra, io, seed, synthesize, PhantomSpec,
};

use crate::cli_error::{CliError, CliResult};
use crate::config::ExperimentConfig;

use super::{build_op, ensure_out_dir, PURPOSE_PHANTOM, PURPOSE_SPECTRA};

pub struct SynthOutputs {
    pub phantom_path: PathBuf,
    pub spectra_path: PathBuf,
    pub sinogram_sidecars: Vec<PathBuf>,
    pub inner_disk_pixels: usize,
}

/// Uses the first entry of the configured channel and material lists.
pub fn run(config: &ExperimentConfig) -> CliResult<SynthOutputs> {
    config.validate()?;
    ensure_out_dir(config)?;
    let channels = config.channels[0];
    let materials = config.materials[0];
    let op = build_op(config, config.angles)?;

    let phantom_spec = PhantomSpec::new(
        *op.grid(),
        materials,
        seed::mix(config.seed, &[PURPOSE_PHANTOM]),
    );
    let phantom = generate_phantom(&phantom_spec)?;
    let mut rng = seed::rng(seed::mix(config.seed, &[PURPOSE_SPECTRA]));
    let spectra = generate_spectra(materials, channels, &mut rng)?;
    let problem = synthesize(&phantom, &spectra, &op)?;

    let phantom_path = config.out_dir.join("phantom.pgm");
    io::write_label_pgm(&phantom, config.size, config.size, &phantom_path)?;
    let spectra_path = config.out_dir.join("spectra.csv");
    io::write_spectra_csv(&spectra, &spectra_path)?;
    let mut sidecars = Vec::new();
    for (c, sino) in problem.sinograms.iter().enumerate() {
        sidecars.push(io::write_sinogram(
            &config.out_dir,
            "sino",
            sino,
            config.detector,
            config.angles,
            c + 1,
        )?);
    }

    let manifest = config.out_dir.join("synth_manifest.txt");
    let text = format!(
        "# synthetic problem parameters\nsize = {}\ndetector = {}\nangles = {}\nmaterials = {}\nchannels = {}\nseed = {}\n",
        config.size, config.detector, config.angles, materials, channels, config.seed
    );
    std::fs::write(&manifest, text)
        .map_err(|e| CliError::io(format!("{}: {e}", manifest.display())))?;

    Ok(SynthOutputs {
        phantom_path,
        spectra_path,
        sinogram_sidecars: sidecars,
        inner_disk_pixels: disk_region(op.grid(), phantom_spec.disk_radius_fraction).len(),
    })
}
