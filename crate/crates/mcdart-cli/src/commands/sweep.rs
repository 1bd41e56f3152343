//! Channel-by-material sweep: the pixel-error surface.

use rayon::prelude::*;

use crate::cli_error::CliResult;
use crate::config::ExperimentConfig;
use crate::csvout::{fmt_f64, CsvFile};
use crate::svg;

use super::{build_op, ensure_out_dir, run_cell};

pub struct SweepOutputs {
    /// (channels, materials, run, seed, error_pct)
    pub runs: Vec<(usize, usize, usize, u64, f64)>,
    /// (channels, materials, mean_error_pct)
    pub cells: Vec<(usize, usize, f64)>,
}

pub fn run(config: &ExperimentConfig) -> CliResult<SweepOutputs> {
    config.validate()?;
    ensure_out_dir(config)?;
    let op = build_op(config, config.angles)?;

    let mut jobs = Vec::new();
    for &channels in &config.channels {
        for &materials in &config.materials {
            for run in 0..config.runs {
                jobs.push((channels, materials, run));
            }
        }
    }
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(channels, materials, run)| {
            run_cell(config, &op, channels, materials, run)
                .map(|cell| (channels, materials, run, cell))
        })
        .collect::<CliResult<_>>()?;

    let comment = config.comment_line("sweep");
    let mut runs_csv = CsvFile::create(
        &config.out_dir.join("sweep_runs.csv"),
        &comment,
        "channels,materials,run,seed,pixel_error_pct",
    )?;
    let mut timing_csv = CsvFile::create(
        &config.out_dir.join("sweep_timing.csv"),
        &comment,
        "channels,materials,run,wall_time_s",
    )?;
    let mut run_records = Vec::new();
    for (channels, materials, run, cell) in &results {
        run_records.push((*channels, *materials, *run, cell.seed, cell.error_pct));
        runs_csv.row(&[
            channels.to_string(),
            materials.to_string(),
            run.to_string(),
            cell.seed.to_string(),
            fmt_f64(cell.error_pct),
        ])?;
        timing_csv.row(&[
            channels.to_string(),
            materials.to_string(),
            run.to_string(),
            fmt_f64(cell.wall_seconds),
        ])?;
    }
    runs_csv.finish()?;
    timing_csv.finish()?;

    // Per-cell means, in (channels, materials) order; mean taken over runs in
    // run order.
    let mut cells_csv = CsvFile::create(
        &config.out_dir.join("sweep_cells.csv"),
        &comment,
        "channels,materials,runs,mean_pixel_error_pct",
    )?;
    let mut cells = Vec::new();
    for &channels in &config.channels {
        for &materials in &config.materials {
            let sum: f64 = results
                .iter()
                .filter(|(c, m, _, _)| *c == channels && *m == materials)
                .map(|(_, _, _, cell)| cell.error_pct)
                .sum();
            let mean = sum / config.runs as f64;
            cells.push((channels, materials, mean));
            cells_csv.row(&[
                channels.to_string(),
                materials.to_string(),
                config.runs.to_string(),
                fmt_f64(mean),
            ])?;
        }
    }
    cells_csv.finish()?;

    if config.plot {
        // Heat map rows indexed by materials, columns by channels.
        let values: Vec<Vec<f64>> = config
            .materials
            .iter()
            .map(|&m| {
                config
                    .channels
                    .iter()
                    .map(|&c| {
                        cells
                            .iter()
                            .find(|(cc, cm, _)| *cc == c && *cm == m)
                            .map(|(_, _, e)| *e)
                            .unwrap_or(0.0)
                    })
                    .collect()
            })
            .collect();
        svg::heatmap(
            &config.out_dir.join("sweep_heatmap.svg"),
            "Mean inner-disk pixel error (%)",
            "channels",
            "materials",
            &config.channels,
            &config.materials,
            &values,
        )?;
    }

    Ok(SweepOutputs {
        runs: run_records,
        cells,
    })
}
