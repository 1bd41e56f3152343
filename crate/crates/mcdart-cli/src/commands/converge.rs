//! Convergence study: class-count trajectories and pixel error over ARM work
//! for MC-DART against a matched-work plain-SIRT baseline.
//!
//! The protocol is fixed: m = 4 materials, C = 10 channels, 8 angles,
//! 2 start iterations, K = 10 outer iterations of 10 ARM iterations each at
//! fix probability 0.99; the baseline spends the same 100 ARM iterations in
//! one stretch with an observation-only segmentation every 10. Grid size,
//! detector, run count, seed, and output directory come from the
//! configuration.

use rayon::prelude::*;

use mcdart::{
    arm_baseline_run, disk_region, generate_phantom, generate_spectra, mcdart_run, seed,
    synthesize, DartTrace, EvalContext, PhantomSpec,
};

use crate::cli_error::CliResult;
use crate::config::ExperimentConfig;
use crate::csvout::{fmt_f64, CsvFile};
use crate::svg::{self, Series};

use super::{ensure_out_dir, run_seed, PURPOSE_DART, PURPOSE_PHANTOM, PURPOSE_SPECTRA};

pub const MATERIALS: usize = 4;
pub const CHANNELS: usize = 10;
pub const ANGLES: usize = 8;
pub const START_ITERATIONS: usize = 2;
pub const DART_ITERATIONS: usize = 10;
pub const ARM_ITERATIONS: usize = 10;
pub const FIX_PROBABILITY: f64 = 0.99;
pub const BASELINE_TOTAL: usize = DART_ITERATIONS * ARM_ITERATIONS;

pub struct ConvergeRun {
    pub dart: DartTrace,
    pub baseline: DartTrace,
    pub true_region_counts: Vec<usize>,
    pub region_size: usize,
}

pub struct ConvergeOutputs {
    pub runs: Vec<ConvergeRun>,
}

fn protocol_config(config: &ExperimentConfig) -> ExperimentConfig {
    ExperimentConfig {
        angles: ANGLES,
        channels: vec![CHANNELS],
        materials: vec![MATERIALS],
        start_iterations: START_ITERATIONS,
        dart_iterations: DART_ITERATIONS,
        arm_iterations: ARM_ITERATIONS,
        fix_probability: FIX_PROBABILITY,
        ..config.clone()
    }
}

pub fn run(config: &ExperimentConfig) -> CliResult<ConvergeOutputs> {
    let config = protocol_config(config);
    config.validate()?;
    ensure_out_dir(&config)?;
    let op = super::build_op(&config, ANGLES)?;

    let runs: Vec<ConvergeRun> = (0..config.runs)
        .into_par_iter()
        .map(|run| -> CliResult<ConvergeRun> {
            let cell_seed = run_seed(config.seed, CHANNELS, MATERIALS, run);
            let phantom_spec = PhantomSpec::new(
                *op.grid(),
                MATERIALS,
                seed::mix(cell_seed, &[PURPOSE_PHANTOM]),
            );
            let phantom = generate_phantom(&phantom_spec)?;
            let mut rng = seed::rng(seed::mix(cell_seed, &[PURPOSE_SPECTRA]));
            let spectra = generate_spectra(MATERIALS, CHANNELS, &mut rng)?;
            let problem = synthesize(&phantom, &spectra, &op)?;
            let region = disk_region(op.grid(), phantom_spec.disk_radius_fraction);
            let eval = EvalContext {
                reference: &phantom,
                region: &region,
            };
            let params = config.dart_params(seed::mix(cell_seed, &[PURPOSE_DART]));
            let (_, _, dart) =
                mcdart_run(&op, &problem.sinograms, &spectra, &params, Some(&eval))?;
            let baseline = arm_baseline_run(
                &op,
                &problem.sinograms,
                &spectra,
                START_ITERATIONS,
                BASELINE_TOTAL,
                ARM_ITERATIONS,
                Some(&eval),
            )?;
            let true_region_counts =
                mcdart::class_counts(&phantom, &region, spectra.num_labels());
            Ok(ConvergeRun {
                dart,
                baseline,
                true_region_counts,
                region_size: region.len(),
            })
        })
        .collect::<CliResult<_>>()?;

    let comment = config.comment_line("converge");
    let mut classes_csv = CsvFile::create(
        &config.out_dir.join("converge_classes.csv"),
        &comment,
        "run,record,arm_iterations,class,pixels,true_pixels",
    )?;
    let mut baseline_classes_csv = CsvFile::create(
        &config.out_dir.join("converge_baseline_classes.csv"),
        &comment,
        "run,record,arm_iterations,class,pixels,true_pixels",
    )?;
    let mut error_csv = CsvFile::create(
        &config.out_dir.join("converge_error.csv"),
        &comment,
        "run,approach,record,arm_iterations,pixel_error_pct",
    )?;

    for (run, outcome) in runs.iter().enumerate() {
        for (csv, trace) in [
            (&mut classes_csv, &outcome.dart),
            (&mut baseline_classes_csv, &outcome.baseline),
        ] {
            for (rec_idx, rec) in trace.records.iter().enumerate() {
                let counts = rec
                    .region_class_counts
                    .as_ref()
                    .expect("converge runs carry an evaluation context");
                for (class, &pixels) in counts.iter().enumerate() {
                    csv.row(&[
                        run.to_string(),
                        rec_idx.to_string(),
                        rec.arm_iterations_total.to_string(),
                        class.to_string(),
                        pixels.to_string(),
                        outcome.true_region_counts[class].to_string(),
                    ])?;
                }
            }
        }
        for (approach, trace) in [("mcdart", &outcome.dart), ("baseline", &outcome.baseline)] {
            for (rec_idx, rec) in trace.records.iter().enumerate() {
                error_csv.row(&[
                    run.to_string(),
                    approach.to_string(),
                    rec_idx.to_string(),
                    rec.arm_iterations_total.to_string(),
                    fmt_f64(rec.pixel_error.expect("evaluation context set").percentage),
                ])?;
            }
        }
    }
    classes_csv.finish()?;
    baseline_classes_csv.finish()?;
    error_csv.finish()?;

    plot(&config, &runs)?;
    Ok(ConvergeOutputs { runs })
}

fn plot(config: &ExperimentConfig, runs: &[ConvergeRun]) -> CliResult<()> {
    let Some(first) = runs.first() else {
        return Ok(());
    };

    // Class-count trajectories of the first run, materials only, with dashed
    // true counts.
    let mut series = Vec::new();
    for class in 1..=MATERIALS {
        let points: Vec<(f64, f64)> = first
            .dart
            .records
            .iter()
            .map(|r| {
                (
                    r.arm_iterations_total as f64,
                    r.region_class_counts.as_ref().expect("eval set")[class] as f64,
                )
            })
            .collect();
        let x_range: Vec<f64> = points.iter().map(|p| p.0).collect();
        series.push(Series {
            name: format!("class {class}"),
            points,
            dashed: false,
            color: class - 1,
        });
        series.push(Series {
            name: format!("class {class} true"),
            points: x_range
                .iter()
                .map(|&x| (x, first.true_region_counts[class] as f64))
                .collect(),
            dashed: true,
            color: class - 1,
        });
    }
    svg::line_chart(
        &config.out_dir.join("converge_classes.svg"),
        "Pixels per class during MC-DART (run 0)",
        "ARM iterations",
        "pixels in class",
        &series,
    )?;

    let mut error_series = Vec::new();
    for (i, (name, trace)) in [("MC-DART", &first.dart), ("SIRT baseline", &first.baseline)]
        .into_iter()
        .enumerate()
    {
        error_series.push(Series {
            name: name.to_string(),
            points: trace
                .records
                .iter()
                .map(|r| {
                    (
                        r.arm_iterations_total as f64,
                        r.pixel_error.expect("eval set").percentage,
                    )
                })
                .collect(),
            dashed: false,
            color: i,
        });
    }
    svg::line_chart(
        &config.out_dir.join("converge_error.svg"),
        "Inner-disk pixel error over ARM work (run 0)",
        "ARM iterations",
        "pixel error (%)",
        &error_series,
    )
}
