//! DART and multi-channel DART.
//!
//! One engine drives both: the single-channel algorithm is the one-channel
//! instance of the multi-channel loop, so the two produce bit-identical
//! results when given the same seed and parameters.
//!
//! Each outer iteration segments the current reconstruction stack, then picks
//! the free set: the segmentation's boundary voxels plus a random sample of
//! the rest. Every channel is re-solved by SIRT seeded with the merged image
//! in which fixed voxels are snapped to their segmented attenuations and free
//! voxels keep their continuous values. Re-snapping the (mostly correct)
//! interior each iteration removes accumulated blur there, while voxels that
//! were snapped to a wrong label can still relax back toward data consistency
//! during the solve instead of forcing their error onto the free voxels.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::{class_counts, pixel_error, PixelErrorReport};
use crate::projector::{GridSpec, Projector, VoxelMask};
use crate::seed;
use crate::segmentation::{segment_multi, ChannelStack, LabelImage, MaterialSpectra};
use crate::solvers::sirt_run;

/// Neighborhood used for boundary detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

/// Parameters of the outer DART loop.
#[derive(Debug, Clone)]
pub struct DartParams {
    /// ARM iterations for the initial full reconstruction.
    pub start_iterations: usize,
    /// Number of outer iterations K.
    pub dart_iterations: usize,
    /// ARM iterations inside each outer iteration.
    pub arm_iterations: usize,
    /// Probability that a non-boundary voxel is snapped to its segmented
    /// value at the start of the next solve.
    pub fix_probability: f64,
    pub connectivity: Connectivity,
    pub rng_seed: u64,
}

impl Default for DartParams {
    fn default() -> Self {
        // Reference values: 10/10/10 iterations, beta 0.99.
        DartParams {
            start_iterations: 10,
            dart_iterations: 10,
            arm_iterations: 10,
            fix_probability: 0.99,
            connectivity: Connectivity::Eight,
            rng_seed: 0,
        }
    }
}

impl DartParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.fix_probability) {
            return Err(Error::InvalidParameter(format!(
                "fix probability must lie in [0, 1], got {}",
                self.fix_probability
            )));
        }
        Ok(())
    }
}

/// Optional ground truth for per-iteration trace metrics.
#[derive(Debug, Clone, Copy)]
pub struct EvalContext<'a> {
    pub reference: &'a LabelImage,
    /// Voxel indices over which pixel error and region counts are taken.
    pub region: &'a [usize],
}

/// Observables captured after the initial reconstruction and after each outer
/// iteration.
#[derive(Debug, Clone)]
pub struct TraceRecord {
    /// Total ARM iterations spent per channel up to this record.
    pub arm_iterations_total: usize,
    /// Pixels per label over the whole image; sums to n.
    pub class_counts: Vec<usize>,
    /// Pixels per label over the evaluation region, when a reference is given.
    pub region_class_counts: Option<Vec<usize>>,
    pub pixel_error: Option<PixelErrorReport>,
    /// Euclidean norm of p - Wx per channel, on the full operator.
    pub residual_norms: Vec<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct DartTrace {
    pub records: Vec<TraceRecord>,
}

impl DartTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Voxels whose label differs from at least one neighbor's. Borders are
/// non-periodic. Returns sorted voxel indices.
pub fn detect_boundary(y: &LabelImage, grid: &GridSpec, connectivity: Connectivity) -> Vec<usize> {
    assert_eq!(y.len(), grid.n(), "label image does not match grid");
    let (w, h) = (grid.width() as isize, grid.height() as isize);
    let offsets: &[(isize, isize)] = match connectivity {
        Connectivity::Four => &[(0, -1), (-1, 0), (1, 0), (0, 1)],
        Connectivity::Eight => &[
            (-1, -1),
            (0, -1),
            (1, -1),
            (-1, 0),
            (1, 0),
            (-1, 1),
            (0, 1),
            (1, 1),
        ],
    };
    let mut boundary = Vec::new();
    for r in 0..h {
        for c in 0..w {
            let j = (r * w + c) as usize;
            let here = y.label(j);
            let differs = offsets.iter().any(|&(dc, dr)| {
                let (nc, nr) = (c + dc, r + dr);
                nc >= 0
                    && nc < w
                    && nr >= 0
                    && nr < h
                    && y.label((nr * w + nc) as usize) != here
            });
            if differs {
                boundary.push(j);
            }
        }
    }
    boundary
}

/// Free set of one DART iteration: all boundary voxels plus each non-boundary
/// voxel independently with probability 1 - beta. Draws are taken in voxel
/// index order from the supplied generator.
pub fn sample_free_set(
    y: &LabelImage,
    boundary: &[usize],
    beta: f64,
    rng: &mut impl Rng,
) -> VoxelMask {
    let n = y.len();
    let mut free = vec![false; n];
    for &j in boundary {
        free[j] = true;
    }
    let include_probability = 1.0 - beta;
    for j in 0..n {
        if !free[j] && rng.gen::<f64>() < include_probability {
            free[j] = true;
        }
    }
    VoxelMask::new(free)
}

// Purpose tag for the per-iteration mask RNG stream.
const STREAM_MASK: u64 = 1;

fn record_state(
    op: &Projector,
    sinograms: &[&[f64]],
    stack: &[Vec<f64>],
    y: &LabelImage,
    spectra: &MaterialSpectra,
    eval: Option<&EvalContext>,
    arm_iterations_total: usize,
) -> Result<TraceRecord> {
    let all: Vec<usize> = (0..y.len()).collect();
    let counts = class_counts(y, &all, spectra.num_labels());
    let (region_counts, err) = match eval {
        None => (None, None),
        Some(ctx) => (
            Some(class_counts(y, ctx.region, spectra.num_labels())),
            Some(pixel_error(y, ctx.reference, ctx.region)?),
        ),
    };
    let mut residual_norms = Vec::with_capacity(stack.len());
    for (x, p) in stack.iter().zip(sinograms) {
        let projected = op.apply(x)?;
        let sq: f64 = projected
            .iter()
            .zip(*p)
            .map(|(a, b)| (b - a) * (b - a))
            .sum();
        residual_norms.push(sq.sqrt());
    }
    Ok(TraceRecord {
        arm_iterations_total,
        class_counts: counts,
        region_class_counts: region_counts,
        pixel_error: err,
        residual_norms,
    })
}

fn check_problem(op: &Projector, sinograms: &[&[f64]], spectra: &MaterialSpectra) -> Result<()> {
    if sinograms.len() != spectra.channels() {
        return Err(Error::ChannelMismatch {
            expected: spectra.channels(),
            actual: sinograms.len(),
        });
    }
    for p in sinograms {
        if p.len() != op.rows() {
            return Err(Error::ShapeMismatch {
                context: "dart: sinogram",
                expected: op.rows(),
                actual: p.len(),
            });
        }
    }
    Ok(())
}

fn run_engine(
    op: &Projector,
    sinograms: &[&[f64]],
    spectra: &MaterialSpectra,
    params: &DartParams,
    eval: Option<&EvalContext>,
) -> Result<(Vec<Vec<f64>>, LabelImage, DartTrace)> {
    params.validate()?;
    check_problem(op, sinograms, spectra)?;
    let n = op.cols();

    // Initial reconstruction: every voxel free, zero start.
    let zeros = vec![0.0; n];
    let mut stack: Vec<Vec<f64>> = sinograms
        .par_iter()
        .map(|p| sirt_run(op, p, &zeros, params.start_iterations))
        .collect::<Result<_>>()?;

    let segment = |stack: &[Vec<f64>]| -> Result<LabelImage> {
        segment_multi(&ChannelStack::new(stack.to_vec())?, spectra)
    };

    let mut y = segment(&stack)?;
    let mut arm_total = params.start_iterations;
    let mut trace = DartTrace::default();
    trace
        .records
        .push(record_state(op, sinograms, &stack, &y, spectra, eval, arm_total)?);

    for k in 1..=params.dart_iterations {
        let boundary = detect_boundary(&y, op.grid(), params.connectivity);
        let mut rng = seed::rng(seed::mix(params.rng_seed, &[k as u64, STREAM_MASK]));
        let mask = sample_free_set(&y, &boundary, params.fix_probability, &mut rng);

        // Merge, then re-solve each channel on the full system from the
        // merged seed: fixed voxels snap to their segmented attenuations,
        // free voxels warm-start from the previous continuous values.
        let current = std::mem::take(&mut stack);
        stack = current
            .into_par_iter()
            .enumerate()
            .map(|(c, x_prev)| {
                let merged: Vec<f64> = x_prev
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        if mask.is_free(j) {
                            v
                        } else {
                            spectra.mu(y.label(j), c)
                        }
                    })
                    .collect();
                sirt_run(op, sinograms[c], &merged, params.arm_iterations)
            })
            .collect::<Result<_>>()?;

        y = segment(&stack)?;
        arm_total += params.arm_iterations;
        trace
            .records
            .push(record_state(op, sinograms, &stack, &y, spectra, eval, arm_total)?);
    }

    Ok((stack, y, trace))
}

/// Multi-channel DART: per-channel initial reconstructions, then K iterations
/// of shared segmentation and masking followed by independent per-channel
/// solves. Returns the final stack, its segmentation, and the trace (one
/// record after initialization plus one per iteration).
pub fn mcdart_run(
    op: &Projector,
    sinograms: &[Vec<f64>],
    spectra: &MaterialSpectra,
    params: &DartParams,
    eval: Option<&EvalContext>,
) -> Result<(ChannelStack, LabelImage, DartTrace)> {
    let views: Vec<&[f64]> = sinograms.iter().map(|p| p.as_slice()).collect();
    let (stack, labels, trace) = run_engine(op, &views, spectra, params, eval)?;
    Ok((ChannelStack::new(stack)?, labels, trace))
}

/// Single-channel DART: the one-channel instance of the engine, so it matches
/// `mcdart_run` with C = 1 bit-for-bit under identical seeds and parameters.
pub fn dart_run(
    op: &Projector,
    p: &[f64],
    spectra: &MaterialSpectra,
    params: &DartParams,
    eval: Option<&EvalContext>,
) -> Result<(Vec<f64>, LabelImage, DartTrace)> {
    if spectra.channels() != 1 {
        return Err(Error::ChannelMismatch {
            expected: 1,
            actual: spectra.channels(),
        });
    }
    let (mut stack, labels, trace) = run_engine(op, &[p], spectra, params, eval)?;
    Ok((stack.pop().expect("one channel"), labels, trace))
}

/// Plain per-channel SIRT with observation-only segmentations. After the
/// initial reconstruction, runs `total_arm_iterations` more SIRT iterations
/// per channel and records a multi-channel segmentation every
/// `checkpoint_every` iterations without feeding it back. With zero extra
/// iterations the trace holds the single post-initialization record.
pub fn arm_baseline_run(
    op: &Projector,
    sinograms: &[Vec<f64>],
    spectra: &MaterialSpectra,
    start_iterations: usize,
    total_arm_iterations: usize,
    checkpoint_every: usize,
    eval: Option<&EvalContext>,
) -> Result<DartTrace> {
    let views: Vec<&[f64]> = sinograms.iter().map(|p| p.as_slice()).collect();
    check_problem(op, &views, spectra)?;
    assert!(
        total_arm_iterations == 0 || checkpoint_every > 0,
        "checkpoint interval must be positive"
    );
    assert!(
        checkpoint_every == 0 || total_arm_iterations % checkpoint_every == 0,
        "checkpoint interval must divide the total iteration count"
    );

    let n = op.cols();
    let zeros = vec![0.0; n];
    let mut stack: Vec<Vec<f64>> = views
        .par_iter()
        .map(|p| sirt_run(op, p, &zeros, start_iterations))
        .collect::<Result<_>>()?;
    let mut arm_total = start_iterations;

    let mut trace = DartTrace::default();
    if total_arm_iterations == 0 {
        let y = segment_multi(&ChannelStack::new(stack.clone())?, spectra)?;
        trace
            .records
            .push(record_state(op, &views, &stack, &y, spectra, eval, arm_total)?);
        return Ok(trace);
    }

    for _ in 0..total_arm_iterations / checkpoint_every {
        let current = std::mem::take(&mut stack);
        stack = current
            .into_par_iter()
            .enumerate()
            .map(|(c, x)| sirt_run(op, views[c], &x, checkpoint_every))
            .collect::<Result<_>>()?;
        arm_total += checkpoint_every;
        let y = segment_multi(&ChannelStack::new(stack.clone())?, spectra)?;
        trace
            .records
            .push(record_state(op, &views, &stack, &y, spectra, eval, arm_total)?);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projector::{build_operator, ParallelGeometry, Representation};
    use crate::segmentation::Label;

    fn grid(w: usize, h: usize) -> GridSpec {
        GridSpec::new(w, h).unwrap()
    }

    #[test]
    fn uniform_labeling_has_no_boundary() {
        let y = LabelImage::new(vec![2; 16]);
        let b = detect_boundary(&y, &grid(4, 4), Connectivity::Eight);
        assert!(b.is_empty());
        let b = detect_boundary(&y, &grid(4, 4), Connectivity::Four);
        assert!(b.is_empty());
    }

    #[test]
    fn two_by_two_with_one_different_voxel_is_all_boundary() {
        let y = LabelImage::new(vec![1, 2, 1, 1]);
        let b = detect_boundary(&y, &grid(2, 2), Connectivity::Eight);
        assert_eq!(b, vec![0, 1, 2, 3]);
        // Under 4-connectivity the voxel diagonal to the odd one only sees
        // equal neighbors.
        let b = detect_boundary(&y, &grid(2, 2), Connectivity::Four);
        assert_eq!(b, vec![0, 1, 3]);
    }

    #[test]
    fn single_odd_voxel_in_five_by_five_marks_its_neighborhood() {
        let mut labels = vec![0 as Label; 25];
        labels[12] = 1; // center
        let y = LabelImage::new(labels);
        let b = detect_boundary(&y, &grid(5, 5), Connectivity::Eight);
        let expected: Vec<usize> = vec![6, 7, 8, 11, 12, 13, 16, 17, 18];
        assert_eq!(b, expected);
        // 4-connectivity drops the diagonal neighbors.
        let b4 = detect_boundary(&y, &grid(5, 5), Connectivity::Four);
        assert_eq!(b4, vec![7, 11, 12, 13, 17]);
    }

    #[test]
    fn beta_one_frees_exactly_the_boundary() {
        let y = LabelImage::new(vec![1, 2, 1, 1, 1, 1, 1, 1, 1]);
        let b = detect_boundary(&y, &grid(3, 3), Connectivity::Eight);
        let mut rng = seed::rng(5);
        let mask = sample_free_set(&y, &b, 1.0, &mut rng);
        let free: Vec<usize> = (0..9).filter(|&j| mask.is_free(j)).collect();
        assert_eq!(free, b);
    }

    #[test]
    fn beta_zero_frees_everything() {
        let y = LabelImage::new(vec![1; 64]);
        let mut rng = seed::rng(5);
        let mask = sample_free_set(&y, &[], 0.0, &mut rng);
        assert_eq!(mask.free_count(), 64);
    }

    #[test]
    fn free_set_size_concentrates_as_binomial() {
        // 16384 non-boundary voxels at inclusion probability 0.01: mean
        // 163.84, sigma ~12.73. Every draw must land within 4 sigma.
        let y = LabelImage::new(vec![1; 16384]);
        let mean = 163.84;
        let sigma = (16384.0 * 0.01 * 0.99_f64).sqrt();
        for s in 0..20 {
            let mut rng = seed::rng(s);
            let mask = sample_free_set(&y, &[], 0.99, &mut rng);
            let count = mask.free_count() as f64;
            assert!(
                (count - mean).abs() <= 4.0 * sigma,
                "seed {s}: |U| = {count}"
            );
        }
    }

    fn tiny_problem() -> (Projector, MaterialSpectra, LabelImage, Vec<f64>) {
        let g = grid(8, 8);
        let geom = ParallelGeometry::equidistant(6, 8).unwrap();
        let op = build_operator(g, geom, Representation::StoredSparse).unwrap();
        let spectra =
            MaterialSpectra::from_material_rows(1, vec![vec![0.5], vec![1.0]]).unwrap();
        let mut labels = vec![0 as Label; 64];
        for r in 2..6 {
            for c in 2..6 {
                labels[r * 8 + c] = if c < 4 { 1 } else { 2 };
            }
        }
        let truth = LabelImage::new(labels);
        let image = spectra.mu_image(&truth, 0);
        let p = op.apply(&image).unwrap();
        (op, spectra, truth, p)
    }

    #[test]
    fn zero_dart_iterations_returns_plain_reconstruction() {
        let (op, spectra, _, p) = tiny_problem();
        let params = DartParams {
            start_iterations: 15,
            dart_iterations: 0,
            ..DartParams::default()
        };
        let (x, y, trace) = dart_run(&op, &p, &spectra, &params, None).unwrap();
        assert_eq!(trace.len(), 1);
        let plain = sirt_run(&op, &p, &vec![0.0; 64], 15).unwrap();
        assert_eq!(x, plain);
        let seg = crate::segmentation::segment_multi(
            &ChannelStack::new(vec![plain]).unwrap(),
            &spectra,
        )
        .unwrap();
        assert_eq!(y, seg);
    }

    #[test]
    fn trace_has_k_plus_one_records_and_counts_sum_to_n() {
        let (op, spectra, truth, p) = tiny_problem();
        let region: Vec<usize> = (0..64).collect();
        let eval = EvalContext {
            reference: &truth,
            region: &region,
        };
        let params = DartParams {
            start_iterations: 5,
            dart_iterations: 3,
            arm_iterations: 4,
            rng_seed: 11,
            ..DartParams::default()
        };
        let (_, _, trace) = dart_run(&op, &p, &spectra, &params, Some(&eval)).unwrap();
        assert_eq!(trace.len(), 4);
        for rec in &trace.records {
            assert_eq!(rec.class_counts.iter().sum::<usize>(), 64);
            assert!(rec.pixel_error.is_some());
            assert_eq!(rec.residual_norms.len(), 1);
        }
        assert_eq!(trace.records[0].arm_iterations_total, 5);
        assert_eq!(trace.records[3].arm_iterations_total, 17);
    }

    #[test]
    fn single_channel_reduction_is_bit_exact() {
        let (op, spectra, _, p) = tiny_problem();
        let params = DartParams {
            start_iterations: 6,
            dart_iterations: 4,
            arm_iterations: 5,
            rng_seed: 99,
            ..DartParams::default()
        };
        let (x, y, trace) = dart_run(&op, &p, &spectra, &params, None).unwrap();
        let (stack, y2, trace2) =
            mcdart_run(&op, &[p.clone()], &spectra, &params, None).unwrap();
        assert_eq!(stack.channel(0), x.as_slice());
        assert_eq!(y, y2);
        assert_eq!(trace.len(), trace2.len());
        for (a, b) in trace.records.iter().zip(&trace2.records) {
            assert_eq!(a.class_counts, b.class_counts);
            assert_eq!(a.residual_norms, b.residual_norms);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let (op, spectra, _, p) = tiny_problem();
        let params = DartParams {
            rng_seed: 7,
            dart_iterations: 3,
            start_iterations: 4,
            arm_iterations: 3,
            ..DartParams::default()
        };
        let (x1, y1, _) = dart_run(&op, &p, &spectra, &params, None).unwrap();
        let (x2, y2, _) = dart_run(&op, &p, &spectra, &params, None).unwrap();
        assert_eq!(x1, x2);
        assert_eq!(y1, y2);
    }

    #[test]
    fn zero_arm_iterations_yield_the_merged_image() {
        // With no inner iterations the first outer step returns exactly the
        // merge: fixed voxels at their segmented attenuations, free voxels at
        // the initial reconstruction's values.
        let (op, spectra, _, p) = tiny_problem();
        let params = DartParams {
            start_iterations: 5,
            dart_iterations: 1,
            arm_iterations: 0,
            rng_seed: 13,
            ..DartParams::default()
        };
        let (x, _, _) = dart_run(&op, &p, &spectra, &params, None).unwrap();

        // Replay the engine's first iteration by hand.
        let x0 = sirt_run(&op, &p, &vec![0.0; 64], 5).unwrap();
        let y1 = crate::segmentation::segment_multi(
            &ChannelStack::new(vec![x0.clone()]).unwrap(),
            &spectra,
        )
        .unwrap();
        let boundary = detect_boundary(&y1, op.grid(), params.connectivity);
        let mut rng = seed::rng(seed::mix(params.rng_seed, &[1, STREAM_MASK]));
        let mask = sample_free_set(&y1, &boundary, params.fix_probability, &mut rng);
        for j in 0..64 {
            if mask.is_free(j) {
                assert_eq!(x[j], x0[j]);
            } else {
                assert_eq!(x[j], spectra.mu(y1.label(j), 0));
            }
        }
    }

    #[test]
    fn perfect_labeling_is_a_fixed_point_of_the_loop() {
        // Consistent data and an exact starting image: segmentation recovers
        // the truth, the merged seed equals the exact image, the residual is
        // zero, and the labeling never moves across iterations.
        let (op, spectra, truth, p) = tiny_problem();
        let mut x = spectra.mu_image(&truth, 0);
        for k in 1..=5u64 {
            let y = crate::segmentation::segment_multi(
                &ChannelStack::new(vec![x.clone()]).unwrap(),
                &spectra,
            )
            .unwrap();
            assert_eq!(y, truth, "labeling drifted at iteration {k}");
            let boundary = detect_boundary(&y, op.grid(), Connectivity::Eight);
            let mut rng = seed::rng(seed::mix(21, &[k, STREAM_MASK]));
            let mask = sample_free_set(&y, &boundary, 0.99, &mut rng);
            let merged: Vec<f64> = x
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    if mask.is_free(j) {
                        v
                    } else {
                        spectra.mu(y.label(j), 0)
                    }
                })
                .collect();
            x = sirt_run(&op, &p, &merged, 10).unwrap();
        }
        let y = crate::segmentation::segment_multi(
            &ChannelStack::new(vec![x]).unwrap(),
            &spectra,
        )
        .unwrap();
        assert_eq!(y, truth);
    }

    #[test]
    fn baseline_checkpoints_have_expected_count() {
        let (op, spectra, _, p) = tiny_problem();
        let sinos = vec![p];
        let trace =
            arm_baseline_run(&op, &sinos, &spectra, 2, 30, 10, None).unwrap();
        assert_eq!(trace.len(), 3);
        assert_eq!(trace.records[0].arm_iterations_total, 12);
        assert_eq!(trace.records[2].arm_iterations_total, 32);

        let init_only = arm_baseline_run(&op, &sinos, &spectra, 2, 0, 10, None).unwrap();
        assert_eq!(init_only.len(), 1);
        assert_eq!(init_only.records[0].arm_iterations_total, 2);
    }

    #[test]
    fn baseline_checkpoints_match_uninterrupted_sirt() {
        // Observation-only segmentation must not disturb the iterates.
        let (op, spectra, _, p) = tiny_problem();
        let trace = arm_baseline_run(&op, &vec![p.clone()], &spectra, 2, 20, 5, None).unwrap();
        let direct = sirt_run(&op, &p, &vec![0.0; 64], 22).unwrap();
        let norm_sq: f64 = op
            .apply(&direct)
            .unwrap()
            .iter()
            .zip(&p)
            .map(|(a, b)| (b - a) * (b - a))
            .sum();
        let last = trace.records.last().unwrap();
        assert!((last.residual_norms[0] - norm_sq.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn invalid_beta_is_rejected() {
        let (op, spectra, _, p) = tiny_problem();
        let params = DartParams {
            fix_probability: 1.5,
            ..DartParams::default()
        };
        assert!(dart_run(&op, &p, &spectra, &params, None).is_err());
    }

    #[test]
    fn channel_mismatch_is_rejected() {
        let (op, spectra, _, p) = tiny_problem();
        let two =
            MaterialSpectra::from_material_rows(2, vec![vec![0.5, 0.5], vec![1.0, 1.0]]).unwrap();
        assert!(mcdart_run(&op, &[p.clone()], &two, &DartParams::default(), None).is_err());
        assert!(dart_run(&op, &p, &two, &DartParams::default(), None).is_err());
    }
}
