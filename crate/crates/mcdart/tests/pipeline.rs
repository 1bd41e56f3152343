//! End-to-end reconstruction behavior on small synthesized problems.

use mcdart::{
    arm_baseline_run, build_operator, dart_run, disk_region, generate_phantom, generate_spectra,
    mcdart_run, pixel_error, seed, synthesize, DartParams, EvalContext, GridSpec,
    ParallelGeometry, PhantomSpec, Projector, Representation,
};

fn desk_op(size: usize, angles: usize, bins: usize) -> Projector {
    build_operator(
        GridSpec::new(size, size).unwrap(),
        ParallelGeometry::equidistant(angles, bins).unwrap(),
        Representation::StoredSparse,
    )
    .unwrap()
}

struct RunOutcome {
    error_pct: f64,
}

fn run_mcdart(op: &Projector, materials: usize, channels: usize, run_seed: u64) -> RunOutcome {
    let grid = *op.grid();
    let phantom_spec = PhantomSpec::new(grid, materials, seed::mix(run_seed, &[1]));
    let phantom = generate_phantom(&phantom_spec).unwrap();
    let mut rng = seed::rng(seed::mix(run_seed, &[2]));
    let spectra = generate_spectra(materials, channels, &mut rng).unwrap();
    let problem = synthesize(&phantom, &spectra, op).unwrap();
    let params = DartParams {
        rng_seed: seed::mix(run_seed, &[3]),
        ..DartParams::default()
    };
    let (_, labels, _) = mcdart_run(op, &problem.sinograms, &spectra, &params, None).unwrap();
    let region = disk_region(&grid, phantom_spec.disk_radius_fraction);
    let report = pixel_error(&labels, &phantom, &region).unwrap();
    RunOutcome {
        error_pct: report.percentage,
    }
}

fn mean_error(op: &Projector, materials: usize, channels: usize, seeds: &[u64]) -> f64 {
    let total: f64 = seeds
        .iter()
        .map(|&s| run_mcdart(op, materials, channels, s).error_pct)
        .sum();
    total / seeds.len() as f64
}

#[test]
fn two_materials_reconstruct_almost_perfectly() {
    // Reference geometry scaled to a 64x64 grid; two materials should come
    // out nearly exact on average.
    let op = desk_op(64, 32, 64);
    let seeds: Vec<u64> = (0..10).collect();
    let mean = mean_error(&op, 2, 1, &seeds);
    assert!(mean <= 5.0, "mean inner-disk error {mean}% too high");
}

#[test]
fn extra_channels_reduce_error_for_many_materials() {
    let op = desk_op(32, 16, 32);
    let seeds: Vec<u64> = (10..14).collect();
    let single = mean_error(&op, 6, 1, &seeds);
    let multi = mean_error(&op, 6, 8, &seeds);
    assert!(
        multi < single,
        "C=8 error {multi}% not below C=1 error {single}%"
    );
}

#[test]
fn single_channel_reduction_matches_on_synthesized_problems() {
    // dart_run and mcdart_run with C=1 must agree bit-for-bit.
    let op = desk_op(16, 8, 16);
    for s in 0..3u64 {
        let phantom = generate_phantom(&PhantomSpec::new(*op.grid(), 3, s)).unwrap();
        let mut rng = seed::rng(seed::mix(s, &[7]));
        let spectra = generate_spectra(3, 1, &mut rng).unwrap();
        let problem = synthesize(&phantom, &spectra, &op).unwrap();
        let params = DartParams {
            rng_seed: s,
            dart_iterations: 5,
            start_iterations: 4,
            arm_iterations: 4,
            ..DartParams::default()
        };
        let (x, y, _) = dart_run(&op, &problem.sinograms[0], &spectra, &params, None).unwrap();
        let (stack, y_mc, _) =
            mcdart_run(&op, &problem.sinograms, &spectra, &params, None).unwrap();
        assert_eq!(x.as_slice(), stack.channel(0));
        assert_eq!(y, y_mc);
    }
}

#[test]
fn dart_beats_matched_work_baseline_on_limited_angles() {
    // Few angles, several materials: feeding segmentations back should help.
    let op = desk_op(32, 8, 32);
    let mut dart_wins = 0;
    let seeds: Vec<u64> = (20..26).collect();
    for &s in &seeds {
        let phantom_spec = PhantomSpec::new(*op.grid(), 4, seed::mix(s, &[1]));
        let phantom = generate_phantom(&phantom_spec).unwrap();
        let mut rng = seed::rng(seed::mix(s, &[2]));
        let spectra = generate_spectra(4, 10, &mut rng).unwrap();
        let problem = synthesize(&phantom, &spectra, &op).unwrap();
        let region = disk_region(op.grid(), phantom_spec.disk_radius_fraction);
        let eval = EvalContext {
            reference: &phantom,
            region: &region,
        };
        let params = DartParams {
            start_iterations: 2,
            dart_iterations: 10,
            arm_iterations: 10,
            rng_seed: seed::mix(s, &[3]),
            ..DartParams::default()
        };
        let (_, _, trace) =
            mcdart_run(&op, &problem.sinograms, &spectra, &params, Some(&eval)).unwrap();
        let baseline = arm_baseline_run(
            &op,
            &problem.sinograms,
            &spectra,
            2,
            100,
            10,
            Some(&eval),
        )
        .unwrap();
        let dart_err = trace.records.last().unwrap().pixel_error.unwrap().percentage;
        let base_err = baseline
            .records
            .last()
            .unwrap()
            .pixel_error
            .unwrap()
            .percentage;
        if base_err >= dart_err {
            dart_wins += 1;
        }
    }
    assert!(
        dart_wins * 2 > seeds.len(),
        "baseline beat DART in {} of {} runs",
        seeds.len() - dart_wins,
        seeds.len()
    );
}

#[test]
fn phantom_generator_satisfies_partition_and_balance() {
    let grid = GridSpec::new(48, 48).unwrap();
    for s in 0..20u64 {
        let m = 2 + (s % 9) as usize;
        let spec = PhantomSpec::new(grid, m, s);
        let phantom = generate_phantom(&spec).unwrap();
        let region = disk_region(&grid, spec.disk_radius_fraction);
        let mut areas = vec![0usize; m];
        for (j, &label) in phantom.labels.iter().enumerate() {
            let inside = region.binary_search(&j).is_ok();
            if inside {
                assert!(label >= 1 && label as usize <= m);
                areas[label as usize - 1] += 1;
            } else {
                assert_eq!(label, 0);
            }
        }
        let min = *areas.iter().min().unwrap();
        let max = *areas.iter().max().unwrap();
        assert!(min > 0);
        assert!(max as f64 / min as f64 <= spec.balance_tolerance);
    }
}
