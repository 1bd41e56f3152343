// Temporary exploration harness; not part of the deliverable.
use mcdart::*;

#[derive(Clone, Copy)]
struct Opts {
    full_weights: bool,
    snap_fixed: bool,
    smooth: Option<f64>, // blending factor for 3x3 mean smoothing of fixed voxels
    conn: Connectivity,
    relax: f64,
}

fn masked_sirt(
    op: &Projector,
    p: &[f64],
    mask: &VoxelMask,
    x_start: &[f64], // full-length start, fixed entries already at their held values
    iterations: usize,
    opts: Opts,
) -> Vec<f64> {
    let n = op.cols();
    let inv = |v: Vec<f64>| -> Vec<f64> {
        v.into_iter()
            .map(|s| if s > 0.0 { 1.0 / s } else { 0.0 })
            .collect()
    };
    let (row_w, col_w) = if opts.full_weights {
        (
            inv(op.apply(&vec![1.0; n]).unwrap()),
            inv(op.apply_adjoint(&vec![1.0; op.rows()]).unwrap()),
        )
    } else {
        let restricted = op.restrict(mask);
        (
            inv(restricted.apply(&vec![1.0; n]).unwrap()),
            inv(restricted.apply_adjoint(&vec![1.0; op.rows()]).unwrap()),
        )
    };
    let mut x = x_start.to_vec();
    for _ in 0..iterations {
        let ax = op.apply(&x).unwrap();
        let wr: Vec<f64> = (0..op.rows()).map(|i| (p[i] - ax[i]) * row_w[i]).collect();
        let upd = op.apply_adjoint(&wr).unwrap();
        for j in 0..n {
            if mask.is_free(j) {
                x[j] += opts.relax * col_w[j] * upd[j];
            }
        }
    }
    x
}

fn smooth_fixed(x: &mut [f64], mask: &VoxelMask, w: usize, h: usize, b: f64) {
    let orig = x.to_vec();
    for r in 0..h as isize {
        for c in 0..w as isize {
            let j = (r * w as isize + c) as usize;
            if mask.is_free(j) {
                continue;
            }
            let mut sum = 0.0;
            let mut count = 0.0;
            for dr in -1..=1 {
                for dc in -1..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let (nr, nc) = (r + dr, c + dc);
                    if nr >= 0 && nr < h as isize && nc >= 0 && nc < w as isize {
                        sum += orig[(nr * w as isize + nc) as usize];
                        count += 1.0;
                    }
                }
            }
            x[j] = (1.0 - b) * orig[j] + b * sum / count;
        }
    }
}

fn run_dart(
    op: &Projector,
    problem: &SynthesizedProblem,
    seed_val: u64,
    opts: Opts,
    k_iters: u64,
    arm_iters: usize,
    beta: f64,
) -> f64 {
    let spectra = &problem.spectra;
    let n = op.cols();
    let (w, h) = (op.grid().width(), op.grid().height());
    let all_free = VoxelMask::all_free(n);
    let zeros = vec![0.0; n];
    let mut stack: Vec<Vec<f64>> = problem
        .sinograms
        .iter()
        .map(|p| masked_sirt(op, p, &all_free, &zeros, 2, opts))
        .collect();
    let mut y = segment_multi(&ChannelStack::new(stack.clone()).unwrap(), spectra).unwrap();
    for k in 1..=k_iters {
        let boundary = detect_boundary(&y, op.grid(), opts.conn);
        let mut mask_rng = seed::rng(seed::mix(seed::mix(seed_val, &[3]), &[k, 1]));
        let mask = sample_free_set(&y, &boundary, beta, &mut mask_rng);
        for (c, x_prev) in stack.iter_mut().enumerate() {
            let start: Vec<f64> = (0..n)
                .map(|j| {
                    if mask.is_free(j) {
                        x_prev[j]
                    } else if opts.snap_fixed {
                        spectra.mu(y.label(j), c)
                    } else {
                        x_prev[j]
                    }
                })
                .collect();
            let mut solved = masked_sirt(op, &problem.sinograms[c], &mask, &start, arm_iters, opts);
            if let Some(b) = opts.smooth {
                smooth_fixed(&mut solved, &mask, w, h, b);
            }
            *x_prev = solved;
        }
        y = segment_multi(&ChannelStack::new(stack.clone()).unwrap(), spectra).unwrap();
    }
    let region = disk_region(op.grid(), 0.48);
    pixel_error(&y, &problem.phantom, &region).unwrap().percentage
}

fn run_dart_fullsolve(
    op: &Projector,
    problem: &SynthesizedProblem,
    seed_val: u64,
    k_iters: u64,
    arm_iters: usize,
    beta: f64,
    reimpose: bool,
) -> f64 {
    let spectra = &problem.spectra;
    let n = op.cols();
    let all_free = VoxelMask::all_free(n);
    let zeros = vec![0.0; n];
    let mut stack: Vec<Vec<f64>> = problem
        .sinograms
        .iter()
        .map(|p| sirt_run(op, p, &zeros, 2).unwrap())
        .collect();
    let _ = all_free;
    let mut y = segment_multi(&ChannelStack::new(stack.clone()).unwrap(), spectra).unwrap();
    for k in 1..=k_iters {
        let boundary = detect_boundary(&y, op.grid(), Connectivity::Eight);
        let mut mask_rng = seed::rng(seed::mix(seed::mix(seed_val, &[3]), &[k, 1]));
        let mask = sample_free_set(&y, &boundary, beta, &mut mask_rng);
        for (c, x_prev) in stack.iter_mut().enumerate() {
            let start: Vec<f64> = (0..n)
                .map(|j| {
                    if mask.is_free(j) {
                        x_prev[j]
                    } else {
                        spectra.mu(y.label(j), c)
                    }
                })
                .collect();
            let mut solved = sirt_run(op, &problem.sinograms[c], &start, arm_iters).unwrap();
            if reimpose {
                for j in 0..n {
                    if !mask.is_free(j) {
                        solved[j] = spectra.mu(y.label(j), c);
                    }
                }
            }
            *x_prev = solved;
        }
        y = segment_multi(&ChannelStack::new(stack.clone()).unwrap(), spectra).unwrap();
    }
    let region = disk_region(op.grid(), 0.48);
    pixel_error(&y, &problem.phantom, &region).unwrap().percentage
}

fn main() {
    for (size, angles) in [(32usize, 16usize), (32, 32)] {
        let op = build_operator(
            GridSpec::new(size, size).unwrap(),
            ParallelGeometry::equidistant(angles, size).unwrap(),
            Representation::StoredSparse,
        )
        .unwrap();
        let mut errs = Vec::new();
        for s in 0..6u64 {
            let phantom_spec = PhantomSpec::new(*op.grid(), 2, seed::mix(s, &[1]));
            let phantom = generate_phantom(&phantom_spec).unwrap();
            let mut rng = seed::rng(seed::mix(s, &[2]));
            let spectra = generate_spectra(2, 1, &mut rng).unwrap();
            let problem = synthesize(&phantom, &spectra, &op).unwrap();
            let region = disk_region(op.grid(), phantom_spec.disk_radius_fraction);
            let params = DartParams { rng_seed: seed::mix(s, &[3]), ..DartParams::default() };
            let (_, labels, _) = mcdart_run(&op, &problem.sinograms, &spectra, &params, None).unwrap();
            errs.push(pixel_error(&labels, &phantom, &region).unwrap().percentage);
        }
        println!("size {size} angles {angles} m=2 C=1: {errs:.2?}");
    }
}
