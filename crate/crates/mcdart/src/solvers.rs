//! SIRT solver and the masked reconstruction subproblem.
//!
//! The reconstruction method is SIRT with the usual row/column weighting and
//! unit relaxation: x <- x + C W^T R (p - W x), where R holds inverse row sums
//! and C inverse column sums. Rows or columns with zero sum (rays that miss
//! the grid, fully masked columns) get zero weight instead of an error.
//! Intermediate values are not clamped.

use crate::error::{Error, Result};
use crate::projector::{Projector, VoxelMask};

/// Data term of the masked subproblem: the input sinogram minus the forward
/// projection of the fixed voxels.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSinogram {
    pub values: Vec<f64>,
}

fn check_len(context: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::ShapeMismatch {
            context,
            expected,
            actual,
        });
    }
    Ok(())
}

/// Run `iterations` SIRT steps from `x0`. Deterministic: identical inputs
/// produce bit-identical outputs.
pub fn sirt_run(op: &Projector, p: &[f64], x0: &[f64], iterations: usize) -> Result<Vec<f64>> {
    check_len("sirt_run: sinogram", op.rows(), p.len())?;
    check_len("sirt_run: start image", op.cols(), x0.len())?;

    let mut x = x0.to_vec();
    if iterations == 0 {
        return Ok(x);
    }

    let inv = |sums: Vec<f64>| -> Vec<f64> {
        sums.into_iter()
            .map(|s| if s > 0.0 { 1.0 / s } else { 0.0 })
            .collect()
    };
    let row_weights = inv(op.row_sums());
    let col_weights = inv(op.col_sums());

    let mut weighted = vec![0.0; op.rows()];
    for _ in 0..iterations {
        let projected = op.apply(&x)?;
        for i in 0..weighted.len() {
            weighted[i] = (p[i] - projected[i]) * row_weights[i];
        }
        let update = op.apply_adjoint(&weighted)?;
        for j in 0..x.len() {
            x[j] += col_weights[j] * update[j];
        }
    }
    Ok(x)
}

/// Subtract the forward projection of the fixed voxels of `y_fixed` from `p`.
/// `op` must be the unrestricted operator; `mask` says which voxels are free.
pub fn residual_sinogram(
    op: &Projector,
    p: &[f64],
    y_fixed: &[f64],
    mask: &VoxelMask,
) -> Result<ResidualSinogram> {
    check_len("residual_sinogram: sinogram", op.rows(), p.len())?;
    check_len("residual_sinogram: fixed image", op.cols(), y_fixed.len())?;
    check_len("residual_sinogram: mask", op.cols(), mask.len())?;

    let fixed_only: Vec<f64> = y_fixed
        .iter()
        .enumerate()
        .map(|(j, &v)| if mask.is_free(j) { 0.0 } else { v })
        .collect();
    let projected = op.apply(&fixed_only)?;
    Ok(ResidualSinogram {
        values: p.iter().zip(&projected).map(|(&a, &b)| a - b).collect(),
    })
}

/// Solve the masked subproblem by SIRT on the column-restricted operator,
/// warm-started from `x_prev` on the free voxels, then merge: free voxels from
/// the solve, fixed voxels from `y_fixed` (bit-identical to the input).
pub fn masked_arm(
    op: &Projector,
    p: &[f64],
    mask: &VoxelMask,
    x_prev: &[f64],
    y_fixed: &[f64],
    iterations: usize,
) -> Result<Vec<f64>> {
    check_len("masked_arm: sinogram", op.rows(), p.len())?;
    check_len("masked_arm: warm start", op.cols(), x_prev.len())?;
    check_len("masked_arm: fixed image", op.cols(), y_fixed.len())?;
    check_len("masked_arm: mask", op.cols(), mask.len())?;

    let residual = residual_sinogram(op, p, y_fixed, mask)?;
    let restricted = op.restrict(mask);
    let start: Vec<f64> = x_prev
        .iter()
        .enumerate()
        .map(|(j, &v)| if mask.is_free(j) { v } else { 0.0 })
        .collect();
    let solved = sirt_run(&restricted, &residual.values, &start, iterations)?;
    Ok(solved
        .iter()
        .zip(y_fixed)
        .enumerate()
        .map(|(j, (&free_v, &fixed_v))| if mask.is_free(j) { free_v } else { fixed_v })
        .collect())
}
