//! 2D parallel-beam geometry and the projection operator.
//!
//! The operator maps a pixel image to its sinogram. Ray coefficients are exact
//! ray-pixel intersection lengths (Siddon line kernel), one ray through the
//! center of each detector bin. Two representations are provided: a stored
//! sparse matrix and a matrix-free variant that retraces rays on demand; both
//! share the same tracing kernel.
//!
//! Conventions, fixed so results are bit-stable:
//! - The grid is centered on the world origin. Pixel (row, col) has its center
//!   at ((col + 0.5 - width/2) * pixel_size, (row + 0.5 - height/2) * pixel_size)
//!   and image index row * width + col.
//! - At angle 0 rays travel along +y (parallel to image columns) and the
//!   detector axis is +x; angles increase counter-clockwise.
//! - Detector bin t is centered at (t - (bins-1)/2) * detector_pixel_size
//!   + detector_offset along the detector axis.
//! - Rays that miss the grid keep their (all-zero) row, so the sinogram length
//!   is determined by the geometry alone. A ray lying exactly on the grid edge
//!   is attributed to the adjacent column or row of pixels.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Pixel grid of the reconstruction volume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    width: usize,
    height: usize,
    pixel_size: f64,
}

impl GridSpec {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidGrid(format!(
                "grid must have at least one pixel per side, got {width}x{height}"
            )));
        }
        Ok(GridSpec {
            width,
            height,
            pixel_size: 1.0,
        })
    }

    pub fn with_pixel_size(mut self, pixel_size: f64) -> Result<Self> {
        if !(pixel_size > 0.0) || !pixel_size.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "pixel size must be positive and finite, got {pixel_size}"
            )));
        }
        self.pixel_size = pixel_size;
        Ok(self)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel_size(&self) -> f64 {
        self.pixel_size
    }

    /// Number of voxels n.
    pub fn n(&self) -> usize {
        self.width * self.height
    }

    /// Length of the grid diagonal in world units.
    pub fn diagonal(&self) -> f64 {
        let w = self.width as f64 * self.pixel_size;
        let h = self.height as f64 * self.pixel_size;
        (w * w + h * h).sqrt()
    }
}

/// Parallel-beam acquisition geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct ParallelGeometry {
    angles: Vec<f64>,
    detector_bins: usize,
    detector_pixel_size: f64,
    detector_offset: f64,
}

impl ParallelGeometry {
    pub fn new(angles: Vec<f64>, detector_bins: usize) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InvalidGeometry("empty angle list".into()));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidGeometry("angles must be finite".into()));
        }
        if detector_bins == 0 {
            return Err(Error::InvalidGeometry(
                "detector must have at least one bin".into(),
            ));
        }
        Ok(ParallelGeometry {
            angles,
            detector_bins,
            detector_pixel_size: 1.0,
            detector_offset: 0.0,
        })
    }

    /// `count` equidistant angles over the half circle [0, pi).
    pub fn equidistant(count: usize, detector_bins: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidGeometry("empty angle list".into()));
        }
        let step = std::f64::consts::PI / count as f64;
        Self::new((0..count).map(|i| i as f64 * step).collect(), detector_bins)
    }

    pub fn with_detector_pixel_size(mut self, size: f64) -> Result<Self> {
        if !(size > 0.0) || !size.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "detector pixel size must be positive and finite, got {size}"
            )));
        }
        self.detector_pixel_size = size;
        Ok(self)
    }

    pub fn with_detector_offset(mut self, offset: f64) -> Result<Self> {
        if !offset.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "detector offset must be finite, got {offset}"
            )));
        }
        self.detector_offset = offset;
        Ok(self)
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn detector_bins(&self) -> usize {
        self.detector_bins
    }

    pub fn detector_pixel_size(&self) -> f64 {
        self.detector_pixel_size
    }

    pub fn detector_offset(&self) -> f64 {
        self.detector_offset
    }

    /// Number of sinogram entries l = |angles| * detector_bins.
    pub fn ray_count(&self) -> usize {
        self.angles.len() * self.detector_bins
    }

    /// World offset of detector bin `t` along the detector axis.
    fn bin_offset(&self, t: usize) -> f64 {
        (t as f64 - (self.detector_bins as f64 - 1.0) / 2.0) * self.detector_pixel_size
            + self.detector_offset
    }
}

/// Per-voxel free/fixed flags. Free voxels participate in a masked
/// reconstruction; fixed voxels are held at their segmented values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoxelMask {
    free: Vec<bool>,
}

impl VoxelMask {
    pub fn new(free: Vec<bool>) -> Self {
        VoxelMask { free }
    }

    pub fn all_free(n: usize) -> Self {
        VoxelMask {
            free: vec![true; n],
        }
    }

    pub fn all_fixed(n: usize) -> Self {
        VoxelMask {
            free: vec![false; n],
        }
    }

    pub fn from_free_indices(n: usize, indices: &[usize]) -> Self {
        let mut free = vec![false; n];
        for &j in indices {
            free[j] = true;
        }
        VoxelMask { free }
    }

    pub fn len(&self) -> usize {
        self.free.len()
    }

    pub fn is_empty(&self) -> bool {
        self.free.is_empty()
    }

    pub fn is_free(&self, j: usize) -> bool {
        self.free[j]
    }

    pub fn free_count(&self) -> usize {
        self.free.iter().filter(|&&f| f).count()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.free
    }

    /// Intersection of two masks: free where both are free.
    pub fn and(&self, other: &VoxelMask) -> VoxelMask {
        assert_eq!(self.len(), other.len(), "mask length mismatch");
        VoxelMask {
            free: self
                .free
                .iter()
                .zip(&other.free)
                .map(|(&a, &b)| a && b)
                .collect(),
        }
    }
}

/// How the operator keeps its coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    StoredSparse,
    MatrixFree,
}

// Compressed sparse rows, one row per ray.
#[derive(Debug)]
struct Csr {
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    values: Vec<f64>,
}

#[derive(Debug, Clone)]
enum Repr {
    Stored(Arc<Csr>),
    MatrixFree,
}

/// The projection operator W with optional column masking.
#[derive(Debug, Clone)]
pub struct Projector {
    grid: GridSpec,
    geometry: Arc<ParallelGeometry>,
    repr: Repr,
    // None means all columns free. Fixed columns contribute nothing to
    // apply/adjoint, which realizes the masked restriction.
    mask: Option<Arc<Vec<bool>>>,
}

/// Build the projection operator for a grid and geometry.
pub fn build_operator(
    grid: GridSpec,
    geometry: ParallelGeometry,
    representation: Representation,
) -> Result<Projector> {
    let geometry = Arc::new(geometry);
    let repr = match representation {
        Representation::MatrixFree => Repr::MatrixFree,
        Representation::StoredSparse => {
            let mut tracer = RayTracer::new(&grid);
            let rays = geometry.ray_count();
            let mut row_ptr = Vec::with_capacity(rays + 1);
            let mut col_idx = Vec::new();
            let mut values = Vec::new();
            row_ptr.push(0);
            for &angle in geometry.angles() {
                for t in 0..geometry.detector_bins() {
                    tracer.trace(angle, geometry.bin_offset(t), |j, w| {
                        col_idx.push(j as u32);
                        values.push(w);
                    });
                    row_ptr.push(col_idx.len());
                }
            }
            Repr::Stored(Arc::new(Csr {
                row_ptr,
                col_idx,
                values,
            }))
        }
    };
    Ok(Projector {
        grid,
        geometry,
        repr,
        mask: None,
    })
}

impl Projector {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn geometry(&self) -> &ParallelGeometry {
        &self.geometry
    }

    /// Sinogram length l.
    pub fn rows(&self) -> usize {
        self.geometry.ray_count()
    }

    /// Image length n.
    pub fn cols(&self) -> usize {
        self.grid.n()
    }

    pub fn representation(&self) -> Representation {
        match self.repr {
            Repr::Stored(_) => Representation::StoredSparse,
            Repr::MatrixFree => Representation::MatrixFree,
        }
    }

    fn is_free(&self, j: usize) -> bool {
        match &self.mask {
            None => true,
            Some(mask) => mask[j],
        }
    }

    /// Forward projection Wx.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols() {
            return Err(Error::ShapeMismatch {
                context: "apply: image vector",
                expected: self.cols(),
                actual: x.len(),
            });
        }
        let mut out = vec![0.0; self.rows()];
        match &self.repr {
            Repr::Stored(csr) => {
                // Masked columns are zeroed in a scratch copy so the stored
                // and matrix-free paths accumulate in the same order.
                let masked;
                let xs = match &self.mask {
                    None => x,
                    Some(mask) => {
                        masked = x
                            .iter()
                            .zip(mask.iter())
                            .map(|(&v, &f)| if f { v } else { 0.0 })
                            .collect::<Vec<f64>>();
                        &masked
                    }
                };
                for i in 0..self.rows() {
                    let lo = csr.row_ptr[i];
                    let hi = csr.row_ptr[i + 1];
                    let mut acc = 0.0;
                    for k in lo..hi {
                        acc += csr.values[k] * xs[csr.col_idx[k] as usize];
                    }
                    out[i] = acc;
                }
            }
            Repr::MatrixFree => {
                let mut tracer = RayTracer::new(&self.grid);
                let mut i = 0;
                for &angle in self.geometry.angles() {
                    for t in 0..self.geometry.detector_bins() {
                        let mut acc = 0.0;
                        tracer.trace(angle, self.geometry.bin_offset(t), |j, w| {
                            if self.is_free(j) {
                                acc += w * x[j];
                            }
                        });
                        out[i] = acc;
                        i += 1;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Back projection (adjoint) W^T s.
    pub fn apply_adjoint(&self, s: &[f64]) -> Result<Vec<f64>> {
        if s.len() != self.rows() {
            return Err(Error::ShapeMismatch {
                context: "apply_adjoint: sinogram vector",
                expected: self.rows(),
                actual: s.len(),
            });
        }
        let mut out = vec![0.0; self.cols()];
        match &self.repr {
            Repr::Stored(csr) => {
                for i in 0..self.rows() {
                    let si = s[i];
                    for k in csr.row_ptr[i]..csr.row_ptr[i + 1] {
                        let j = csr.col_idx[k] as usize;
                        if self.is_free(j) {
                            out[j] += csr.values[k] * si;
                        }
                    }
                }
            }
            Repr::MatrixFree => {
                let mut tracer = RayTracer::new(&self.grid);
                let mut i = 0;
                for &angle in self.geometry.angles() {
                    for t in 0..self.geometry.detector_bins() {
                        let si = s[i];
                        tracer.trace(angle, self.geometry.bin_offset(t), |j, w| {
                            if self.is_free(j) {
                                out[j] += w * si;
                            }
                        });
                        i += 1;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Restrict the operator to the free columns of `mask`. Restricting an
    /// already restricted operator intersects the masks.
    pub fn restrict(&self, mask: &VoxelMask) -> Projector {
        assert_eq!(mask.len(), self.cols(), "mask length mismatch");
        let combined = match &self.mask {
            None => mask.as_slice().to_vec(),
            Some(prev) => prev
                .iter()
                .zip(mask.as_slice())
                .map(|(&a, &b)| a && b)
                .collect(),
        };
        Projector {
            grid: self.grid,
            geometry: Arc::clone(&self.geometry),
            repr: self.repr.clone(),
            mask: Some(Arc::new(combined)),
        }
    }

    /// Nonzero entries (column, weight) of row `i`, masked columns dropped.
    pub fn row(&self, i: usize) -> Vec<(usize, f64)> {
        assert!(i < self.rows(), "row index out of range");
        let mut entries = Vec::new();
        match &self.repr {
            Repr::Stored(csr) => {
                for k in csr.row_ptr[i]..csr.row_ptr[i + 1] {
                    let j = csr.col_idx[k] as usize;
                    if self.is_free(j) {
                        entries.push((j, csr.values[k]));
                    }
                }
            }
            Repr::MatrixFree => {
                let angle = self.geometry.angles()[i / self.geometry.detector_bins()];
                let t = i % self.geometry.detector_bins();
                let mut tracer = RayTracer::new(&self.grid);
                tracer.trace(angle, self.geometry.bin_offset(t), |j, w| {
                    if self.is_free(j) {
                        entries.push((j, w));
                    }
                });
            }
        }
        entries
    }

    /// Per-row coefficient sums (ray lengths inside the free columns).
    pub fn row_sums(&self) -> Vec<f64> {
        self.apply(&vec![1.0; self.cols()])
            .expect("ones vector has matching length")
    }

    /// Per-column coefficient sums over the free columns.
    pub fn col_sums(&self) -> Vec<f64> {
        self.apply_adjoint(&vec![1.0; self.rows()])
            .expect("ones vector has matching length")
    }
}

// Tolerance below which a ray direction component is treated as axis-parallel
// and a traversal segment as degenerate.
const RAY_EPS: f64 = 1e-12;

// Exact-length ray walker. Collects the parameter values where the ray
// crosses pixel boundaries, then emits one (pixel index, length) pair per
// segment between consecutive crossings.
struct RayTracer<'a> {
    grid: &'a GridSpec,
    ts: Vec<f64>,
}

impl<'a> RayTracer<'a> {
    fn new(grid: &'a GridSpec) -> Self {
        RayTracer {
            grid,
            ts: Vec::with_capacity(grid.width() + grid.height() + 2),
        }
    }

    // Ray for (angle, s): point s*u + tau*d with detector axis u = (cos a, sin a)
    // and direction d = (-sin a, cos a). |d| = 1, so tau is arc length and
    // segment lengths come out in world units.
    fn trace(&mut self, angle: f64, s: f64, mut emit: impl FnMut(usize, f64)) {
        let (sin_a, cos_a) = angle.sin_cos();
        let (ox, oy) = (s * cos_a, s * sin_a);
        let (dx, dy) = (-sin_a, cos_a);
        let ps = self.grid.pixel_size();
        let (w, h) = (self.grid.width(), self.grid.height());
        let hw = 0.5 * w as f64 * ps;
        let hh = 0.5 * h as f64 * ps;

        let mut tmin = f64::NEG_INFINITY;
        let mut tmax = f64::INFINITY;
        for (o, d, half) in [(ox, dx, hw), (oy, dy, hh)] {
            if d.abs() < RAY_EPS {
                if o < -half || o > half {
                    return; // parallel to the slab and outside it
                }
            } else {
                let t0 = (-half - o) / d;
                let t1 = (half - o) / d;
                tmin = tmin.max(t0.min(t1));
                tmax = tmax.min(t0.max(t1));
            }
        }
        if !(tmax - tmin > RAY_EPS) {
            return;
        }

        self.ts.clear();
        self.ts.push(tmin);
        self.ts.push(tmax);
        if dx.abs() >= RAY_EPS {
            for i in 0..=w {
                let t = ((-hw + i as f64 * ps) - ox) / dx;
                if t > tmin && t < tmax {
                    self.ts.push(t);
                }
            }
        }
        if dy.abs() >= RAY_EPS {
            for i in 0..=h {
                let t = ((-hh + i as f64 * ps) - oy) / dy;
                if t > tmin && t < tmax {
                    self.ts.push(t);
                }
            }
        }
        self.ts.sort_by(|a, b| a.partial_cmp(b).expect("finite ray parameters"));

        for k in 0..self.ts.len() - 1 {
            let ta = self.ts[k];
            let tb = self.ts[k + 1];
            let len = tb - ta;
            if len <= RAY_EPS {
                continue;
            }
            let tm = 0.5 * (ta + tb);
            let mx = ox + tm * dx;
            let my = oy + tm * dy;
            let col = (((mx + hw) / ps).floor() as isize).clamp(0, w as isize - 1) as usize;
            let row = (((my + hh) / ps).floor() as isize).clamp(0, h as isize - 1) as usize;
            emit(row * w + col, len);
        }
    }
}
