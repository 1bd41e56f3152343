//! Discrete tomography reconstruction with DART and multi-channel DART.
//!
//! The crate covers the full pipeline: a parallel-beam projector with stored
//! and matrix-free representations, a masked SIRT solver, single- and
//! multi-channel segmentation, the DART/MC-DART outer loop, random
//! parcellation phantoms with random spectra, evaluation metrics, and the
//! file formats used by the command-line tools.

pub mod dart;
pub mod error;
pub mod io;
pub mod metrics;
pub mod phantom;
pub mod projector;
pub mod seed;
pub mod segmentation;
pub mod solvers;

pub use dart::{
    arm_baseline_run, dart_run, detect_boundary, mcdart_run, sample_free_set, Connectivity,
    DartParams, DartTrace, EvalContext, TraceRecord,
};
pub use error::{Error, Result};
pub use metrics::{class_counts, pixel_error, PixelErrorReport};
pub use phantom::{
    disk_region, generate_phantom, generate_spectra, synthesize, PhantomSpec, SynthesizedProblem,
};
pub use projector::{
    build_operator, GridSpec, ParallelGeometry, Projector, Representation, VoxelMask,
};
pub use segmentation::{
    segment_multi, segment_single, ChannelStack, Label, LabelImage, MaterialSpectra,
};
pub use solvers::{masked_arm, residual_sinogram, sirt_run, ResidualSinogram};
