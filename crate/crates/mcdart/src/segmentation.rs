//! Material spectra and segmentation of continuous reconstructions into
//! discrete labels.
//!
//! Label 0 is the background; it has zero attenuation in every channel and
//! takes part in segmentation like any other material.

use crate::error::{Error, Result};

pub type Label = u8;

/// Per-voxel material labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelImage {
    pub labels: Vec<Label>,
}

impl LabelImage {
    pub fn new(labels: Vec<Label>) -> Self {
        LabelImage { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, j: usize) -> Label {
        self.labels[j]
    }
}

/// Attenuation table mu(label, channel) for labels 0..=m over C channels.
/// Row 0 is the background and is all zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialSpectra {
    channels: usize,
    // table[label][channel]
    table: Vec<Vec<f64>>,
}

impl MaterialSpectra {
    /// Build from per-material rows (label 1..=m); the background row is
    /// prepended automatically.
    pub fn from_material_rows(channels: usize, materials: Vec<Vec<f64>>) -> Result<Self> {
        if channels == 0 {
            return Err(Error::InvalidParameter(
                "spectra need at least one channel".into(),
            ));
        }
        if materials.is_empty() {
            return Err(Error::InvalidParameter(
                "spectra need at least one material".into(),
            ));
        }
        let mut table = Vec::with_capacity(materials.len() + 1);
        table.push(vec![0.0; channels]);
        for (s, row) in materials.into_iter().enumerate() {
            if row.len() != channels {
                return Err(Error::ChannelMismatch {
                    expected: channels,
                    actual: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "attenuations must be finite and nonnegative (material {})",
                    s + 1
                )));
            }
            table.push(row);
        }
        Ok(MaterialSpectra { channels, table })
    }

    /// Number of channels C.
    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Number of materials m, excluding the background.
    pub fn materials(&self) -> usize {
        self.table.len() - 1
    }

    /// Number of labels including the background.
    pub fn num_labels(&self) -> usize {
        self.table.len()
    }

    /// Attenuation of `label` at channel `c`.
    pub fn mu(&self, label: Label, channel: usize) -> f64 {
        self.table[label as usize][channel]
    }

    /// Attenuation vector of `label` across all channels.
    pub fn centroid(&self, label: Label) -> &[f64] {
        &self.table[label as usize]
    }

    /// Map a label image to its attenuation image at channel `c`.
    pub fn mu_image(&self, y: &LabelImage, channel: usize) -> Vec<f64> {
        y.labels
            .iter()
            .map(|&s| self.table[s as usize][channel])
            .collect()
    }

    /// Restrict to a single channel.
    pub fn single_channel(&self, channel: usize) -> MaterialSpectra {
        MaterialSpectra {
            channels: 1,
            table: self.table.iter().map(|row| vec![row[channel]]).collect(),
        }
    }
}

/// One reconstruction per channel, all sharing the voxel count.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelStack {
    channels: Vec<Vec<f64>>,
}

impl ChannelStack {
    pub fn new(channels: Vec<Vec<f64>>) -> Result<Self> {
        if channels.is_empty() {
            return Err(Error::InvalidParameter(
                "channel stack needs at least one channel".into(),
            ));
        }
        let n = channels[0].len();
        for (c, ch) in channels.iter().enumerate() {
            if ch.len() != n {
                return Err(Error::ShapeMismatch {
                    context: "channel stack: channel length",
                    expected: n,
                    actual: channels[c].len(),
                });
            }
        }
        Ok(ChannelStack { channels })
    }

    pub fn num_channels(&self) -> usize {
        self.channels.len()
    }

    /// Voxel count n.
    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        &self.channels[c]
    }

    pub fn channels(&self) -> &[Vec<f64>] {
        &self.channels
    }

    pub fn into_channels(self) -> Vec<Vec<f64>> {
        self.channels
    }
}

// Label whose centroid is nearest to the voxel values, squared Euclidean
// distance over channels; exact ties go to the lowest label index.
pub(crate) fn nearest_label(spectra: &MaterialSpectra, values: &[f64]) -> Label {
    let mut best = 0u8;
    let mut best_dist = f64::INFINITY;
    for (label, centroid) in spectra.table.iter().enumerate() {
        let mut dist = 0.0;
        for (v, mu) in values.iter().zip(centroid) {
            let d = v - mu;
            dist += d * d;
        }
        if dist < best_dist {
            best_dist = dist;
            best = label as Label;
        }
    }
    best
}

/// Single-channel thresholding: each voxel takes the label whose attenuation
/// interval contains its value. Interval edges are the midpoints between
/// consecutive attenuations; a value exactly on an edge goes to the
/// higher-attenuation interval. Labels sharing one attenuation value collapse
/// to the lowest label index.
pub fn segment_single(x: &[f64], spectra: &MaterialSpectra) -> Result<LabelImage> {
    if spectra.channels() != 1 {
        return Err(Error::ChannelMismatch {
            expected: 1,
            actual: spectra.channels(),
        });
    }
    // (attenuation, label) sorted ascending; stable on duplicates.
    let mut order: Vec<(f64, Label)> = spectra
        .table
        .iter()
        .enumerate()
        .map(|(s, row)| (row[0], s as Label))
        .collect();
    order.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite attenuations"));
    let midpoints: Vec<f64> = order
        .windows(2)
        .map(|w| 0.5 * (w[0].0 + w[1].0))
        .collect();

    let labels = x
        .iter()
        .map(|&v| {
            let mut idx = midpoints.partition_point(|&mid| mid <= v);
            while idx > 0 && order[idx - 1].0 == order[idx].0 {
                idx -= 1;
            }
            order[idx].1
        })
        .collect();
    Ok(LabelImage::new(labels))
}

/// Multi-channel segmentation: per voxel, the label minimizing the Euclidean
/// distance between the voxel's channel values and the material's attenuation
/// vector. Ties go to the lowest label index.
pub fn segment_multi(stack: &ChannelStack, spectra: &MaterialSpectra) -> Result<LabelImage> {
    if stack.num_channels() != spectra.channels() {
        return Err(Error::ChannelMismatch {
            expected: spectra.channels(),
            actual: stack.num_channels(),
        });
    }
    let n = stack.len();
    let c = stack.num_channels();
    let mut values = vec![0.0; c];
    let mut labels = Vec::with_capacity(n);
    for j in 0..n {
        for (ci, v) in values.iter_mut().enumerate() {
            *v = stack.channel(ci)[j];
        }
        labels.push(nearest_label(spectra, &values));
    }
    Ok(LabelImage::new(labels))
}
