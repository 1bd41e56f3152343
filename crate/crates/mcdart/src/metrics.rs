//! Evaluation quantities: pixel error over a region and per-class counts.

use crate::error::{Error, Result};
use crate::segmentation::LabelImage;

/// Label mismatches between a result and a reference over a voxel region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PixelErrorReport {
    pub mismatched: usize,
    pub region_size: usize,
    pub percentage: f64,
}

/// Count label mismatches restricted to `region` (voxel indices). An empty
/// region reports zero mismatches and 0%.
pub fn pixel_error(
    result: &LabelImage,
    reference: &LabelImage,
    region: &[usize],
) -> Result<PixelErrorReport> {
    if result.len() != reference.len() {
        return Err(Error::ShapeMismatch {
            context: "pixel_error: label images",
            expected: reference.len(),
            actual: result.len(),
        });
    }
    let mismatched = region
        .iter()
        .filter(|&&j| result.label(j) != reference.label(j))
        .count();
    let region_size = region.len();
    let percentage = if region_size == 0 {
        0.0
    } else {
        100.0 * mismatched as f64 / region_size as f64
    };
    Ok(PixelErrorReport {
        mismatched,
        region_size,
        percentage,
    })
}

/// Pixels per label over `region`, as a vector indexed by label with
/// `num_labels` entries. Counts sum to the region size.
pub fn class_counts(y: &LabelImage, region: &[usize], num_labels: usize) -> Vec<usize> {
    let mut counts = vec![0usize; num_labels];
    for &j in region {
        counts[y.label(j) as usize] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img(labels: Vec<u8>) -> LabelImage {
        LabelImage::new(labels)
    }

    #[test]
    fn identical_images_have_zero_error() {
        let a = img(vec![1, 2, 0, 1]);
        let region: Vec<usize> = (0..4).collect();
        let r = pixel_error(&a, &a, &region).unwrap();
        assert_eq!(r.mismatched, 0);
        assert_eq!(r.percentage, 0.0);
    }

    #[test]
    fn swapped_labels_give_total_mismatch() {
        let a = img(vec![1, 2, 1, 2]);
        let b = img(vec![2, 1, 2, 1]);
        let region: Vec<usize> = (0..4).collect();
        let r = pixel_error(&a, &b, &region).unwrap();
        assert_eq!(r.mismatched, 4);
        assert_eq!(r.percentage, 100.0);
    }

    #[test]
    fn matches_brute_force_on_random_pair() {
        let mut s = 0x9e37u64;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) % 4) as u8
        };
        let a = img((0..256).map(|_| next()).collect());
        let b = img((0..256).map(|_| next()).collect());
        let region: Vec<usize> = (0..256).step_by(3).collect();
        let r = pixel_error(&a, &b, &region).unwrap();
        let expected = region
            .iter()
            .filter(|&&j| a.label(j) != b.label(j))
            .count();
        assert_eq!(r.mismatched, expected);
        assert_eq!(r.region_size, region.len());
    }

    #[test]
    fn error_is_symmetric() {
        let a = img(vec![0, 1, 2, 2, 1]);
        let b = img(vec![1, 1, 2, 0, 1]);
        let region: Vec<usize> = (0..5).collect();
        assert_eq!(
            pixel_error(&a, &b, &region).unwrap().mismatched,
            pixel_error(&b, &a, &region).unwrap().mismatched
        );
    }

    #[test]
    fn mismatch_count_satisfies_triangle_bound() {
        let a = img(vec![0, 1, 2, 2, 1, 0]);
        let b = img(vec![1, 1, 2, 0, 1, 0]);
        let c = img(vec![1, 0, 2, 0, 2, 0]);
        let region: Vec<usize> = (0..6).collect();
        let ac = pixel_error(&a, &c, &region).unwrap().mismatched;
        let ab = pixel_error(&a, &b, &region).unwrap().mismatched;
        let bc = pixel_error(&b, &c, &region).unwrap().mismatched;
        assert!(ac <= ab + bc);
    }

    #[test]
    fn empty_region_reports_zero() {
        let a = img(vec![1, 2]);
        let r = pixel_error(&a, &a, &[]).unwrap();
        assert_eq!(r.region_size, 0);
        assert_eq!(r.percentage, 0.0);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let a = img(vec![1, 2]);
        let b = img(vec![1, 2, 3]);
        assert!(pixel_error(&a, &b, &[0]).is_err());
    }

    #[test]
    fn uniform_labeling_counts_whole_region() {
        let y = img(vec![3; 10]);
        let region: Vec<usize> = (0..7).collect();
        let counts = class_counts(&y, &region, 5);
        assert_eq!(counts, vec![0, 0, 0, 7, 0]);
    }

    #[test]
    fn counts_sum_to_region_size_and_match_histogram() {
        let y = img(vec![0, 1, 1, 2, 0, 2, 1, 3]);
        let region: Vec<usize> = vec![0, 2, 3, 5, 6, 7];
        let counts = class_counts(&y, &region, 4);
        assert_eq!(counts.iter().sum::<usize>(), region.len());
        let mut expected = vec![0usize; 4];
        for &j in &region {
            expected[y.label(j) as usize] += 1;
        }
        assert_eq!(counts, expected);
    }
}
