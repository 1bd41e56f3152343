//! File formats.
//!
//! - Label images: binary 8-bit PGM (P5), labels stored directly as pixel
//!   values, rows in index order.
//! - Sinograms: raw little-endian f64 with a JSON sidecar giving the detector
//!   bin count (`width`), angle count (`height`), 1-based `channel`, and the
//!   raw file name relative to the sidecar.
//! - Spectra: CSV with header `label,channel,mu`, channels 1-based, label 0
//!   rows optional and required to be zero.
//!
//! Parse failures report the byte offset of the offending input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::segmentation::{LabelImage, MaterialSpectra};

// ---------------------------------------------------------------- PGM (P5)

pub fn write_label_pgm(y: &LabelImage, width: usize, height: usize, path: &Path) -> Result<()> {
    assert_eq!(y.len(), width * height, "label image does not match size");
    let mut bytes = format!("P5\n{width} {height}\n255\n").into_bytes();
    bytes.extend(y.labels.iter().copied());
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Read a P5 label image; returns the labels and (width, height).
pub fn read_label_pgm(path: &Path) -> Result<(LabelImage, usize, usize)> {
    let data = fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut pos = 0usize;

    let mut expect = |token: &str, what: &str| -> Result<usize> {
        // Skip whitespace and `#` comments between header fields.
        loop {
            while pos < data.len() && data[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < data.len() && data[pos] == b'#' {
                while pos < data.len() && data[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < data.len() && !data[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let field = std::str::from_utf8(&data[start..pos])
            .map_err(|_| Error::malformed(path, start, format!("non-ASCII {what}")))?;
        if !token.is_empty() {
            if field != token {
                return Err(Error::malformed(
                    path,
                    start,
                    format!("expected {token:?}, found {field:?}"),
                ));
            }
            return Ok(0);
        }
        field
            .parse::<usize>()
            .map_err(|_| Error::malformed(path, start, format!("invalid {what} {field:?}")))
    };

    expect("P5", "magic")?;
    let width = expect("", "width")?;
    let height = expect("", "height")?;
    let maxval = expect("", "maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::malformed(
            path,
            0,
            format!("maxval {maxval} outside 1..=255"),
        ));
    }
    // Exactly one whitespace byte separates the header from the raster.
    if pos >= data.len() || !data[pos].is_ascii_whitespace() {
        return Err(Error::malformed(path, pos, "missing raster separator"));
    }
    pos += 1;
    let need = width * height;
    if data.len() - pos != need {
        return Err(Error::malformed(
            path,
            pos,
            format!("raster holds {} bytes, expected {need}", data.len() - pos),
        ));
    }
    Ok((
        LabelImage::new(data[pos..].to_vec()),
        width,
        height,
    ))
}

// ------------------------------------------------------------- sinograms

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SinogramHeader {
    /// Detector bins per angle.
    pub width: usize,
    /// Number of projection angles.
    pub height: usize,
    /// 1-based channel index.
    pub channel: usize,
    /// Raw data file, relative to the sidecar.
    pub raw: String,
}

/// Write one channel's sinogram as `<stem>.c<channel>.raw` plus its sidecar
/// `<stem>.c<channel>.json`. Returns the sidecar path.
pub fn write_sinogram(
    dir: &Path,
    stem: &str,
    values: &[f64],
    detector_bins: usize,
    angles: usize,
    channel: usize,
) -> Result<PathBuf> {
    assert_eq!(
        values.len(),
        detector_bins * angles,
        "sinogram does not match geometry"
    );
    let raw_name = format!("{stem}.c{channel}.raw");
    let raw_path = dir.join(&raw_name);
    let mut bytes = Vec::with_capacity(values.len() * 8);
    for v in values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(&raw_path, bytes).map_err(|e| Error::io(&raw_path, e))?;

    let header = SinogramHeader {
        width: detector_bins,
        height: angles,
        channel,
        raw: raw_name,
    };
    let sidecar = dir.join(format!("{stem}.c{channel}.json"));
    let mut file = fs::File::create(&sidecar).map_err(|e| Error::io(&sidecar, e))?;
    let text = serde_json::to_string_pretty(&header).expect("header serializes");
    file.write_all(text.as_bytes())
        .and_then(|_| file.write_all(b"\n"))
        .map_err(|e| Error::io(&sidecar, e))?;
    Ok(sidecar)
}

/// Read a sinogram through its sidecar.
pub fn read_sinogram(sidecar: &Path) -> Result<(SinogramHeader, Vec<f64>)> {
    let text = fs::read_to_string(sidecar).map_err(|e| Error::io(sidecar, e))?;
    let header: SinogramHeader = serde_json::from_str(&text).map_err(|e| {
        Error::malformed(sidecar, e.column().saturating_sub(1), e.to_string())
    })?;
    let raw_path = sidecar
        .parent()
        .unwrap_or_else(|| Path::new("."))
        .join(&header.raw);
    let bytes = fs::read(&raw_path).map_err(|e| Error::io(&raw_path, e))?;
    let expected = header.width * header.height * 8;
    if bytes.len() != expected {
        return Err(Error::malformed(
            &raw_path,
            bytes.len().min(expected),
            format!("raw file holds {} bytes, expected {expected}", bytes.len()),
        ));
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Ok((header, values))
}

// ---------------------------------------------------------------- spectra

pub fn write_spectra_csv(spectra: &MaterialSpectra, path: &Path) -> Result<()> {
    let mut out = String::from("label,channel,mu\n");
    for label in 1..=spectra.materials() {
        for channel in 1..=spectra.channels() {
            out.push_str(&format!(
                "{label},{channel},{}\n",
                spectra.mu(label as u8, channel - 1)
            ));
        }
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Parse a spectra CSV. Every (label >= 1, channel) pair must appear exactly
/// once; material and channel indices must be contiguous from 1.
pub fn read_spectra_csv(path: &Path) -> Result<MaterialSpectra> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |offset: usize, detail: String| Error::malformed(path, offset, detail);

    let mut entries: Vec<(usize, usize, f64, usize)> = Vec::new();
    let mut offset = 0usize;
    let mut saw_header = false;
    for line in text.split_inclusive('\n') {
        let line_start = offset;
        offset += line.len();
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !saw_header {
            if trimmed != "label,channel,mu" {
                return Err(bad(
                    line_start,
                    format!("expected header \"label,channel,mu\", found {trimmed:?}"),
                ));
            }
            saw_header = true;
            continue;
        }
        let mut fields = trimmed.split(',');
        let mut next = |what: &str| {
            fields
                .next()
                .ok_or_else(|| bad(line_start, format!("missing {what} field")))
        };
        let label: usize = next("label")?
            .trim()
            .parse()
            .map_err(|_| bad(line_start, "invalid label".into()))?;
        let channel: usize = next("channel")?
            .trim()
            .parse()
            .map_err(|_| bad(line_start, "invalid channel".into()))?;
        let mu: f64 = next("mu")?
            .trim()
            .parse()
            .map_err(|_| bad(line_start, "invalid attenuation".into()))?;
        if fields.next().is_some() {
            return Err(bad(line_start, "too many fields".into()));
        }
        if channel == 0 {
            return Err(bad(line_start, "channels are 1-based".into()));
        }
        entries.push((label, channel, mu, line_start));
    }
    if !saw_header {
        return Err(bad(0, "empty spectra file".into()));
    }

    for &(label, _, mu, line_start) in &entries {
        if label == 0 && mu != 0.0 {
            return Err(bad(
                line_start,
                "background attenuation must be zero".into(),
            ));
        }
    }
    let materials = entries.iter().map(|e| e.0).max().unwrap_or(0);
    let channels = entries
        .iter()
        .filter(|e| e.0 >= 1)
        .map(|e| e.1)
        .max()
        .unwrap_or(0);
    if materials == 0 || channels == 0 {
        return Err(bad(0, "spectra file lists no materials".into()));
    }

    let mut table = vec![vec![f64::NAN; channels]; materials];
    for &(label, channel, mu, line_start) in &entries {
        if label == 0 {
            continue;
        }
        if channel > channels {
            unreachable!();
        }
        let slot = &mut table[label - 1][channel - 1];
        if !slot.is_nan() {
            return Err(bad(
                line_start,
                format!("duplicate entry for label {label}, channel {channel}"),
            ));
        }
        *slot = mu;
    }
    for (s, row) in table.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            if v.is_nan() {
                return Err(bad(
                    0,
                    format!("missing entry for label {}, channel {}", s + 1, c + 1),
                ));
            }
        }
    }
    MaterialSpectra::from_material_rows(channels, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::TempDir;

    #[test]
    fn pgm_round_trips() {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("labels.pgm");
        let y = LabelImage::new((0..12).map(|j| (j % 5) as u8).collect());
        write_label_pgm(&y, 4, 3, &path).unwrap();
        let (back, w, h) = read_label_pgm(&path).unwrap();
        assert_eq!((w, h), (4, 3));
        assert_eq!(back, y);
    }

    #[test]
    fn pgm_reports_byte_offsets() {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("bad.pgm");
        fs::write(&path, b"P6\n2 2\n255\n0123").unwrap();
        match read_label_pgm(&path) {
            Err(Error::Malformed { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("expected malformed error, got {other:?}"),
        }
        fs::write(&path, b"P5\n2 2\n255\n012").unwrap();
        assert!(matches!(
            read_label_pgm(&path),
            Err(Error::Malformed { .. })
        ));
    }

    #[test]
    fn pgm_accepts_header_comments() {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("c.pgm");
        fs::write(&path, b"P5\n# made elsewhere\n2 2\n255\nabcd").unwrap();
        let (y, w, h) = read_label_pgm(&path).unwrap();
        assert_eq!((w, h), (2, 2));
        assert_eq!(y.labels, b"abcd".to_vec());
    }

    #[test]
    fn sinogram_round_trips() {
        let dir = TempDir::new().unwrap();
        let values: Vec<f64> = (0..6).map(|i| i as f64 * 0.5 - 1.0).collect();
        let sidecar = write_sinogram(dir.path(), "sino", &values, 3, 2, 1).unwrap();
        let (header, back) = read_sinogram(&sidecar).unwrap();
        assert_eq!(header.width, 3);
        assert_eq!(header.height, 2);
        assert_eq!(header.channel, 1);
        assert_eq!(back, values);
    }

    #[test]
    fn truncated_raw_is_reported() {
        let dir = TempDir::new().unwrap();
        let sidecar = write_sinogram(dir.path(), "sino", &[1.0, 2.0], 2, 1, 1).unwrap();
        let raw = dir.path().join("sino.c1.raw");
        fs::write(&raw, [0u8; 9]).unwrap();
        match read_sinogram(&sidecar) {
            Err(Error::Malformed { offset, .. }) => assert_eq!(offset, 9),
            other => panic!("expected malformed error, got {other:?}"),
        }
    }

    #[test]
    fn spectra_round_trips() {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("spectra.csv");
        let s = MaterialSpectra::from_material_rows(
            2,
            vec![vec![0.25, 0.5], vec![0.75, 1.0]],
        )
        .unwrap();
        write_spectra_csv(&s, &path).unwrap();
        let back = read_spectra_csv(&path).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn spectra_csv_accepts_optional_zero_background() {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("spectra.csv");
        fs::write(&path, "label,channel,mu\n0,1,0.0\n1,1,0.4\n").unwrap();
        let s = read_spectra_csv(&path).unwrap();
        assert_eq!(s.materials(), 1);
        assert_eq!(s.mu(1, 0), 0.4);
    }

    #[test]
    fn spectra_csv_rejects_bad_inputs() {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("spectra.csv");
        for (content, what) in [
            ("label,mu\n1,0.4\n", "wrong header"),
            ("label,channel,mu\n0,1,0.3\n1,1,0.4\n", "nonzero background"),
            ("label,channel,mu\n1,1,0.4\n1,1,0.5\n", "duplicate"),
            ("label,channel,mu\n2,1,0.4\n", "gap in labels"),
            ("label,channel,mu\n1,1,0.4\n1,2,0.5\n2,1,0.6\n", "missing cell"),
            ("label,channel,mu\n1,0,0.4\n", "zero channel"),
            ("label,channel,mu\n1,1,abc\n", "bad float"),
        ] {
            fs::write(&path, content).unwrap();
            assert!(
                matches!(read_spectra_csv(&path), Err(Error::Malformed { .. })),
                "accepted {what}"
            );
        }
    }

    #[test]
    fn missing_files_surface_io_errors() {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("absent.csv");
        assert!(matches!(read_spectra_csv(&path), Err(Error::Io { .. })));
        assert!(matches!(
            read_label_pgm(&dir.path().join("absent.pgm")),
            Err(Error::Io { .. })
        ));
    }
}
