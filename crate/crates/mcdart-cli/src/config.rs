//! Experiment configuration: defaults, config files, and flag overrides.
//!
//! Config files are flat `key = value` text; `#` starts a comment. CLI flags
//! override file values, which override the profile defaults. The desk-scale
//! profile (64x64 grid, 64 detector bins, 10 runs) keeps the full sweep at
//! minutes; `--paper-scale` switches the defaults to the 128x128 / 100-run
//! setup.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use mcdart::{Connectivity, DartParams};

use crate::cli_error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub size: usize,
    pub detector: usize,
    pub angles: usize,
    pub channels: Vec<usize>,
    pub materials: Vec<usize>,
    pub runs: usize,
    pub start_iterations: usize,
    pub dart_iterations: usize,
    pub arm_iterations: usize,
    pub fix_probability: f64,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Angle counts swept by the angle study.
    pub angle_counts: Vec<usize>,
    pub plot: bool,
    pub paper_scale: bool,
    /// Input paths used by the reconstruct command (and written back into its
    /// run manifest so a manifest is a replayable config).
    pub spectra: Option<PathBuf>,
    pub sinograms: Vec<PathBuf>,
    /// Whether `size` was set explicitly (flag or file) rather than left at
    /// its default; reconstruct falls back to the detector width otherwise.
    pub size_explicit: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            size: 64,
            detector: 64,
            angles: 32,
            channels: (1..=10).collect(),
            materials: (2..=10).collect(),
            runs: 10,
            start_iterations: 10,
            dart_iterations: 10,
            arm_iterations: 10,
            fix_probability: 0.99,
            seed: 1,
            out_dir: PathBuf::from("out"),
            angle_counts: vec![2, 32, 128],
            plot: false,
            paper_scale: false,
            spectra: None,
            sinograms: Vec::new(),
            size_explicit: false,
        }
    }
}

impl ExperimentConfig {
    pub fn paper_scale_profile() -> Self {
        ExperimentConfig {
            size: 128,
            detector: 128,
            runs: 100,
            paper_scale: true,
            ..ExperimentConfig::default()
        }
    }

    pub fn dart_params(&self, rng_seed: u64) -> DartParams {
        DartParams {
            start_iterations: self.start_iterations,
            dart_iterations: self.dart_iterations,
            arm_iterations: self.arm_iterations,
            fix_probability: self.fix_probability,
            connectivity: Connectivity::Eight,
            rng_seed,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.size == 0 || self.detector == 0 || self.angles == 0 {
            return Err(CliError::config(
                "size, detector, and angles must be positive",
            ));
        }
        if self.runs == 0 {
            return Err(CliError::config("runs must be at least 1"));
        }
        if self.channels.is_empty() || self.materials.is_empty() {
            return Err(CliError::config("channels and materials must be non-empty"));
        }
        if self.materials.iter().any(|&m| m == 0 || m > 255) {
            return Err(CliError::config("materials must lie in 1..=255"));
        }
        if self.channels.iter().any(|&c| c == 0) {
            return Err(CliError::config("channels must be positive"));
        }
        if !(0.0..=1.0).contains(&self.fix_probability) {
            return Err(CliError::config("fix_probability must lie in [0, 1]"));
        }
        if self.angle_counts.is_empty() || self.angle_counts.iter().any(|&a| a == 0) {
            return Err(CliError::config("angle_counts must be positive"));
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> CliResult<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::config(format!(
                    "{}:{}: expected `key = value`, found {line:?}",
                    path.display(),
                    lineno + 1
                ))
            })?;
            self.set(key.trim(), value.trim()).map_err(|e| {
                CliError::config(format!("{}:{}: {e}", path.display(), lineno + 1))
            })?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let parse_usize =
            |v: &str| v.parse::<usize>().map_err(|_| format!("invalid count {v:?}"));
        match key {
            "size" => {
                self.size = parse_usize(value)?;
                self.size_explicit = true;
            }
            "detector" => self.detector = parse_usize(value)?,
            "angles" => self.angles = parse_usize(value)?,
            "runs" => self.runs = parse_usize(value)?,
            "start_iterations" => self.start_iterations = parse_usize(value)?,
            "dart_iterations" => self.dart_iterations = parse_usize(value)?,
            "arm_iterations" => self.arm_iterations = parse_usize(value)?,
            "fix_probability" => {
                self.fix_probability = value
                    .parse::<f64>()
                    .map_err(|_| format!("invalid probability {value:?}"))?
            }
            "seed" => {
                self.seed = value
                    .parse::<u64>()
                    .map_err(|_| format!("invalid seed {value:?}"))?
            }
            "channels" => self.channels = parse_list(value)?,
            "materials" => self.materials = parse_list(value)?,
            "angle_counts" => self.angle_counts = parse_list(value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "plot" => self.plot = parse_bool(value)?,
            "paper_scale" => self.paper_scale = parse_bool(value)?,
            "spectra" => self.spectra = Some(PathBuf::from(value)),
            "sinograms" => {
                self.sinograms = value
                    .split(',')
                    .map(|p| PathBuf::from(p.trim()))
                    .collect()
            }
            other => return Err(format!("unknown config key {other:?}")),
        }
        Ok(())
    }

    /// One-line record of the full configuration, embedded as a `#` comment
    /// at the top of every CSV this command writes.
    pub fn comment_line(&self, command: &str) -> String {
        let mut line = format!("# command={command}");
        let mut push = |k: &str, v: String| {
            let _ = write!(line, " {k}={v}");
        };
        push("size", self.size.to_string());
        push("detector", self.detector.to_string());
        push("angles", self.angles.to_string());
        push("channels", format_list(&self.channels));
        push("materials", format_list(&self.materials));
        push("runs", self.runs.to_string());
        push("start_iterations", self.start_iterations.to_string());
        push("dart_iterations", self.dart_iterations.to_string());
        push("arm_iterations", self.arm_iterations.to_string());
        push("fix_probability", self.fix_probability.to_string());
        push("seed", self.seed.to_string());
        push("angle_counts", format_list(&self.angle_counts));
        if let Some(spectra) = &self.spectra {
            push("spectra", spectra.display().to_string());
        }
        if !self.sinograms.is_empty() {
            push(
                "sinograms",
                self.sinograms
                    .iter()
                    .map(|p| p.display().to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
        }
        line
    }
}

/// Parse "1,3,5-8" into a sorted list.
pub fn parse_list(text: &str) -> Result<Vec<usize>, String> {
    let mut values = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        match part.split_once('-') {
            Some((lo, hi)) => {
                let lo: usize = lo
                    .trim()
                    .parse()
                    .map_err(|_| format!("invalid range start {lo:?}"))?;
                let hi: usize = hi
                    .trim()
                    .parse()
                    .map_err(|_| format!("invalid range end {hi:?}"))?;
                if lo > hi {
                    return Err(format!("empty range {part:?}"));
                }
                values.extend(lo..=hi);
            }
            None => values.push(
                part.parse()
                    .map_err(|_| format!("invalid list entry {part:?}"))?,
            ),
        }
    }
    if values.is_empty() {
        return Err("empty list".into());
    }
    values.sort_unstable();
    values.dedup();
    Ok(values)
}

fn parse_bool(text: &str) -> Result<bool, String> {
    match text {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(format!("invalid boolean {other:?}")),
    }
}

/// Compact "1-4,7" display form for sorted lists.
pub fn format_list(values: &[usize]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let start = values[i];
        let mut end = start;
        while i + 1 < values.len() && values[i + 1] == end + 1 {
            end = values[i + 1];
            i += 1;
        }
        if end > start {
            parts.push(format!("{start}-{end}"));
        } else {
            parts.push(start.to_string());
        }
        i += 1;
    }
    parts.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_parse_and_format() {
        assert_eq!(parse_list("1,2,5-8").unwrap(), vec![1, 2, 5, 6, 7, 8]);
        assert_eq!(parse_list("3").unwrap(), vec![3]);
        assert!(parse_list("8-5").is_err());
        assert!(parse_list("x").is_err());
        assert_eq!(format_list(&[1, 2, 5, 6, 7, 8]), "1-2,5-8");
        assert_eq!(format_list(&[4]), "4");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut cfg = ExperimentConfig::default();
        assert!(cfg.set("no_such_key", "1").is_err());
        assert!(cfg.set("runs", "abc").is_err());
        assert!(cfg.set("runs", "3").is_ok());
        assert_eq!(cfg.runs, 3);
    }

    #[test]
    fn comment_line_is_stable() {
        let cfg = ExperimentConfig::default();
        let a = cfg.comment_line("sweep");
        let b = cfg.comment_line("sweep");
        assert_eq!(a, b);
        assert!(a.starts_with("# command=sweep size=64 detector=64"));
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let mut cfg = ExperimentConfig::default();
        cfg.runs = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::default();
        cfg.fix_probability = 1.2;
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::default();
        cfg.channels.clear();
        assert!(cfg.validate().is_err());
    }
}
