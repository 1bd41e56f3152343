//! CSV emission. Every file starts with a `#` comment line holding the full
//! configuration, then the header row. Output is byte-deterministic: floats
//! are written with Rust's shortest round-trip formatting.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::cli_error::{CliError, CliResult};

pub struct CsvFile {
    path: PathBuf,
    writer: BufWriter<File>,
}

impl CsvFile {
    pub fn create(path: &Path, comment: &str, header: &str) -> CliResult<Self> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)
                    .map_err(|e| CliError::io(format!("{}: {e}", parent.display())))?;
            }
        }
        let file = File::create(path)
            .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        let mut writer = BufWriter::new(file);
        writeln!(writer, "{comment}")
            .and_then(|_| writeln!(writer, "{header}"))
            .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        Ok(CsvFile {
            path: path.to_path_buf(),
            writer,
        })
    }

    pub fn row(&mut self, fields: &[String]) -> CliResult<()> {
        writeln!(self.writer, "{}", fields.join(","))
            .map_err(|e| CliError::io(format!("{}: {e}", self.path.display())))
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.writer
            .flush()
            .map_err(|e| CliError::io(format!("{}: {e}", self.path.display())))
    }
}

/// Shortest round-trip float formatting shared by all CSV writers.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}
