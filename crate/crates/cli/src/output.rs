//! Output files: a `#` header describing the run, then data lines.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use casimir_core::units::{BOLTZMANN, HBAR, SPEED_OF_LIGHT};

use crate::config::RunConfig;
use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Formats a float so that reruns print identical bytes.
pub fn num(x: f64) -> String {
    format!("{x:.12e}")
}

pub fn header(command: &str, config: &RunConfig) -> String {
    let mut h = format!("# casimir {VERSION}\n# command={command}\n");
    for line in config.describe().lines() {
        h.push_str("# ");
        h.push_str(line);
        h.push('\n');
    }
    h.push_str(&format!(
        "# hbar_J_s={HBAR:e}\n# k_B_J_K={BOLTZMANN:e}\n# c_m_s={SPEED_OF_LIGHT:e}\n"
    ));
    h
}

/// A data file written line by line and flushed as it goes, so that a run
/// aborted by a numerical failure leaves what it had computed.
pub struct DataFile {
    path: PathBuf,
    w: BufWriter<File>,
}

impl DataFile {
    pub fn create(dir: &Path, name: &str, header: &str) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        let path = dir.join(name);
        let mut w = BufWriter::new(File::create(&path)?);
        w.write_all(header.as_bytes())?;
        w.flush()?;
        Ok(DataFile { path, w })
    }

    pub fn line(&mut self, text: &str) -> Result<(), CliError> {
        writeln!(self.w, "{text}")?;
        self.w.flush()?;
        Ok(())
    }

    /// Marks the file as incomplete.
    pub fn fail(&mut self, err: &CliError) -> Result<(), CliError> {
        let msg = err.to_string().replace('\n', " ");
        self.line(&format!("# FAILED: {msg}"))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

/// Runs `body`; on error, records a FAILED line in `file` before returning.
pub fn guarded<F>(file: &mut DataFile, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut DataFile) -> Result<(), CliError>,
{
    match body(file) {
        Ok(()) => Ok(()),
        Err(e) => {
            file.fail(&e)?;
            Err(e)
        }
    }
}
