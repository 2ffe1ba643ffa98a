use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

/// Envelope shared by every JSON report.
#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: Vec<InputHash>,
    pub tolerances: BTreeMap<&'static str, f64>,
    #[serde(flatten)]
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &'static str, inputs: Vec<InputHash>, tolerances: &[(&'static str, f64)], result: T) -> Self {
        Report {
            tool: "cplab",
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs,
            tolerances: tolerances.iter().copied().collect(),
            result,
        }
    }
}

/// Reads a UTF-8 input file and hashes its bytes.
pub fn read_input(path: &Path) -> Result<(String, InputHash), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let hash = InputHash { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(&bytes)) };
    let text = String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{}: not UTF-8", path.display())))?;
    Ok((text, hash))
}

/// Writes to `out` through a temporary file in the same directory, or to
/// stdout when `out` is `None`.
pub fn write_atomic(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    let Some(path) = out else {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(contents.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::Input(format!("stdout: {e}")));
    };
    let fail = |e: std::io::Error| CliError::Input(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

pub fn emit<T: Serialize>(report: &Report<T>, out: Option<&Path>) -> Result<(), CliError> {
    write_atomic(out, &cplab::io::to_pretty(report))
}
