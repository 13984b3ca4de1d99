use std::io::Write;
use std::path::Path;

use anyhow::Context;
use tempfile::NamedTempFile;

use crate::fail::{CliResult, Fail};

/// Writes through a temp file in the target directory, then renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io =
        |e: std::io::Error| Fail::data(anyhow::Error::new(e).context(format!("cannot write '{}'", path.display())));
    let mut tmp = NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// To `out` when given, else to stdout.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).context("cannot write to stdout").map_err(Fail::data)?;
            stdout.flush().context("cannot write to stdout").map_err(Fail::data)
        }
    }
}

pub fn warn(msg: impl std::fmt::Display) {
    eprintln!("warning: {msg}");
}
