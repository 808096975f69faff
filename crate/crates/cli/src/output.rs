use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::Context;
use paircorr::report::Provenance;

pub fn provenance(command: &str) -> Provenance {
    let mut meta = Provenance::new("paircorr", env!("CARGO_PKG_VERSION"));
    meta.push("command", command);
    meta
}

/// Writes `bytes` to `path`, or to standard output.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}
