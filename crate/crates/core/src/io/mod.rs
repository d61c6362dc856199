//! File formats: FASTA genomes, tab-separated pair files, TOML run configuration.

pub mod config;
pub mod fasta;
pub mod pairs;

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use crate::error::{Error, Result};

pub(crate) fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub(crate) fn io_error(origin: &str, e: std::io::Error) -> Error {
    Error::Io(format!("{origin}: {e}"))
}
