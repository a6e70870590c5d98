//! File formats and corpus loading shared by the `sysf` binary and its tests.

pub mod corpus;
pub mod formats;

use std::path::{Path, PathBuf};

/// Root of the shipped corpus (`corpus/` at the workspace root).
pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}
