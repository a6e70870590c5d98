#![allow(dead_code)]

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

pub const BLESS_VAR: &str = "SYSF_BLESS";

pub fn blessing() -> bool {
    std::env::var_os(BLESS_VAR).is_some_and(|v| v != "0")
}

pub fn corpus(rel: &str) -> PathBuf {
    sysf::corpus_dir().join(rel)
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Compares `actual` with the file at `path`, rewriting it when blessing.
pub fn check_file(path: &Path, actual: &str) {
    if blessing() {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).unwrap();
        }
        fs::write(path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(path).unwrap_or_else(|e| {
        panic!("{}: {e} (rerun with {BLESS_VAR}=1 to create it)", path.display())
    });
    assert_eq!(
        expected,
        actual,
        "{} is stale (rerun with {BLESS_VAR}=1 to update)",
        path.display()
    );
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn sysf(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sysf"))
        .args(args)
        .current_dir(sysf::corpus_dir().join(".."))
        .stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("sysf binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    let out = child.wait_with_output().unwrap();
    Output {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}
