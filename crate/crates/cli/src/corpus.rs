//! Judgment corpus files: one `Γ |- t : A` per line, `#` starts a comment.

use std::fs;
use std::path::Path;

use anyhow::{Context as _, Result};

use sysf_core::typing::Judgment;
use sysf_core::Parser;

#[derive(Clone, Debug)]
pub struct Entry {
    pub line: usize,
    pub judgment: Judgment,
}

pub fn parse_corpus(p: &Parser, text: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let judgment = p
            .judgment(line)
            .with_context(|| format!("line {}: `{line}`", i + 1))?;
        out.push(Entry {
            line: i + 1,
            judgment,
        });
    }
    Ok(out)
}

pub fn load_corpus(p: &Parser, path: &Path) -> Result<Vec<Entry>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_corpus(p, &text).with_context(|| format!("in {}", path.display()))
}
