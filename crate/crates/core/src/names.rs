//! Fresh-name generation.
//!
//! Every renaming in the crate goes through [`fresh_like`], so generated
//! names are deterministic: the stem of the requested name followed by the
//! smallest positive counter that is not taken.

use alloc::format;
use alloc::string::String;

/// Strips trailing ASCII digits, keeping at least one character.
fn stem(base: &str) -> &str {
    let trimmed = base.trim_end_matches(|c: char| c.is_ascii_digit());
    if trimmed.is_empty() {
        base
    } else {
        trimmed
    }
}

/// Returns `base` if it is free to use, otherwise `stem(base)` followed by
/// the first counter `1, 2, ...` that is not taken.
pub fn fresh_like(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return String::from(base);
    }
    let stem = stem(base);
    (1usize..)
        .map(|n| format!("{stem}{n}"))
        .find(|candidate| !taken(candidate))
        .expect("unbounded counter")
}

/// Like [`fresh_like`] but never returns `base` itself.
pub fn fresh_variant(base: &str, taken: impl Fn(&str) -> bool) -> String {
    fresh_like(base, |n| n == base || taken(n))
}

/// Preferred binder names for generated terms.
pub const TERM_BINDERS: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

/// Preferred names for generated type variables.
pub const TYPE_BINDERS: [&str; 4] = ["X", "Y", "Z", "W"];

/// First name of the sequence `seq[0], seq[1], ..., seq[0]1, seq[1]1, ...`
/// that is not taken.
pub fn first_unused(seq: &[&str], taken: impl Fn(&str) -> bool) -> String {
    for name in seq {
        if !taken(name) {
            return String::from(*name);
        }
    }
    (1usize..)
        .flat_map(|n| seq.iter().map(move |s| format!("{s}{n}")))
        .find(|candidate| !taken(candidate))
        .expect("unbounded counter")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_free_name() {
        assert_eq!(fresh_like("y", |_| false), "y");
    }

    #[test]
    fn counts_from_stem() {
        assert_eq!(fresh_like("x", |n| n == "x" || n == "x1"), "x2");
        assert_eq!(fresh_like("x3", |n| n == "x3"), "x1");
        assert_eq!(fresh_variant("y", |_| false), "y1");
    }

    #[test]
    fn sequence_wraps_with_counter() {
        assert_eq!(first_unused(&TYPE_BINDERS, |n| n == "X"), "Y");
        assert_eq!(
            first_unused(&["X", "Y"], |n| n == "X" || n == "Y"),
            "X1"
        );
    }
}
