//! Syntactic input/output data types of Curry-style System F.
//!
//! The crate is `no_std` (it only needs `alloc`). It covers the decidable
//! side of the theory: λ-terms and polymorphic types with capture-avoiding
//! substitution, β-reduction with traces, the F₀ decision procedure, simple
//! typing, checking of explicit F and F_F derivations, syntactic type
//! classifiers, the `T_F`/`T'_F` transformer terms with their certified
//! typings, bounded F₀ inhabitation search and a storage-operator harness.
//!
//! IO, JSON formats and the command line live in the companion `sysf` crate.
#![no_std]

extern crate alloc;

pub mod classify;
pub mod context;
pub mod gen;
pub mod lab;
pub mod names;
pub mod parse;
pub mod reduce;
pub mod storage;
pub mod term;
pub mod transform;
pub mod ty;
pub mod typing;
pub mod witness;

pub use context::{Context, DuplicateBinding};
pub use parse::{parse_context, parse_judgment, parse_term, parse_type, ParseError, Parser};
pub use reduce::{ReductionTrace, Status, Strategy};
pub use term::Term;
pub use ty::Type;
pub use typing::{Derivation, Judgment, Rule};

/// Name of the distinguished free term variable α.
pub const DEFAULT_ALPHA: &str = "alpha";
/// Name of the continuation variable used by storage operators.
pub const DEFAULT_CONTINUATION: &str = "f";
/// The atomic type constant `O`.
pub const ATOM_O: &str = "O";
/// The atomic type constant `⊥`, written `Bot` in ASCII syntax.
pub const ATOM_BOT: &str = "Bot";
