//! Typing judgments and the proof systems over them.
//!
//! * [`derivation`]: explicit derivation trees for F and F_F and their checkers.
//! * [`f0`]: the decision procedure for normal terms in F₀ (F without ∀e).
//! * [`simple`]: the simply typed system S.

use core::fmt;

use crate::context::Context;
use crate::term::Term;
use crate::ty::Type;

pub mod derivation;
pub mod f0;
pub mod simple;

pub use derivation::{
    check_derivation_f, check_derivation_ff, BuildError, Derivation, DerivationError,
    DerivationErrorKind, Rule,
};
pub use f0::{check_f0, derive_f0, f0_to_s, F0ToSError, NotNormal};
pub use simple::{check_s, erase_context, erase_judgment, erase_type, BinderNamer, QuantifierPresent};

/// Which proof system a judgment is claimed in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum System {
    #[default]
    F,
    F0,
    S,
    FF,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::F => "F",
            System::F0 => "F0",
            System::S => "S",
            System::FF => "FF",
        }
    }
}

/// `Γ ⊢ t : A`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Judgment {
    pub ctx: Context,
    pub term: Term,
    pub ty: Type,
    pub system: System,
}

impl Judgment {
    pub fn new(ctx: Context, term: Term, ty: Type) -> Judgment {
        Judgment {
            ctx,
            term,
            ty,
            system: System::F,
        }
    }

    pub fn in_system(mut self, system: System) -> Judgment {
        self.system = system;
        self
    }

    /// Same context, α-equivalent subject and type. The system tag is ignored.
    pub fn alpha_eq(&self, other: &Judgment) -> bool {
        self.ctx.equiv(&other.ctx) && self.term.alpha_eq(&other.term) && self.ty.alpha_eq(&other.ty)
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.is_empty() {
            write!(f, "|- {} : {}", self.term, self.ty)
        } else {
            write!(f, "{} |- {} : {}", self.ctx, self.term, self.ty)
        }
    }
}
