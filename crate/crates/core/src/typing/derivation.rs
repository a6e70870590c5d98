//! Explicit derivations in Curry-style System F.
//!
//! Nodes are compared with their premises up to α-equivalence of terms and
//! types, and contexts up to reordering.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::classify::ends_with;
use crate::context::Context;
use crate::names::fresh_like;
use crate::term::Term;
use crate::ty::Type;
use crate::typing::Judgment;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `Γ ⊢ x : A` when `x : A ∈ Γ`.
    Ax,
    /// From `Γ, x : A ⊢ t : B` infer `Γ ⊢ λx.t : A → B`.
    ArrowI,
    /// From `Γ ⊢ u : A → B` and `Γ ⊢ v : A` infer `Γ ⊢ (u)v : B`.
    ArrowE,
    /// From `Γ ⊢ t : A` infer `Γ ⊢ t : ∀X A`, `X` not free in `Γ`.
    ForallI(String),
    /// From `Γ ⊢ t : ∀X A` infer `Γ ⊢ t : A[G/X]`; carries `G`.
    ForallE(Type),
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Ax => "ax",
            Rule::ArrowI => "arrow_i",
            Rule::ArrowE => "arrow_e",
            Rule::ForallI(_) => "forall_i",
            Rule::ForallE(_) => "forall_e",
        }
    }

    fn arity(&self) -> usize {
        match self {
            Rule::Ax => 0,
            Rule::ArrowI | Rule::ForallI(_) | Rule::ForallE(_) => 1,
            Rule::ArrowE => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub rule: Rule,
    pub conclusion: Judgment,
    pub premises: Vec<Derivation>,
}

/// A smart constructor was applied to premises of the wrong shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildError(pub String);

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot build derivation: {}", self.0)
    }
}

impl core::error::Error for BuildError {}

impl Derivation {
    pub fn new(rule: Rule, conclusion: Judgment, premises: Vec<Derivation>) -> Derivation {
        Derivation {
            rule,
            conclusion,
            premises,
        }
    }

    pub fn axiom(ctx: &Context, x: &str) -> Result<Derivation, BuildError> {
        let ty = ctx
            .lookup(x)
            .ok_or_else(|| BuildError(format!("`{x}` is not in the context")))?
            .clone();
        Ok(Derivation::new(
            Rule::Ax,
            Judgment::new(ctx.clone(), Term::var(x), ty),
            Vec::new(),
        ))
    }

    /// Discharges `binder` from the premise context.
    pub fn arrow_intro(binder: &str, premise: Derivation) -> Result<Derivation, BuildError> {
        let mut ctx = premise.conclusion.ctx.clone();
        let a = ctx
            .remove(binder)
            .ok_or_else(|| BuildError(format!("`{binder}` is not in the premise context")))?;
        let term = Term::abs(binder, premise.conclusion.term.clone());
        let ty = Type::arrow(a, premise.conclusion.ty.clone());
        Ok(Derivation::new(
            Rule::ArrowI,
            Judgment::new(ctx, term, ty),
            alloc::vec![premise],
        ))
    }

    pub fn arrow_elim(fun: Derivation, arg: Derivation) -> Result<Derivation, BuildError> {
        let Type::Arrow(_, b) = &fun.conclusion.ty else {
            return Err(BuildError(format!(
                "function premise has type {}, not an arrow",
                fun.conclusion.ty
            )));
        };
        let concl = Judgment::new(
            fun.conclusion.ctx.clone(),
            Term::app(fun.conclusion.term.clone(), arg.conclusion.term.clone()),
            (**b).clone(),
        );
        Ok(Derivation::new(Rule::ArrowE, concl, alloc::vec![fun, arg]))
    }

    /// Applies `arrow_elim` left to right.
    pub fn arrow_elims(
        fun: Derivation,
        args: impl IntoIterator<Item = Derivation>,
    ) -> Result<Derivation, BuildError> {
        args.into_iter().try_fold(fun, Derivation::arrow_elim)
    }

    pub fn forall_intro(var: &str, premise: Derivation) -> Result<Derivation, BuildError> {
        if premise.conclusion.ctx.has_free_type_var(var) {
            return Err(BuildError(format!("`{var}` is free in the context")));
        }
        let concl = Judgment::new(
            premise.conclusion.ctx.clone(),
            premise.conclusion.term.clone(),
            Type::forall(var, premise.conclusion.ty.clone()),
        );
        Ok(Derivation::new(
            Rule::ForallI(var.into()),
            concl,
            alloc::vec![premise],
        ))
    }

    pub fn forall_elim(premise: Derivation, g: Type) -> Result<Derivation, BuildError> {
        let Type::Forall(x, body) = &premise.conclusion.ty else {
            return Err(BuildError(format!(
                "premise has type {}, not a quantified type",
                premise.conclusion.ty
            )));
        };
        let concl = Judgment::new(
            premise.conclusion.ctx.clone(),
            premise.conclusion.term.clone(),
            body.subst(x, &g),
        );
        Ok(Derivation::new(Rule::ForallE(g), concl, alloc::vec![premise]))
    }

    /// Wraps `premise : A` into `∀X₁ ... ∀Xₙ A` (innermost last).
    pub fn forall_intros(vars: &[String], premise: Derivation) -> Result<Derivation, BuildError> {
        vars.iter()
            .rev()
            .try_fold(premise, |d, v| Derivation::forall_intro(v, d))
    }

    /// Replaces the conclusion's subject and type by α-equivalent ones.
    pub fn relabel(mut self, term: Term, ty: Type) -> Derivation {
        debug_assert!(self.conclusion.term.alpha_eq(&term));
        debug_assert!(self.conclusion.ty.alpha_eq(&ty));
        self.conclusion.term = term;
        self.conclusion.ty = ty;
        self
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Derivation::node_count).sum::<usize>()
    }

    /// Whether some node is a ∀-elimination.
    pub fn uses_forall_elim(&self) -> bool {
        matches!(self.rule, Rule::ForallE(_)) || self.premises.iter().any(Derivation::uses_forall_elim)
    }

    /// Every node, preorder, with its path.
    pub fn nodes(&self) -> Vec<(Vec<usize>, &Derivation)> {
        fn go<'a>(d: &'a Derivation, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Derivation)>) {
            out.push((path.clone(), d));
            for (i, p) in d.premises.iter().enumerate() {
                path.push(i);
                go(p, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivationErrorKind {
    /// The node is not an instance of its rule.
    Malformed(String),
    /// A ∀-elimination violates the F_F restriction.
    SideCondition(String),
}

/// First failing node in preorder, addressed by premise indices from the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationError {
    pub path: Vec<usize>,
    pub kind: DerivationErrorKind,
}

impl DerivationError {
    pub fn is_side_condition(&self) -> bool {
        matches!(self.kind, DerivationErrorKind::SideCondition(_))
    }

    pub fn message(&self) -> &str {
        match &self.kind {
            DerivationErrorKind::Malformed(m) | DerivationErrorKind::SideCondition(m) => m,
        }
    }
}

impl fmt::Display for DerivationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            DerivationErrorKind::Malformed(_) => "malformed node",
            DerivationErrorKind::SideCondition(_) => "side condition of (forall_e)_F fails",
        };
        write!(f, "{what} at [")?;
        for (i, p) in self.path.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]: {}", self.message())
    }
}

impl core::error::Error for DerivationError {}

/// Checks every node of `d` against the System F rules.
pub fn check_derivation_f(d: &Derivation) -> Result<(), DerivationError> {
    check(d, false, &mut Vec::new())
}

/// As [`check_derivation_f`], with ∀e restricted to (∀e)_F.
pub fn check_derivation_ff(d: &Derivation) -> Result<(), DerivationError> {
    check(d, true, &mut Vec::new())
}

/// The (∀e)_F side condition for eliminating `∀X A`: writing
/// `A = ∀X₀(A₁ → ∀X₁(A₂ → ... → ∀Xₙ Y))`, either `Y = X` or some `Aᵢ` ends
/// with `X`. A binder rebinding `X` along the spine hides it from the rest.
pub fn ff_side_condition(x: &str, a: &Type) -> bool {
    let mut cur = a;
    loop {
        match cur {
            Type::Forall(y, b) => {
                if y == x {
                    return false;
                }
                cur = b;
            }
            Type::Arrow(l, r) => {
                if ends_with(l, x) {
                    return true;
                }
                cur = r;
            }
            Type::Var(y) => return y == x,
            Type::Atom(_) => return false,
        }
    }
}

fn check(d: &Derivation, ff: bool, path: &mut Vec<usize>) -> Result<(), DerivationError> {
    if let Err(kind) = check_node(d, ff) {
        return Err(DerivationError {
            path: path.clone(),
            kind,
        });
    }
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        check(p, ff, path)?;
        path.pop();
    }
    Ok(())
}

fn malformed(msg: impl Into<String>) -> DerivationErrorKind {
    DerivationErrorKind::Malformed(msg.into())
}

fn check_node(d: &Derivation, ff: bool) -> Result<(), DerivationErrorKind> {
    let c = &d.conclusion;
    if d.premises.len() != d.rule.arity() {
        return Err(malformed(format!(
            "rule {} takes {} premise(s), found {}",
            d.rule.name(),
            d.rule.arity(),
            d.premises.len()
        )));
    }
    let same_ctx = |p: &Derivation| -> Result<(), DerivationErrorKind> {
        if p.conclusion.ctx.equiv(&c.ctx) {
            Ok(())
        } else {
            Err(malformed("premise context differs from the conclusion context"))
        }
    };
    let same_term = |p: &Derivation| -> Result<(), DerivationErrorKind> {
        if p.conclusion.term.alpha_eq(&c.term) {
            Ok(())
        } else {
            Err(malformed("premise subject differs from the conclusion subject"))
        }
    };
    match &d.rule {
        Rule::Ax => {
            let Term::Var(x) = &c.term else {
                return Err(malformed("axiom subject is not a variable"));
            };
            match c.ctx.lookup(x) {
                Some(a) if a.alpha_eq(&c.ty) => Ok(()),
                Some(a) => Err(malformed(format!(
                    "context gives `{x}` type {a}, conclusion says {}",
                    c.ty
                ))),
                None => Err(malformed(format!("`{x}` is not in the context"))),
            }
        }
        Rule::ArrowI => {
            let p = &d.premises[0];
            let (Term::Abs(x, body), Type::Arrow(a, b)) = (&c.term, &c.ty) else {
                return Err(malformed("conclusion is not an abstraction at an arrow type"));
            };
            let extra: Vec<&str> = p
                .conclusion
                .ctx
                .names()
                .filter(|n| !c.ctx.contains(n))
                .collect();
            let [y] = extra[..] else {
                return Err(malformed(
                    "premise context must extend the conclusion context by exactly one variable",
                ));
            };
            let mut rest = p.conclusion.ctx.clone();
            let ya = rest.remove(y).expect("name taken from the context");
            if !rest.equiv(&c.ctx) {
                return Err(malformed("premise context differs from the conclusion context"));
            }
            if !ya.alpha_eq(a) {
                return Err(malformed(format!(
                    "discharged `{y}` has type {ya}, arrow domain is {a}"
                )));
            }
            if !p.conclusion.ty.alpha_eq(b) {
                return Err(malformed("premise type differs from the arrow codomain"));
            }
            let lhs = Term::abs(y, p.conclusion.term.clone());
            let rhs = Term::Abs(x.clone(), body.clone());
            if !lhs.alpha_eq(&rhs) {
                return Err(malformed("premise subject is not the abstraction body"));
            }
            Ok(())
        }
        Rule::ArrowE => {
            let (fun, arg) = (&d.premises[0], &d.premises[1]);
            same_ctx(fun)?;
            same_ctx(arg)?;
            let Term::App(u, v) = &c.term else {
                return Err(malformed("conclusion subject is not an application"));
            };
            if !fun.conclusion.term.alpha_eq(u) || !arg.conclusion.term.alpha_eq(v) {
                return Err(malformed("premise subjects differ from the application parts"));
            }
            let expected = Type::arrow(arg.conclusion.ty.clone(), c.ty.clone());
            if !fun.conclusion.ty.alpha_eq(&expected) {
                return Err(malformed(format!(
                    "function has type {}, expected {expected}",
                    fun.conclusion.ty
                )));
            }
            Ok(())
        }
        Rule::ForallI(x) => {
            let p = &d.premises[0];
            same_ctx(p)?;
            same_term(p)?;
            if c.ctx.has_free_type_var(x) {
                return Err(malformed(format!("`{x}` is free in the context")));
            }
            let expected = Type::forall(x.clone(), p.conclusion.ty.clone());
            if !c.ty.alpha_eq(&expected) {
                return Err(malformed(format!(
                    "conclusion type {} is not {expected}",
                    c.ty
                )));
            }
            Ok(())
        }
        Rule::ForallE(g) => {
            let p = &d.premises[0];
            same_ctx(p)?;
            same_term(p)?;
            let Type::Forall(x, a) = &p.conclusion.ty else {
                return Err(malformed("premise type is not quantified"));
            };
            let expected = a.subst(x, g);
            if !c.ty.alpha_eq(&expected) {
                return Err(malformed(format!(
                    "conclusion type {} is not {expected}",
                    c.ty
                )));
            }
            if ff && !ff_side_condition(x, a) {
                return Err(DerivationErrorKind::SideCondition(format!(
                    "in {}, `{x}` neither ends the type nor ends an argument type",
                    p.conclusion.ty
                )));
            }
            Ok(())
        }
    }
}

/// A binder name for `base` that is free neither in `ctx` nor in `avoid`.
pub(crate) fn fresh_term_var(base: &str, ctx: &Context, avoid: &Term) -> String {
    fresh_like(base, |n| ctx.contains(n) || avoid.has_free(n))
}
