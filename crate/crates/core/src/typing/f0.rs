//! Typability of normal terms in F₀ (System F without ∀-elimination).
//!
//! For a normal term the rules are syntax directed:
//! 1. `Γ ⊢ x : A` iff `x : A ∈ Γ`;
//! 2. `Γ ⊢ (x)t₁ ... tₙ : A` iff `Γ(x) = B₁ → ... → Bₙ → A` and every
//!    `Γ ⊢ tᵢ : Bᵢ`;
//! 3. `Γ ⊢ λx.t : A` iff `A = ∀X₁ ... ∀Xₖ(B → C)` and `Γ, x : B ⊢ t : C`.
//!
//! Types are compared up to α-equivalence and never instantiated.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::context::Context;
use crate::names::fresh_like;
use crate::reduce::is_normal;
use crate::term::Term;
use crate::ty::Type;
use crate::typing::derivation::{fresh_term_var, Derivation};
use crate::typing::simple::erase_judgment;
use crate::typing::Judgment;

/// The subject is not β-normal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NotNormal;

impl fmt::Display for NotNormal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("the F0 decision procedure only applies to normal terms")
    }
}

impl core::error::Error for NotNormal {}

/// Decides `Γ ⊢_{F₀} t : A`.
pub fn check_f0(ctx: &Context, t: &Term, a: &Type) -> Result<bool, NotNormal> {
    if !is_normal(t) {
        return Err(NotNormal);
    }
    Ok(holds(ctx, t, a))
}

/// Decides `Γ ⊢_{F₀} t : A` and, when it holds, returns a derivation without
/// ∀-elimination whose root conclusion is exactly the input judgment.
pub fn derive_f0(ctx: &Context, t: &Term, a: &Type) -> Result<Option<Derivation>, NotNormal> {
    if !is_normal(t) {
        return Err(NotNormal);
    }
    Ok(derive(ctx, t, a).map(|d| d.relabel(t.clone(), a.clone())))
}

/// Strips a quantifier prefix, renaming variables free in `ctx`.
fn strip_prefix(ctx: &Context, a: &Type) -> (Vec<String>, Type) {
    let mut vars = Vec::new();
    let mut cur = a.clone();
    while let Type::Forall(v, body) = cur {
        if ctx.has_free_type_var(&v) {
            let fresh = fresh_like(&v, |n| ctx.has_free_type_var(n) || body.has_free(n));
            cur = body.rename(&v, &fresh);
            vars.push(fresh);
        } else {
            cur = *body;
            vars.push(v);
        }
    }
    (vars, cur)
}

fn holds(ctx: &Context, t: &Term, a: &Type) -> bool {
    match t {
        Term::Abs(x, body) => {
            let (_, stripped) = strip_prefix(ctx, a);
            let Type::Arrow(dom, cod) = stripped else {
                return false;
            };
            let (y, body) = open_binder(ctx, x, body);
            let mut inner = ctx.clone();
            if inner.insert(y, *dom).is_err() {
                return false;
            }
            holds(&inner, &body, &cod)
        }
        _ => {
            let (head, args) = t.spine();
            let Term::Var(x) = head else { return false };
            let Some(b) = ctx.lookup(x) else { return false };
            let Some((doms, res)) = b.peel_arrows(args.len()) else {
                return false;
            };
            res.alpha_eq(a) && args.iter().zip(doms).all(|(u, d)| holds(ctx, u, d))
        }
    }
}

fn open_binder(ctx: &Context, x: &str, body: &Term) -> (String, Term) {
    if ctx.contains(x) {
        let y = fresh_term_var(x, ctx, body);
        let body = body.subst(x, &Term::var(y.clone()));
        (y, body)
    } else {
        (String::from(x), body.clone())
    }
}

fn derive(ctx: &Context, t: &Term, a: &Type) -> Option<Derivation> {
    match t {
        Term::Abs(x, body) => {
            let (vars, stripped) = strip_prefix(ctx, a);
            let Type::Arrow(dom, cod) = stripped else {
                return None;
            };
            let (y, body) = open_binder(ctx, x, body);
            let inner = ctx.with(y.clone(), *dom).ok()?;
            let premise = derive(&inner, &body, &cod)?;
            let d = Derivation::arrow_intro(&y, premise).ok()?;
            Derivation::forall_intros(&vars, d).ok()
        }
        _ => {
            let (head, args) = t.spine();
            let Term::Var(x) = head else { return None };
            let b = ctx.lookup(x)?;
            let (doms, res) = b.peel_arrows(args.len())?;
            if !res.alpha_eq(a) {
                return None;
            }
            let premises = args
                .iter()
                .zip(doms)
                .map(|(u, d)| derive(ctx, u, d))
                .collect::<Option<Vec<_>>>()?;
            let ax = Derivation::axiom(ctx, x).ok()?;
            Derivation::arrow_elims(ax, premises).ok()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum F0ToSError {
    NotNormal,
    NotDerivable,
}

impl fmt::Display for F0ToSError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            F0ToSError::NotNormal => NotNormal.fmt(f),
            F0ToSError::NotDerivable => f.write_str("the judgment is not derivable in F0"),
        }
    }
}

impl core::error::Error for F0ToSError {}

/// Maps an F₀ judgment `Γ ⊢ t : E` to its erasure `Γˢ ⊢ t : Eˢ` in S.
pub fn f0_to_s(j: &Judgment) -> Result<Judgment, F0ToSError> {
    match check_f0(&j.ctx, &j.term, &j.ty) {
        Err(NotNormal) => Err(F0ToSError::NotNormal),
        Ok(false) => Err(F0ToSError::NotDerivable),
        Ok(true) => Ok(erase_judgment(j)),
    }
}
