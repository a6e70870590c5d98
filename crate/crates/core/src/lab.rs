//! Bounded F₀ inhabitation search, output-type probes and input-type
//! refuters.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::classify::{lg, pn};
use crate::context::Context;
use crate::names::{first_unused, TERM_BINDERS};
use crate::reduce::is_normal;
use crate::term::{Nameless, Term};
use crate::ty::Type;
use crate::typing::{
    check_derivation_f, check_f0, check_s, derive_f0, erase_type, Derivation, DerivationError,
};
use crate::{ATOM_O, DEFAULT_ALPHA};

/// Limits for [`enumerate_f0`]: derivation height and result count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    max_depth: usize,
    max_terms: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroBudget;

impl fmt::Display for ZeroBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("search depth and term limit must both be positive")
    }
}

impl core::error::Error for ZeroBudget {}

impl SearchBudget {
    pub const DEFAULT_MAX_TERMS: usize = 10_000;

    pub fn new(max_depth: usize, max_terms: usize) -> Result<SearchBudget, ZeroBudget> {
        if max_depth == 0 || max_terms == 0 {
            return Err(ZeroBudget);
        }
        Ok(SearchBudget {
            max_depth,
            max_terms,
        })
    }

    /// Depth `d` with the default term limit.
    ///
    /// # Panics
    /// If `max_depth` is zero.
    pub fn depth(max_depth: usize) -> SearchBudget {
        SearchBudget::new(max_depth, Self::DEFAULT_MAX_TERMS).expect("positive depth")
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    /// Sorted by size, then by printed form.
    pub terms: Vec<Term>,
    /// False when the term limit cut the search short.
    pub complete: bool,
}

/// All normal `t` with `Γ ⊢_{F₀} t : A` by a derivation of height at most
/// `budget.max_depth`, one per α-class.
///
/// The height counts every node of the derivation built by
/// [`derive_f0`](crate::typing::derive_f0): one per stripped quantifier, one
/// per abstraction and one per application.
pub fn enumerate_f0(ctx: &Context, a: &Type, budget: SearchBudget) -> Enumeration {
    let mut search = Search {
        max_terms: budget.max_terms,
        complete: true,
    };
    let terms = search.run(ctx, a, budget.max_depth);
    let mut seen = BTreeSet::new();
    let mut keyed: Vec<(usize, String, Term)> = terms
        .into_iter()
        .filter(|t| seen.insert(t.to_nameless()))
        .map(|t| (t.size(), alloc::format!("{t}"), t))
        .collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Enumeration {
        terms: keyed.into_iter().map(|(_, _, t)| t).collect(),
        complete: search.complete,
    }
}

struct Search {
    max_terms: usize,
    complete: bool,
}

impl Search {
    fn cap(&mut self, mut v: Vec<Term>) -> Vec<Term> {
        if v.len() > self.max_terms {
            v.truncate(self.max_terms);
            self.complete = false;
        }
        v
    }

    fn run(&mut self, ctx: &Context, a: &Type, depth: usize) -> Vec<Term> {
        if depth == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();

        // Abstraction: k quantifier nodes, one arrow node, then the body.
        let mut k = 0;
        let mut cur = a;
        while let Type::Forall(_, b) = cur {
            k += 1;
            cur = b;
        }
        if let Type::Arrow(..) = cur {
            if depth > k + 1 {
                let stripped = strip_renaming(ctx, a);
                if let Type::Arrow(dom, cod) = stripped {
                    let y = first_unused(&TERM_BINDERS, |n| ctx.contains(n));
                    let inner = ctx.with(y.clone(), *dom).expect("binder is fresh");
                    for body in self.run(&inner, &cod, depth - k - 1) {
                        out.push(Term::abs(y.clone(), body));
                    }
                }
            }
        }

        // Spines (x)t₁...tₙ: the i-th argument sits n-i+1 levels down.
        for (x, b) in ctx.iter() {
            let mut n = 0;
            while n < depth {
                let Some((doms, res)) = b.peel_arrows(n) else { break };
                if res.alpha_eq(a) {
                    let mut partial: Vec<Term> = alloc::vec![Term::var(x)];
                    for (i, d) in doms.iter().enumerate() {
                        let args = self.run(ctx, d, depth - (n - i));
                        let mut next = Vec::with_capacity(partial.len() * args.len());
                        for p in &partial {
                            for u in &args {
                                next.push(Term::app(p.clone(), u.clone()));
                            }
                        }
                        partial = self.cap(next);
                        if partial.is_empty() {
                            break;
                        }
                    }
                    out.extend(partial);
                }
                n += 1;
            }
        }
        self.cap(out)
    }
}

/// The type after its quantifier prefix, with prefix variables renamed away
/// from the free type variables of `ctx`.
fn strip_renaming(ctx: &Context, a: &Type) -> Type {
    let mut cur = a.clone();
    while let Type::Forall(v, body) = cur {
        if ctx.has_free_type_var(&v) {
            let fresh = crate::names::fresh_like(&v, |n| ctx.has_free_type_var(n) || body.has_free(n));
            cur = body.rename(&v, &fresh);
        } else {
            cur = *body;
        }
    }
    cur
}

/// Proof that a term is typable: an explicit derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeVerdict {
    /// Every inhabitant found within the budget is free of α. `complete`
    /// is false when the term limit truncated the search.
    NoCounterexampleUpTo {
        budget: SearchBudget,
        complete: bool,
        examined: usize,
    },
    /// `α : O ⊢ term : S` with α free in the normal `term`.
    Counterexample { term: Term, evidence: Derivation },
}

impl ProbeVerdict {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, ProbeVerdict::Counterexample { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabError {
    NotClosed(Type),
    NotNormal(Term),
    InvalidDerivation(DerivationError),
    WrongConclusion(String),
    AlphaNotFree,
    AlphaApplied,
    AtomInType(String),
}

impl fmt::Display for LabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabError::NotClosed(a) => write!(f, "type {a} has free type variables"),
            LabError::NotNormal(t) => write!(f, "term {t} is not normal"),
            LabError::InvalidDerivation(e) => write!(f, "derivation does not check: {e}"),
            LabError::WrongConclusion(m) => write!(f, "derivation proves the wrong judgment: {m}"),
            LabError::AlphaNotFree => f.write_str("alpha does not occur free in the term"),
            LabError::AlphaApplied => f.write_str("alpha occurs in applied position"),
            LabError::AtomInType(o) => write!(f, "the constant {o} occurs in the type"),
        }
    }
}

impl core::error::Error for LabError {}

fn alpha_context(alpha: &str) -> Context {
    let mut ctx = Context::new();
    ctx.insert(alpha, Type::atom(ATOM_O)).expect("empty context");
    ctx
}

/// Searches `α : O ⊢_{F₀} t : S` for an inhabitant mentioning α.
///
/// Absence of a counterexample is evidence up to the budget only, and only
/// for inhabitants typable without ∀-elimination.
pub fn probe_output(s: &Type, budget: SearchBudget) -> Result<ProbeVerdict, LabError> {
    probe_output_with_witnesses(s, budget, DEFAULT_ALPHA, &[])
}

/// As [`probe_output`], first trying the supplied F derivations of
/// `α : O ⊢ t : S`.
pub fn probe_output_with_witnesses(
    s: &Type,
    budget: SearchBudget,
    alpha: &str,
    witnesses: &[Derivation],
) -> Result<ProbeVerdict, LabError> {
    if !s.free_vars().is_empty() {
        return Err(LabError::NotClosed(s.clone()));
    }
    let ctx = alpha_context(alpha);
    for d in witnesses {
        check_derivation_f(d).map_err(LabError::InvalidDerivation)?;
        let c = &d.conclusion;
        if !c.ctx.equiv(&ctx) || !c.ty.alpha_eq(s) {
            return Err(LabError::WrongConclusion(alloc::format!("{c}")));
        }
        if !is_normal(&c.term) {
            return Err(LabError::NotNormal(c.term.clone()));
        }
        if c.term.has_free(alpha) {
            return Ok(ProbeVerdict::Counterexample {
                term: c.term.clone(),
                evidence: d.clone(),
            });
        }
    }
    let found = enumerate_f0(&ctx, s, budget);
    for t in &found.terms {
        if t.has_free(alpha) {
            let evidence = derive_f0(&ctx, t, s)
                .expect("enumerated terms are normal")
                .expect("enumerated terms are typable");
            return Ok(ProbeVerdict::Counterexample {
                term: t.clone(),
                evidence,
            });
        }
    }
    Ok(ProbeVerdict::NoCounterexampleUpTo {
        budget,
        complete: found.complete,
        examined: found.terms.len(),
    })
}

fn expect_conclusion(d: &Derivation, ctx: &Context, t: &Term, e: &Type) -> Result<(), LabError> {
    check_derivation_f(d).map_err(LabError::InvalidDerivation)?;
    let c = &d.conclusion;
    if c.ctx.equiv(ctx) && c.term.alpha_eq(t) && c.ty.alpha_eq(e) {
        Ok(())
    } else {
        Err(LabError::WrongConclusion(alloc::format!(
            "expected {ctx} |- {t} : {e}, found {c}"
        )))
    }
}

/// `d` proves `⊢_F t : E` while `⊢_{F₀} t : E` fails, so `E` is not an input
/// type.
pub fn check_input_counterexample(e: &Type, t: &Term, d: &Derivation) -> Result<bool, LabError> {
    if !is_normal(t) {
        return Err(LabError::NotNormal(t.clone()));
    }
    let empty = Context::new();
    expect_conclusion(d, &empty, t, e)?;
    Ok(!check_f0(&empty, t, e).expect("normal term"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub n: usize,
    pub u: Term,
    pub f0_rejects: bool,
    /// Whether S also rejects `⊢ u : Eˢ`.
    pub s_rejects: bool,
}

/// Whether the free variable `x` heads an application somewhere in `t`.
pub fn occurs_applied(t: &Term, x: &str) -> bool {
    match t {
        Term::Var(_) => false,
        Term::Abs(y, body) => y != x && occurs_applied(body, x),
        Term::App(f, a) => {
            matches!(&**f, Term::Var(y) if y == x) || occurs_applied(f, x) || occurs_applied(a, x)
        }
    }
}

/// From a witness `α : O ⊢_F t : E` with α free in `t`, builds
/// `u = t[pₙ/α]` with `n = Lg(E) + 1`. Then `⊢_F u : E`, yet `u` has no F₀
/// typing, which shows `E` is not an input type.
pub fn refute_input_via_output(e: &Type, t: &Term, d: &Derivation) -> Result<Refutation, LabError> {
    refute_input_via_output_with(e, t, d, DEFAULT_ALPHA)
}

pub fn refute_input_via_output_with(
    e: &Type,
    t: &Term,
    d: &Derivation,
    alpha: &str,
) -> Result<Refutation, LabError> {
    if !is_normal(t) {
        return Err(LabError::NotNormal(t.clone()));
    }
    if e.contains_atom(ATOM_O) {
        return Err(LabError::AtomInType(ATOM_O.into()));
    }
    if !t.has_free(alpha) {
        return Err(LabError::AlphaNotFree);
    }
    if occurs_applied(t, alpha) {
        return Err(LabError::AlphaApplied);
    }
    expect_conclusion(d, &alpha_context(alpha), t, e)?;
    let n = lg(e) + 1;
    let u = t.subst(alpha, &pn(n));
    assert!(is_normal(&u), "substituting an unapplied variable keeps normality");
    let empty = Context::new();
    let f0_rejects = !check_f0(&empty, &u, e).expect("normal term");
    let s_rejects = !check_s(&empty, &u, &erase_type(e)).expect("erased type");
    Ok(Refutation {
        n,
        u,
        f0_rejects,
        s_rejects,
    })
}

/// Nameless forms, for comparing enumerations as sets.
pub fn alpha_classes<'a>(terms: impl IntoIterator<Item = &'a Term>) -> BTreeSet<Nameless> {
    terms.into_iter().map(Term::to_nameless).collect()
}
