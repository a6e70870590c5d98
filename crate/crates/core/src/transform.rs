//! The transformer terms `T_F` and `T'_F` relative to a type variable `X` and
//! an instantiation `G`, their typings
//! `α : O ⊢ T_F : F[G/X] → F[G^o/X]` and `α : O ⊢ T'_F : F[G^o/X] → F[G/X]`,
//! and probes for α in normal forms of `(T'_F) δ t₁ ... t_r`.
//!
//! ```text
//! X ∉ FV(F)   T_F = T'_F = λx.x
//! F = X       T_F = λx.λβ.λg.((g)x)α          T'_F = λx.((x)α)1
//! F = C → D   T_F = λx.λy.(T_D)((x)((T'_C)y))  T'_F = λx.λy.(T'_D)((x)((T_C)y))
//! F = ∀Y B    T_F = λx.(T_B)x                   T'_F = λx.(T'_B)x
//! ```

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::classify::{church_bool, circle};
use crate::context::Context;
use crate::names::fresh_like;
use crate::reduce::{is_simple, normal_form, Move, Path, DEFAULT_NORMALIZE_FUEL};
use crate::term::Term;
use crate::ty::Type;
use crate::typing::{BuildError, Derivation};
use crate::{ATOM_O, DEFAULT_ALPHA};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transformer {
    /// `T_F : F[G/X] → F[G^o/X]`
    T,
    /// `T'_F : F[G^o/X] → F[G/X]`
    TPrime,
}

impl Transformer {
    fn dual(self) -> Transformer {
        match self {
            Transformer::T => Transformer::TPrime,
            Transformer::TPrime => Transformer::T,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformerPair {
    pub for_type: Type,
    pub var: String,
    pub inst: Type,
    pub alpha: String,
    pub t_term: Term,
    pub t_prime_term: Term,
}

impl TransformerPair {
    pub fn term(&self, which: Transformer) -> &Term {
        match which {
            Transformer::T => &self.t_term,
            Transformer::TPrime => &self.t_prime_term,
        }
    }

    /// `F[G/X]`
    pub fn source_type(&self) -> Type {
        self.for_type.subst(&self.var, &self.inst)
    }

    /// `F[G^o/X]`
    pub fn circled_type(&self) -> Type {
        self.for_type.subst(&self.var, &circle(&self.inst))
    }

    /// The type the lemma assigns to `which` under `α : O`.
    pub fn expected_type(&self, which: Transformer) -> Type {
        let (a, b) = (self.source_type(), self.circled_type());
        match which {
            Transformer::T => Type::arrow(a, b),
            Transformer::TPrime => Type::arrow(b, a),
        }
    }
}

/// `T_F` and `T'_F` with the distinguished variable named `alpha`.
pub fn gen_transformers(f: &Type, x: &str, g: &Type) -> TransformerPair {
    gen_transformers_with(f, x, g, DEFAULT_ALPHA)
}

pub fn gen_transformers_with(f: &Type, x: &str, g: &Type, alpha: &str) -> TransformerPair {
    let names = Binders::new(alpha);
    TransformerPair {
        for_type: f.clone(),
        var: x.into(),
        inst: g.clone(),
        alpha: alpha.into(),
        t_term: names.build(f, x, Transformer::T),
        t_prime_term: names.build(f, x, Transformer::TPrime),
    }
}

/// Binder names of the generated terms, kept distinct from α.
struct Binders {
    alpha: String,
    x: String,
    y: String,
    beta: String,
    g: String,
}

impl Binders {
    fn new(alpha: &str) -> Binders {
        let pick = |base: &str| fresh_like(base, |n| n == alpha);
        Binders {
            alpha: alpha.into(),
            x: pick("x"),
            y: pick("y"),
            beta: pick("beta"),
            g: pick("g"),
        }
    }

    fn var(&self, n: &str) -> Term {
        Term::var(n)
    }

    fn build(&self, f: &Type, xv: &str, which: Transformer) -> Term {
        if !f.has_free(xv) {
            return Term::abs(self.x.clone(), self.var(&self.x));
        }
        match (f, which) {
            (Type::Var(_), Transformer::T) => Term::abs_many(
                [self.x.clone(), self.beta.clone(), self.g.clone()],
                Term::apps(self.var(&self.g), [self.var(&self.x), self.var(&self.alpha)]),
            ),
            (Type::Var(_), Transformer::TPrime) => Term::abs(
                self.x.clone(),
                Term::apps(self.var(&self.x), [self.var(&self.alpha), church_bool(true)]),
            ),
            (Type::Arrow(c, d), _) => {
                let inner = Term::app(self.build(c, xv, which.dual()), self.var(&self.y));
                let body = Term::app(
                    self.build(d, xv, which),
                    Term::app(self.var(&self.x), inner),
                );
                Term::abs_many([self.x.clone(), self.y.clone()], body)
            }
            (Type::Forall(_, b), _) => Term::abs(
                self.x.clone(),
                Term::app(self.build(b, xv, which), self.var(&self.x)),
            ),
            (Type::Atom(_), _) => unreachable!("atoms have no free variables"),
        }
    }
}

/// Typing derivations of both transformers under `α : O`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma31Certificate {
    pub t_derivation: Derivation,
    pub t_prime_derivation: Derivation,
}

/// Builds the derivations by induction on `F`, following the construction of
/// the typing lemma: the arrow case composes the two sub-transformers, the
/// quantifier case eliminates `∀Y` at a fresh `Y` and generalizes it back.
pub fn certify_lemma31(p: &TransformerPair) -> Result<Lemma31Certificate, BuildError> {
    let mut root = Context::new();
    root.insert(p.alpha.clone(), Type::atom(ATOM_O))
        .expect("empty context");
    let c = Certifier {
        x: &p.var,
        g: &p.inst,
        g_circ: circle(&p.inst),
        alpha: &p.alpha,
    };
    let finish = |which: Transformer| -> Result<Derivation, BuildError> {
        let d = c.derive(&root, &p.for_type, which)?;
        let (term, ty) = (p.term(which).clone(), p.expected_type(which));
        if !d.conclusion.term.alpha_eq(&term) || !d.conclusion.ty.alpha_eq(&ty) {
            return Err(BuildError(alloc::format!(
                "constructed derivation concludes {} instead of {term} : {ty}",
                d.conclusion
            )));
        }
        Ok(d.relabel(term, ty))
    };
    Ok(Lemma31Certificate {
        t_derivation: finish(Transformer::T)?,
        t_prime_derivation: finish(Transformer::TPrime)?,
    })
}

struct Certifier<'a> {
    x: &'a str,
    g: &'a Type,
    g_circ: Type,
    alpha: &'a str,
}

fn fresh_term(base: &str, ctx: &Context) -> String {
    fresh_like(base, |n| ctx.contains(n))
}

impl Certifier<'_> {
    /// `(F[G/X], F[G^o/X])` in the direction of `which`: (domain, codomain).
    fn ends(&self, f: &Type, which: Transformer) -> (Type, Type) {
        let a = f.subst(self.x, self.g);
        let b = f.subst(self.x, &self.g_circ);
        match which {
            Transformer::T => (a, b),
            Transformer::TPrime => (b, a),
        }
    }

    fn derive(&self, ctx: &Context, f: &Type, which: Transformer) -> Result<Derivation, BuildError> {
        let dup = |e: crate::context::DuplicateBinding| BuildError(alloc::format!("{e}"));
        let ax = |ctx: &Context, n: &str| Derivation::axiom(ctx, n);
        if !f.has_free(self.x) {
            let x = fresh_term("x", ctx);
            let inner = ctx.with(x.clone(), f.clone()).map_err(dup)?;
            return Derivation::arrow_intro(&x, ax(&inner, &x)?);
        }
        match (f, which) {
            (Type::Var(_), Transformer::T) => {
                // x : G, β : O, g : G → O → Z ⊢ ((g)x)α : Z, generalize Z.
                let z = fresh_like("Z", |n| self.g.has_free(n) || ctx.has_free_type_var(n));
                let zt = Type::var(z.clone());
                let x = fresh_term("x", ctx);
                let c1 = ctx.with(x.clone(), self.g.clone()).map_err(dup)?;
                let beta = fresh_term("beta", &c1);
                let c2 = c1.with(beta.clone(), Type::atom(ATOM_O)).map_err(dup)?;
                let g = fresh_term("g", &c2);
                let gty = Type::arrows([self.g.clone(), Type::atom(ATOM_O)], zt);
                let c3 = c2.with(g.clone(), gty).map_err(dup)?;
                let body = Derivation::arrow_elims(ax(&c3, &g)?, [ax(&c3, &x)?, ax(&c3, self.alpha)?])?;
                let pair = Derivation::forall_intro(&z, Derivation::arrow_intro(&g, body)?)?;
                let d = Derivation::arrow_intro(&beta, pair)?;
                Derivation::arrow_intro(&x, d)
            }
            (Type::Var(_), Transformer::TPrime) => {
                // x : G^o ⊢ ((x)α)1 : G, instantiating the product at G.
                let x = fresh_term("x", ctx);
                let c1 = ctx.with(x.clone(), self.g_circ.clone()).map_err(dup)?;
                let pair = Derivation::arrow_elim(ax(&c1, &x)?, ax(&c1, self.alpha)?)?;
                let proj = Derivation::forall_elim(pair, self.g.clone())?;
                let u = fresh_term("x", &c1);
                let c2 = c1.with(u.clone(), self.g.clone()).map_err(dup)?;
                let v = fresh_term("y", &c2);
                let c3 = c2.with(v.clone(), Type::atom(ATOM_O)).map_err(dup)?;
                let one = Derivation::arrow_intro(&u, Derivation::arrow_intro(&v, ax(&c3, &u)?)?)?;
                let body = Derivation::arrow_elim(proj, one)?;
                Derivation::arrow_intro(&x, body)
            }
            (Type::Arrow(c, d), _) => {
                let (dom, _) = self.ends(f, which);
                let (c_dom, _) = self.ends(c, which.dual());
                let x = fresh_term("x", ctx);
                let c1 = ctx.with(x.clone(), dom).map_err(dup)?;
                let y = fresh_term("y", &c1);
                let c2 = c1.with(y.clone(), c_dom).map_err(dup)?;
                let conv_arg = Derivation::arrow_elim(self.derive(&c2, c, which.dual())?, ax(&c2, &y)?)?;
                let applied = Derivation::arrow_elim(ax(&c2, &x)?, conv_arg)?;
                let body = Derivation::arrow_elim(self.derive(&c2, d, which)?, applied)?;
                Derivation::arrow_intro(&x, Derivation::arrow_intro(&y, body)?)
            }
            (Type::Forall(y, b), _) => {
                let y2 = fresh_like(y, |n| {
                    n == self.x
                        || self.g.has_free(n)
                        || ctx.has_free_type_var(n)
                        || (n != y && b.has_free(n))
                });
                let b2 = b.rename(y, &y2);
                let (dom, _) = self.ends(f, which);
                let x = fresh_term("x", ctx);
                let c1 = ctx.with(x.clone(), dom).map_err(dup)?;
                let inst = Derivation::forall_elim(ax(&c1, &x)?, Type::var(y2.clone()))?;
                let conv = Derivation::arrow_elim(self.derive(&c1, &b2, which)?, inst)?;
                let gen = Derivation::forall_intro(&y2, conv)?;
                Derivation::arrow_intro(&x, gen)
            }
            (Type::Atom(_), _) => unreachable!("atoms have no free variables"),
        }
    }
}

/// An occurrence of α in a normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaOccurrence {
    pub path: Path,
    /// Inside some argument `uᵢ` of a maximal spine `(h)u₁ ... uₙ` whose head
    /// `h` is the head variable of δ.
    pub argument_of_head: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaProbe {
    pub nf: Term,
    pub alpha_free: bool,
    pub occurrences: Vec<AlphaOccurrence>,
}

impl AlphaProbe {
    /// Some α occurrence is not an argument of δ's head variable.
    pub fn has_alpha_outside_head_args(&self) -> bool {
        self.occurrences.iter().any(|o| !o.argument_of_head)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeError {
    NotSimple,
    VarNotFree,
    AlphaInInput,
    FuelExhausted,
}

impl fmt::Display for ProbeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeError::NotSimple => "delta must be a variable applied to normal arguments",
            ProbeError::VarNotFree => "the transformer variable does not occur free in the type",
            ProbeError::AlphaInInput => "alpha already occurs free in delta or the arguments",
            ProbeError::FuelExhausted => "normalization ran out of fuel",
        })
    }
}

impl core::error::Error for ProbeError {}

#[derive(Clone, Debug)]
pub struct ProbeOptions {
    pub which: Transformer,
    pub fuel: usize,
    pub alpha: String,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            which: Transformer::TPrime,
            fuel: DEFAULT_NORMALIZE_FUEL,
            alpha: DEFAULT_ALPHA.into(),
        }
    }
}

/// Normal form of `(T'_A) δ t₁ ... t_r` and where α occurs in it.
pub fn alpha_probe(
    a: &Type,
    x: &str,
    g: &Type,
    delta: &Term,
    args: &[Term],
) -> Result<AlphaProbe, ProbeError> {
    alpha_probe_with(a, x, g, delta, args, &ProbeOptions::default())
}

pub fn alpha_probe_with(
    a: &Type,
    x: &str,
    g: &Type,
    delta: &Term,
    args: &[Term],
    opts: &ProbeOptions,
) -> Result<AlphaProbe, ProbeError> {
    if !is_simple(delta) {
        return Err(ProbeError::NotSimple);
    }
    if !a.has_free(x) {
        return Err(ProbeError::VarNotFree);
    }
    if delta.has_free(&opts.alpha) || args.iter().any(|t| t.has_free(&opts.alpha)) {
        return Err(ProbeError::AlphaInInput);
    }
    let pair = gen_transformers_with(a, x, g, &opts.alpha);
    let subject = Term::apps(
        Term::app(pair.term(opts.which).clone(), delta.clone()),
        args.iter().cloned(),
    );
    let nf = normal_form(&subject, opts.fuel).map_err(|_| ProbeError::FuelExhausted)?;
    let (head, _) = delta.spine();
    let Term::Var(head) = head else {
        unreachable!("simple terms have a variable head")
    };
    let occurrences = alpha_occurrences(&nf, &opts.alpha, head);
    Ok(AlphaProbe {
        alpha_free: !occurrences.is_empty(),
        nf,
        occurrences,
    })
}

/// Free occurrences of `alpha` in `t`, flagged when they sit inside an
/// argument of a spine headed by the free variable `head`.
pub fn alpha_occurrences(t: &Term, alpha: &str, head: &str) -> Vec<AlphaOccurrence> {
    struct Walk<'a> {
        alpha: &'a str,
        head: &'a str,
        out: Vec<AlphaOccurrence>,
    }
    impl Walk<'_> {
        fn go(&mut self, t: &Term, path: &mut Vec<Move>, bound: &mut Vec<String>, in_arg: bool) {
            match t {
                Term::Var(v) => {
                    if v == self.alpha && !bound.contains(v) {
                        self.out.push(AlphaOccurrence {
                            path: Path(path.clone()),
                            argument_of_head: in_arg,
                        });
                    }
                }
                Term::Abs(x, body) => {
                    bound.push(x.clone());
                    path.push(Move::Body);
                    self.go(body, path, bound, in_arg);
                    path.pop();
                    bound.pop();
                }
                Term::App(..) => {
                    let (h, args) = t.spine();
                    let headed = matches!(h, Term::Var(v) if v == self.head && !bound.contains(v));
                    let n = args.len();
                    let depth = path.len();
                    path.extend(core::iter::repeat_n(Move::Left, n));
                    self.go(h, path, bound, in_arg);
                    for (i, arg) in args.iter().enumerate() {
                        path.truncate(depth);
                        path.extend(core::iter::repeat_n(Move::Left, n - 1 - i));
                        path.push(Move::Right);
                        self.go(arg, path, bound, in_arg || headed);
                    }
                    path.truncate(depth);
                }
            }
        }
    }
    let mut w = Walk {
        alpha,
        head,
        out: Vec::new(),
    };
    w.go(t, &mut Vec::new(), &mut Vec::new(), false);
    w.out
}
