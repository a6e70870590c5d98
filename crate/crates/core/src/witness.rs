//! Hand-built F derivations that need ∀-elimination, used as evidence by the
//! probes and the storage harness.

use crate::classify::{church_nat, d_type, godel_translate, id_type, nat_type, neg};
use crate::context::Context;
use crate::parse::parse_term;
use crate::term::Term;
use crate::ty::Type;
use crate::typing::{derive_f0, BuildError, Derivation};
use crate::{ATOM_O, DEFAULT_ALPHA};

fn ax(ctx: &Context, x: &str) -> Result<Derivation, BuildError> {
    Derivation::axiom(ctx, x)
}

fn with(ctx: &Context, x: &str, a: Type) -> Context {
    ctx.with(x, a).expect("witness binders are distinct")
}

/// F₀ derivation of a normal term, for use as a sub-derivation.
fn f0(ctx: &Context, t: &Term, a: &Type) -> Result<Derivation, BuildError> {
    derive_f0(ctx, t, a)
        .map_err(|e| BuildError(alloc::format!("{e}")))?
        .ok_or_else(|| BuildError(alloc::format!("{t} has no F0 typing at {a}")))
}

fn forall_y_to_x() -> Type {
    Type::forall("Y", Type::arrow(Type::var("Y"), Type::var("X")))
}

/// `⊢ λx.(x)λy.y : D`, instantiating `∀Y` at `Id`. F₀ rejects this judgment.
pub fn d_separation() -> Derivation {
    let ctx = with(&Context::new(), "x", forall_y_to_x());
    let build = || -> Result<Derivation, BuildError> {
        let x_id = Derivation::forall_elim(ax(&ctx, "x")?, id_type())?;
        let id = f0(&ctx, &parse_term("\\y. y").expect("literal"), &id_type())?;
        let body = Derivation::arrow_elim(x_id, id)?;
        Derivation::forall_intro("X", Derivation::arrow_intro("x", body)?)
    };
    build().expect("well-formed witness")
}

/// `α : O ⊢ λx.(x)α : D`, instantiating `∀Y` at `O`.
pub fn d_output_witness() -> Derivation {
    d_output_witness_with(DEFAULT_ALPHA)
}

pub fn d_output_witness_with(alpha: &str) -> Derivation {
    let root = with(&Context::new(), alpha, Type::atom(ATOM_O));
    let x = crate::names::fresh_like("x", |n| n == alpha);
    let ctx = with(&root, &x, forall_y_to_x());
    let build = || -> Result<Derivation, BuildError> {
        let inst = Derivation::forall_elim(ax(&ctx, &x)?, Type::atom(ATOM_O))?;
        let body = Derivation::arrow_elim(inst, ax(&ctx, alpha)?)?;
        Derivation::forall_intro("X", Derivation::arrow_intro(&x, body)?)
    };
    let d = build().expect("well-formed witness");
    debug_assert!(d.conclusion.ty.alpha_eq(&d_type()));
    d
}

/// `α : O ⊢ λn.λx.λz.(((n)λy.x)λx.x)α : N → N`, instantiating `n` at
/// `O → X`. It shows that `N → N` is not an output type.
pub fn nat_fun_output_witness() -> Derivation {
    let o = Type::atom(ATOM_O);
    let xv = Type::var("X");
    let ox = Type::arrow(o.clone(), xv.clone());
    let root = with(&Context::new(), DEFAULT_ALPHA, o.clone());
    let c1 = with(&root, "n", nat_type());
    let c2 = with(&c1, "x", xv.clone());
    let c3 = with(&c2, "z", Type::arrow(xv.clone(), xv.clone()));
    let build = || -> Result<Derivation, BuildError> {
        let n_inst = Derivation::forall_elim(ax(&c3, "n")?, ox.clone())?;
        let c4 = with(&c3, "y", o.clone());
        let const_x = Derivation::arrow_intro("y", ax(&c4, "x")?)?;
        let id = f0(
            &c3,
            &parse_term("\\x. x").expect("literal"),
            &Type::arrow(ox.clone(), ox.clone()),
        )?;
        let body = Derivation::arrow_elims(n_inst, [const_x, id, ax(&c3, DEFAULT_ALPHA)?])?;
        let lam = Derivation::arrow_intro("x", Derivation::arrow_intro("z", body)?)?;
        let num = Derivation::forall_intro("X", lam)?;
        Derivation::arrow_intro("n", num)
    };
    build().expect("well-formed witness")
}

/// The successor `λm.λx.λs.(s)((m)x)s` with its typing `N → N` (needs ∀e).
fn successor(ctx: &Context) -> Result<Derivation, BuildError> {
    let xv = Type::var("X");
    let c1 = with(ctx, "m", nat_type());
    let c2 = with(&c1, "x", xv.clone());
    let c3 = with(&c2, "s", Type::arrow(xv.clone(), xv.clone()));
    let m_inst = Derivation::forall_elim(ax(&c3, "m")?, xv)?;
    let iter = Derivation::arrow_elims(m_inst, [ax(&c3, "x")?, ax(&c3, "s")?])?;
    let body = Derivation::arrow_elim(ax(&c3, "s")?, iter)?;
    let lam = Derivation::arrow_intro("x", Derivation::arrow_intro("s", body)?)?;
    Derivation::arrow_intro("m", Derivation::forall_intro("X", lam)?)
}

pub fn successor_term() -> Term {
    parse_term("\\m. \\x. \\s. s (m x s)").expect("literal")
}

/// A storage operator for `N`: `T = λν.((ν)δ)G` with `δ = λf.(f)0` and
/// `G = λh.λf.(h)λz.(f)(s)z`, `s` the successor. `(T)θ f` head-reduces to
/// `(f)(s)...(s)0`.
pub fn nat_storage_operator() -> Term {
    nat_storage_derivation().conclusion.term
}

/// `⊢ T : N* → ¬¬N`, instantiating `ν : N*` at `X := ¬N`.
pub fn nat_storage_derivation() -> Derivation {
    let n = nat_type();
    let nstar = godel_translate(&n).expect("N has no Bot");
    let not_n = neg(n.clone());
    let notnot_n = neg(not_n.clone());
    let root = with(&Context::new(), "nu", nstar);
    let build = || -> Result<Derivation, BuildError> {
        // δ : ¬¬N
        let c_delta = with(&root, "f", not_n.clone());
        let zero = f0(&c_delta, &church_nat(0), &n)?;
        let delta = Derivation::arrow_intro("f", Derivation::arrow_elim(ax(&c_delta, "f")?, zero)?)?;
        // G : ¬¬N → ¬¬N
        let c_h = with(&root, "h", notnot_n.clone());
        let c_f = with(&c_h, "f", not_n.clone());
        let c_z = with(&c_f, "z", n.clone());
        let succ_z = Derivation::arrow_elim(successor(&c_z)?, ax(&c_z, "z")?)?;
        let k = Derivation::arrow_intro("z", Derivation::arrow_elim(ax(&c_z, "f")?, succ_z)?)?;
        let g_body = Derivation::arrow_elim(ax(&c_f, "h")?, k)?;
        let g = Derivation::arrow_intro("h", Derivation::arrow_intro("f", g_body)?)?;
        let nu = Derivation::forall_elim(ax(&root, "nu")?, not_n.clone())?;
        let body = Derivation::arrow_elims(nu, [delta, g])?;
        Derivation::arrow_intro("nu", body)
    };
    build().expect("well-formed witness")
}

/// `λx.λy.(y)λz.(z)x`: typable at `N* → ¬¬D`, yet not a storage operator
/// because `D` is not an output type.
pub fn remark_operator() -> Term {
    parse_term("\\x. \\y. y (\\z. z x)").expect("literal")
}

/// `⊢ λx.λy.(y)λz.(z)x : N* → ¬¬D`, instantiating `z : ∀Y(Y → X)` at `N*`.
pub fn remark_derivation() -> Derivation {
    let nstar = godel_translate(&nat_type()).expect("N has no Bot");
    let d = d_type();
    let c1 = with(&Context::new(), "x", nstar.clone());
    let c2 = with(&c1, "y", neg(d.clone()));
    let c3 = with(&c2, "z", forall_y_to_x());
    let build = || -> Result<Derivation, BuildError> {
        let zx = Derivation::arrow_elim(
            Derivation::forall_elim(ax(&c3, "z")?, nstar.clone())?,
            ax(&c3, "x")?,
        )?;
        let t = Derivation::forall_intro("X", Derivation::arrow_intro("z", zx)?)?;
        let body = Derivation::arrow_elim(ax(&c2, "y")?, t)?;
        Derivation::arrow_intro("x", Derivation::arrow_intro("y", body)?)
    };
    build().expect("well-formed witness")
}
